#pragma once

#include <cmath>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tric/common.hpp"

namespace tric {

enum class SkipReason { all_correct, all_wrong, zero_std };

inline const char* skip_reason_name(SkipReason r) {
  switch (r) {
    case SkipReason::all_correct: return "all_correct";
    case SkipReason::all_wrong: return "all_wrong";
    case SkipReason::zero_std: return "zero_std";
  }
  return "?";
}

struct GrpoConfig {
  int group_size = 8;
  double clip_eps = 0.2;
  double kl_beta = 0.01;
  double w_format = 1.0;
  double w_accuracy = 1.0;
  double std_floor = 1e-8;

  void validate() const {
    if (group_size < 2) fail(Errc::contract_violation, "group_size must be >= 2");
    if (!(clip_eps > 0.0 && clip_eps < 1.0)) fail(Errc::contract_violation, "clip_eps in (0,1)");
    if (kl_beta < 0.0) fail(Errc::contract_violation, "kl_beta must be >= 0");
  }
};

// Per-group reward statistics and normalized advantages. A skipped group
// carries no advantages.
struct GroupStats {
  std::vector<double> rewards;
  double mean = 0.0;
  double stddev = 0.0;  // population
  std::vector<double> advantages;
  bool skipped = false;
  std::optional<SkipReason> skip_reason;
};

// Groups whose rollouts are all correct or all wrong carry no learning
// signal and are excluded from the update.
inline std::optional<SkipReason> should_skip(const std::vector<bool>& accuracy_flags) {
  if (accuracy_flags.size() < 2) fail(Errc::contract_violation, "group needs >= 2 rollouts");
  bool any_true = false, any_false = false;
  for (bool f : accuracy_flags) (f ? any_true : any_false) = true;
  if (!any_false) return SkipReason::all_correct;
  if (!any_true) return SkipReason::all_wrong;
  return std::nullopt;
}

// A_i = (r_i - mean) / std with population std. Near-constant groups
// (std < std_floor) are converted to zero_std skips.
inline GroupStats group_advantages(std::span<const double> rewards, double std_floor = 1e-8) {
  if (rewards.size() < 2) fail(Errc::contract_violation, "group needs >= 2 rewards");
  GroupStats out;
  out.rewards.assign(rewards.begin(), rewards.end());
  const double n = static_cast<double>(rewards.size());
  double sum = 0.0;
  for (double r : rewards) sum += r;
  out.mean = sum / n;
  double ss = 0.0;
  for (double r : rewards) ss += (r - out.mean) * (r - out.mean);
  out.stddev = std::sqrt(ss / n);
  if (out.stddev < std_floor) {
    out.skipped = true;
    out.skip_reason = SkipReason::zero_std;
    return out;
  }
  out.advantages.reserve(rewards.size());
  for (double r : rewards) out.advantages.push_back((r - out.mean) / out.stddev);
  return out;
}

// pi_theta / pi_theta_old for one response, from log-probabilities. Clamped
// to [1e-8, 1e8]; the clamp event is reported so callers can count it.
inline double prob_ratio(double logp_new, double logp_old, bool* clamped = nullptr) {
  if (!std::isfinite(logp_new) || !std::isfinite(logp_old)) {
    fail(Errc::numeric_error, "prob_ratio: non-finite log-probability");
  }
  const double r = std::exp(logp_new - logp_old);
  if (clamped) *clamped = (r < 1e-8 || r > 1e8);
  return std::clamp(r, 1e-8, 1e8);
}

// min(ratio * A, clip(ratio, 1-eps, 1+eps) * A)
inline double clipped_term(double ratio, double advantage, double eps) {
  const double clipped = std::clamp(ratio, 1.0 - eps, 1.0 + eps);
  return std::min(ratio * advantage, clipped * advantage);
}

// k3 estimator: x - log x - 1 with x = pi_ref / pi_theta. Non-negative,
// zero iff the log-probabilities agree.
inline double kl_k3(double logp_ref, double logp_theta) {
  if (!std::isfinite(logp_ref) || !std::isfinite(logp_theta)) {
    fail(Errc::numeric_error, "kl_k3: non-finite log-probability");
  }
  const double d = logp_ref - logp_theta;
  return std::exp(d) - d - 1.0;
}

// One rollout's log-probabilities on the strong prompt plus its advantage.
struct RolloutTerm {
  double logp_theta = 0.0;
  double logp_old = 0.0;
  double logp_ref = 0.0;
  double advantage = 0.0;
};

struct ObjectiveBreakdown {
  double objective = 0.0;
  double surrogate_mean = 0.0;
  double kl_mean = 0.0;
  int clip_count = 0;   // rollouts where the clip branch was strictly selected
  int clamp_count = 0;  // ratio clamps
  double loss() const { return -objective; }
};

// (1/G) * sum_i [ clipped_term(ratio_i, A_i, eps) - beta * kl_k3_i ].
// Fixed summation order keeps results bit-reproducible.
inline ObjectiveBreakdown grpo_objective(std::span<const RolloutTerm> group,
                                         const GrpoConfig& cfg) {
  cfg.validate();
  if (group.empty()) fail(Errc::contract_violation, "grpo_objective: empty group");
  ObjectiveBreakdown out;
  for (const RolloutTerm& t : group) {
    bool clamped = false;
    const double ratio = prob_ratio(t.logp_theta, t.logp_old, &clamped);
    if (clamped) ++out.clamp_count;
    const double surr = clipped_term(ratio, t.advantage, cfg.clip_eps);
    if (surr < ratio * t.advantage) ++out.clip_count;
    const double kl = kl_k3(t.logp_ref, t.logp_theta);
    out.surrogate_mean += surr;
    out.kl_mean += kl;
  }
  const double g = static_cast<double>(group.size());
  out.surrogate_mean /= g;
  out.kl_mean /= g;
  out.objective = out.surrogate_mean - cfg.kl_beta * out.kl_mean;
  return out;
}

// Convenience overload guarding the skip contract: feeding a skipped group
// into the objective is a caller bug.
inline ObjectiveBreakdown grpo_objective(const GroupStats& stats,
                                         std::span<const RolloutTerm> group,
                                         const GrpoConfig& cfg) {
  if (stats.skipped) {
    fail(Errc::contract_violation, std::string("grpo_objective on skipped group (") +
                                       skip_reason_name(*stats.skip_reason) + ")");
  }
  if (stats.advantages.size() != group.size()) {
    fail(Errc::contract_violation, "grpo_objective: group size mismatch");
  }
  return grpo_objective(group, cfg);
}

}  // namespace tric
