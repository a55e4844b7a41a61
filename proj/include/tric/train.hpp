#pragma once

#include <chrono>
#include <cmath>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tric/common.hpp"
#include "tric/dataset.hpp"
#include "tric/grpo.hpp"
#include "tric/prompt.hpp"
#include "tric/reward.hpp"
#include "tric/toy_policy.hpp"
#include "tric/triplet.hpp"

namespace tric {

enum class ViewTag { weak, strong };

inline const char* view_tag_name(ViewTag v) { return v == ViewTag::weak ? "weak" : "strong"; }

// (sampling, optimization) augmentation strengths
enum class AugCombo { weak_strong, weak_weak, strong_strong };

inline const char* aug_combo_name(AugCombo c) {
  switch (c) {
    case AugCombo::weak_strong: return "weak,strong";
    case AugCombo::weak_weak: return "weak,weak";
    case AugCombo::strong_strong: return "strong,strong";
  }
  return "?";
}

inline AugCombo aug_combo_from_name(const std::string& s) {
  if (s == "weak,strong") return AugCombo::weak_strong;
  if (s == "weak,weak") return AugCombo::weak_weak;
  if (s == "strong,strong") return AugCombo::strong_strong;
  fail(Errc::data_error, "unknown augmentation combo '" + s + "'");
}

struct TrainConfig {
  uint64_t seed = 0;
  int steps = 600;
  int batch_size = 16;
  GrpoConfig grpo;
  AugPolicy aug;
  AugCombo combo = AugCombo::weak_strong;
  double lr = 0.3;
  double lr_final_frac = 0.1;   // linear decay to this fraction of lr by the last step
  double weight_decay = 0.001;  // folded into the ascent direction as -decay * w
  double grad_clip = 0.2;       // L2 cap on the batch gradient; 0 disables
  int eval_every = 0;           // 0 disables periodic eval

  double lr_at(int step) const {
    if (steps <= 1) return lr;
    const double t = static_cast<double>(step - 1) / static_cast<double>(steps - 1);
    return lr * (1.0 - (1.0 - lr_final_frac) * t);
  }

  void validate() const {
    grpo.validate();
    if (steps < 0) fail(Errc::contract_violation, "steps must be >= 0");
    if (batch_size < 1) fail(Errc::contract_violation, "batch_size must be >= 1");
    if (!(lr >= 0.0)) fail(Errc::contract_violation, "lr must be >= 0");
    if (lr_final_frac < 0.0 || lr_final_frac > 1.0) {
      fail(Errc::contract_violation, "lr_final_frac must be in [0,1]");
    }
    if (weight_decay < 0.0) fail(Errc::contract_violation, "weight_decay must be >= 0");
    if (grad_clip < 0.0) fail(Errc::contract_violation, "grad_clip must be >= 0");
  }
};

struct StepMetrics {
  int step = 0;
  double mean_reward = 0.0;    // over every rollout of the step, skipped or not
  double accuracy_rate = 0.0;  // ditto
  double skip_rate = 0.0;      // skipped groups / batch
  double mean_kl = 0.0;        // over non-skipped rollouts
  double grad_norm = 0.0;
  double clip_fraction = 0.0;  // over non-skipped rollouts
  int groups_used = 0;
  int groups_skipped = 0;
};

struct EvalResult {
  double exact_match = 0.0;
  std::map<std::string, double> per_class;  // expected answer -> exact-match rate
  int n = 0;
};

struct TrainReport {
  std::vector<StepMetrics> step_metrics;
  std::vector<std::pair<int, EvalResult>> strong_evals;
  EvalResult final_eval_weak;
  EvalResult final_eval_strong;
  double wall_seconds = 0.0;
  PolicyParams params;
};

namespace detail {
// derivation tags for independent random streams
inline constexpr uint64_t kTagBatch = 0xB1;
inline constexpr uint64_t kTagViews = 0x1E;
inline constexpr uint64_t kTagPrompt = 0x9C;
inline constexpr uint64_t kTagRollout = 0x70;
inline constexpr uint64_t kTagEval = 0xE7;

inline nlohmann::json step_metrics_json(const StepMetrics& m) {
  return {{"step", m.step},
          {"mean_reward", m.mean_reward},
          {"accuracy_rate", m.accuracy_rate},
          {"skip_rate", m.skip_rate},
          {"mean_kl", m.mean_kl},
          {"grad_norm", m.grad_norm},
          {"clip_fraction", m.clip_fraction},
          {"groups_used", m.groups_used},
          {"groups_skipped", m.groups_skipped}};
}
}  // namespace detail

// Greedy exact-match evaluation: argmax letters per slot, all-slots-correct
// scoring. Exact 0.5 slot probabilities fall back to a seeded coin so an
// all-zero policy sits at chance level.
inline EvalResult evaluate(const PolicyParams& params, const Dataset& ds, ViewTag view,
                           uint64_t eval_seed) {
  if (ds.samples.empty()) fail(Errc::empty_source, "evaluate: empty dataset");
  const TemplateBank bank = ds.bank();
  const AugmentSpec& spec = view == ViewTag::weak ? ds.aug.weak : ds.aug.strong;
  EvalResult out;
  std::map<std::string, std::pair<int, int>> per_class;  // hits, total
  Rng master(eval_seed);
  for (size_t i = 0; i < ds.samples.size(); ++i) {
    const DatasetSample& s = ds.samples[i];
    Rng rng = master.derive({detail::kTagEval, i});
    std::vector<Image> imgs;
    imgs.reserve(s.slots.size());
    for (const Image& slot : s.slots) imgs.push_back(apply_augment(slot, spec, rng));
    const PromptInstance prompt =
        render_prompt(s.meta(), view_tag_name(view), s.assignment.template_id,
                      s.assignment.direction, s.assignment.order, bank);
    const auto features = prompt_features(prompt, imgs);
    std::string letters;
    for (const FeatureVector& f : features) {
      const double p_same = slot_prob_T(params, f);
      const double p_T =
          prompt.direction == Direction::forward ? p_same : 1.0 - p_same;
      if (p_T > 0.5) letters.push_back('T');
      else if (p_T < 0.5) letters.push_back('F');
      else letters.push_back(rng.bernoulli(0.5) ? 'T' : 'F');
    }
    const bool hit = letters == prompt.expected_answer;
    out.exact_match += hit ? 1.0 : 0.0;
    auto& pc = per_class[prompt.expected_answer];
    pc.first += hit ? 1 : 0;
    pc.second += 1;
  }
  out.n = static_cast<int>(ds.samples.size());
  out.exact_match /= out.n;
  for (const auto& [cls, hits] : per_class) {
    out.per_class[cls] = static_cast<double>(hits.first) / hits.second;
  }
  return out;
}

// One full training run. Per step and batch sample: render the sampling and
// optimization views, render both prompts from one shared assignment, roll
// out G responses from theta_old on the sampling view, score them, apply the
// skip rule, normalize advantages, and ascend the group objective evaluated
// on the optimization view. theta_old syncs to theta after every step.
// Deterministic given config + seed. On a numeric abort the last good params
// are saved to abort_checkpoint_path (when given) before rethrowing.
// rollout_log, when given, receives one record per rollout with the rendered
// text and its reward so scores can be re-derived offline.
inline TrainReport run_training(const TrainConfig& cfg, const Dataset& train_ds,
                                const Dataset& eval_ds, std::ostream* metrics_out = nullptr,
                                const std::string& abort_checkpoint_path = "",
                                const PolicyParams* init_params = nullptr,
                                std::ostream* rollout_log = nullptr) {
  cfg.validate();
  if (train_ds.samples.empty()) fail(Errc::empty_source, "run_training: empty dataset");

  const auto t_start = std::chrono::steady_clock::now();
  const TemplateBank bank = train_ds.bank();
  const AugmentSpec& sample_spec =
      cfg.combo == AugCombo::strong_strong ? cfg.aug.strong : cfg.aug.weak;
  const AugmentSpec& optimize_spec =
      cfg.combo == AugCombo::weak_weak ? cfg.aug.weak : cfg.aug.strong;
  static const auto orders3 = all_comparison_orders(3);
  static const auto orders2 = all_comparison_orders(2);

  TrainReport report;
  PolicyParams theta;  // zero-initialized, d = kFeatureDim
  if (init_params) theta = *init_params;
  const PolicyParams ref = theta;  // KL reference: frozen initial parameters
  PolicyParams theta_old = theta;
  Rng master(cfg.seed);

  if (!eval_ds.samples.empty()) {
    report.strong_evals.push_back({0, evaluate(theta, eval_ds, ViewTag::strong, cfg.seed)});
  }

  try {
    for (int step = 1; step <= cfg.steps; ++step) {
      // theta_old == theta at the start of every rollout phase
      theta_old = theta;

      std::vector<double> grad_sum(kFeatureDim, 0.0);
      StepMetrics m;
      m.step = step;
      double reward_sum = 0.0, kl_sum = 0.0;
      int rollout_count = 0, acc_sum = 0, clip_sum = 0, kl_rollouts = 0;

      for (int s = 0; s < cfg.batch_size; ++s) {
        Rng pick_rng = master.derive({detail::kTagBatch, static_cast<uint64_t>(step),
                                      static_cast<uint64_t>(s)});
        const DatasetSample& sample =
            train_ds.samples[pick_rng.uniform_int(
                0, static_cast<int64_t>(train_ds.samples.size()) - 1)];

        // fresh views per step
        Rng view_rng = master.derive({detail::kTagViews, static_cast<uint64_t>(step),
                                      static_cast<uint64_t>(s)});
        std::vector<Image> sampling_imgs, optimize_imgs;
        for (const Image& slot : sample.slots) {
          sampling_imgs.push_back(apply_augment(slot, sample_spec, view_rng));
        }
        for (const Image& slot : sample.slots) {
          optimize_imgs.push_back(apply_augment(slot, optimize_spec, view_rng));
        }

        // one template/direction/order per (sample, step), shared by views
        Rng assign_rng = master.derive({detail::kTagPrompt, static_cast<uint64_t>(step),
                                        static_cast<uint64_t>(s)});
        const auto& orders = sample.kind == SampleKind::triplet ? orders3 : orders2;
        const int template_id = static_cast<int>(assign_rng.uniform_int(0, bank.size() - 1));
        const Direction dir =
            assign_rng.bernoulli(0.5) ? Direction::forward : Direction::reverse;
        const auto& order =
            orders[assign_rng.uniform_int(0, static_cast<int64_t>(orders.size()) - 1)];
        const SampleMeta meta = sample.meta();
        const PromptInstance q_weak = render_prompt(meta, "weak", template_id, dir, order, bank);
        const PromptInstance q_strong =
            render_prompt(meta, "strong", template_id, dir, order, bank);

        const auto sampling_features = prompt_features(q_weak, sampling_imgs);
        const auto optimize_features = prompt_features(q_strong, optimize_imgs);

        // group rollouts from theta_old on the sampling prompt
        std::vector<std::string> letters;
        std::vector<double> totals;
        std::vector<bool> acc_flags;
        letters.reserve(cfg.grpo.group_size);
        for (int g = 0; g < cfg.grpo.group_size; ++g) {
          Rng roll_rng = master.derive({detail::kTagRollout, static_cast<uint64_t>(step),
                                        static_cast<uint64_t>(s), static_cast<uint64_t>(g)});
          Rollout r = sample_response(theta_old, sampling_features, dir, roll_rng);
          const RewardBreakdown b = score_response(r.rendered_text, q_weak.expected_answer,
                                                   cfg.grpo.w_format, cfg.grpo.w_accuracy);
          if (rollout_log) {
            *rollout_log << nlohmann::json{{"step", step},
                                           {"sample_id", sample.id},
                                           {"rollout", g},
                                           {"response_text", r.rendered_text},
                                           {"expected_answer", q_weak.expected_answer},
                                           {"format", b.format},
                                           {"accuracy", b.accuracy},
                                           {"total", b.total}}
                                .dump()
                         << "\n";
          }
          reward_sum += b.total;
          acc_sum += b.accuracy;
          ++rollout_count;
          totals.push_back(b.total);
          acc_flags.push_back(b.accuracy == 1);
          letters.push_back(std::move(r.letters));
        }

        if (should_skip(acc_flags)) {
          ++m.groups_skipped;
          continue;
        }
        const GroupStats stats = group_advantages(totals, cfg.grpo.std_floor);
        if (stats.skipped) {
          ++m.groups_skipped;
          continue;
        }

        // objective terms on the optimization view for metrics
        std::vector<RolloutTerm> terms;
        terms.reserve(letters.size());
        for (size_t g = 0; g < letters.size(); ++g) {
          RolloutTerm t;
          t.logp_theta = logp_response(theta, optimize_features, dir, letters[g]);
          t.logp_old = logp_response(theta_old, optimize_features, dir, letters[g]);
          t.logp_ref = logp_response(ref, optimize_features, dir, letters[g]);
          t.advantage = stats.advantages[g];
          terms.push_back(t);
        }
        const ObjectiveBreakdown breakdown = grpo_objective(stats, terms, cfg.grpo);
        if (!std::isfinite(breakdown.objective)) {
          fail(Errc::numeric_error, "non-finite loss at step " + std::to_string(step));
        }
        kl_sum += breakdown.kl_mean * static_cast<double>(letters.size());
        kl_rollouts += static_cast<int>(letters.size());
        clip_sum += breakdown.clip_count;

        const auto g = grad_objective(letters, optimize_features, dir, stats, theta, theta_old,
                                      ref, cfg.grpo);
        for (int k = 0; k < kFeatureDim; ++k) grad_sum[k] += g[k];
        ++m.groups_used;
      }

      if (m.groups_used > 0) {
        for (double& v : grad_sum) v /= static_cast<double>(cfg.batch_size);
        double norm_sq = 0.0;
        for (double v : grad_sum) norm_sq += v * v;
        m.grad_norm = std::sqrt(norm_sq);
        // clip and decay keep the logits out of the saturated regime, where
        // the skip rule starves the update of corrective groups
        if (cfg.grad_clip > 0.0 && m.grad_norm > cfg.grad_clip) {
          for (double& v : grad_sum) v *= cfg.grad_clip / m.grad_norm;
        }
        for (int k = 0; k < kFeatureDim; ++k) grad_sum[k] -= cfg.weight_decay * theta.w[k];
        theta = sgd_step(theta, grad_sum, cfg.lr_at(step));
      }
      theta_old = theta;

      m.mean_reward = rollout_count ? reward_sum / rollout_count : 0.0;
      m.accuracy_rate = rollout_count ? static_cast<double>(acc_sum) / rollout_count : 0.0;
      m.skip_rate = static_cast<double>(m.groups_skipped) / cfg.batch_size;
      m.mean_kl = kl_rollouts ? kl_sum / kl_rollouts : 0.0;
      m.clip_fraction = kl_rollouts ? static_cast<double>(clip_sum) / kl_rollouts : 0.0;
      report.step_metrics.push_back(m);
      if (metrics_out) {
        *metrics_out << detail::step_metrics_json(m).dump() << "\n";
        metrics_out->flush();  // aborted runs keep partial data
      }

      if (cfg.eval_every > 0 && step % cfg.eval_every == 0 && !eval_ds.samples.empty()) {
        const EvalResult ev = evaluate(theta, eval_ds, ViewTag::strong, cfg.seed);
        report.strong_evals.push_back({step, ev});
        if (metrics_out) {
          *metrics_out << nlohmann::json{{"step", step}, {"eval_strong", ev.exact_match}}.dump()
                       << "\n";
          metrics_out->flush();
        }
      }
    }
  } catch (const Error& e) {
    if (e.code() == Errc::numeric_error && !abort_checkpoint_path.empty()) {
      save_checkpoint(abort_checkpoint_path, theta, cfg.lr);
    }
    throw;
  }

  if (!eval_ds.samples.empty()) {
    report.final_eval_weak = evaluate(theta, eval_ds, ViewTag::weak, cfg.seed);
    report.final_eval_strong = evaluate(theta, eval_ds, ViewTag::strong, cfg.seed);
  }
  report.params = theta;
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t_start).count();
  return report;
}

// ---------------------------------------------------------------------------
// ablation grid
// ---------------------------------------------------------------------------

struct AblationCell {
  AugCombo combo = AugCombo::weak_strong;
  std::string formulation;  // "pairs", "triplets", "both"
  uint64_t seed = 0;
  double eval_strong = 0.0;
};

// Runs run_training per grid cell with shared seeds and reports held-out
// strong-view exact match per cell.
inline std::vector<AblationCell> ablation_grid(const TrainConfig& base, const Dataset& train_ds,
                                               const Dataset& eval_ds,
                                               const std::vector<AugCombo>& combos,
                                               const std::vector<std::string>& formulations,
                                               int n_seeds,
                                               std::ostream* progress = nullptr) {
  if (combos.empty() || formulations.empty() || n_seeds < 1) {
    fail(Errc::contract_violation, "ablation grid must have at least one cell and seed");
  }
  std::vector<AblationCell> cells;
  for (const AugCombo combo : combos) {
    for (const std::string& formulation : formulations) {
      Dataset filtered = filter_dataset(train_ds, formulation != "pairs",
                                        formulation != "triplets");
      if (formulation != "pairs" && formulation != "triplets" && formulation != "both") {
        fail(Errc::contract_violation, "formulation must be pairs|triplets|both");
      }
      for (int s = 0; s < n_seeds; ++s) {
        TrainConfig cfg = base;
        cfg.combo = combo;
        cfg.seed = base.seed + static_cast<uint64_t>(s);
        cfg.eval_every = 0;
        const TrainReport rep = run_training(cfg, filtered, eval_ds);
        AblationCell cell;
        cell.combo = combo;
        cell.formulation = formulation;
        cell.seed = cfg.seed;
        cell.eval_strong = rep.final_eval_strong.exact_match;
        cells.push_back(cell);
        if (progress) {
          *progress << aug_combo_name(combo) << " / " << formulation << " / seed " << cfg.seed
                    << ": strong exact-match " << cell.eval_strong << "\n";
        }
      }
    }
  }
  return cells;
}

}  // namespace tric
