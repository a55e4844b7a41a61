#pragma once

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <span>
#include <string>
#include <vector>

#include "tric/common.hpp"
#include "tric/grpo.hpp"
#include "tric/image.hpp"
#include "tric/image_ops.hpp"
#include "tric/prompt.hpp"

namespace tric {

inline constexpr int kFeatureDim = 16;

// Deterministic statistics of an image pair, symmetric in arguments. Stands
// in for visual encoding. Index layout:
//   0      mean channel-averaged |a-b|            / 255
//   1..4   quadrant means of channel-avg |a-b|    / 255  (TL, TR, BL, BR)
//   5      32-bin grayscale histogram L1 distance / 2
//   6      ssim(a, b)
//   7      diff_ratio(a, b, 30)
//   8      best-aligned thumbnail mean |luma diff| / 255 over a small
//          zoom x shift search (undoes crop misalignment)
//   9      central-region aligned thumbnail mean |luma diff| / 255 over the
//          same search
//   10     32-bin grayscale CDF L1 distance (earth-mover proxy)
//   11     8-bin grayscale histogram L1 distance  / 2
//   12     per-channel 8-bin RGB histogram L1, averaged over channels / 2
//   13     max channel-avg |a-b|                  / 255
//   14     std of per-pixel channel-avg diff      / 255
//   15     bias, fixed at 1.0
struct FeatureVector {
  std::array<double, kFeatureDim> v{};
};

namespace detail {

inline constexpr int kThumb = 16;

// luma thumbnail of the central fraction of the image; per-axis zooms model
// both scale and aspect mismatch between crops
inline std::array<double, kThumb * kThumb> luma_thumb(const Image& img, double zoom_x,
                                                      double zoom_y) {
  CropRect r;
  r.w = std::max(1, static_cast<int>(std::lround(img.width / zoom_x)));
  r.h = std::max(1, static_cast<int>(std::lround(img.height / zoom_y)));
  r.x0 = (img.width - r.w) / 2;
  r.y0 = (img.height - r.h) / 2;
  const Image t =
      resize(zoom_x == 1.0 && zoom_y == 1.0 ? img : crop(img, r), kThumb, kThumb);
  std::array<double, kThumb * kThumb> out;
  for (int y = 0; y < kThumb; ++y) {
    for (int x = 0; x < kThumb; ++x) out[y * kThumb + x] = luma_at(t, x, y);
  }
  return out;
}

struct AlignScore {
  double mean_diff = 255.0;     // best mean |luma diff| over the search
  double central_diff = 255.0;  // central-region diff at that same alignment
};

// Best shift alignment of two thumbnails; shifts of +-4 in unit steps. The
// central score is evaluated at the winning alignment, not minimized on its
// own: the global fit is driven by background and bystander shapes, so a
// centered edit stays exposed instead of being chased by the search.
inline void align_thumbs(const std::array<double, kThumb * kThumb>& ta,
                         const std::array<double, kThumb * kThumb>& tb, AlignScore& best) {
  constexpr int kC0 = kThumb / 4, kC1 = 3 * kThumb / 4;  // central block bounds
  for (int dy = -4; dy <= 4; ++dy) {
    for (int dx = -4; dx <= 4; ++dx) {
      double acc = 0.0, central_acc = 0.0;
      int count = 0, central_count = 0;
      for (int y = std::max(0, dy); y < kThumb + std::min(0, dy); ++y) {
        for (int x = std::max(0, dx); x < kThumb + std::min(0, dx); ++x) {
          const int xb = x - dx, yb = y - dy;
          const double d = std::abs(ta[y * kThumb + x] - tb[yb * kThumb + xb]);
          acc += d;
          ++count;
          // central in either frame keeps the score symmetric in (a, b)
          if ((x >= kC0 && x < kC1 && y >= kC0 && y < kC1) ||
              (xb >= kC0 && xb < kC1 && yb >= kC0 && yb < kC1)) {
            central_acc += d;
            ++central_count;
          }
        }
      }
      const double mean = acc / count;
      if (mean < best.mean_diff) {
        best.mean_diff = mean;
        best.central_diff = central_acc / central_count;
      }
    }
  }
}

// Search over relative zooms and aspect skews on either side; the candidate
// set is symmetric under argument swap, so the resulting features are too.
inline AlignScore best_alignment(const Image& a, const Image& b) {
  const auto ta1 = luma_thumb(a, 1.0, 1.0);
  const auto tb1 = luma_thumb(b, 1.0, 1.0);
  AlignScore best;
  align_thumbs(ta1, tb1, best);
  for (double zoom : {1.1, 1.2, 1.32, 1.44}) {
    align_thumbs(luma_thumb(a, zoom, zoom), tb1, best);
    align_thumbs(ta1, luma_thumb(b, zoom, zoom), best);
  }
  for (double skew : {1.15, 1.3}) {
    align_thumbs(luma_thumb(a, skew, 1.0), tb1, best);
    align_thumbs(luma_thumb(a, 1.0, skew), tb1, best);
    align_thumbs(ta1, luma_thumb(b, skew, 1.0), best);
    align_thumbs(ta1, luma_thumb(b, 1.0, skew), best);
  }
  return best;
}

}  // namespace detail

inline FeatureVector featurize_pair(const Image& a, const Image& b) {
  require_same_size(a, b, "featurize_pair");
  FeatureVector f;
  const size_t n = a.pixel_count();
  const int hw = a.width / 2, hh = a.height / 2;

  double sum = 0.0, sum_sq = 0.0, max_diff = 0.0;
  std::array<double, 4> quad_sum{};
  std::array<size_t, 4> quad_n{};
  size_t over30 = 0;
  std::array<double, 32> hist_a{}, hist_b{};
  std::array<double, 24> rgb_a{}, rgb_b{};  // 8 bins x 3 channels

  for (int y = 0; y < a.height; ++y) {
    for (int x = 0; x < a.width; ++x) {
      const size_t p = (static_cast<size_t>(y) * a.width + x) * 3;
      const int dr = std::abs(int(a.data[p]) - int(b.data[p]));
      const int dg = std::abs(int(a.data[p + 1]) - int(b.data[p + 1]));
      const int db = std::abs(int(a.data[p + 2]) - int(b.data[p + 2]));
      const double d = (dr + dg + db) / 3.0;
      sum += d;
      sum_sq += d * d;
      max_diff = std::max(max_diff, d);
      if (d > 30.0) ++over30;
      const int q = (y < hh ? 0 : 2) + (x < hw ? 0 : 1);
      quad_sum[q] += d;
      quad_n[q] += 1;

      hist_a[std::min(31, static_cast<int>(luma_at(a, x, y) / 8.0))] += 1.0;
      hist_b[std::min(31, static_cast<int>(luma_at(b, x, y) / 8.0))] += 1.0;
      for (int c = 0; c < 3; ++c) {
        rgb_a[c * 8 + a.data[p + c] / 32] += 1.0;
        rgb_b[c * 8 + b.data[p + c] / 32] += 1.0;
      }
    }
  }

  const double dn = static_cast<double>(n);
  f.v[0] = sum / dn / 255.0;
  for (int q = 0; q < 4; ++q) {
    f.v[1 + q] = quad_n[q] ? quad_sum[q] / static_cast<double>(quad_n[q]) / 255.0 : 0.0;
  }
  double l1_32 = 0.0, cdf_l1 = 0.0, cdf_a = 0.0, cdf_b = 0.0;
  std::array<double, 8> ha8{}, hb8{};
  for (int i = 0; i < 32; ++i) {
    const double pa = hist_a[i] / dn, pb = hist_b[i] / dn;
    l1_32 += std::abs(pa - pb);
    cdf_a += pa;
    cdf_b += pb;
    cdf_l1 += std::abs(cdf_a - cdf_b);
    ha8[i / 4] += pa;
    hb8[i / 4] += pb;
  }
  double l1_8 = 0.0;
  for (int i = 0; i < 8; ++i) l1_8 += std::abs(ha8[i] - hb8[i]);
  double rgb_l1 = 0.0;
  for (int i = 0; i < 24; ++i) rgb_l1 += std::abs(rgb_a[i] - rgb_b[i]) / dn;

  const detail::AlignScore aligned = detail::best_alignment(a, b);

  f.v[5] = l1_32 / 2.0;
  f.v[6] = ssim(a, b);
  f.v[7] = static_cast<double>(over30) / dn;
  f.v[8] = aligned.mean_diff / 255.0;
  f.v[9] = aligned.central_diff / 255.0;
  f.v[10] = cdf_l1 / 32.0;
  f.v[11] = l1_8 / 2.0;
  f.v[12] = rgb_l1 / 6.0;
  f.v[13] = max_diff / 255.0;
  const double mean = sum / dn;
  f.v[14] = std::sqrt(std::max(0.0, sum_sq / dn - mean * mean)) / 255.0;
  f.v[15] = 1.0;
  return f;
}

// ---------------------------------------------------------------------------
// policy
// ---------------------------------------------------------------------------

struct PolicyParams {
  std::vector<double> w = std::vector<double>(kFeatureDim, 0.0);
  int64_t version = 0;
};

namespace detail {
// logit clamp keeps log-probabilities finite at saturation
inline constexpr double kLogitClamp = 30.0;

inline double dot_clamped(const PolicyParams& params, const FeatureVector& f, bool* clamped) {
  double z = 0.0;
  for (int i = 0; i < kFeatureDim; ++i) z += params.w[i] * f.v[i];
  if (clamped) *clamped = std::abs(z) > kLogitClamp;
  return std::clamp(z, -kLogitClamp, kLogitClamp);
}

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

// does this letter claim "same" under the asked question?
inline bool claims_same(char letter, Direction dir) {
  return dir == Direction::forward ? letter == 'T' : letter == 'F';
}
}  // namespace detail

// Bernoulli head: probability that the slot's two images are the same.
inline double slot_prob_T(const PolicyParams& params, const FeatureVector& f) {
  return detail::sigmoid(detail::dot_clamped(params, f, nullptr));
}

// Features for each queried comparison of a prompt, computed once and shared
// by every rollout of the group. Slot indices in the order are 1-based.
inline std::vector<FeatureVector> prompt_features(const PromptInstance& prompt,
                                                  const std::vector<Image>& images) {
  if (static_cast<int>(images.size()) != prompt.image_count) {
    fail(Errc::contract_violation, "prompt_features: image count mismatch");
  }
  std::vector<FeatureVector> out;
  out.reserve(prompt.comparison_order.size());
  for (const CmpPair& c : prompt.comparison_order) {
    out.push_back(featurize_pair(images[c.a - 1], images[c.b - 1]));
  }
  return out;
}

inline const std::string kThinkStub =
    "Comparing the queried views pairwise on layout, palette and local detail.";

// One sampled response: letters per comparison plus a fixed think block; the
// rendered text is well-formed by construction.
struct Rollout {
  std::string letters;
  std::string think_stub = kThinkStub;
  std::string rendered_text;
  double logp_weak = 0.0;  // under the sampling prompt
  std::vector<double> per_slot_logits;
};

inline std::string render_response_text(const std::string& letters,
                                        const std::string& think = kThinkStub) {
  return "<think>" + think + "</think> <answer>" + letters + "</answer>";
}

// Letters answer the question as asked: for reverse prompts the emission
// probability of 'T' is complemented, so the reward engine needs no
// direction awareness.
inline Rollout sample_response(const PolicyParams& params,
                               std::span<const FeatureVector> features, Direction direction,
                               Rng& rng) {
  Rollout r;
  r.per_slot_logits.reserve(features.size());
  for (const FeatureVector& f : features) {
    const double z = detail::dot_clamped(params, f, nullptr);
    const double p_same = detail::sigmoid(z);
    const double p_T = direction == Direction::forward ? p_same : 1.0 - p_same;
    const char letter = rng.bernoulli(p_T) ? 'T' : 'F';
    r.letters.push_back(letter);
    r.per_slot_logits.push_back(z);
    const bool s = detail::claims_same(letter, direction);
    r.logp_weak += std::log(s ? p_same : 1.0 - p_same);
  }
  r.rendered_text = render_response_text(r.letters);
  return r;
}

inline Rollout sample_response(const PolicyParams& params, const PromptInstance& prompt,
                               const std::vector<Image>& images, Rng& rng) {
  return sample_response(params, prompt_features(prompt, images), prompt.direction, rng);
}

// Sum of per-slot log Bernoulli probabilities of the given letters under the
// given view's features. Weak and strong views of one sample generally give
// different values for the same letters; that mismatch is the point.
inline double logp_response(const PolicyParams& params, std::span<const FeatureVector> features,
                            Direction direction, const std::string& letters) {
  if (letters.size() != features.size()) {
    fail(Errc::contract_violation, "logp_response: letters/comparison count mismatch");
  }
  double logp = 0.0;
  for (size_t i = 0; i < features.size(); ++i) {
    const double p_same = slot_prob_T(params, features[i]);
    const bool s = detail::claims_same(letters[i], direction);
    logp += std::log(s ? p_same : 1.0 - p_same);
  }
  return logp;
}

inline double logp_response(const PolicyParams& params, const PromptInstance& prompt,
                            const std::vector<Image>& images, const std::string& letters) {
  return logp_response(params, prompt_features(prompt, images), prompt.direction, letters);
}

// d/dw of logp_response: per slot (1[claims same] - p_same) * f, zero where
// the logit clamp is active.
inline std::vector<double> grad_logp(const PolicyParams& params,
                                     std::span<const FeatureVector> features,
                                     Direction direction, const std::string& letters) {
  if (letters.size() != features.size()) {
    fail(Errc::contract_violation, "grad_logp: letters/comparison count mismatch");
  }
  std::vector<double> g(kFeatureDim, 0.0);
  for (size_t i = 0; i < features.size(); ++i) {
    bool clamped = false;
    const double z = detail::dot_clamped(params, features[i], &clamped);
    if (clamped) continue;
    const double p_same = detail::sigmoid(z);
    const double coef = (detail::claims_same(letters[i], direction) ? 1.0 : 0.0) - p_same;
    for (int k = 0; k < kFeatureDim; ++k) g[k] += coef * features[i].v[k];
  }
  return g;
}

inline std::vector<double> grad_logp(const PolicyParams& params, const PromptInstance& prompt,
                                     const std::vector<Image>& images,
                                     const std::string& letters) {
  return grad_logp(params, prompt_features(prompt, images), prompt.direction, letters);
}

// Gradient of the group objective w.r.t. theta. The surrogate contributes
// A_i * ratio_i * grad_logp only where the unclipped branch is selected (and
// the ratio clamp is inactive); the k3 KL contributes beta * (x - 1) *
// grad_logp with x = exp(logp_ref - logp_theta).
inline std::vector<double> grad_objective(const std::vector<std::string>& letters_per_rollout,
                                          std::span<const FeatureVector> strong_features,
                                          Direction direction, const GroupStats& stats,
                                          const PolicyParams& theta, const PolicyParams& theta_old,
                                          const PolicyParams& ref, const GrpoConfig& cfg) {
  cfg.validate();
  if (stats.skipped) {
    fail(Errc::contract_violation, std::string("grad_objective on skipped group (") +
                                       skip_reason_name(*stats.skip_reason) + ")");
  }
  if (letters_per_rollout.size() != stats.advantages.size()) {
    fail(Errc::contract_violation, "grad_objective: group size mismatch");
  }

  std::vector<double> grad(kFeatureDim, 0.0);
  for (size_t i = 0; i < letters_per_rollout.size(); ++i) {
    const std::string& letters = letters_per_rollout[i];
    const double logp_theta = logp_response(theta, strong_features, direction, letters);
    const double logp_old = logp_response(theta_old, strong_features, direction, letters);
    const double logp_ref = logp_response(ref, strong_features, direction, letters);

    bool clamped = false;
    const double ratio = prob_ratio(logp_theta, logp_old, &clamped);
    const double adv = stats.advantages[i];
    const double clipped = std::clamp(ratio, 1.0 - cfg.clip_eps, 1.0 + cfg.clip_eps);
    const bool unclipped_active = ratio * adv <= clipped * adv;

    double coef = 0.0;
    if (unclipped_active && !clamped) coef += adv * ratio;
    coef += cfg.kl_beta * (std::exp(logp_ref - logp_theta) - 1.0);
    if (coef == 0.0) continue;

    const std::vector<double> g = grad_logp(theta, strong_features, direction, letters);
    for (int k = 0; k < kFeatureDim; ++k) grad[k] += coef * g[k];
  }
  const double g_inv = 1.0 / static_cast<double>(letters_per_rollout.size());
  for (double& v : grad) v *= g_inv;
  return grad;
}

// Ascent step on the objective. Non-finite gradients abort with the params
// untouched.
inline PolicyParams sgd_step(const PolicyParams& params, std::span<const double> grad,
                             double lr) {
  if (grad.size() != params.w.size()) {
    fail(Errc::contract_violation, "sgd_step: gradient dimension mismatch");
  }
  for (double g : grad) {
    if (!std::isfinite(g)) fail(Errc::numeric_error, "sgd_step: non-finite gradient");
  }
  PolicyParams out = params;
  for (size_t i = 0; i < out.w.size(); ++i) out.w[i] += lr * grad[i];
  out.version += 1;
  return out;
}

// ---------------------------------------------------------------------------
// checkpoints
// ---------------------------------------------------------------------------

struct Checkpoint {
  PolicyParams params;
  double lr = 0.05;
};

inline void save_checkpoint(const std::string& path, const PolicyParams& params, double lr) {
  std::ofstream out(path);
  if (!out) fail(Errc::data_error, "cannot open " + path + " for writing");
  char buf[64];
  out << "d " << params.w.size() << "\n";
  out << "version " << params.version << "\n";
  std::snprintf(buf, sizeof(buf), "%.17g", lr);
  out << "lr " << buf << "\n";
  for (double w : params.w) {
    std::snprintf(buf, sizeof(buf), "%.17g", w);
    out << buf << "\n";
  }
}

inline Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::data_error, "cannot open checkpoint " + path);
  Checkpoint ck;
  std::string key;
  size_t d = 0;
  if (!(in >> key >> d) || key != "d") fail(Errc::data_error, path + ": expected 'd <dim>'");
  if (!(in >> key >> ck.params.version) || key != "version") {
    fail(Errc::data_error, path + ": expected 'version <n>'");
  }
  if (!(in >> key >> ck.lr) || key != "lr") fail(Errc::data_error, path + ": expected 'lr <x>'");
  ck.params.w.assign(d, 0.0);
  for (size_t i = 0; i < d; ++i) {
    if (!(in >> ck.params.w[i])) fail(Errc::data_error, path + ": truncated weights");
  }
  return ck;
}

}  // namespace tric
