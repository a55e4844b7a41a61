// Acceptance suite: one line per criterion, nonzero exit on any hard failure.
// The ablation-direction check is reported only; a deviation is logged, not
// failed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <numeric>
#include <sstream>
#include <vector>

#include "tric/dataset.hpp"
#include "tric/grpo.hpp"
#include "tric/image_ops.hpp"
#include "tric/png_io.hpp"
#include "tric/reward.hpp"
#include "tric/sources.hpp"
#include "tric/toy_policy.hpp"
#include "tric/train.hpp"

using namespace tric;
namespace fs = std::filesystem;

namespace {

int failures = 0;

struct Timer {
  std::chrono::steady_clock::time_point start = std::chrono::steady_clock::now();
  double seconds() const {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  }
};

void report(const char* name, bool pass, const std::string& detail) {
  std::printf("%s  %-24s %s\n", pass ? "PASS" : "FAIL", name, detail.c_str());
  if (!pass) ++failures;
}

FeatureVector random_features(Rng& rng) {
  FeatureVector f;
  for (int i = 0; i < kFeatureDim - 1; ++i) f.v[i] = rng.uniform(-1.0, 1.0);
  f.v[kFeatureDim - 1] = 1.0;
  return f;
}

PolicyParams random_params(Rng& rng, double scale) {
  PolicyParams p;
  for (auto& w : p.w) w = rng.uniform(-scale, scale);
  return p;
}

std::string random_letters(size_t n, Rng& rng) {
  std::string s;
  for (size_t i = 0; i < n; ++i) s.push_back(rng.bernoulli(0.5) ? 'T' : 'F');
  return s;
}

double spearman(const std::vector<double>& xs, const std::vector<double>& ys) {
  auto ranks = [](const std::vector<double>& v) {
    std::vector<size_t> idx(v.size());
    std::iota(idx.begin(), idx.end(), 0);
    std::sort(idx.begin(), idx.end(), [&](size_t a, size_t b) { return v[a] < v[b]; });
    std::vector<double> r(v.size());
    size_t i = 0;
    while (i < idx.size()) {
      size_t j = i;
      while (j + 1 < idx.size() && v[idx[j + 1]] == v[idx[i]]) ++j;
      const double avg = 0.5 * static_cast<double>(i + j) + 1.0;
      for (size_t k = i; k <= j; ++k) r[idx[k]] = avg;
      i = j + 1;
    }
    return r;
  };
  const auto rx = ranks(xs), ry = ranks(ys);
  double mx = 0, my = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    mx += rx[i];
    my += ry[i];
  }
  mx /= rx.size();
  my /= ry.size();
  double num = 0, dx = 0, dy = 0;
  for (size_t i = 0; i < rx.size(); ++i) {
    num += (rx[i] - mx) * (ry[i] - my);
    dx += (rx[i] - mx) * (rx[i] - mx);
    dy += (ry[i] - my) * (ry[i] - my);
  }
  return num / std::sqrt(dx * dy);
}

// ---------------------------------------------------------------------------

void math_core_properties() {
  Timer timer;
  bool ok = true;
  std::ostringstream why;
  Rng rng(101);

  // kl_k3 non-negative over 1e4 draws, zero exactly at equality
  for (int i = 0; i < 10000 && ok; ++i) {
    const double lr = rng.uniform(-8.0, 2.0);
    const double lt = rng.uniform(-8.0, 2.0);
    if (kl_k3(lr, lt) < -1e-12) {
      ok = false;
      why << "kl_k3 negative";
    }
    if (kl_k3(lt, lt) != 0.0) {
      ok = false;
      why << "kl_k3 nonzero at equality";
    }
  }

  // advantage normalization: mean 0, population std 1, tol 1e-9
  for (int trial = 0; trial < 2000 && ok; ++trial) {
    std::vector<double> rewards;
    const int g = static_cast<int>(rng.uniform_int(2, 16));
    for (int i = 0; i < g; ++i) rewards.push_back(rng.uniform(-3.0, 5.0));
    const GroupStats s = group_advantages(rewards);
    if (s.skipped) continue;
    double mean = 0.0;
    for (double a : s.advantages) mean += a;
    mean /= s.advantages.size();
    double var = 0.0;
    for (double a : s.advantages) var += (a - mean) * (a - mean);
    var /= s.advantages.size();
    if (std::abs(mean) > 1e-9 || std::abs(std::sqrt(var) - 1.0) > 1e-9) {
      ok = false;
      why << "advantage normalization off";
    }
  }

  // clipped_term <= ratio * advantage everywhere; identity ratio exact
  for (int i = 0; i < 100000 && ok; ++i) {
    const double ratio = std::exp(rng.uniform(-4.0, 4.0));
    const double adv = rng.uniform(-5.0, 5.0);
    const double eps = rng.uniform(0.01, 0.8);
    if (clipped_term(ratio, adv, eps) > ratio * adv + 1e-12) {
      ok = false;
      why << "clipped_term above ratio*adv";
    }
    if (clipped_term(1.0, adv, eps) != adv) {
      ok = false;
      why << "identity ratio not exact";
    }
  }

  // objective invariance under a uniform reward shift
  GrpoConfig cfg;
  for (int trial = 0; trial < 1000 && ok; ++trial) {
    std::vector<double> rewards;
    for (int i = 0; i < 8; ++i) rewards.push_back(rng.uniform(0.0, 2.0));
    const double shift = rng.uniform(-100.0, 100.0);
    std::vector<double> shifted = rewards;
    for (double& r : shifted) r += shift;
    const GroupStats s0 = group_advantages(rewards);
    const GroupStats s1 = group_advantages(shifted);
    if (s0.skipped || s1.skipped) continue;
    std::vector<RolloutTerm> g0, g1;
    for (size_t i = 0; i < rewards.size(); ++i) {
      const double lt = rng.uniform(-2.0, 0.0);
      const double lo = rng.uniform(-2.0, 0.0);
      const double lf = rng.uniform(-2.0, 0.0);
      g0.push_back({lt, lo, lf, s0.advantages[i]});
      g1.push_back({lt, lo, lf, s1.advantages[i]});
    }
    if (std::abs(grpo_objective(g0, cfg).objective - grpo_objective(g1, cfg).objective) >
        1e-9) {
      ok = false;
      why << "objective not shift-invariant";
    }
  }

  const double s = timer.seconds();
  if (s >= 10.0) {
    ok = false;
    why << " (runtime " << s << "s >= 10s)";
  }
  std::ostringstream detail;
  detail << "kl/advantage/clip/shift properties, " << s << "s";
  if (!ok) detail << " [" << why.str() << "]";
  report("math-core-properties", ok, detail.str());
}

void gradient_oracle() {
  Timer timer;
  bool ok = true;
  std::ostringstream why;
  const double h = 1e-5;
  Rng rng(202);

  // grad_logp vs central finite differences, 100 instances, rel err 1e-6
  double worst_logp = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const size_t slots = 1 + static_cast<size_t>(rng.uniform_int(0, 2));
    std::vector<FeatureVector> feats;
    for (size_t i = 0; i < slots; ++i) feats.push_back(random_features(rng));
    const PolicyParams p = random_params(rng, 1.5);
    const Direction dir = rng.bernoulli(0.5) ? Direction::forward : Direction::reverse;
    const std::string letters = random_letters(slots, rng);
    const auto ga = grad_logp(p, feats, dir, letters);
    double err = 0.0, gn = 0.0;
    for (int k = 0; k < kFeatureDim; ++k) {
      PolicyParams hi = p, lo = p;
      hi.w[k] += h;
      lo.w[k] -= h;
      const double fd =
          (logp_response(hi, feats, dir, letters) - logp_response(lo, feats, dir, letters)) /
          (2.0 * h);
      err = std::max(err, std::abs(ga[k] - fd));
      gn = std::max(gn, std::abs(ga[k]));
    }
    worst_logp = std::max(worst_logp, err / std::max(1.0, gn));
  }
  if (worst_logp > 1e-6) {
    ok = false;
    why << "grad_logp rel err " << worst_logp;
  }

  // grad_objective vs finite differences of grpo_objective, 100 instances
  GrpoConfig cfg;
  cfg.group_size = 6;
  double worst_obj = 0.0;
  int done = 0;
  while (done < 100) {
    std::vector<FeatureVector> feats{random_features(rng), random_features(rng),
                                     random_features(rng)};
    const Direction dir = rng.bernoulli(0.5) ? Direction::forward : Direction::reverse;
    const PolicyParams theta = random_params(rng, 0.8);
    const PolicyParams theta_old = random_params(rng, 0.8);
    const PolicyParams ref = random_params(rng, 0.8);
    std::vector<std::string> letters;
    std::vector<double> rewards;
    for (int g = 0; g < cfg.group_size; ++g) {
      letters.push_back(random_letters(3, rng));
      rewards.push_back(static_cast<double>(rng.uniform_int(0, 2)));
    }
    const GroupStats stats = group_advantages(rewards);
    if (stats.skipped) continue;
    bool near_boundary = false;
    for (int g = 0; g < cfg.group_size; ++g) {
      const double ratio = std::exp(logp_response(theta, feats, dir, letters[g]) -
                                    logp_response(theta_old, feats, dir, letters[g]));
      if (std::abs(ratio - (1.0 - cfg.clip_eps)) < 1e-3 ||
          std::abs(ratio - (1.0 + cfg.clip_eps)) < 1e-3) {
        near_boundary = true;
        break;
      }
    }
    if (near_boundary) continue;

    const auto ga = grad_objective(letters, feats, dir, stats, theta, theta_old, ref, cfg);
    auto objective_at = [&](const PolicyParams& params) {
      std::vector<RolloutTerm> terms;
      for (int g = 0; g < cfg.group_size; ++g) {
        terms.push_back({logp_response(params, feats, dir, letters[g]),
                         logp_response(theta_old, feats, dir, letters[g]),
                         logp_response(ref, feats, dir, letters[g]), stats.advantages[g]});
      }
      return grpo_objective(terms, cfg).objective;
    };
    double err = 0.0, gn = 0.0;
    for (int k = 0; k < kFeatureDim; ++k) {
      PolicyParams hi = theta, lo = theta;
      hi.w[k] += h;
      lo.w[k] -= h;
      err = std::max(err, std::abs(ga[k] - (objective_at(hi) - objective_at(lo)) / (2.0 * h)));
      gn = std::max(gn, std::abs(ga[k]));
    }
    worst_obj = std::max(worst_obj, err / std::max(1.0, gn));
    ++done;
  }
  if (worst_obj > 1e-4) {
    ok = false;
    why << " grad_objective rel err " << worst_obj;
  }

  const double s = timer.seconds();
  if (s >= 30.0) {
    ok = false;
    why << " (runtime " << s << "s >= 30s)";
  }
  std::ostringstream detail;
  detail << "logp rel err " << worst_logp << ", objective rel err " << worst_obj << ", " << s
         << "s";
  if (!ok) detail << " [" << why.str() << "]";
  report("gradient-oracle", ok, detail.str());
}

void reward_oracle() {
  bool ok = true;
  std::ostringstream why;

  // exhaustive 8-string enumeration per triplet ground truth
  const std::vector<std::string> all{"TTT", "TTF", "TFT", "TFF", "FTT", "FTF", "FFT", "FFF"};
  for (const std::string& expected : all) {
    int hits = 0;
    for (const std::string& candidate : all) {
      const RewardBreakdown b =
          score_response("<think> </think> <answer>" + candidate + "</answer>", expected);
      if (b.format != 1) {
        ok = false;
        why << "format failed on a valid wrap";
      }
      hits += b.accuracy;
      if ((candidate == expected) != (b.accuracy == 1)) {
        ok = false;
        why << "accuracy mismatch at " << candidate << "/" << expected;
      }
    }
    if (hits != 1) {
      ok = false;
      why << "expected exactly one hit for " << expected;
    }
  }

  // format reward golden suite
  struct Case {
    const char* text;
    int expected;
  };
  const std::vector<Case> golden{
      {"<think> </think> <answer>TFT</answer>", 1},
      {"<think>reasoning here</think> <answer>TFF</answer>", 1},
      {"<think>x</think><answer>F</answer>", 1},
      {"<think>multi\nline</think>\n<answer>FFT</answer>", 1},
      {"  <think> </think> <answer>T</answer>  ", 1},
      {"\n\t<think>pad</think>\t\n<answer>ttf</answer>\n", 1},
      {"<think></think> <answer></answer>", 1},
      {"<think> </think>     <answer>TTT</answer>", 1},
      {"<think>no answer tag</think>", 0},
      {"<answer>TFT</answer>", 0},
      {"The answer is TFT", 0},
      {"<answer>T</answer><think>x</think>", 0},
      {"<think>a</think> stray text <answer>T</answer>", 0},
      {"<think>a</think> <answer>T</answer> trailing", 0},
      {"preamble <think>a</think> <answer>T</answer>", 0},
      {"<think>a</think> <think>b</think> <answer>T</answer>", 0},
      {"<think>a</think> <answer>T</answer> <answer>F</answer>", 0},
      {"<think>a<answer>T</answer></think>", 0},
      {"<think>a</think> <answer>T", 0},
      {"think </think> <answer>T</answer>", 0},
      {"<think>a</think><answer><answer>T</answer></answer>", 0},
      {"", 0},
  };
  for (const Case& c : golden) {
    if (format_reward(c.text) != c.expected) {
      ok = false;
      why << " golden case failed: [" << c.text << "]";
    }
  }

  std::ostringstream detail;
  detail << "8-way enumeration x 8 truths, " << golden.size() << " golden format cases";
  if (!ok) detail << " [" << why.str() << "]";
  report("reward-oracle", ok, detail.str());
}

void filter_fidelity() {
  bool ok = true;
  std::ostringstream why;
  const fs::path dir = fs::temp_directory_path() / "tric_acceptance_filters";
  fs::create_directories(dir);

  // strict rule at 0.8: 0.79 kept, 0.81 discarded
  auto make_edit = [&](const char* name, int changed) {
    const Image before = Image::filled(10, 10, {100, 100, 100});
    Image after = before;
    for (int i = 0; i < changed; ++i) {
      after.data[i * 3] = 240;
      after.data[i * 3 + 1] = 240;
      after.data[i * 3 + 2] = 240;
    }
    const std::string pb = (dir / (std::string(name) + "_b.png")).string();
    const std::string pa = (dir / (std::string(name) + "_a.png")).string();
    write_png(pb, before);
    write_png(pa, after);
    return EditEntry{pb, pa};
  };
  const MineResult res =
      mine_edit_pairs({make_edit("kept", 79), make_edit("dropped", 81)}, MiningConfig{});
  if (res.pairs.size() != 1 || std::abs(res.pairs[0].meta.diff_ratio_value - 0.79) > 1e-12) {
    ok = false;
    why << "0.79/0.81 rule failed";
  }

  // identical images: ssim 1 within 1e-9, filtered at ssim_max 0.95
  Rng rng(303);
  Image img(32, 32);
  for (auto& v : img.data) v = static_cast<uint8_t>(rng.uniform_int(0, 255));
  if (std::abs(ssim(img, img) - 1.0) > 1e-9) {
    ok = false;
    why << " identity ssim off";
  }
  const std::string frame = (dir / "frame.png").string();
  write_png(frame, img);
  std::vector<FrameEntry> manifest;
  for (int k = 0; k < 4; ++k) manifest.push_back({k * 1000, frame});
  const MineResult vres = mine_video_pairs(manifest, MiningConfig{});
  if (!vres.pairs.empty()) {
    ok = false;
    why << " identical frames not filtered";
  }

  // constant-image closed form within 1e-6
  const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  const double expected = c1 / (255.0 * 255.0 + c1);
  const double got = ssim(Image::filled(16, 16, {0, 0, 0}), Image::filled(16, 16, {255, 255, 255}));
  if (std::abs(got - expected) > 1e-6) {
    ok = false;
    why << " constant-image ssim " << got << " vs " << expected;
  }

  fs::remove_all(dir);
  std::ostringstream detail;
  detail << "diff-ratio boundary, ssim identity filter, closed form " << got;
  if (!ok) detail << " [" << why.str() << "]";
  report("filter-fidelity", ok, detail.str());
}

void dataset_balance() {
  bool ok = true;
  std::ostringstream why;
  SynthParams sp;
  sp.size = 64;
  const Dataset ds = make_synth_dataset(600, 0, sp, AugPolicy{}, 20, 77);

  std::map<std::string, int> classes;
  std::map<int, int> odd_counts;
  for (const auto& s : ds.samples) {
    classes[expected_answer(s.gt_letters, s.assignment.order, s.assignment.direction)]++;
    odd_counts[s.odd_slot]++;
  }
  if (classes.size() != 6) {
    ok = false;
    why << "expected 6 reachable classes, got " << classes.size();
  }
  for (const auto& [cls, n] : classes) {
    if (n < 90 || n > 110) {
      ok = false;
      why << " class " << cls << " count " << n;
    }
  }
  for (int odd = 1; odd <= 3; ++odd) {
    if (std::abs(odd_counts[odd] - 200) > 20) {
      ok = false;
      why << " odd_slot " << odd << " count " << odd_counts[odd];
    }
  }

  std::ostringstream detail;
  detail << "classes";
  for (const auto& [cls, n] : classes) detail << " " << cls << ":" << n;
  detail << " | odd slots " << odd_counts[1] << "/" << odd_counts[2] << "/" << odd_counts[3];
  if (!ok) detail << " [" << why.str() << "]";
  report("dataset-balance", ok, detail.str());
}

// The standard synthetic dataset: 512 triplets + 256 pairs at 128x128, seed
// 0, with a held-out split generated from an independent stream.
struct StandardRun {
  Dataset train;
  Dataset eval_triplets;
};

StandardRun standard_dataset() {
  SynthParams sp;  // 128x128 defaults
  AugPolicy aug;
  StandardRun r;
  r.train = make_synth_dataset(512, 256, sp, aug, 20, 0);
  r.eval_triplets = filter_dataset(make_synth_dataset(128, 64, sp, aug, 20, 0x9E), true, false);
  return r;
}

void end_to_end_training() {
  Timer timer;
  bool ok = true;
  std::ostringstream why;

  const StandardRun run = standard_dataset();
  TrainConfig cfg;  // defaults: 600 steps, G 8, eps 0.2, beta 0.01, batch 16, seed 0
  const TrainReport rep = run_training(cfg, run.train, run.eval_triplets);

  const double initial = rep.strong_evals.front().second.exact_match;
  const double final_acc = rep.final_eval_strong.exact_match;
  if (std::abs(initial - 0.125) > 0.08) {
    ok = false;
    why << "initial " << initial << " not near chance";
  }
  if (final_acc < 0.70) {
    ok = false;
    why << " final " << final_acc << " < 0.70";
  }

  // window-50 smoothed mean reward vs step index
  std::vector<double> sm, idx;
  for (size_t i = 0; i + 50 <= rep.step_metrics.size(); ++i) {
    double acc = 0.0;
    for (size_t k = i; k < i + 50; ++k) acc += rep.step_metrics[k].mean_reward;
    sm.push_back(acc / 50.0);
    idx.push_back(static_cast<double>(i));
  }
  const double rho = spearman(idx, sm);
  if (rho <= 0.8) {
    ok = false;
    why << " spearman " << rho << " <= 0.8";
  }

  const double s = timer.seconds();
  if (s >= 300.0) {
    ok = false;
    why << " runtime " << s << "s >= 300s";
  }
  std::ostringstream detail;
  detail << "strong exact-match " << initial << " -> " << final_acc << " in " << cfg.steps
         << " steps, spearman " << rho << ", " << s << "s";
  if (!ok) detail << " [" << why.str() << "]";
  report("end-to-end-training", ok, detail.str());
}

void skip_rule() {
  bool ok = true;
  std::ostringstream why;

  // saturated separable policy on identity-augmented easy samples: every
  // group comes back all-correct and the whole step must be a no-op
  SynthParams sp;
  sp.size = 64;
  AugPolicy identity;
  identity.weak = AugmentSpec::identity_spec();
  identity.strong = AugmentSpec::identity_spec();
  const Dataset train = make_synth_dataset(16, 8, sp, identity, 20, 55);
  PolicyParams init;
  init.w[7] = -4000.0;
  init.w[15] = 30.0;

  TrainConfig cfg;
  cfg.steps = 1;
  const TrainReport rep = run_training(cfg, train, Dataset{}, nullptr, "", &init);
  if (rep.step_metrics.size() != 1 || rep.step_metrics[0].groups_used != 0) {
    ok = false;
    why << "step was not fully skipped";
  }

  const fs::path dir = fs::temp_directory_path() / "tric_acceptance_skip";
  fs::create_directories(dir);
  save_checkpoint((dir / "before.txt").string(), init, cfg.lr);
  save_checkpoint((dir / "after.txt").string(), rep.params, cfg.lr);
  std::ifstream fa(dir / "before.txt"), fb(dir / "after.txt");
  std::stringstream sa, sb;
  sa << fa.rdbuf();
  sb << fb.rdbuf();
  if (sa.str() != sb.str()) {
    ok = false;
    why << " checkpoint changed across a fully skipped step";
  }
  fs::remove_all(dir);

  std::ostringstream detail;
  detail << "all-correct step leaves a bit-identical checkpoint";
  if (!ok) detail << " [" << why.str() << "]";
  report("skip-rule", ok, detail.str());
}

void determinism() {
  bool ok = true;
  std::ostringstream why;

  SynthParams sp;
  sp.size = 64;
  const Dataset train = make_synth_dataset(24, 12, sp, AugPolicy{}, 20, 66);
  const Dataset eval = make_synth_dataset(8, 0, sp, AugPolicy{}, 20, 67);
  TrainConfig cfg;
  cfg.steps = 25;
  cfg.eval_every = 10;

  const fs::path dir = fs::temp_directory_path() / "tric_acceptance_det";
  fs::create_directories(dir);
  std::string metrics[2], ckpts[2];
  for (int i = 0; i < 2; ++i) {
    std::ostringstream m;
    const TrainReport rep = run_training(cfg, train, eval, &m);
    metrics[i] = m.str();
    const std::string p = (dir / ("ck" + std::to_string(i) + ".txt")).string();
    save_checkpoint(p, rep.params, cfg.lr);
    std::ifstream f(p);
    std::stringstream buf;
    buf << f.rdbuf();
    ckpts[i] = buf.str();
  }
  fs::remove_all(dir);

  if (metrics[0] != metrics[1]) {
    ok = false;
    why << "metrics streams differ";
  }
  if (metrics[0].empty()) {
    ok = false;
    why << " metrics stream empty";
  }
  if (ckpts[0] != ckpts[1]) {
    ok = false;
    why << " checkpoints differ";
  }

  std::ostringstream detail;
  detail << "two seeded runs: byte-identical metrics (" << metrics[0].size()
         << " bytes) and checkpoints";
  if (!ok) detail << " [" << why.str() << "]";
  report("determinism", ok, detail.str());
}

void ablation_direction() {
  Timer timer;
  // reported, soft: deviations are logged, never failed
  SynthParams sp;
  AugPolicy aug;
  const Dataset train = make_synth_dataset(96, 48, sp, aug, 20, 0);
  const Dataset eval = filter_dataset(make_synth_dataset(64, 0, sp, aug, 20, 0x9E), true, false);
  TrainConfig base;
  base.steps = 250;

  const auto cells = ablation_grid(
      base, train, eval,
      {AugCombo::weak_strong, AugCombo::weak_weak, AugCombo::strong_strong}, {"both"}, 3);
  double ws = 0, ww = 0, ss = 0;
  for (const auto& c : cells) {
    if (c.combo == AugCombo::weak_strong) ws += c.eval_strong / 3.0;
    if (c.combo == AugCombo::weak_weak) ww += c.eval_strong / 3.0;
    if (c.combo == AugCombo::strong_strong) ss += c.eval_strong / 3.0;
  }

  std::ostringstream detail;
  detail << "means over 3 seeds: (weak,strong) " << ws << ", (strong,strong) " << ss
         << ", (weak,weak) " << ww << ", " << timer.seconds() << "s";
  if (ws >= ss && ws >= ww) {
    detail << " | ordering consistent";
  } else {
    detail << " | deviation logged: ordering differs from the reference table at toy scale";
  }
  report("ablation-direction", true, detail.str());
}

}  // namespace

int main() {
  std::printf("acceptance suite\n----------------\n");
  math_core_properties();
  gradient_oracle();
  reward_oracle();
  filter_fidelity();
  dataset_balance();
  end_to_end_training();
  skip_rule();
  determinism();
  ablation_direction();
  std::printf("----------------\n%s (%d failure%s)\n", failures == 0 ? "ALL PASS" : "FAILED",
              failures, failures == 1 ? "" : "s");
  return failures == 0 ? 0 : 1;
}
