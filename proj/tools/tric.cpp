// tric: contrastive image-comparison training toy.
//
// Pipeline: synth/mine produce similar-but-different image pairs,
// build-dataset turns them into balanced triplet/pair samples with prompts,
// train-toy runs the group-relative policy optimization loop on the bundled
// differentiable policy, eval and score inspect the results.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "tric/dataset.hpp"
#include "tric/png_io.hpp"
#include "tric/reward.hpp"
#include "tric/sources.hpp"
#include "tric/train.hpp"

namespace fs = std::filesystem;
using namespace tric;

namespace {

constexpr int kExitUsage = 1;
constexpr int kExitData = 2;
constexpr int kExitNumeric = 3;

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::numeric_error:
      return kExitNumeric;
    case Errc::contract_violation:
    case Errc::invalid_order:
    case Errc::unknown_template:
    case Errc::invalid_sample:
      return kExitUsage;
    default:
      return kExitData;
  }
}

// --- synth ---------------------------------------------------------------

struct SynthArgs {
  std::string out_dir;
  size_t n = 32;
  uint64_t seed = 0;
  int size = 128;
  int edits = 1;
  int shapes = 3;
};

int run_synth(const SynthArgs& args) {
  fs::create_directories(fs::path(args.out_dir) / "img");
  SynthParams params;
  params.size = args.size;
  params.n_edits = args.edits;
  params.n_shapes = args.shapes;

  Rng rng(args.seed);
  std::vector<PairManifestRecord> records;
  for (size_t i = 0; i < args.n; ++i) {
    ImagePair pair = synth_pair(params, rng);
    char name[32];
    std::snprintf(name, sizeof(name), "pair_%06zu", i);
    const std::string rel_a = std::string("img/") + name + "_a.png";
    const std::string rel_b = std::string("img/") + name + "_b.png";
    write_png((fs::path(args.out_dir) / rel_a).string(), pair.a);
    write_png((fs::path(args.out_dir) / rel_b).string(), pair.b);
    records.push_back({std::string("synth-") + name, "synthetic",
                       (fs::path(args.out_dir) / rel_a).string(),
                       (fs::path(args.out_dir) / rel_b).string(), pair.meta.ssim_value,
                       pair.meta.diff_ratio_value});
  }
  const std::string manifest = (fs::path(args.out_dir) / "pairs.jsonl").string();
  write_pair_manifest(manifest, records);
  std::cout << "wrote " << records.size() << " pairs to " << manifest << "\n";
  return 0;
}

// --- mine ----------------------------------------------------------------

struct MineArgs {
  std::string video_manifest;
  std::string edit_manifest;
  std::string out;
  MiningConfig cfg;
};

int run_mine(const MineArgs& args) {
  MineResult result;
  if (!args.video_manifest.empty()) {
    result = mine_video_pairs(read_frame_manifest(args.video_manifest), args.cfg);
  } else {
    result = mine_edit_pairs(read_edit_manifest(args.edit_manifest), args.cfg);
  }
  for (const std::string& d : result.diagnostics) std::cerr << d << "\n";

  std::vector<PairManifestRecord> records;
  for (const ImagePair& p : result.pairs) {
    records.push_back({p.meta.id, pair_origin_name(p.origin), p.meta.source_a, p.meta.source_b,
                       p.meta.ssim_value, p.meta.diff_ratio_value});
  }
  write_pair_manifest(args.out, records);
  std::cout << "kept " << records.size() << " pairs (" << result.filtered << " filtered, "
            << result.skipped << " skipped) -> " << args.out << "\n";
  return 0;
}

// --- build-dataset ---------------------------------------------------------

struct BuildArgs {
  std::string pairs_manifest;
  std::string out_dir;
  size_t triplets = 512;
  size_t pair_samples = 256;
  int templates = 20;
  uint64_t seed = 0;
};

int run_build(const BuildArgs& args) {
  const auto records = read_pair_manifest(args.pairs_manifest);
  if (records.empty()) fail(Errc::empty_source, "pair manifest is empty");
  std::vector<ImagePair> pairs;
  pairs.reserve(records.size());
  for (const auto& r : records) {
    ImagePair p;
    p.a = read_png(r.path_a);
    p.b = read_png(r.path_b);
    p.origin = r.origin == "video"  ? PairOrigin::video
               : r.origin == "edit" ? PairOrigin::edit
                                    : PairOrigin::synthetic;
    if (p.origin == PairOrigin::synthetic) {
      p.known_diff_mask = std::vector<uint8_t>(p.a.pixel_count(), 0);
    }
    p.meta.id = r.pair_id;
    p.meta.source_a = r.path_a;
    p.meta.source_b = r.path_b;
    p.meta.ssim_value = r.ssim_value;
    p.meta.diff_ratio_value = r.diff_ratio_value;
    pairs.push_back(std::move(p));
  }

  // the tail ninth of the pair pool is reserved for the held-out split
  const size_t eval_pairs = std::max<size_t>(1, pairs.size() / 9);
  const size_t train_pairs = pairs.size() > eval_pairs ? pairs.size() - eval_pairs : pairs.size();
  std::vector<ImagePair> train_pool(pairs.begin(), pairs.begin() + train_pairs);
  std::vector<ImagePair> eval_pool(pairs.begin() + train_pairs, pairs.end());
  if (eval_pool.empty()) eval_pool = train_pool;

  std::vector<std::string> warnings;
  const AugPolicy aug;
  const Dataset train = build_dataset_from_pairs(train_pool, args.triplets, args.pair_samples,
                                                 aug, args.templates, args.seed, &warnings);
  const Dataset eval = build_dataset_from_pairs(
      eval_pool, std::max<size_t>(1, args.triplets / 8),
      std::max<size_t>(1, args.pair_samples / 8), aug, args.templates, args.seed + 1, &warnings);
  for (const std::string& w : warnings) std::cerr << "warning: " << w << "\n";

  write_dataset(args.out_dir, train);
  write_dataset((fs::path(args.out_dir) / "eval").string(), eval);
  std::cout << "wrote " << train.samples.size() << " train and " << eval.samples.size()
            << " eval samples to " << args.out_dir << "\n";
  return 0;
}

// --- score -----------------------------------------------------------------

int run_score(const std::string& in_path, const std::string& out_path) {
  std::ifstream in(in_path);
  if (!in) fail(Errc::data_error, "cannot open " + in_path);
  std::ofstream out(out_path);
  if (!out) fail(Errc::data_error, "cannot open " + out_path + " for writing");

  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::data_error, in_path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    const std::string text = j.at("response_text").get<std::string>();
    const std::string expected = j.at("expected_answer").get<std::string>();
    const RewardBreakdown b = score_response(text, expected);
    nlohmann::json o{{"format", b.format},
                     {"accuracy", b.accuracy},
                     {"total", b.total},
                     {"parsed_answer", b.parsed_answer ? nlohmann::json(*b.parsed_answer)
                                                       : nlohmann::json(nullptr)}};
    out << o.dump() << "\n";
  }
  return 0;
}

// --- train-toy ---------------------------------------------------------------

struct TrainArgs {
  std::string dataset_dir;
  std::string out_dir;
  TrainConfig cfg;
  std::string aug_combo = "weak,strong";
  std::string init_checkpoint;
  bool log_rollouts = false;
};

Dataset load_eval_split(const std::string& dataset_dir) {
  const fs::path eval_dir = fs::path(dataset_dir) / "eval";
  if (fs::exists(eval_dir / "samples.jsonl")) return read_dataset(eval_dir.string());
  return Dataset{};
}

int run_train(TrainArgs& args) {
  args.cfg.combo = aug_combo_from_name(args.aug_combo);
  const Dataset train = read_dataset(args.dataset_dir);
  const Dataset eval = load_eval_split(args.dataset_dir);

  fs::create_directories(args.out_dir);
  const std::string metrics_path = (fs::path(args.out_dir) / "metrics.jsonl").string();
  const std::string ckpt_path = (fs::path(args.out_dir) / "checkpoint.txt").string();
  std::ofstream metrics(metrics_path);
  if (!metrics) fail(Errc::data_error, "cannot open " + metrics_path + " for writing");

  std::optional<PolicyParams> init;
  if (!args.init_checkpoint.empty()) init = load_checkpoint(args.init_checkpoint).params;

  std::ofstream rollout_log;
  if (args.log_rollouts) {
    rollout_log.open(fs::path(args.out_dir) / "rollouts.jsonl");
    if (!rollout_log) fail(Errc::data_error, "cannot open rollouts.jsonl for writing");
  }

  const TrainReport rep = run_training(args.cfg, train, eval, &metrics, ckpt_path,
                                       init ? &*init : nullptr,
                                       args.log_rollouts ? &rollout_log : nullptr);
  save_checkpoint(ckpt_path, rep.params, args.cfg.lr);

  nlohmann::json report{
      {"steps", args.cfg.steps},
      {"seed", args.cfg.seed},
      {"group_size", args.cfg.grpo.group_size},
      {"clip_eps", args.cfg.grpo.clip_eps},
      {"kl_beta", args.cfg.grpo.kl_beta},
      {"batch_size", args.cfg.batch_size},
      {"lr", args.cfg.lr},
      {"aug", aug_combo_name(args.cfg.combo)},
      {"wall_seconds", rep.wall_seconds},
  };
  if (!eval.samples.empty()) {
    report["final_eval_weak"] = rep.final_eval_weak.exact_match;
    report["final_eval_strong"] = rep.final_eval_strong.exact_match;
  }
  std::ofstream report_out(fs::path(args.out_dir) / "report.json");
  report_out << report.dump(2) << "\n";

  std::cout << "trained " << args.cfg.steps << " steps";
  if (!eval.samples.empty()) {
    std::cout << "; held-out strong exact-match " << rep.final_eval_strong.exact_match;
  }
  std::cout << "; checkpoint " << ckpt_path << "\n";
  return 0;
}

// --- eval ----------------------------------------------------------------

int run_eval(const std::string& checkpoint, const std::string& dataset_dir,
             const std::string& view) {
  const Checkpoint ck = load_checkpoint(checkpoint);
  Dataset ds;
  const fs::path as_eval = fs::path(dataset_dir) / "samples.jsonl";
  if (fs::exists(as_eval)) ds = read_dataset(dataset_dir);
  else ds = read_dataset((fs::path(dataset_dir) / "eval").string());
  const ViewTag tag = view == "weak" ? ViewTag::weak : ViewTag::strong;
  const EvalResult r = evaluate(ck.params, ds, tag, 0);
  std::cout << "exact_match " << r.exact_match << " over " << r.n << " samples (" << view
            << " view)\n";
  for (const auto& [cls, acc] : r.per_class) {
    std::cout << "  class " << cls << ": " << acc << "\n";
  }
  return 0;
}

// --- ablate ----------------------------------------------------------------

struct AblateArgs {
  std::string dataset_dir;
  std::string axes = "aug,formulation";
  int seeds = 3;
  TrainConfig base;
  std::string out;
};

int run_ablate(const AblateArgs& args) {
  const Dataset train = read_dataset(args.dataset_dir);
  Dataset eval = load_eval_split(args.dataset_dir);
  if (eval.samples.empty()) fail(Errc::empty_source, "ablate needs an eval split");
  eval = filter_dataset(eval, true, false);  // held-out triplet exact-match

  std::vector<AugCombo> combos{AugCombo::weak_strong};
  std::vector<std::string> formulations{"both"};
  if (args.axes.find("aug") != std::string::npos) {
    combos = {AugCombo::weak_strong, AugCombo::weak_weak, AugCombo::strong_strong};
  }
  if (args.axes.find("formulation") != std::string::npos) {
    formulations = {"pairs", "triplets", "both"};
  }

  const auto cells =
      ablation_grid(args.base, train, eval, combos, formulations, args.seeds, &std::cerr);
  std::ostream* out = &std::cout;
  std::ofstream file;
  if (!args.out.empty()) {
    file.open(args.out);
    if (!file) fail(Errc::data_error, "cannot open " + args.out + " for writing");
    out = &file;
  }
  for (const AblationCell& c : cells) {
    nlohmann::json j{{"aug", aug_combo_name(c.combo)},
                     {"formulation", c.formulation},
                     {"seed", c.seed},
                     {"eval_strong", c.eval_strong}};
    *out << j.dump() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"contrastive image-comparison RL toy"};
  app.require_subcommand(1);

  SynthArgs synth;
  CLI::App* synth_cmd = app.add_subcommand("synth", "emit synthetic pair manifest + images");
  synth_cmd->add_option("--out", synth.out_dir, "output directory")->required();
  synth_cmd->add_option("--n", synth.n, "number of pairs");
  synth_cmd->add_option("--seed", synth.seed, "generator seed");
  synth_cmd->add_option("--size", synth.size, "image side length");
  synth_cmd->add_option("--edits", synth.edits, "perturbations per pair");
  synth_cmd->add_option("--shapes", synth.shapes, "shapes per canvas");

  MineArgs mine;
  CLI::App* mine_cmd = app.add_subcommand("mine", "mine pairs from frame or edit manifests");
  auto* vm = mine_cmd->add_option("--video-manifest", mine.video_manifest,
                                  "timestamp_ms<TAB>path lines");
  auto* em = mine_cmd->add_option("--edit-manifest", mine.edit_manifest,
                                  "before_path<TAB>after_path lines");
  mine_cmd->add_option("--out", mine.out, "output pair manifest")->required();
  mine_cmd->add_option("--ssim-max", mine.cfg.ssim_max, "near-identical cutoff");
  mine_cmd->add_option("--diff-ratio-max", mine.cfg.diff_ratio_max, "difference-ratio cap");
  mine_cmd->add_option("--pixel-threshold", mine.cfg.pixel_threshold, "per-pixel threshold");
  mine_cmd->add_option("--gap-seconds", mine.cfg.gap_seconds, "video frame gap");
  mine_cmd->add_option("--stride", mine.cfg.frame_stride, "starting-frame stride");
  mine_cmd->add_option("--max-pairs", mine.cfg.max_pairs_per_video, "cap per manifest");
  vm->excludes(em);

  BuildArgs build;
  CLI::App* build_cmd = app.add_subcommand("build-dataset", "assemble balanced training samples");
  build_cmd->add_option("--pairs", build.pairs_manifest, "pair manifest")->required();
  build_cmd->add_option("--out", build.out_dir, "output dataset directory")->required();
  build_cmd->add_option("--triplets", build.triplets, "triplet samples");
  build_cmd->add_option("--pairs-n", build.pair_samples, "two-image samples");
  build_cmd->add_option("--templates", build.templates, "prompt bank size (20 or 50)")
      ->check(CLI::IsMember({20, 50}));
  build_cmd->add_option("--seed", build.seed, "build seed");

  std::string score_in, score_out;
  CLI::App* score_cmd = app.add_subcommand("score", "score response records");
  score_cmd->add_option("--in", score_in, "input jsonl")->required();
  score_cmd->add_option("--out", score_out, "output jsonl")->required();

  TrainArgs train;
  CLI::App* train_cmd = app.add_subcommand("train-toy", "run the toy training loop");
  train_cmd->add_option("--dataset", train.dataset_dir, "dataset directory")->required();
  train_cmd->add_option("--out", train.out_dir, "output directory")->required();
  train_cmd->add_option("--steps", train.cfg.steps, "optimization steps");
  train_cmd->add_option("--group-size", train.cfg.grpo.group_size, "rollouts per prompt");
  train_cmd->add_option("--clip-eps", train.cfg.grpo.clip_eps, "surrogate clip width");
  train_cmd->add_option("--kl-beta", train.cfg.grpo.kl_beta, "KL weight");
  train_cmd->add_option("--aug", train.aug_combo, "sampling,optimization strengths");
  train_cmd->add_option("--seed", train.cfg.seed, "run seed");
  train_cmd->add_option("--batch-size", train.cfg.batch_size, "samples per step");
  train_cmd->add_option("--lr", train.cfg.lr, "learning rate");
  train_cmd->add_option("--weight-decay", train.cfg.weight_decay, "ascent decay");
  train_cmd->add_option("--grad-clip", train.cfg.grad_clip, "gradient norm cap");
  train_cmd->add_option("--lr-final-frac", train.cfg.lr_final_frac,
                        "learning-rate floor as a fraction of --lr");
  train_cmd->add_option("--eval-every", train.cfg.eval_every, "periodic eval cadence");
  train_cmd->add_option("--init-checkpoint", train.init_checkpoint, "starting parameters");
  train_cmd->add_flag("--log-rollouts", train.log_rollouts,
                      "write every rollout and its reward to rollouts.jsonl");

  std::string eval_checkpoint, eval_dataset, eval_view = "strong";
  CLI::App* eval_cmd = app.add_subcommand("eval", "evaluate a checkpoint");
  eval_cmd->add_option("--checkpoint", eval_checkpoint, "checkpoint file")->required();
  eval_cmd->add_option("--dataset", eval_dataset, "dataset directory")->required();
  eval_cmd->add_option("--view", eval_view, "weak or strong")
      ->check(CLI::IsMember({"weak", "strong"}));

  AblateArgs ablate;
  CLI::App* ablate_cmd = app.add_subcommand("ablate", "run the ablation grid");
  ablate_cmd->add_option("--dataset", ablate.dataset_dir, "dataset directory")->required();
  ablate_cmd->add_option("--axes", ablate.axes, "comma list: aug, formulation");
  ablate_cmd->add_option("--seeds", ablate.seeds, "seeds per cell");
  ablate_cmd->add_option("--steps", ablate.base.steps, "steps per run");
  ablate_cmd->add_option("--out", ablate.out, "output jsonl (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (*synth_cmd) return run_synth(synth);
    if (*mine_cmd) {
      if (mine.video_manifest.empty() && mine.edit_manifest.empty()) {
        std::cerr << "mine: need --video-manifest or --edit-manifest\n";
        return kExitUsage;
      }
      return run_mine(mine);
    }
    if (*build_cmd) return run_build(build);
    if (*score_cmd) return run_score(score_in, score_out);
    if (*train_cmd) return run_train(train);
    if (*eval_cmd) return run_eval(eval_checkpoint, eval_dataset, eval_view);
    if (*ablate_cmd) return run_ablate(ablate);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
