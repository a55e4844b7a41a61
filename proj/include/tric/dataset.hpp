#pragma once

#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tric/common.hpp"
#include "tric/image.hpp"
#include "tric/png_io.hpp"
#include "tric/prompt.hpp"
#include "tric/sources.hpp"
#include "tric/triplet.hpp"

namespace tric {

enum class SampleKind { triplet, pair };

inline const char* sample_kind_name(SampleKind k) {
  return k == SampleKind::triplet ? "triplet" : "pair";
}

// One training/eval sample: raw slot images plus the balanced prompt
// assignment fixed at build time.
struct DatasetSample {
  std::string id;
  SampleKind kind = SampleKind::triplet;
  std::vector<Image> slots;  // 3 for triplets, 2 for pairs
  int odd_slot = 0;          // triplets, 1-based
  bool same = false;         // pairs
  std::string gt_letters;    // canonical order
  PromptAssignment assignment;
  uint64_t view_seed = 0;

  SampleMeta meta() const { return {id, kind == SampleKind::triplet ? 3 : 2, gt_letters}; }
};

struct Dataset {
  std::vector<DatasetSample> samples;
  AugPolicy aug;
  int n_templates = 20;
  uint64_t build_seed = 0;

  TemplateBank bank() const {
    return n_templates > 20 ? TemplateBank::extended50() : TemplateBank::standard20();
  }
};

// ---------------------------------------------------------------------------
// building
// ---------------------------------------------------------------------------

namespace detail {

// stratified values, shuffled: exact balance with randomized per-sample order
template <typename T>
inline std::vector<T> balanced_shuffled(const std::vector<T>& values, size_t n, Rng& rng) {
  std::vector<T> out;
  out.reserve(n);
  for (size_t i = 0; i < n; ++i) out.push_back(values[i % values.size()]);
  for (size_t i = 0; i + 1 < out.size(); ++i) {
    std::swap(out[i], out[rng.uniform_int(static_cast<int64_t>(i),
                                          static_cast<int64_t>(out.size()) - 1)]);
  }
  return out;
}

inline std::string sample_id(const char* kind, size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%06zu", kind, n);
  return buf;
}

}  // namespace detail

// Assembles n_triplets triplet samples and n_pair_samples two-image samples
// from mined pairs. odd_slot and the same/different flag are stratified so
// the build is exactly balanced; prompt assignments come from the greedy
// answer-class balancer.
inline Dataset build_dataset_from_pairs(const std::vector<ImagePair>& pairs, size_t n_triplets,
                                        size_t n_pair_samples, const AugPolicy& aug,
                                        int n_templates, uint64_t seed,
                                        std::vector<std::string>* warnings = nullptr) {
  if (pairs.empty()) fail(Errc::empty_source, "no source pairs to build from");
  Dataset ds;
  ds.aug = aug;
  ds.n_templates = n_templates;
  ds.build_seed = seed;
  const TemplateBank bank = ds.bank();

  Rng rng(seed);
  const auto odd_slots = detail::balanced_shuffled<int>({1, 2, 3}, n_triplets, rng);
  const auto same_flags = detail::balanced_shuffled<int>({1, 0}, n_pair_samples, rng);

  for (size_t i = 0; i < n_triplets; ++i) {
    const ImagePair& src = pairs[i % pairs.size()];
    ContrastTriplet t = build_triplet(src, odd_slots[i]);
    DatasetSample s;
    s.id = detail::sample_id("triplet", i);
    s.kind = SampleKind::triplet;
    s.slots.assign(t.slots.begin(), t.slots.end());
    s.odd_slot = t.odd_slot;
    s.gt_letters = t.gt_letters;
    s.view_seed = rng.next_u64();
    ds.samples.push_back(std::move(s));
  }
  for (size_t i = 0; i < n_pair_samples; ++i) {
    const ImagePair& src = pairs[(n_triplets + i) % pairs.size()];
    DatasetSample s;
    s.id = detail::sample_id("pair", i);
    s.kind = SampleKind::pair;
    if (same_flags[i]) {
      PairSample p = build_pair_sample(src.a, true);
      s.slots.assign(p.slots.begin(), p.slots.end());
      s.same = true;
      s.gt_letters = p.gt_letters;
    } else {
      PairSample p = build_pair_sample(src, false);
      s.slots.assign(p.slots.begin(), p.slots.end());
      s.same = false;
      s.gt_letters = p.gt_letters;
    }
    s.view_seed = rng.next_u64();
    ds.samples.push_back(std::move(s));
  }

  std::vector<SampleMeta> metas;
  metas.reserve(ds.samples.size());
  for (const auto& s : ds.samples) metas.push_back(s.meta());
  const auto assignments = balance_assignments(metas, bank, rng, warnings);
  for (size_t i = 0; i < ds.samples.size(); ++i) ds.samples[i].assignment = assignments[i];
  return ds;
}

// Fully synthetic dataset: one fresh generator pair per sample.
inline Dataset make_synth_dataset(size_t n_triplets, size_t n_pair_samples,
                                  const SynthParams& params, const AugPolicy& aug,
                                  int n_templates, uint64_t seed,
                                  std::vector<std::string>* warnings = nullptr) {
  std::vector<ImagePair> pairs;
  pairs.reserve(n_triplets + n_pair_samples);
  Rng rng(Rng(seed).derive({0x5047}).next_u64());
  for (size_t i = 0; i < n_triplets + n_pair_samples; ++i) {
    pairs.push_back(synth_pair(params, rng));
    pairs.back().meta.id = detail::sample_id("synth", i);
  }
  return build_dataset_from_pairs(pairs, n_triplets, n_pair_samples, aug, n_templates, seed,
                                  warnings);
}

inline Dataset filter_dataset(const Dataset& ds, bool keep_triplets, bool keep_pairs) {
  Dataset out;
  out.aug = ds.aug;
  out.n_templates = ds.n_templates;
  out.build_seed = ds.build_seed;
  for (const auto& s : ds.samples) {
    if ((s.kind == SampleKind::triplet && keep_triplets) ||
        (s.kind == SampleKind::pair && keep_pairs)) {
      out.samples.push_back(s);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// persistence (JSON lines + PNG slots and views)
// ---------------------------------------------------------------------------

namespace detail {

inline nlohmann::json aug_spec_json(const AugmentSpec& s) {
  return {{"kind", augment_kind_name(s.kind)},
          {"crop_scale", {s.crop_scale_lo, s.crop_scale_hi}},
          {"aspect", {s.aspect_lo, s.aspect_hi}},
          {"target", {s.target_w, s.target_h}},
          {"jitter_strength", s.jitter_strength}};
}

inline AugmentSpec aug_spec_from_json(const nlohmann::json& j) {
  AugmentSpec s;
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "identity") s.kind = AugmentKind::identity;
  else if (kind == "crop_resize") s.kind = AugmentKind::crop_resize;
  else if (kind == "flip_h") s.kind = AugmentKind::flip_h;
  else if (kind == "rotate90") s.kind = AugmentKind::rotate90;
  else if (kind == "color_jitter") s.kind = AugmentKind::color_jitter;
  else fail(Errc::data_error, "unknown augment kind '" + kind + "'");
  s.crop_scale_lo = j.at("crop_scale")[0].get<double>();
  s.crop_scale_hi = j.at("crop_scale")[1].get<double>();
  s.aspect_lo = j.at("aspect")[0].get<double>();
  s.aspect_hi = j.at("aspect")[1].get<double>();
  s.target_w = j.at("target")[0].get<int>();
  s.target_h = j.at("target")[1].get<int>();
  s.jitter_strength = j.at("jitter_strength").get<double>();
  return s;
}

inline nlohmann::json order_json(const std::vector<CmpPair>& order) {
  nlohmann::json arr = nlohmann::json::array();
  for (const CmpPair& p : order) arr.push_back({p.a, p.b});
  return arr;
}

inline std::vector<CmpPair> order_from_json(const nlohmann::json& arr) {
  std::vector<CmpPair> out;
  for (const auto& e : arr) out.push_back({e[0].get<int>(), e[1].get<int>()});
  return out;
}

}  // namespace detail

// Writes samples.jsonl plus slot and rendered-view PNGs under dir/img/, and
// prompts.jsonl holding the weak and strong prompt instances per sample.
inline void write_dataset(const std::string& dir, const Dataset& ds) {
  namespace fs = std::filesystem;
  fs::create_directories(fs::path(dir) / "img");
  std::ofstream samples_out(fs::path(dir) / "samples.jsonl");
  std::ofstream prompts_out(fs::path(dir) / "prompts.jsonl");
  if (!samples_out || !prompts_out) fail(Errc::data_error, "cannot write dataset to " + dir);

  const TemplateBank bank = ds.bank();
  for (const DatasetSample& s : ds.samples) {
    std::vector<std::string> slot_paths, weak_paths, strong_paths;
    Rng view_rng(s.view_seed);
    std::vector<Image> weak, strong;
    for (const Image& img : s.slots) weak.push_back(apply_augment(img, ds.aug.weak, view_rng));
    for (const Image& img : s.slots) strong.push_back(apply_augment(img, ds.aug.strong, view_rng));
    for (size_t k = 0; k < s.slots.size(); ++k) {
      const std::string rel = "img/" + s.id + "_slot" + std::to_string(k + 1) + ".png";
      write_png((fs::path(dir) / rel).string(), s.slots[k]);
      slot_paths.push_back(rel);
      const std::string relw = "img/" + s.id + "_weak" + std::to_string(k + 1) + ".png";
      write_png((fs::path(dir) / relw).string(), weak[k]);
      weak_paths.push_back(relw);
      const std::string rels = "img/" + s.id + "_strong" + std::to_string(k + 1) + ".png";
      write_png((fs::path(dir) / rels).string(), strong[k]);
      strong_paths.push_back(rels);
    }

    nlohmann::json j{{"sample_id", s.id},
                     {"kind", sample_kind_name(s.kind)},
                     {"slots", slot_paths},
                     {"weak", weak_paths},
                     {"strong", strong_paths},
                     {"gt_letters", s.gt_letters},
                     {"template_id", s.assignment.template_id},
                     {"direction", direction_name(s.assignment.direction)},
                     {"comparison_order", detail::order_json(s.assignment.order)},
                     {"aug_policy",
                      {{"weak", detail::aug_spec_json(ds.aug.weak)},
                       {"strong", detail::aug_spec_json(ds.aug.strong)}}},
                     {"seed", s.view_seed}};
    if (s.kind == SampleKind::triplet) j["odd_slot"] = s.odd_slot;
    else j["same"] = s.same;
    samples_out << j.dump() << "\n";

    for (const char* view : {"weak", "strong"}) {
      const PromptInstance inst =
          render_prompt(s.meta(), view, s.assignment.template_id, s.assignment.direction,
                        s.assignment.order, bank);
      nlohmann::json pj{{"sample_id", inst.sample_id},
                        {"view", inst.view},
                        {"template_id", inst.template_id},
                        {"direction", direction_name(inst.direction)},
                        {"comparison_order", detail::order_json(inst.comparison_order)},
                        {"question_text", inst.question_text},
                        {"expected_answer", inst.expected_answer}};
      prompts_out << pj.dump() << "\n";
    }
  }

  nlohmann::json manifest{{"n_samples", ds.samples.size()},
                          {"n_templates", ds.n_templates},
                          {"build_seed", ds.build_seed},
                          {"aug_policy",
                           {{"weak", detail::aug_spec_json(ds.aug.weak)},
                            {"strong", detail::aug_spec_json(ds.aug.strong)}}}};
  std::ofstream meta_out(fs::path(dir) / "dataset.json");
  meta_out << manifest.dump(2) << "\n";
}

inline Dataset read_dataset(const std::string& dir) {
  namespace fs = std::filesystem;
  std::ifstream meta_in(fs::path(dir) / "dataset.json");
  if (!meta_in) fail(Errc::data_error, "cannot open " + dir + "/dataset.json");
  nlohmann::json manifest;
  meta_in >> manifest;

  Dataset ds;
  ds.n_templates = manifest.at("n_templates").get<int>();
  ds.build_seed = manifest.at("build_seed").get<uint64_t>();
  ds.aug.weak = detail::aug_spec_from_json(manifest.at("aug_policy").at("weak"));
  ds.aug.strong = detail::aug_spec_from_json(manifest.at("aug_policy").at("strong"));

  std::ifstream in(fs::path(dir) / "samples.jsonl");
  if (!in) fail(Errc::data_error, "cannot open " + dir + "/samples.jsonl");
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    nlohmann::json j = nlohmann::json::parse(line);
    DatasetSample s;
    s.id = j.at("sample_id").get<std::string>();
    const std::string kind = j.at("kind").get<std::string>();
    s.kind = kind == "triplet" ? SampleKind::triplet : SampleKind::pair;
    s.gt_letters = j.at("gt_letters").get<std::string>();
    if (s.kind == SampleKind::triplet) s.odd_slot = j.at("odd_slot").get<int>();
    else s.same = j.at("same").get<bool>();
    s.assignment.template_id = j.at("template_id").get<int>();
    s.assignment.direction = direction_from_name(j.at("direction").get<std::string>());
    s.assignment.order = detail::order_from_json(j.at("comparison_order"));
    s.view_seed = j.at("seed").get<uint64_t>();
    for (const auto& rel : j.at("slots")) {
      s.slots.push_back(read_png((fs::path(dir) / rel.get<std::string>()).string()));
    }
    ds.samples.push_back(std::move(s));
  }
  if (ds.samples.empty()) fail(Errc::empty_source, dir + " contains no samples");
  return ds;
}

}  // namespace tric
