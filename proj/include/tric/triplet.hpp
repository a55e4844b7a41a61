#pragma once

#include <array>
#include <string>
#include <vector>

#include "tric/common.hpp"
#include "tric/image.hpp"
#include "tric/image_ops.hpp"
#include "tric/sources.hpp"

namespace tric {

// gt_letters cover the canonical comparisons [(1,2), (2,3), (1,3)].
inline std::string triplet_gt_for_odd_slot(int odd_slot) {
  switch (odd_slot) {
    case 1: return "FTF";
    case 2: return "FFT";
    case 3: return "TFF";
  }
  fail(Errc::contract_violation, "odd_slot must be in {1,2,3}");
}

// Two slots hold views of I_a, one (odd_slot) holds the similar-but-different
// I_b. Exactly one of the three pairwise comparisons is "same".
struct ContrastTriplet {
  std::array<Image, 3> slots;
  int odd_slot = 3;  // 1-based
  std::string source_pair_id;
  std::string gt_letters;  // canonical order
};

struct PairSample {
  std::array<Image, 2> slots;
  bool same = false;
  std::string source_id;
  std::string gt_letters;  // single letter
};

struct AugPolicy {
  AugmentSpec weak = AugmentSpec::crop(0.9, 1.0);
  AugmentSpec strong = AugmentSpec::crop(0.5, 0.9);
};

// Pre-augmentation slot assignment.
inline ContrastTriplet build_triplet(const ImagePair& pair, int odd_slot) {
  pair.check();
  ContrastTriplet t;
  t.odd_slot = odd_slot;
  t.gt_letters = triplet_gt_for_odd_slot(odd_slot);  // validates odd_slot
  t.source_pair_id = pair.meta.id;
  for (int s = 1; s <= 3; ++s) t.slots[s - 1] = (s == odd_slot) ? pair.b : pair.a;
  return t;
}

inline ContrastTriplet build_triplet(const ImagePair& pair, Rng& rng) {
  return build_triplet(pair, static_cast<int>(rng.uniform_int(1, 3)));
}

// same=true pairs reuse one source image under two augmentations.
inline PairSample build_pair_sample(const Image& single, bool same) {
  if (!same) fail(Errc::invalid_sample, "a different-pair sample needs an ImagePair source");
  PairSample p;
  p.same = true;
  p.gt_letters = "T";
  p.slots = {single, single};
  return p;
}

inline PairSample build_pair_sample(const ImagePair& pair, bool same) {
  if (same) fail(Errc::invalid_sample, "a same-pair sample needs a single source image");
  pair.check();
  PairSample p;
  p.same = false;
  p.gt_letters = "F";
  p.source_id = pair.meta.id;
  p.slots = {pair.a, pair.b};
  return p;
}

struct SampleViews {
  std::vector<Image> weak;
  std::vector<Image> strong;
};

namespace detail {
template <size_t N>
inline SampleViews render_views_impl(const std::array<Image, N>& slots, const AugPolicy& policy,
                                     Rng& rng) {
  SampleViews v;
  v.weak.reserve(N);
  v.strong.reserve(N);
  // each slot augmented independently; strong views draw fresh randomness
  for (const Image& s : slots) v.weak.push_back(apply_augment(s, policy.weak, rng));
  for (const Image& s : slots) v.strong.push_back(apply_augment(s, policy.strong, rng));
  return v;
}
}  // namespace detail

// Label-preserving: gt_letters are untouched by augmentation.
inline SampleViews render_views(const ContrastTriplet& t, const AugPolicy& policy, Rng& rng) {
  return detail::render_views_impl(t.slots, policy, rng);
}

inline SampleViews render_views(const PairSample& p, const AugPolicy& policy, Rng& rng) {
  return detail::render_views_impl(p.slots, policy, rng);
}

}  // namespace tric
