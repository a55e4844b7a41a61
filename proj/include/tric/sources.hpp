#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "tric/common.hpp"
#include "tric/image.hpp"
#include "tric/image_ops.hpp"
#include "tric/png_io.hpp"

namespace tric {

enum class PairOrigin { video, edit, synthetic };

inline const char* pair_origin_name(PairOrigin o) {
  switch (o) {
    case PairOrigin::video: return "video";
    case PairOrigin::edit: return "edit";
    case PairOrigin::synthetic: return "synthetic";
  }
  return "?";
}

struct PairMeta {
  std::string id;
  std::string source_a;
  std::string source_b;
  int64_t timestamp_a_ms = -1;
  int64_t timestamp_b_ms = -1;
  double ssim_value = 0.0;
  double diff_ratio_value = 0.0;
};

// A similar-but-different image pair; the contrastive supervision unit.
struct ImagePair {
  Image a;
  Image b;
  PairOrigin origin = PairOrigin::synthetic;
  PairMeta meta;
  std::optional<std::vector<uint8_t>> known_diff_mask;  // synthetic only, 0/1 per pixel

  void check() const {
    require_same_size(a, b, "ImagePair");
    if (origin == PairOrigin::synthetic && !known_diff_mask) {
      fail(Errc::contract_violation, "synthetic pair requires known_diff_mask");
    }
  }
};

struct MiningConfig {
  double gap_seconds = 2.0;
  double ssim_max = 0.95;
  double diff_ratio_max = 0.8;
  double pixel_threshold = 30.0;
  double frame_rate = 0.0;         // informational; pairing is timestamp-driven
  int frame_stride = 1;            // starting-frame stride
  size_t max_pairs_per_video = 0;  // 0 = unlimited
  bool video_diff_filter = true;   // also cap diff_ratio on video pairs

  void validate() const {
    if (gap_seconds <= 0.0) fail(Errc::contract_violation, "gap_seconds must be > 0");
    if (ssim_max < -1.0 || ssim_max > 1.0) fail(Errc::contract_violation, "ssim_max out of range");
    if (diff_ratio_max < 0.0 || diff_ratio_max > 1.0) {
      fail(Errc::contract_violation, "diff_ratio_max out of range");
    }
    if (pixel_threshold < 0.0) fail(Errc::contract_violation, "pixel_threshold must be >= 0");
    if (frame_stride < 1) fail(Errc::contract_violation, "frame_stride must be >= 1");
  }
};

// ---------------------------------------------------------------------------
// manifests
// ---------------------------------------------------------------------------

struct FrameEntry {
  int64_t timestamp_ms = 0;
  std::string path;
};

struct EditEntry {
  std::string before_path;
  std::string after_path;
};

// line format: timestamp_ms<TAB>path
inline std::vector<FrameEntry> read_frame_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::data_error, "cannot open frame manifest " + path);
  std::vector<FrameEntry> entries;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      fail(Errc::data_error, path + ":" + std::to_string(lineno) + ": expected timestamp<TAB>path");
    }
    FrameEntry e;
    try {
      e.timestamp_ms = std::stoll(line.substr(0, tab));
    } catch (const std::exception&) {
      fail(Errc::data_error, path + ":" + std::to_string(lineno) + ": bad timestamp");
    }
    e.path = line.substr(tab + 1);
    entries.push_back(std::move(e));
  }
  return entries;
}

// line format: before_path<TAB>after_path
inline std::vector<EditEntry> read_edit_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::data_error, "cannot open edit manifest " + path);
  std::vector<EditEntry> entries;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const size_t tab = line.find('\t');
    if (tab == std::string::npos) {
      fail(Errc::data_error, path + ":" + std::to_string(lineno) + ": expected before<TAB>after");
    }
    entries.push_back({line.substr(0, tab), line.substr(tab + 1)});
  }
  return entries;
}

// ---------------------------------------------------------------------------
// mining
// ---------------------------------------------------------------------------

struct MineResult {
  std::vector<ImagePair> pairs;
  std::vector<std::string> diagnostics;
  size_t filtered = 0;  // dropped by thresholds
  size_t skipped = 0;   // unreadable or malformed entries
};

namespace detail {

inline std::optional<Image> try_read_png(const std::string& path, std::vector<std::string>& diags,
                                         size_t& skipped) {
  try {
    return read_png(path);
  } catch (const Error& e) {
    diags.push_back(std::string("skipped ") + path + ": " + e.what());
    ++skipped;
    return std::nullopt;
  }
}

inline std::string seq_id(const char* prefix, size_t n) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%s-%06zu", prefix, n);
  return buf;
}

}  // namespace detail

// Emits (frame at t, frame at t + gap) pairs, where the partner frame must
// sit within half a frame interval of the target time. Near-identical pairs
// (ssim > ssim_max) are dropped; the diff_ratio cap optionally guards
// against cut-boundary pairs.
inline MineResult mine_video_pairs(const std::vector<FrameEntry>& manifest,
                                   const MiningConfig& cfg) {
  cfg.validate();
  if (manifest.size() < 2) fail(Errc::empty_source, "frame manifest needs at least 2 frames");
  for (size_t i = 1; i < manifest.size(); ++i) {
    if (manifest[i].timestamp_ms < manifest[i - 1].timestamp_ms) {
      fail(Errc::data_error, "frame manifest not sorted by timestamp");
    }
  }

  // median frame interval drives the +-half-interval acceptance window
  std::vector<int64_t> deltas;
  deltas.reserve(manifest.size() - 1);
  for (size_t i = 1; i < manifest.size(); ++i) {
    deltas.push_back(manifest[i].timestamp_ms - manifest[i - 1].timestamp_ms);
  }
  std::sort(deltas.begin(), deltas.end());
  const double interval_ms = static_cast<double>(deltas[deltas.size() / 2]);
  const double gap_ms = cfg.gap_seconds * 1000.0;

  MineResult out;
  for (size_t i = 0; i < manifest.size(); i += static_cast<size_t>(cfg.frame_stride)) {
    if (cfg.max_pairs_per_video != 0 && out.pairs.size() >= cfg.max_pairs_per_video) break;
    const double target = static_cast<double>(manifest[i].timestamp_ms) + gap_ms;
    size_t best = i;
    double best_err = -1.0;
    for (size_t j = i + 1; j < manifest.size(); ++j) {
      const double err = std::abs(static_cast<double>(manifest[j].timestamp_ms) - target);
      if (best_err < 0.0 || err < best_err) {
        best = j;
        best_err = err;
      }
      if (static_cast<double>(manifest[j].timestamp_ms) > target) break;
    }
    if (best == i || best_err > interval_ms / 2.0) continue;

    auto img_a = detail::try_read_png(manifest[i].path, out.diagnostics, out.skipped);
    if (!img_a) continue;
    auto img_b = detail::try_read_png(manifest[best].path, out.diagnostics, out.skipped);
    if (!img_b) continue;
    if (!img_a->same_size(*img_b)) {
      out.diagnostics.push_back("skipped " + manifest[i].path + " / " + manifest[best].path +
                                ": size mismatch");
      ++out.skipped;
      continue;
    }

    const double s = ssim(*img_a, *img_b);
    if (s > cfg.ssim_max) {
      ++out.filtered;
      continue;
    }
    const double d = diff_ratio(*img_a, *img_b, cfg.pixel_threshold);
    if (cfg.video_diff_filter && d > cfg.diff_ratio_max) {
      ++out.filtered;
      continue;
    }

    ImagePair pair;
    pair.a = std::move(*img_a);
    pair.b = std::move(*img_b);
    pair.origin = PairOrigin::video;
    pair.meta.id = detail::seq_id("video", out.pairs.size());
    pair.meta.source_a = manifest[i].path;
    pair.meta.source_b = manifest[best].path;
    pair.meta.timestamp_a_ms = manifest[i].timestamp_ms;
    pair.meta.timestamp_b_ms = manifest[best].timestamp_ms;
    pair.meta.ssim_value = s;
    pair.meta.diff_ratio_value = d;
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

// Before/after pairs from an edit manifest. Pairs whose difference ratio
// exceeds the cap are discarded, as are byte-identical degenerates (no edit
// visible means no valid label).
inline MineResult mine_edit_pairs(const std::vector<EditEntry>& manifest,
                                  const MiningConfig& cfg) {
  cfg.validate();
  if (manifest.empty()) fail(Errc::empty_source, "edit manifest is empty");

  MineResult out;
  for (const EditEntry& e : manifest) {
    auto img_a = detail::try_read_png(e.before_path, out.diagnostics, out.skipped);
    if (!img_a) continue;
    auto img_b = detail::try_read_png(e.after_path, out.diagnostics, out.skipped);
    if (!img_b) continue;
    if (!img_a->same_size(*img_b)) {
      out.diagnostics.push_back("skipped " + e.before_path + " / " + e.after_path +
                                ": size mismatch");
      ++out.skipped;
      continue;
    }

    const double d = diff_ratio(*img_a, *img_b, cfg.pixel_threshold);
    if (d > cfg.diff_ratio_max || d == 0.0) {
      ++out.filtered;
      continue;
    }

    ImagePair pair;
    pair.a = std::move(*img_a);
    pair.b = std::move(*img_b);
    pair.origin = PairOrigin::edit;
    pair.meta.id = detail::seq_id("edit", out.pairs.size());
    pair.meta.source_a = e.before_path;
    pair.meta.source_b = e.after_path;
    pair.meta.ssim_value = ssim(pair.a, pair.b);
    pair.meta.diff_ratio_value = d;
    out.pairs.push_back(std::move(pair));
  }
  return out;
}

// ---------------------------------------------------------------------------
// procedural synthesizer
// ---------------------------------------------------------------------------

struct SynthParams {
  int size = 128;
  int n_shapes = 3;
  int n_edits = 1;
  double edit_magnitude = 170.0;  // minimum channel-averaged recolor distance
  double shape_scale_lo = 0.22;   // shape half-extent as a fraction of size
  double shape_scale_hi = 0.32;
  // edit-target shapes stay centered so no half-area crop can hide an edit
  double edit_center_frac = 0.10;
  double min_luma_shift = 50.0;  // recolors must also move the luma
  double ssim_max = 0.95;
  double diff_ratio_max = 0.8;
  double pixel_threshold = 30.0;

  void validate() const {
    if (size < 8) fail(Errc::contract_violation, "synth size must be >= 8");
    if (n_shapes < 1) fail(Errc::contract_violation, "n_shapes must be >= 1");
    if (n_edits < 1) fail(Errc::contract_violation, "n_edits must be >= 1");
    if (!(edit_magnitude > pixel_threshold)) {
      fail(Errc::contract_violation, "edit_magnitude must exceed pixel_threshold");
    }
    if (!(shape_scale_lo > 0.0 && shape_scale_lo <= shape_scale_hi)) {
      fail(Errc::contract_violation, "shape_scale range invalid");
    }
  }
};

namespace synth_detail {

struct Shape {
  bool circle = true;
  double cx = 0.0, cy = 0.0;
  double rx = 0.0, ry = 0.0;  // half extents; circle uses rx
  std::array<uint8_t, 3> color{0, 0, 0};

  bool contains(int x, int y) const {
    if (circle) {
      const double dx = x - cx, dy = y - cy;
      return dx * dx + dy * dy <= rx * rx;
    }
    return std::abs(x - cx) <= rx && std::abs(y - cy) <= ry;
  }
  // construction keeps ry == rx for circles
  double bb_x0() const { return cx - rx; }
  double bb_x1() const { return cx + rx; }
  double bb_y0() const { return cy - ry; }
  double bb_y1() const { return cy + ry; }
  bool bbox_overlaps(const Shape& o, double margin = 1.0) const {
    return bb_x0() - margin < o.bb_x1() && o.bb_x0() - margin < bb_x1() &&
           bb_y0() - margin < o.bb_y1() && o.bb_y0() - margin < bb_y1();
  }
};

inline double color_dist(std::array<uint8_t, 3> a, std::array<uint8_t, 3> b) {
  return (std::abs(int(a[0]) - int(b[0])) + std::abs(int(a[1]) - int(b[1])) +
          std::abs(int(a[2]) - int(b[2]))) /
         3.0;
}

inline std::array<uint8_t, 3> random_color(Rng& rng) {
  return {static_cast<uint8_t>(rng.uniform_int(0, 255)),
          static_cast<uint8_t>(rng.uniform_int(0, 255)),
          static_cast<uint8_t>(rng.uniform_int(0, 255))};
}

inline double luma_of(std::array<uint8_t, 3> c) { return luma601(c[0], c[1], c[2]); }

// random color with minimum channel-averaged distance from the given anchors
// and, optionally, a minimum luma distance from the first anchor
inline std::array<uint8_t, 3> distant_color(Rng& rng,
                                            const std::vector<std::array<uint8_t, 3>>& anchors,
                                            double min_dist, double min_luma_dist = 0.0) {
  for (int attempt = 0; attempt < 128; ++attempt) {
    auto c = random_color(rng);
    bool ok = true;
    for (const auto& a : anchors) {
      if (color_dist(c, a) < min_dist) {
        ok = false;
        break;
      }
    }
    if (ok && !anchors.empty() && min_luma_dist > 0.0 &&
        std::abs(luma_of(c) - luma_of(anchors.front())) < min_luma_dist) {
      ok = false;
    }
    if (ok) return c;
  }
  // push every channel away from the first anchor; distance may fall short of
  // min_dist at the clamp but stays far beyond any sane pixel threshold
  auto base = anchors.empty() ? std::array<uint8_t, 3>{128, 128, 128} : anchors.front();
  std::array<uint8_t, 3> c;
  for (int i = 0; i < 3; ++i) {
    c[i] = base[i] < 128 ? static_cast<uint8_t>(std::min(255.0, base[i] + min_dist))
                         : static_cast<uint8_t>(std::max(0.0, base[i] - min_dist));
  }
  return c;
}

inline void render(Image& img, std::array<uint8_t, 3> bg, const std::vector<Shape>& shapes) {
  for (size_t i = 0; i < img.data.size(); i += 3) {
    img.data[i] = bg[0];
    img.data[i + 1] = bg[1];
    img.data[i + 2] = bg[2];
  }
  for (const Shape& s : shapes) {
    const int x0 = std::max(0, static_cast<int>(std::floor(s.bb_x0())));
    const int x1 = std::min(img.width - 1, static_cast<int>(std::ceil(s.bb_x1())));
    const int y0 = std::max(0, static_cast<int>(std::floor(s.bb_y0())));
    const int y1 = std::min(img.height - 1, static_cast<int>(std::ceil(s.bb_y1())));
    for (int y = y0; y <= y1; ++y) {
      for (int x = x0; x <= x1; ++x) {
        if (s.contains(x, y)) {
          img.at(x, y, 0) = s.color[0];
          img.at(x, y, 1) = s.color[1];
          img.at(x, y, 2) = s.color[2];
        }
      }
    }
  }
}

inline void mark_shape(std::vector<uint8_t>& mask, int size, const Shape& s) {
  const int x0 = std::max(0, static_cast<int>(std::floor(s.bb_x0())));
  const int x1 = std::min(size - 1, static_cast<int>(std::ceil(s.bb_x1())));
  const int y0 = std::max(0, static_cast<int>(std::floor(s.bb_y0())));
  const int y1 = std::min(size - 1, static_cast<int>(std::ceil(s.bb_y1())));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (s.contains(x, y)) mask[static_cast<size_t>(y) * size + x] = 1;
    }
  }
}

inline void mark_shape_xor(std::vector<uint8_t>& mask, int size, const Shape& old_s,
                           const Shape& new_s) {
  const int x0 = std::max(0, static_cast<int>(std::floor(std::min(old_s.bb_x0(), new_s.bb_x0()))));
  const int x1 =
      std::min(size - 1, static_cast<int>(std::ceil(std::max(old_s.bb_x1(), new_s.bb_x1()))));
  const int y0 = std::max(0, static_cast<int>(std::floor(std::min(old_s.bb_y0(), new_s.bb_y0()))));
  const int y1 =
      std::min(size - 1, static_cast<int>(std::ceil(std::max(old_s.bb_y1(), new_s.bb_y1()))));
  for (int y = y0; y <= y1; ++y) {
    for (int x = x0; x <= x1; ++x) {
      if (old_s.contains(x, y) != new_s.contains(x, y)) {
        mask[static_cast<size_t>(y) * size + x] = 1;
      }
    }
  }
}

}  // namespace synth_detail

// Renders a base image of randomly placed solid shapes and a partner with
// n_edits shape-level perturbations (recolor / move / delete). Internals are
// resampled until the emitted pair passes both mining filters; the mask of
// perturbed pixels is tracked geometrically.
inline ImagePair synth_pair(const SynthParams& params, Rng& rng) {
  using namespace synth_detail;
  params.validate();
  const int size = params.size;
  const double bg_shape_dist = std::max(params.pixel_threshold + 15.0, 45.0);

  const double center = (params.size - 1) / 2.0;
  const double center_half = params.edit_center_frac * params.size;

  for (int attempt = 0; attempt < 20; ++attempt) {
    const std::array<uint8_t, 3> bg = random_color(rng);

    // place non-overlapping shapes, shrinking when the canvas gets crowded;
    // the first n_edits shapes are the edit targets and stay near the center
    std::vector<Shape> shapes;
    for (int i = 0; i < params.n_shapes; ++i) {
      const bool central = i < params.n_edits;
      Shape s;
      // the edit target is the largest shape on the canvas
      const double mid = 0.5 * (params.shape_scale_lo + params.shape_scale_hi);
      double scale_lo = central ? mid : params.shape_scale_lo;
      double scale_hi = central ? params.shape_scale_hi : mid;
      bool placed = false;
      for (int round = 0; round < 4 && !placed; ++round) {
        for (int t = 0; t < 60 && !placed; ++t) {
          s.circle = rng.bernoulli(0.5);
          s.rx = rng.uniform(scale_lo, scale_hi) * size;
          s.ry = s.circle ? s.rx : rng.uniform(scale_lo, scale_hi) * size;
          double lo_x = s.rx, hi_x = size - 1 - s.rx;
          double lo_y = s.ry, hi_y = size - 1 - s.ry;
          if (central) {
            lo_x = std::max(lo_x, center - center_half);
            hi_x = std::min(hi_x, center + center_half);
            lo_y = std::max(lo_y, center - center_half);
            hi_y = std::min(hi_y, center + center_half);
          }
          if (lo_x > hi_x || lo_y > hi_y) {
            s.cx = center;
            s.cy = center;
          } else {
            s.cx = rng.uniform(lo_x, hi_x);
            s.cy = rng.uniform(lo_y, hi_y);
          }
          placed = true;
          for (const Shape& other : shapes) {
            if (s.bbox_overlaps(other)) {
              placed = false;
              break;
            }
          }
        }
        if (!placed) {
          scale_lo *= 0.7;
          scale_hi *= 0.7;
        }
      }
      if (!placed) break;
      s.color = distant_color(rng, {bg}, bg_shape_dist, 55.0);
      shapes.push_back(s);
    }
    if (shapes.empty()) continue;

    const int n_edits = std::min<int>(params.n_edits, static_cast<int>(shapes.size()));
    std::vector<Shape> edited = shapes;
    std::vector<uint8_t> mask(static_cast<size_t>(size) * size, 0);
    std::vector<bool> deleted(shapes.size(), false);
    for (int e = 0; e < n_edits; ++e) {
      const int idx = e;
      const double kind_draw = rng.uniform();
      if (kind_draw < 0.5) {
        // recolor
        edited[idx].color =
            distant_color(rng, {shapes[idx].color, bg},
                          std::max(params.edit_magnitude, bg_shape_dist),
                          params.min_luma_shift);
        mark_shape(mask, size, shapes[idx]);
      } else if (kind_draw < 0.75) {
        // move within the central window; falls back to recolor when no
        // collision-free spot exists
        Shape moved = shapes[idx];
        const double lo_x = std::max(moved.rx, center - center_half);
        const double hi_x = std::min(double(size - 1) - moved.rx, center + center_half);
        const double lo_y = std::max(moved.ry, center - center_half);
        const double hi_y = std::min(double(size - 1) - moved.ry, center + center_half);
        bool ok = false;
        for (int t = 0; t < 20 && lo_x <= hi_x && lo_y <= hi_y && !ok; ++t) {
          const double dist = rng.uniform(0.20, 0.35) * size;
          const double ang = rng.uniform(0.0, 2.0 * 3.14159265358979323846);
          moved.cx = std::clamp(shapes[idx].cx + dist * std::cos(ang), lo_x, hi_x);
          moved.cy = std::clamp(shapes[idx].cy + dist * std::sin(ang), lo_y, hi_y);
          const double dx = moved.cx - shapes[idx].cx;
          const double dy = moved.cy - shapes[idx].cy;
          if (dx * dx + dy * dy < 0.12 * 0.12 * size * size) continue;  // clamped into place
          ok = true;
          for (size_t o = 0; o < edited.size(); ++o) {
            if (static_cast<int>(o) == idx || deleted[o]) continue;
            if (moved.bbox_overlaps(edited[o])) {
              ok = false;
              break;
            }
          }
        }
        if (ok) {
          mark_shape_xor(mask, size, edited[idx], moved);
          edited[idx] = moved;
        } else {
          edited[idx].color =
              distant_color(rng, {shapes[idx].color, bg},
                            std::max(params.edit_magnitude, bg_shape_dist),
                            params.min_luma_shift);
          mark_shape(mask, size, shapes[idx]);
        }
      } else {
        // delete
        deleted[idx] = true;
        mark_shape(mask, size, shapes[idx]);
      }
    }

    std::vector<Shape> partner_shapes;
    for (size_t i = 0; i < edited.size(); ++i) {
      if (!deleted[i]) partner_shapes.push_back(edited[i]);
    }

    ImagePair pair;
    pair.a = Image(size, size);
    pair.b = Image(size, size);
    render(pair.a, bg, shapes);
    render(pair.b, bg, partner_shapes);
    pair.origin = PairOrigin::synthetic;
    pair.known_diff_mask = std::move(mask);

    const double d = diff_ratio(pair.a, pair.b, params.pixel_threshold);
    if (!(d > 0.0 && d <= params.diff_ratio_max)) continue;
    const double s = ssim(pair.a, pair.b);
    if (s > params.ssim_max) continue;

    pair.meta.id = "synth";
    pair.meta.source_a = "synthetic";
    pair.meta.source_b = "synthetic";
    pair.meta.ssim_value = s;
    pair.meta.diff_ratio_value = d;
    return pair;
  }
  fail(Errc::synthesis_failure, "constraints unsatisfiable after 20 attempts");
}

// ---------------------------------------------------------------------------
// pair manifest (JSON lines)
// ---------------------------------------------------------------------------

struct PairManifestRecord {
  std::string pair_id;
  std::string origin;
  std::string path_a;
  std::string path_b;
  double ssim_value = 0.0;
  double diff_ratio_value = 0.0;
};

inline void write_pair_manifest(const std::string& path,
                                const std::vector<PairManifestRecord>& records) {
  std::ofstream out(path);
  if (!out) fail(Errc::data_error, "cannot open " + path + " for writing");
  for (const auto& r : records) {
    nlohmann::json j{{"pair_id", r.pair_id},       {"origin", r.origin},
                     {"path_a", r.path_a},         {"path_b", r.path_b},
                     {"ssim", r.ssim_value},       {"diff_ratio", r.diff_ratio_value}};
    out << j.dump() << "\n";
  }
}

inline std::vector<PairManifestRecord> read_pair_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::data_error, "cannot open pair manifest " + path);
  std::vector<PairManifestRecord> records;
  std::string line;
  size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    nlohmann::json j;
    try {
      j = nlohmann::json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail(Errc::data_error, path + ":" + std::to_string(lineno) + ": " + e.what());
    }
    PairManifestRecord r;
    r.pair_id = j.at("pair_id").get<std::string>();
    r.origin = j.at("origin").get<std::string>();
    r.path_a = j.at("path_a").get<std::string>();
    r.path_b = j.at("path_b").get<std::string>();
    r.ssim_value = j.at("ssim").get<double>();
    r.diff_ratio_value = j.at("diff_ratio").get<double>();
    records.push_back(std::move(r));
  }
  return records;
}

}  // namespace tric
