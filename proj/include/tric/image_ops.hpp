#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "tric/common.hpp"
#include "tric/image.hpp"

namespace tric {

// ---------------------------------------------------------------------------
// similarity / difference metrics
// ---------------------------------------------------------------------------

// Mean SSIM over 8x8 non-overlapping grayscale (BT.601 luma) windows with
// C1 = (0.01*255)^2, C2 = (0.03*255)^2. Partial edge windows are dropped.
// Population variance inside each window.
inline double ssim(const Image& a, const Image& b) {
  require_same_size(a, b, "ssim");
  if (a.width < 8 || a.height < 8) {
    fail(Errc::size_mismatch, "ssim requires images of at least 8x8");
  }
  constexpr double kC1 = (0.01 * 255.0) * (0.01 * 255.0);
  constexpr double kC2 = (0.03 * 255.0) * (0.03 * 255.0);
  constexpr int kWin = 8;

  const int wx_count = a.width / kWin;
  const int wy_count = a.height / kWin;
  double total = 0.0;
  for (int wy = 0; wy < wy_count; ++wy) {
    for (int wx = 0; wx < wx_count; ++wx) {
      double sum_x = 0.0, sum_y = 0.0, sum_xx = 0.0, sum_yy = 0.0, sum_xy = 0.0;
      for (int dy = 0; dy < kWin; ++dy) {
        for (int dx = 0; dx < kWin; ++dx) {
          const int x = wx * kWin + dx;
          const int y = wy * kWin + dy;
          const double px = luma_at(a, x, y);
          const double py = luma_at(b, x, y);
          sum_x += px;
          sum_y += py;
          sum_xx += px * px;
          sum_yy += py * py;
          sum_xy += px * py;
        }
      }
      constexpr double n = kWin * kWin;
      const double mu_x = sum_x / n;
      const double mu_y = sum_y / n;
      const double var_x = std::max(0.0, sum_xx / n - mu_x * mu_x);
      const double var_y = std::max(0.0, sum_yy / n - mu_y * mu_y);
      const double cov = sum_xy / n - mu_x * mu_y;
      const double num = (2.0 * mu_x * mu_y + kC1) * (2.0 * cov + kC2);
      const double den = (mu_x * mu_x + mu_y * mu_y + kC1) * (var_x + var_y + kC2);
      total += num / den;
    }
  }
  return total / (static_cast<double>(wx_count) * wy_count);
}

// Fraction of pixels whose channel-averaged absolute difference strictly
// exceeds pixel_threshold. A pixel hitting the threshold exactly does not
// count.
inline double diff_ratio(const Image& a, const Image& b, double pixel_threshold = 30.0) {
  require_same_size(a, b, "diff_ratio");
  size_t count = 0;
  const size_t n = a.pixel_count();
  for (size_t p = 0; p < n; ++p) {
    const int dr = std::abs(int(a.data[p * 3]) - int(b.data[p * 3]));
    const int dg = std::abs(int(a.data[p * 3 + 1]) - int(b.data[p * 3 + 1]));
    const int db = std::abs(int(a.data[p * 3 + 2]) - int(b.data[p * 3 + 2]));
    const double avg = (dr + dg + db) / 3.0;
    if (avg > pixel_threshold) ++count;
  }
  return static_cast<double>(count) / static_cast<double>(n);
}

// Pixel-wise MSE over all channels. Report-only auxiliary statistic; the
// threshold/ratio rule above is the canonical edit-pair filter.
inline double mse(const Image& a, const Image& b) {
  require_same_size(a, b, "mse");
  double acc = 0.0;
  for (size_t i = 0; i < a.data.size(); ++i) {
    const double d = double(a.data[i]) - double(b.data[i]);
    acc += d * d;
  }
  return acc / static_cast<double>(a.data.size());
}

// ---------------------------------------------------------------------------
// resize
// ---------------------------------------------------------------------------

inline uint8_t round_half_up_u8(double v) {
  const double r = std::floor(v + 0.5);
  return static_cast<uint8_t>(std::clamp(r, 0.0, 255.0));
}

// Bilinear resize, half-pixel-center convention, round-half-up quantization.
// Same-size resize is an exact copy.
inline Image resize(const Image& img, int w, int h) {
  if (w < 1 || h < 1) fail(Errc::contract_violation, "resize target must be positive");
  if (w == img.width && h == img.height) return img;
  Image out(w, h);
  const double sx_scale = static_cast<double>(img.width) / w;
  const double sy_scale = static_cast<double>(img.height) / h;
  for (int y = 0; y < h; ++y) {
    const double sy = (y + 0.5) * sy_scale - 0.5;
    const int y0 = std::clamp(static_cast<int>(std::floor(sy)), 0, img.height - 1);
    const int y1 = std::min(y0 + 1, img.height - 1);
    const double fy = std::clamp(sy - std::floor(sy), 0.0, 1.0);
    for (int x = 0; x < w; ++x) {
      const double sx = (x + 0.5) * sx_scale - 0.5;
      const int x0 = std::clamp(static_cast<int>(std::floor(sx)), 0, img.width - 1);
      const int x1 = std::min(x0 + 1, img.width - 1);
      const double fx = std::clamp(sx - std::floor(sx), 0.0, 1.0);
      for (int c = 0; c < 3; ++c) {
        const double v00 = img.at(x0, y0, c);
        const double v10 = img.at(x1, y0, c);
        const double v01 = img.at(x0, y1, c);
        const double v11 = img.at(x1, y1, c);
        const double top = v00 + (v10 - v00) * fx;
        const double bot = v01 + (v11 - v01) * fx;
        out.at(x, y, c) = round_half_up_u8(top + (bot - top) * fy);
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// augmentation
// ---------------------------------------------------------------------------

enum class AugmentKind { identity, crop_resize, flip_h, rotate90, color_jitter };

inline const char* augment_kind_name(AugmentKind k) {
  switch (k) {
    case AugmentKind::identity: return "identity";
    case AugmentKind::crop_resize: return "crop_resize";
    case AugmentKind::flip_h: return "flip_h";
    case AugmentKind::rotate90: return "rotate90";
    case AugmentKind::color_jitter: return "color_jitter";
  }
  return "?";
}

struct AugmentSpec {
  AugmentKind kind = AugmentKind::identity;
  // crop_resize: retained fraction of source area
  double crop_scale_lo = 0.5;
  double crop_scale_hi = 0.9;
  // crop aspect ratio (w/h) interval
  double aspect_lo = 3.0 / 4.0;
  double aspect_hi = 4.0 / 3.0;
  int target_w = 112;
  int target_h = 112;
  // color_jitter: per-channel gain in [1-s, 1+s]
  double jitter_strength = 0.0;

  void validate() const {
    if (kind == AugmentKind::crop_resize) {
      if (!(crop_scale_lo > 0.0 && crop_scale_lo <= crop_scale_hi && crop_scale_hi <= 1.0)) {
        fail(Errc::contract_violation, "crop_scale_range must satisfy 0 < lo <= hi <= 1");
      }
      if (!(aspect_lo > 0.0 && aspect_lo <= aspect_hi)) {
        fail(Errc::contract_violation, "aspect_range must satisfy 0 < lo <= hi");
      }
      if (target_w < 8 || target_h < 8) {
        fail(Errc::contract_violation, "target_size must be at least 8x8");
      }
    }
    if (kind == AugmentKind::color_jitter &&
        (jitter_strength < 0.0 || jitter_strength > 1.0)) {
      fail(Errc::contract_violation, "jitter_strength must be in [0,1]");
    }
  }

  static AugmentSpec identity_spec() { return AugmentSpec{}; }

  static AugmentSpec crop(double scale_lo, double scale_hi, int target = 112) {
    AugmentSpec s;
    s.kind = AugmentKind::crop_resize;
    s.crop_scale_lo = scale_lo;
    s.crop_scale_hi = scale_hi;
    s.target_w = target;
    s.target_h = target;
    return s;
  }
};

struct CropRect {
  int x0 = 0, y0 = 0, w = 0, h = 0;
};

inline Image crop(const Image& img, const CropRect& r) {
  Image out(r.w, r.h);
  for (int y = 0; y < r.h; ++y) {
    for (int x = 0; x < r.w; ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(r.x0 + x, r.y0 + y, c);
    }
  }
  return out;
}

inline Image flip_horizontal(const Image& img) {
  Image out(img.width, img.height);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) out.at(x, y, c) = img.at(img.width - 1 - x, y, c);
    }
  }
  return out;
}

// Clockwise quarter turn; output is height x width.
inline Image rotate90_cw(const Image& img) {
  Image out(img.height, img.width);
  for (int y = 0; y < img.height; ++y) {
    for (int x = 0; x < img.width; ++x) {
      for (int c = 0; c < 3; ++c) out.at(img.height - 1 - y, x, c) = img.at(x, y, c);
    }
  }
  return out;
}

inline Image color_jitter(const Image& img, double strength, Rng& rng) {
  const double gr = rng.uniform(1.0 - strength, 1.0 + strength);
  const double gg = rng.uniform(1.0 - strength, 1.0 + strength);
  const double gb = rng.uniform(1.0 - strength, 1.0 + strength);
  Image out(img.width, img.height);
  for (size_t p = 0; p < img.pixel_count(); ++p) {
    out.data[p * 3] = round_half_up_u8(img.data[p * 3] * gr);
    out.data[p * 3 + 1] = round_half_up_u8(img.data[p * 3 + 1] * gg);
    out.data[p * 3 + 2] = round_half_up_u8(img.data[p * 3 + 2] * gb);
  }
  return out;
}

// Content-preserving augmentation. crop_resize samples a crop whose retained
// area is >= the sampled scale fraction (ceil'd crop sides), resampling until
// it fits (max 10 attempts), then falls back to a centered mid-scale crop.
// Deterministic given (img, spec, rng state). The applied crop rectangle is
// reported through crop_out when provided.
inline Image apply_augment(const Image& img, const AugmentSpec& spec, Rng& rng,
                           CropRect* crop_out = nullptr) {
  spec.validate();
  switch (spec.kind) {
    case AugmentKind::identity:
      return img;
    case AugmentKind::flip_h:
      return flip_horizontal(img);
    case AugmentKind::rotate90:
      return rotate90_cw(img);
    case AugmentKind::color_jitter:
      return color_jitter(img, spec.jitter_strength, rng);
    case AugmentKind::crop_resize:
      break;
  }

  const double area = static_cast<double>(img.width) * img.height;
  CropRect rect;
  bool found = false;
  for (int attempt = 0; attempt < 10 && !found; ++attempt) {
    const double scale = rng.uniform(spec.crop_scale_lo, spec.crop_scale_hi);
    const double aspect = rng.uniform(spec.aspect_lo, spec.aspect_hi);
    const double target_area = scale * area;
    const int cw = static_cast<int>(std::ceil(std::sqrt(target_area * aspect)));
    const int ch = static_cast<int>(std::ceil(std::sqrt(target_area / aspect)));
    if (cw >= 1 && ch >= 1 && cw <= img.width && ch <= img.height) {
      rect.w = cw;
      rect.h = ch;
      rect.x0 = static_cast<int>(rng.uniform_int(0, img.width - cw));
      rect.y0 = static_cast<int>(rng.uniform_int(0, img.height - ch));
      found = true;
    }
  }
  if (!found) {
    // centered crop at the midpoint scale, keeping the source aspect so the
    // retained-area fraction still meets the sampled scale
    const double mid = 0.5 * (spec.crop_scale_lo + spec.crop_scale_hi);
    rect.w = std::min(img.width, static_cast<int>(std::ceil(img.width * std::sqrt(mid))));
    rect.h = std::min(img.height, static_cast<int>(std::ceil(img.height * std::sqrt(mid))));
    rect.x0 = (img.width - rect.w) / 2;
    rect.y0 = (img.height - rect.h) / 2;
  }
  if (crop_out) *crop_out = rect;
  return resize(crop(img, rect), spec.target_w, spec.target_h);
}

}  // namespace tric
