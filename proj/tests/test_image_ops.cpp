#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <cmath>
#include <cstdint>

#include "doctest.h"
#include "tric/image_ops.hpp"

using namespace tric;

namespace {

Image random_image(int w, int h, Rng& rng) {
  Image img(w, h);
  for (auto& v : img.data) v = static_cast<uint8_t>(rng.uniform_int(0, 255));
  return img;
}

Image gradient_image(int w, int h) {
  Image img(w, h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      img.at(x, y, 0) = static_cast<uint8_t>((x * 255) / (w - 1));
      img.at(x, y, 1) = static_cast<uint8_t>((y * 255) / (h - 1));
      img.at(x, y, 2) = static_cast<uint8_t>(((x + y) * 255) / (w + h - 2));
    }
  }
  return img;
}

// Independent reference: same windowed-SSIM definition, written separately
// against the formula, used as an oracle for the implementation under test.
double reference_ssim(const Image& a, const Image& b) {
  const double c1 = 6.5025, c2 = 58.5225;
  double acc = 0.0;
  int windows = 0;
  for (int wy = 0; wy + 8 <= a.height; wy += 8) {
    for (int wx = 0; wx + 8 <= a.width; wx += 8) {
      std::vector<double> xs, ys;
      for (int y = wy; y < wy + 8; ++y) {
        for (int x = wx; x < wx + 8; ++x) {
          xs.push_back(0.299 * a.at(x, y, 0) + 0.587 * a.at(x, y, 1) + 0.114 * a.at(x, y, 2));
          ys.push_back(0.299 * b.at(x, y, 0) + 0.587 * b.at(x, y, 1) + 0.114 * b.at(x, y, 2));
        }
      }
      double mx = 0, my = 0;
      for (size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
      }
      mx /= xs.size();
      my /= ys.size();
      double vx = 0, vy = 0, cxy = 0;
      for (size_t i = 0; i < xs.size(); ++i) {
        vx += (xs[i] - mx) * (xs[i] - mx);
        vy += (ys[i] - my) * (ys[i] - my);
        cxy += (xs[i] - mx) * (ys[i] - my);
      }
      vx /= xs.size();
      vy /= ys.size();
      cxy /= xs.size();
      acc += ((2 * mx * my + c1) * (2 * cxy + c2)) / ((mx * mx + my * my + c1) * (vx + vy + c2));
      ++windows;
    }
  }
  return acc / windows;
}

uint64_t fnv1a(const std::vector<uint8_t>& data) {
  uint64_t h = 1469598103934665603ULL;
  for (uint8_t b : data) {
    h ^= b;
    h *= 1099511628211ULL;
  }
  return h;
}

// golden output hash for the seed-42 crop below, recorded from the first run
constexpr uint64_t kCropSeed42Hash = 6443068200991966507ULL;

}  // namespace

TEST_CASE("ssim identity is exactly 1") {
  Rng rng(7);
  for (int i = 0; i < 20; ++i) {
    Image img = random_image(8 + i, 8 + 2 * i, rng);
    CHECK(std::abs(ssim(img, img) - 1.0) <= 1e-9);
  }
}

TEST_CASE("ssim of constant images matches the closed form") {
  Image black = Image::filled(16, 16, {0, 0, 0});
  Image white = Image::filled(16, 16, {255, 255, 255});
  const double c1 = (0.01 * 255.0) * (0.01 * 255.0);
  const double expected = c1 / (255.0 * 255.0 + c1);
  CHECK(std::abs(ssim(black, white) - expected) < 1e-6);
  CHECK(expected == doctest::Approx(1.0e-4).epsilon(0.01));
}

TEST_CASE("ssim is symmetric") {
  Rng rng(11);
  for (int i = 0; i < 10; ++i) {
    Image a = random_image(24, 16, rng);
    Image b = random_image(24, 16, rng);
    CHECK(std::abs(ssim(a, b) - ssim(b, a)) < 1e-12);
  }
}

TEST_CASE("ssim agrees with the reference implementation and flags noise") {
  Rng rng(42);
  Image base = gradient_image(32, 32);
  Image noisy = base;
  // replace half the pixels with noise
  for (size_t p = 0; p < noisy.pixel_count(); ++p) {
    if (rng.bernoulli(0.5)) {
      noisy.data[p * 3] = static_cast<uint8_t>(rng.uniform_int(0, 255));
      noisy.data[p * 3 + 1] = static_cast<uint8_t>(rng.uniform_int(0, 255));
      noisy.data[p * 3 + 2] = static_cast<uint8_t>(rng.uniform_int(0, 255));
    }
  }
  const double got = ssim(base, noisy);
  CHECK(got < 0.95);
  CHECK(std::abs(got - reference_ssim(base, noisy)) < 1e-9);

  for (int i = 0; i < 10; ++i) {
    Image a = random_image(40, 24, rng);
    Image b = random_image(40, 24, rng);
    CHECK(std::abs(ssim(a, b) - reference_ssim(a, b)) < 1e-9);
  }
}

TEST_CASE("ssim rejects mismatched or tiny inputs") {
  Image a(16, 16), b(16, 8), tiny(7, 16);
  CHECK_THROWS_AS(ssim(a, b), Error);
  CHECK_THROWS_AS(ssim(tiny, tiny), Error);
  try {
    ssim(a, b);
  } catch (const Error& e) {
    CHECK(e.code() == Errc::size_mismatch);
  }
}

TEST_CASE("diff_ratio zero case and hand-counted example") {
  Image a = Image::filled(10, 10, {100, 100, 100});
  CHECK(diff_ratio(a, a) == 0.0);

  Image b = a;
  b.at(3, 4, 0) = 150;  // +50 on all channels
  b.at(3, 4, 1) = 150;
  b.at(3, 4, 2) = 150;
  CHECK(diff_ratio(a, b) == doctest::Approx(0.01));
  CHECK(diff_ratio(b, a) == doctest::Approx(0.01));
}

TEST_CASE("diff_ratio threshold is strict") {
  Image a = Image::filled(10, 10, {100, 100, 100});
  Image b = a;
  // averaged difference exactly 30: not counted
  b.at(0, 0, 0) = 130;
  b.at(0, 0, 1) = 130;
  b.at(0, 0, 2) = 130;
  CHECK(diff_ratio(a, b, 30.0) == 0.0);
  // one unit above
  b.at(0, 0, 0) = 131;
  b.at(0, 0, 1) = 131;
  b.at(0, 0, 2) = 131;
  CHECK(diff_ratio(a, b, 30.0) == doctest::Approx(0.01));
}

TEST_CASE("diff_ratio is monotone in the perturbed pixel set") {
  Rng rng(5);
  Image a = random_image(16, 16, rng);
  Image b = a;
  // perturb distinct pixels one by one, far beyond the threshold
  std::vector<int> positions(256);
  for (int i = 0; i < 256; ++i) positions[i] = i;
  for (size_t i = 0; i + 1 < positions.size(); ++i) {
    std::swap(positions[i],
              positions[rng.uniform_int(static_cast<int64_t>(i), 255)]);
  }
  double prev = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int x = positions[k] % 16;
    const int y = positions[k] / 16;
    for (int c = 0; c < 3; ++c) {
      const int v = b.at(x, y, c);
      b.at(x, y, c) = static_cast<uint8_t>(v < 128 ? v + 120 : v - 120);
    }
    const double r = diff_ratio(a, b);
    CHECK(r >= prev);
    prev = r;
  }
}

TEST_CASE("resize keeps constants constant") {
  Image c = Image::filled(9, 13, {42, 7, 200});
  for (auto [w, h] : {std::pair{20, 20}, {8, 8}, {31, 9}}) {
    Image r = resize(c, w, h);
    CHECK(r.width == w);
    CHECK(r.height == h);
    for (size_t p = 0; p < r.pixel_count(); ++p) {
      CHECK(r.data[p * 3] == 42);
      CHECK(r.data[p * 3 + 1] == 7);
      CHECK(r.data[p * 3 + 2] == 200);
    }
  }
}

TEST_CASE("resize 2x2 checker to 1x1 averages with round-half-up") {
  Image checker(2, 2);
  checker.at(0, 0, 0) = checker.at(0, 0, 1) = checker.at(0, 0, 2) = 0;
  checker.at(1, 1, 0) = checker.at(1, 1, 1) = checker.at(1, 1, 2) = 0;
  checker.at(1, 0, 0) = checker.at(1, 0, 1) = checker.at(1, 0, 2) = 255;
  checker.at(0, 1, 0) = checker.at(0, 1, 1) = checker.at(0, 1, 2) = 255;
  Image r = resize(checker, 1, 1);
  // bilinear at the center = 127.5, round-half-up = 128
  CHECK(r.at(0, 0, 0) == 128);
}

TEST_CASE("same-size resize is a bitwise copy") {
  Rng rng(3);
  Image img = random_image(17, 11, rng);
  CHECK(resize(img, 17, 11) == img);
}

TEST_CASE("identity augment is bitwise equal") {
  Rng rng(1);
  Image img = random_image(16, 16, rng);
  Rng aug_rng(9);
  CHECK(apply_augment(img, AugmentSpec::identity_spec(), aug_rng) == img);
}

TEST_CASE("full-frame crop with matching target is bitwise equal") {
  Rng rng(2);
  Image img = random_image(32, 32, rng);
  AugmentSpec spec = AugmentSpec::crop(1.0, 1.0, 32);
  spec.aspect_lo = spec.aspect_hi = 1.0;
  Rng aug_rng(4);
  CHECK(apply_augment(img, spec, aug_rng) == img);
}

TEST_CASE("augment is bit-deterministic under an identical seed") {
  Image img = gradient_image(64, 64);
  AugmentSpec spec = AugmentSpec::crop(0.5, 0.9, 48);
  Rng r1(42), r2(42);
  Image a = apply_augment(img, spec, r1);
  Image b = apply_augment(img, spec, r2);
  CHECK(a == b);
  CHECK(fnv1a(a.data) == kCropSeed42Hash);
}

TEST_CASE("weak crops retain at least 90 percent of the area") {
  Image img = gradient_image(64, 48);
  AugmentSpec spec = AugmentSpec::crop(0.9, 1.0, 32);
  Rng rng(13);
  for (int i = 0; i < 100; ++i) {
    CropRect rect;
    (void)apply_augment(img, spec, rng, &rect);
    CHECK(rect.w * rect.h >= 0.9 * 64 * 48);
  }
}

TEST_CASE("crop output is a subregion of the source") {
  Image img = gradient_image(48, 64);
  AugmentSpec spec = AugmentSpec::crop(0.4, 0.8, 24);
  Rng rng(21);
  for (int i = 0; i < 50; ++i) {
    CropRect rect;
    Image out = apply_augment(img, spec, rng, &rect);
    CHECK(rect.x0 >= 0);
    CHECK(rect.y0 >= 0);
    CHECK(rect.x0 + rect.w <= img.width);
    CHECK(rect.y0 + rect.h <= img.height);
    // the output is exactly the resized crop rectangle
    Image manual = resize(crop(img, rect), spec.target_w, spec.target_h);
    CHECK(out == manual);
  }
}

TEST_CASE("flip and rotate round-trip") {
  Rng rng(6);
  Image img = random_image(12, 20, rng);
  CHECK(flip_horizontal(flip_horizontal(img)) == img);
  Image r = rotate90_cw(img);
  CHECK(r.width == img.height);
  CHECK(r.height == img.width);
  CHECK(rotate90_cw(rotate90_cw(rotate90_cw(rotate90_cw(img)))) == img);
  // a marked corner lands where a clockwise turn puts it
  Image m(8, 8);
  m.at(0, 0, 0) = 255;
  Image mr = rotate90_cw(m);
  CHECK(mr.at(7, 0, 0) == 255);
}

TEST_CASE("zero-strength jitter is a no-op") {
  Rng rng(8);
  Image img = random_image(10, 10, rng);
  AugmentSpec spec;
  spec.kind = AugmentKind::color_jitter;
  spec.jitter_strength = 0.0;
  Rng aug_rng(3);
  CHECK(apply_augment(img, spec, aug_rng) == img);
}

TEST_CASE("mse of identical images is zero") {
  Rng rng(10);
  Image img = random_image(16, 16, rng);
  CHECK(mse(img, img) == 0.0);
  Image other = Image::filled(16, 16, {10, 10, 10});
  Image base = Image::filled(16, 16, {0, 0, 0});
  CHECK(mse(base, other) == doctest::Approx(100.0));
}
