#pragma once

#include <cstdint>
#include <initializer_list>
#include <stdexcept>
#include <string>

namespace tric {

enum class Errc {
  size_mismatch,
  empty_source,
  synthesis_failure,
  invalid_sample,
  unknown_template,
  invalid_order,
  numeric_error,
  contract_violation,
  data_error,
};

inline const char* errc_name(Errc c) {
  switch (c) {
    case Errc::size_mismatch: return "SizeMismatch";
    case Errc::empty_source: return "EmptySource";
    case Errc::synthesis_failure: return "SynthesisFailure";
    case Errc::invalid_sample: return "InvalidSample";
    case Errc::unknown_template: return "UnknownTemplate";
    case Errc::invalid_order: return "InvalidOrder";
    case Errc::numeric_error: return "NumericError";
    case Errc::contract_violation: return "ContractViolation";
    case Errc::data_error: return "DataError";
  }
  return "Unknown";
}

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what), code_(code) {}
  Errc code() const { return code_; }

 private:
  Errc code_;
};

[[noreturn]] inline void fail(Errc code, const std::string& what) { throw Error(code, what); }

// splitmix64; fully specified so streams are bit-identical across platforms.
inline uint64_t splitmix64(uint64_t& state) {
  uint64_t z = (state += 0x9E3779B97F4A7C15ULL);
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

// Counter-derived random stream. Independent sub-streams are obtained with
// derive(), keyed by e.g. (step, sample, rollout) counters, so parallel
// scheduling cannot change results.
class Rng {
 public:
  explicit Rng(uint64_t seed) : state_(seed) {
    // burn one step so seed 0 and seed-from-hash behave alike
    (void)splitmix64(state_);
  }

  uint64_t next_u64() { return splitmix64(state_); }

  // [0, 1), 53-bit resolution
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // inclusive range
  int64_t uniform_int(int64_t lo, int64_t hi) {
    const uint64_t span = static_cast<uint64_t>(hi - lo) + 1;
    return lo + static_cast<int64_t>(next_u64() % span);
  }

  bool bernoulli(double p) { return uniform() < p; }

  Rng derive(std::initializer_list<uint64_t> tags) const {
    uint64_t s = state_;
    for (uint64_t t : tags) {
      s ^= t + 0x9E3779B97F4A7C15ULL + (s << 6) + (s >> 2);
      (void)splitmix64(s);
      s = splitmix64(s);
    }
    return Rng(s);
  }

 private:
  uint64_t state_;
};

}  // namespace tric
