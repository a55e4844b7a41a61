#pragma once

#include <algorithm>
#include <cctype>
#include <optional>
#include <string>
#include <string_view>

#include "tric/common.hpp"

namespace tric {

namespace detail {

inline size_t count_occurrences(std::string_view text, std::string_view needle) {
  size_t n = 0;
  size_t pos = text.find(needle);
  while (pos != std::string_view::npos) {
    ++n;
    pos = text.find(needle, pos + needle.size());
  }
  return n;
}

inline bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

}  // namespace detail

// 1 iff the text is exactly one <think>...</think> block followed, up to
// whitespace, by exactly one <answer>...</answer> block and nothing else.
// Leading/trailing whitespace of the whole text is ignored. Tag structure
// only; the answer content is accuracy's business.
inline int format_reward(std::string_view text) {
  const std::string_view t = detail::trim(text);
  if (detail::count_occurrences(t, "<think>") != 1) return 0;
  if (detail::count_occurrences(t, "</think>") != 1) return 0;
  if (detail::count_occurrences(t, "<answer>") != 1) return 0;
  if (detail::count_occurrences(t, "</answer>") != 1) return 0;
  if (t.substr(0, 7) != "<think>") return 0;
  const size_t think_close = t.find("</think>");
  const size_t answer_open = t.find("<answer>");
  const size_t answer_close = t.find("</answer>");
  if (answer_open < think_close || answer_close < answer_open) return 0;
  // only whitespace between </think> and <answer>
  for (size_t i = think_close + 8; i < answer_open; ++i) {
    if (!detail::is_space(t[i])) return 0;
  }
  // nothing after </answer>
  if (answer_close + 9 != t.size()) return 0;
  return 1;
}

// Inner text of the first <answer> block, whitespace-stripped and
// uppercased; present iff it is exactly [TF]{expected_len}.
inline std::optional<std::string> parse_answer(std::string_view text, size_t expected_len) {
  const size_t open = text.find("<answer>");
  if (open == std::string_view::npos) return std::nullopt;
  const size_t begin = open + 8;
  const size_t close = text.find("</answer>", begin);
  if (close == std::string_view::npos) return std::nullopt;
  std::string inner(detail::trim(text.substr(begin, close - begin)));
  std::transform(inner.begin(), inner.end(), inner.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  if (inner.size() != expected_len) return std::nullopt;
  for (char c : inner) {
    if (c != 'T' && c != 'F') return std::nullopt;
  }
  return inner;
}

// All-pairs rule: 1 only when every comparison letter is correct.
inline int accuracy_reward(const std::optional<std::string>& parsed, const std::string& expected) {
  return (parsed && *parsed == expected) ? 1 : 0;
}

inline double total_reward(int fmt, int acc, double w_format = 1.0, double w_accuracy = 1.0) {
  if (w_format < 0.0 || w_accuracy < 0.0) {
    fail(Errc::contract_violation, "reward weights must be >= 0");
  }
  return w_format * fmt + w_accuracy * acc;
}

struct RewardBreakdown {
  int format = 0;
  int accuracy = 0;
  double total = 0.0;
  std::optional<std::string> parsed_answer;
};

inline RewardBreakdown score_response(std::string_view text, const std::string& expected,
                                      double w_format = 1.0, double w_accuracy = 1.0) {
  RewardBreakdown b;
  b.format = format_reward(text);
  b.parsed_answer = parse_answer(text, expected.size());
  b.accuracy = accuracy_reward(b.parsed_answer, expected);
  b.total = total_reward(b.format, b.accuracy, w_format, w_accuracy);
  return b;
}

}  // namespace tric
