#pragma once

#include <algorithm>
#include <map>
#include <string>
#include <vector>

#include "tric/common.hpp"

namespace tric {

enum class Direction { forward, reverse };

inline const char* direction_name(Direction d) {
  return d == Direction::forward ? "forward" : "reverse";
}

inline Direction direction_from_name(const std::string& s) {
  if (s == "forward") return Direction::forward;
  if (s == "reverse") return Direction::reverse;
  fail(Errc::data_error, "unknown direction '" + s + "'");
}

// 1-based slot indices of one queried comparison.
struct CmpPair {
  int a = 0;
  int b = 0;
  bool operator==(const CmpPair&) const = default;
};

inline std::vector<CmpPair> canonical_order(int image_count) {
  if (image_count == 2) return {{1, 2}};
  if (image_count == 3) return {{1, 2}, {2, 3}, {1, 3}};
  fail(Errc::contract_violation, "image_count must be 2 or 3");
}

// Ground truth letters are defined over the canonical order; a rendered
// question may permute the comparisons and/or ask the reverse question
// ("are they different?"), whose answer is the letter-wise complement.
inline std::string expected_answer(const std::string& gt_letters,
                                   const std::vector<CmpPair>& comparison_order,
                                   Direction direction) {
  const int image_count = gt_letters.size() == 1 ? 2 : 3;
  const std::vector<CmpPair> canon = canonical_order(image_count);
  if (comparison_order.size() != canon.size()) {
    fail(Errc::invalid_order, "comparison_order must cover each pair exactly once");
  }
  std::string out;
  std::vector<bool> used(canon.size(), false);
  for (const CmpPair& p : comparison_order) {
    const CmpPair norm{std::min(p.a, p.b), std::max(p.a, p.b)};
    size_t idx = canon.size();
    for (size_t i = 0; i < canon.size(); ++i) {
      if (canon[i] == norm) {
        idx = i;
        break;
      }
    }
    if (idx == canon.size() || used[idx]) {
      fail(Errc::invalid_order, "comparison_order must cover each pair exactly once");
    }
    used[idx] = true;
    out.push_back(gt_letters[idx]);
  }
  if (direction == Direction::reverse) {
    for (char& c : out) c = (c == 'T') ? 'F' : 'T';
  }
  return out;
}

// ---------------------------------------------------------------------------
// template bank
// ---------------------------------------------------------------------------

// %A%/%B% expand to slot numbers, %REL% to the direction word, %EX% to an
// example answer string. Every outro states the T/F letter convention and the
// <answer> tag requirement; the reasoning preamble supplies the <think> tag.
struct PromptTemplate {
  std::string ask;  // first comparison, no trailing '?'
  std::string more_lead;
  std::string rel_forward;
  std::string rel_reverse;
  std::string outro;
};

inline const std::string kReasoningPreamble =
    "First output the thinking process in <think> </think> and give the final answer in "
    "<answer> </answer> tags.";

class TemplateBank {
 public:
  static TemplateBank standard20();
  static TemplateBank extended50();

  const PromptTemplate& at(int id) const {
    if (id < 0 || static_cast<size_t>(id) >= templates_.size()) {
      fail(Errc::unknown_template, "template id " + std::to_string(id));
    }
    return templates_[id];
  }
  int size() const { return static_cast<int>(templates_.size()); }

 private:
  std::vector<PromptTemplate> templates_;
};

namespace detail {

inline std::string replace_all(std::string s, const std::string& from, const std::string& to) {
  size_t pos = 0;
  while ((pos = s.find(from, pos)) != std::string::npos) {
    s.replace(pos, from.size(), to);
    pos += to.size();
  }
  return s;
}

inline std::vector<PromptTemplate> base_templates() {
  return {
      // the canonical phrasing
      {"Regardless of the augmentation, are image%A% and image%B% %REL%",
       "How about ", "the same", "different",
       "Only return T(True) or F(False) in <answer> </answer>, for example <think> </think> "
       "<answer>%EX%</answer>."},
      {"Ignoring the cropping and resizing, do image%A% and image%B% show %REL% content",
       "What about ", "the same", "different",
       "Reply with one letter per comparison, T for true or F for false, inside "
       "<answer> </answer>, e.g. <answer>%EX%</answer>."},
      {"Setting aside any augmentation, is image%A% %REL% image%B%",
       "Then consider ", "the same picture as", "a different picture from",
       "Give your verdicts as a string of T/F letters in <answer> </answer>, such as "
       "<answer>%EX%</answer>."},
      {"Even though the views are cropped differently, do image%A% and image%B% come from %REL%",
       "Also judge ", "the same source image", "different source images",
       "Answer using only the letters T (true) and F (false) wrapped in <answer> </answer>, "
       "for instance <answer>%EX%</answer>."},
      {"Looking past the random crops, would you say image%A% and image%B% are %REL%",
       "Likewise, what about ", "the same", "different",
       "State T or F for each question, concatenated inside <answer> </answer> like "
       "<answer>%EX%</answer>."},
      {"Treat the augmentations as irrelevant: are image%A% and image%B% %REL%",
       "Similarly, ", "identical in content", "different in content",
       "Write the letters T/F only, one per comparison, between <answer> and </answer>, "
       "e.g. <answer>%EX%</answer>."},
      {"Disregarding scale and framing changes, do image%A% and image%B% depict %REL%",
       "Now compare ", "the same scene", "different scenes",
       "Respond with T (true) / F (false) letters in order inside <answer> </answer>, "
       "for example <answer>%EX%</answer>."},
      {"If you ignore how the pictures were cut out, are image%A% and image%B% %REL%",
       "And then ", "the same underlying image", "different underlying images",
       "Put your answers as consecutive T or F letters in <answer> </answer>, like "
       "<answer>%EX%</answer>."},
      {"Beyond the augmentation differences, is the content of image%A% %REL% image%B%",
       "Do the same for ", "the same as", "different from",
       "Your final answer must be T/F letters only inside <answer> </answer>, e.g. "
       "<answer>%EX%</answer>."},
      {"Crops aside, do image%A% and image%B% originate from %REL%",
       "Next, ", "one identical photo", "two different photos",
       "Return each verdict as the letter T or F, joined together in <answer> </answer>, "
       "for instance <answer>%EX%</answer>."},
      {"The framing may differ, but are image%A% and image%B% %REL%",
       "After that, decide for ", "the same image underneath", "different images underneath",
       "Answer T for true and F for false, giving all letters in <answer> </answer>, e.g. "
       "<answer>%EX%</answer>."},
      {"Allowing for the augmentation, does image%A% show %REL% image%B%",
       "Consider as well ", "the same content as", "different content than",
       "Emit the letters T/F for the comparisons in order within <answer> </answer>, such as "
       "<answer>%EX%</answer>."},
      {"Once you discount the random cropping, are image%A% and image%B% %REL%",
       "Apply the same judgement to ", "copies of the same image", "distinct images",
       "Conclude with T or F per comparison, all inside <answer> </answer>, for example "
       "<answer>%EX%</answer>."},
      {"Viewing through the augmentations, are image%A% and image%B% %REL%",
       "Extend this to ", "the same shot", "different shots",
       "Provide only T/F letters in <answer> </answer> as your reply, e.g. "
       "<answer>%EX%</answer>."},
      {"Not counting the crop and resize, is image%A% %REL% image%B%",
       "Evaluate too ", "really the same as", "actually different from",
       "Use exactly one letter, T (true) or F (false), per comparison inside "
       "<answer> </answer>, like <answer>%EX%</answer>."},
      {"Suppose the augmentation never happened: would image%A% and image%B% be %REL%",
       "Ask yourself the same about ", "the same", "different",
       "List your T/F decisions in order inside <answer> </answer>, for instance "
       "<answer>%EX%</answer>."},
      {"Despite different crops, do image%A% and image%B% share %REL%",
       "Check also ", "the same original", "different originals",
       "Reply strictly with the letters T and F in <answer> </answer>, e.g. "
       "<answer>%EX%</answer>."},
      {"Compensating for the augmentation, are image%A% and image%B% %REL%",
       "Carry on with ", "one and the same picture", "two separate pictures",
       "Answer each with T or F, writing them back to back in <answer> </answer>, such as "
       "<answer>%EX%</answer>."},
      {"Judging content only, not framing: are image%A% and image%B% %REL%",
       "Repeat for ", "the same", "different",
       "Final output is the T/F letter sequence inside <answer> </answer>, for example "
       "<answer>%EX%</answer>."},
      {"When the cropping is factored out, do image%A% and image%B% contain %REL%",
       "Weigh up as well ", "the same visual content", "different visual content",
       "Give your answer as bare T/F letters inside <answer> </answer>, e.g. "
       "<answer>%EX%</answer>."},
  };
}

inline std::vector<PromptTemplate> extra_templates() {
  return {
      {"Is the underlying photo of image%A% %REL% that of image%B%, augmentation aside",
       "And for ", "the same as", "different from",
       "Answer in <answer> </answer> using T or F per comparison, e.g. <answer>%EX%</answer>."},
      {"Mentally undo the crops: are image%A% and image%B% %REL%",
       "Proceed to ", "the same frame", "different frames",
       "Only the letters T/F belong in <answer> </answer>, for example <answer>%EX%</answer>."},
      {"Were image%A% and image%B% taken from %REL%, ignoring the augmentation",
       "Decide likewise for ", "one source", "separate sources",
       "State T (true) or F (false) for every comparison inside <answer> </answer>, like "
       "<answer>%EX%</answer>."},
      {"Think about content, not the crop: do image%A% and image%B% match as %REL%",
       "Then rate ", "the same image", "different images",
       "Answer with a string over the alphabet {T, F} in <answer> </answer>, e.g. "
       "<answer>%EX%</answer>."},
      {"Filtering out the augmentation noise, are image%A% and image%B% %REL%",
       "Move on to ", "the same", "different",
       "Wrap your T/F letters in <answer> </answer>, for instance <answer>%EX%</answer>."},
      {"If the random resize is ignored, does image%A% display %REL% image%B%",
       "Examine next ", "the same material as", "different material than",
       "Write T for yes and F for no, all letters inside <answer> </answer>, e.g. "
       "<answer>%EX%</answer>."},
      {"Are image%A% and image%B% %REL% once augmentation is accounted for",
       "Answer equally for ", "the same photograph", "different photographs",
       "Output the verdict letters T/F in <answer> </answer> only, such as "
       "<answer>%EX%</answer>."},
      {"Strip away the crop-and-resize: do image%A% and image%B% remain %REL%",
       "Do likewise with ", "the same", "different",
       "T or F per question, concatenated in <answer> </answer>, for example "
       "<answer>%EX%</answer>."},
      {"Content-wise, putting augmentation apart, are image%A% and image%B% %REL%",
       "Also resolve ", "equal", "unequal",
       "Answer letters only (T/F) in <answer> </answer>, e.g. <answer>%EX%</answer>."},
      {"Does image%A% capture %REL% image%B%, with augmentation ignored",
       "Follow with ", "the same content as", "other content than",
       "Place every T/F letter in <answer> </answer>, like <answer>%EX%</answer>."},
      {"The crops differ, sure, but are image%A% and image%B% %REL%",
       "Same question for ", "the same picture", "different pictures",
       "Respond with the letter sequence (T/F) in <answer> </answer>, for instance "
       "<answer>%EX%</answer>."},
      {"Seen past their augmentations, are image%A% and image%B% %REL%",
       "Continue with ", "duplicates", "non-duplicates",
       "Answer as T/F letters inside <answer> </answer>, e.g. <answer>%EX%</answer>."},
      {"Would image%A% and image%B% be %REL% before the augmentation was applied",
       "Give a verdict too on ", "the same", "different",
       "Reply inside <answer> </answer> with T or F per comparison, such as "
       "<answer>%EX%</answer>."},
      {"Ignore presentation: do image%A% and image%B% reduce to %REL%",
       "Then weigh ", "the same original image", "different original images",
       "Return T/F letters only within <answer> </answer>, for example <answer>%EX%</answer>."},
      {"Accounting for cropping artifacts, are image%A% and image%B% %REL%",
       "Assess next ", "the same", "different",
       "Answers are T (true) / F (false) letters in <answer> </answer>, e.g. "
       "<answer>%EX%</answer>."},
      {"At the content level, is image%A% %REL% image%B% despite the augmentation",
       "Judge also ", "interchangeable with", "distinguishable from",
       "Give one T or F per comparison inside <answer> </answer>, like <answer>%EX%</answer>."},
      {"Do image%A% and image%B% trace back to %REL%, independent of cropping",
       "Trace as well ", "a single image", "two distinct images",
       "Compose your answer from T/F letters in <answer> </answer>, for instance "
       "<answer>%EX%</answer>."},
      {"Excusing the augmentation, are image%A% and image%B% %REL%",
       "Rule on ", "the very same image", "genuinely different images",
       "Answer with T and F letters only, inside <answer> </answer>, e.g. "
       "<answer>%EX%</answer>."},
      {"Post-augmentation appearances aside, are image%A% and image%B% %REL%",
       "Settle also ", "the same", "different",
       "Use T/F letters in <answer> </answer> as the entire answer, such as "
       "<answer>%EX%</answer>."},
      {"Scale and crop notwithstanding, do image%A% and image%B% present %REL%",
       "Present your view on ", "the same content", "differing content",
       "Answer by letters T or F within <answer> </answer>, for example <answer>%EX%</answer>."},
      {"From the content alone, are image%A% and image%B% %REL%",
       "From the content alone, also ", "the same", "different",
       "Write the decision letters T/F into <answer> </answer>, e.g. <answer>%EX%</answer>."},
      {"Can image%A% and image%B% be explained by %REL%, given augmentation",
       "Explain likewise ", "one shared source", "two separate sources",
       "Summarize with T/F letters inside <answer> </answer>, like <answer>%EX%</answer>."},
      {"Overlooking the random cropping, are image%A% and image%B% %REL%",
       "Overlook it too for ", "the same", "different",
       "Just the letters T or F go in <answer> </answer>, for instance <answer>%EX%</answer>."},
      {"Is what image%A% shows %REL% what image%B% shows, modulo augmentation",
       "Compare further ", "the same as", "different from",
       "Answer compactly with T/F letters in <answer> </answer>, e.g. <answer>%EX%</answer>."},
      {"Crop effects excluded, do image%A% and image%B% constitute %REL%",
       "Constitute a view on ", "the same image", "different images",
       "Deliver T (true) or F (false) per item inside <answer> </answer>, such as "
       "<answer>%EX%</answer>."},
      {"After normalizing for augmentation, are image%A% and image%B% %REL%",
       "Normalize and judge ", "the same", "different",
       "The answer field <answer> </answer> takes only T/F letters, for example "
       "<answer>%EX%</answer>."},
      {"Do image%A% and image%B% agree as %REL%, discounting the crops",
       "Check agreement for ", "the same picture", "different pictures",
       "Mark each with T or F inside <answer> </answer>, e.g. <answer>%EX%</answer>."},
      {"Given augmentation invariance, are image%A% and image%B% %REL%",
       "Apply invariance to ", "the same", "different",
       "Answer string = T/F letters in <answer> </answer>, like <answer>%EX%</answer>."},
      {"Was %REL% used to produce image%A% and image%B%, crop aside",
       "Determine too for ", "the same base image", "a different base image",
       "Report your T/F letters within <answer> </answer>, for instance <answer>%EX%</answer>."},
      {"In essence, are image%A% and image%B% %REL% under the augmentation",
       "In essence, also ", "the same", "different",
       "Answer only with letters T and F in <answer> </answer>, e.g. <answer>%EX%</answer>."},
  };
}

}  // namespace detail

inline TemplateBank TemplateBank::standard20() {
  TemplateBank b;
  b.templates_ = detail::base_templates();
  return b;
}

inline TemplateBank TemplateBank::extended50() {
  TemplateBank b;
  b.templates_ = detail::base_templates();
  auto extra = detail::extra_templates();
  b.templates_.insert(b.templates_.end(), extra.begin(), extra.end());
  return b;
}

// ---------------------------------------------------------------------------
// rendering
// ---------------------------------------------------------------------------

struct SampleMeta {
  std::string sample_id;
  int image_count = 3;       // 2 or 3
  std::string gt_letters;    // canonical order
};

struct PromptInstance {
  std::string sample_id;
  std::string view;  // "weak" or "strong"
  int template_id = 0;
  Direction direction = Direction::forward;
  std::vector<CmpPair> comparison_order;
  std::string question_text;
  int image_count = 3;
  std::string expected_answer;
};

namespace detail {

// the in-text example must never equal the expected answer
inline std::string example_answer(const std::string& expected) {
  const std::vector<std::string> candidates =
      expected.size() == 1 ? std::vector<std::string>{"T", "F"}
                           : std::vector<std::string>{"TFT", "TTF", "FTF"};
  for (const auto& c : candidates) {
    if (c != expected) return c;
  }
  return candidates.front();
}

}  // namespace detail

inline PromptInstance render_prompt(const SampleMeta& meta, const std::string& view_tag,
                                    int template_id, Direction direction,
                                    const std::vector<CmpPair>& comparison_order,
                                    const TemplateBank& bank) {
  const PromptTemplate& tpl = bank.at(template_id);
  PromptInstance out;
  out.sample_id = meta.sample_id;
  out.view = view_tag;
  out.template_id = template_id;
  out.direction = direction;
  out.comparison_order = comparison_order;
  out.image_count = meta.image_count;
  out.expected_answer = expected_answer(meta.gt_letters, comparison_order, direction);

  const std::string& rel =
      direction == Direction::forward ? tpl.rel_forward : tpl.rel_reverse;
  std::string q = detail::replace_all(tpl.ask, "%A%", std::to_string(comparison_order[0].a));
  q = detail::replace_all(q, "%B%", std::to_string(comparison_order[0].b));
  q = detail::replace_all(q, "%REL%", rel);
  q += "?";
  if (comparison_order.size() > 1) {
    q += " " + tpl.more_lead;
    for (size_t i = 1; i < comparison_order.size(); ++i) {
      if (i > 1) q += ", ";
      q += "image" + std::to_string(comparison_order[i].a) + " and image" +
           std::to_string(comparison_order[i].b);
    }
    q += "?";
  }
  q += " " + detail::replace_all(tpl.outro, "%EX%",
                                 detail::example_answer(out.expected_answer));
  out.question_text = kReasoningPreamble + "\n" + q;
  return out;
}

// ---------------------------------------------------------------------------
// answer-type balancing
// ---------------------------------------------------------------------------

struct PromptAssignment {
  int template_id = 0;
  Direction direction = Direction::forward;
  std::vector<CmpPair> order;
};

// Every permutation of the canonical comparisons; candidate question orders.
inline std::vector<std::vector<CmpPair>> all_comparison_orders(int image_count) {
  std::vector<CmpPair> canon = canonical_order(image_count);
  std::vector<int> idx(canon.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  std::vector<std::vector<CmpPair>> out;
  do {
    std::vector<CmpPair> order;
    for (int i : idx) order.push_back(canon[i]);
    out.push_back(std::move(order));
  } while (std::next_permutation(idx.begin(), idx.end()));
  return out;
}

// Greedy histogram balancing over reachable answer classes: each sample is
// assigned the (direction, order) reaching the currently rarest class, plus
// a random template. Seed-deterministic; triplets and pairs are balanced
// over their own class sets.
inline std::vector<PromptAssignment> balance_assignments(const std::vector<SampleMeta>& samples,
                                                         const TemplateBank& bank, Rng& rng,
                                                         std::vector<std::string>* warnings) {
  size_t n_triplets = 0, n_pairs = 0;
  for (const auto& s : samples) (s.image_count == 3 ? n_triplets : n_pairs)++;
  if (warnings) {
    if (n_triplets > 0 && n_triplets < 48) {
      warnings->push_back("only " + std::to_string(n_triplets) +
                          " triplets; best-effort balance over 6 classes");
    }
    if (n_pairs > 0 && n_pairs < 16) {
      warnings->push_back("only " + std::to_string(n_pairs) +
                          " pair samples; best-effort balance over 2 classes");
    }
  }

  std::map<std::string, int> counts_triplet, counts_pair;
  std::vector<PromptAssignment> out;
  out.reserve(samples.size());
  for (const SampleMeta& meta : samples) {
    auto& counts = meta.image_count == 3 ? counts_triplet : counts_pair;
    struct Option {
      std::string cls;
      Direction dir;
      const std::vector<CmpPair>* order;
    };
    static const auto orders3 = all_comparison_orders(3);
    static const auto orders2 = all_comparison_orders(2);
    const auto& orders = meta.image_count == 3 ? orders3 : orders2;

    std::vector<Option> options;
    for (Direction dir : {Direction::forward, Direction::reverse}) {
      for (const auto& order : orders) {
        options.push_back({expected_answer(meta.gt_letters, order, dir), dir, &order});
      }
    }
    int best_count = counts[options.front().cls];
    for (const auto& o : options) best_count = std::min(best_count, counts[o.cls]);
    std::vector<const Option*> best;
    for (const auto& o : options) {
      if (counts[o.cls] == best_count) best.push_back(&o);
    }
    const Option& chosen = *best[rng.uniform_int(0, static_cast<int64_t>(best.size()) - 1)];
    counts[chosen.cls]++;
    out.push_back({static_cast<int>(rng.uniform_int(0, bank.size() - 1)), chosen.dir,
                   *chosen.order});
  }
  return out;
}

inline std::vector<PromptInstance> balance_stream(const std::vector<SampleMeta>& samples,
                                                  const TemplateBank& bank,
                                                  const std::string& view_tag, Rng& rng,
                                                  std::vector<std::string>* warnings = nullptr) {
  const auto assignments = balance_assignments(samples, bank, rng, warnings);
  std::vector<PromptInstance> out;
  out.reserve(samples.size());
  for (size_t i = 0; i < samples.size(); ++i) {
    out.push_back(render_prompt(samples[i], view_tag, assignments[i].template_id,
                                assignments[i].direction, assignments[i].order, bank));
  }
  return out;
}

}  // namespace tric
