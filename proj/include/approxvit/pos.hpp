#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <nlohmann/json.hpp>

#include "approxvit/adder.hpp"

namespace approxvit::pos {

// Emission probability used for words outside the vocabulary.
inline constexpr double kOovEmission = 1e-6;

// Tagging HMM. Matrices are row-major: transition[i * T + j] = P(j | i),
// emission[t * V + w] = P(word w | tag t).
struct HmmModel {
  std::vector<std::string> tags;
  std::vector<std::string> vocab;
  std::vector<double> initial;
  std::vector<double> transition;
  std::vector<double> emission;

  std::size_t num_tags() const noexcept { return tags.size(); }
  std::size_t num_words() const noexcept { return vocab.size(); }

  // Throws InputError unless every row is a distribution (sum 1 +- 1e-9).
  void validate() const;

  // {tags, vocab, initial:{tag:p}, transition:{tag:{tag:p}},
  //  emission:{tag:{word:p}}}; absent entries are 0.
  static HmmModel from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

// Negative-log costs in 16-bit unsigned fixed point:
// cost = round(min(-ln p, clamp) * scale).
struct QuantizedHmm {
  std::vector<std::string> tags;
  std::unordered_map<std::string, std::size_t> word_index;
  double scale = 0;
  double clamp = 0;
  std::vector<std::uint32_t> initial;
  std::vector<std::uint32_t> transition;
  std::vector<std::uint32_t> emission;  // [tag * V + word]
  std::vector<std::uint32_t> oov;       // per tag, from kOovEmission
  std::size_t vocab_size = 0;

  std::size_t num_tags() const noexcept { return tags.size(); }
  std::uint32_t emission_cost(std::size_t tag,
                              std::optional<std::size_t> word) const {
    return word ? emission[tag * vocab_size + *word] : oov[tag];
  }
};

inline constexpr double kDefaultScale = 1024.0;
inline constexpr double kDefaultClamp = 32.0;

std::uint32_t quantize_cost(double p, double scale, double clamp);

// Throws ParameterError unless scale > 0 and clamp * scale < 2^16.
QuantizedHmm quantize_hmm(const HmmModel& hmm, double scale = kDefaultScale,
                          double clamp = kDefaultClamp);

using TagSequence = std::vector<std::size_t>;  // tag indices

inline constexpr unsigned kTaggerWidth = 16;

struct TagTrace {
  TagSequence tags;
  // Cost vector after each step's normalization; each has minimum 0.
  std::vector<std::vector<std::uint32_t>> costs;
  bool saturated = false;  // some addition hit 2^16 - 1
};

// Min-cost Viterbi with every addition routed through `adder` (saturating at
// 2^16 - 1). Ties go to the lowest tag index. Throws ConfigError for an adder
// that is not 16 bits wide, InputError for an empty sentence.
TagTrace tag_trace(const QuantizedHmm& qhmm,
                   std::span<const std::string> sentence,
                   const AdderModel& adder);

TagSequence tag(const QuantizedHmm& qhmm, std::span<const std::string> sentence,
                const AdderModel& adder);

// Double-precision log-domain Viterbi; ties go to the lowest tag index.
TagSequence float_viterbi(const HmmModel& hmm,
                          std::span<const std::string> sentence);

// 100 * matches / length. Throws InputError on a length mismatch.
double accuracy(const TagSequence& predicted, const TagSequence& gold);

// ---- Fixture files -------------------------------------------------------

using Sentence = std::vector<std::string>;

// One sentence per non-blank line, whitespace-separated tokens.
std::vector<Sentence> parse_sentences(std::string_view text);

// Gold tags in the same layout as the sentence file. Throws InputError for an
// unknown tag.
std::vector<TagSequence> parse_gold(std::string_view text,
                                    const std::vector<std::string>& tags);

// One message per sentence whose gold length differs from its token count.
std::vector<std::string> check_alignment(const std::vector<Sentence>& sentences,
                                         const std::vector<TagSequence>& gold);

struct TaggingScore {
  std::string adder;
  double accuracy_pct = 0;           // token level
  std::size_t tokens = 0;
  double sentence_accuracy_pct = 0;  // sentences tagged entirely right
};

TaggingScore score_tagger(const QuantizedHmm& qhmm,
                          const std::vector<Sentence>& sentences,
                          const std::vector<TagSequence>& gold,
                          const AdderModel& adder);

TaggingScore score_float_oracle(const HmmModel& hmm,
                                const std::vector<Sentence>& sentences,
                                const std::vector<TagSequence>& gold);

inline constexpr std::string_view kFloatOracleName = "float_oracle";

// CSV with header adder,accuracy_pct,tokens.
std::string scores_csv(const std::vector<TaggingScore>& scores);

}  // namespace approxvit::pos
