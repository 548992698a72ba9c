#include "approxvit/pos.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "approxvit/errors.hpp"
#include "approxvit/format.hpp"

namespace approxvit::pos {
namespace {

void check_row(std::span<const double> row, const std::string& what) {
  double sum = 0;
  for (double p : row) {
    if (!(p >= 0) || !std::isfinite(p))
      throw InputError(what + ": probabilities must be finite and >= 0");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw InputError(what + ": row sums to " + format_double(sum));
}

std::size_t index_of(const std::vector<std::string>& names,
                     const std::string& name, const std::string& what) {
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw InputError("unknown " + what + " '" + name + "'");
  return static_cast<std::size_t>(it - names.begin());
}

}  // namespace

void HmmModel::validate() const {
  const std::size_t T = tags.size();
  const std::size_t V = vocab.size();
  if (T == 0) throw InputError("HMM has no tags");
  if (initial.size() != T || transition.size() != T * T ||
      emission.size() != T * V)
    throw InputError("HMM matrix dimensions do not match tags/vocab");
  check_row(initial, "initial");
  for (std::size_t i = 0; i < T; ++i) {
    check_row(std::span(transition).subspan(i * T, T), "transition[" + tags[i] + "]");
    check_row(std::span(emission).subspan(i * V, V), "emission[" + tags[i] + "]");
  }
}

HmmModel HmmModel::from_json(const nlohmann::json& j) {
  HmmModel h;
  try {
    h.tags = j.at("tags").get<std::vector<std::string>>();
    h.vocab = j.at("vocab").get<std::vector<std::string>>();
    const std::size_t T = h.tags.size();
    const std::size_t V = h.vocab.size();
    h.initial.assign(T, 0.0);
    h.transition.assign(T * T, 0.0);
    h.emission.assign(T * V, 0.0);
    for (const auto& [tag, p] : j.at("initial").items())
      h.initial[index_of(h.tags, tag, "tag")] = p.get<double>();
    for (const auto& [from, row] : j.at("transition").items()) {
      const std::size_t i = index_of(h.tags, from, "tag");
      for (const auto& [to, p] : row.items())
        h.transition[i * T + index_of(h.tags, to, "tag")] = p.get<double>();
    }
    for (const auto& [tag, row] : j.at("emission").items()) {
      const std::size_t t = index_of(h.tags, tag, "tag");
      for (const auto& [word, p] : row.items())
        h.emission[t * V + index_of(h.vocab, word, "word")] = p.get<double>();
    }
  } catch (const nlohmann::json::exception& e) {
    throw InputError(std::string("malformed HMM model: ") + e.what());
  }
  h.validate();
  return h;
}

nlohmann::json HmmModel::to_json() const {
  const std::size_t T = tags.size();
  const std::size_t V = vocab.size();
  nlohmann::json j{{"tags", tags}, {"vocab", vocab}};
  for (std::size_t i = 0; i < T; ++i) {
    j["initial"][tags[i]] = initial[i];
    for (std::size_t k = 0; k < T; ++k)
      j["transition"][tags[i]][tags[k]] = transition[i * T + k];
    for (std::size_t w = 0; w < V; ++w)
      j["emission"][tags[i]][vocab[w]] = emission[i * V + w];
  }
  return j;
}

std::uint32_t quantize_cost(double p, double scale, double clamp) {
  const double neg_log = p > 0 ? -std::log(p) : clamp;
  const double c = std::max(0.0, std::min(neg_log, clamp));
  return static_cast<std::uint32_t>(std::llround(c * scale));
}

QuantizedHmm quantize_hmm(const HmmModel& hmm, double scale, double clamp) {
  if (!(scale > 0) || !(clamp > 0) || !std::isfinite(scale * clamp) ||
      std::llround(clamp * scale) >= (1 << kTaggerWidth))
    throw ParameterError("scale and clamp must satisfy clamp * scale < 2^16");
  hmm.validate();

  QuantizedHmm q;
  q.tags = hmm.tags;
  q.scale = scale;
  q.clamp = clamp;
  q.vocab_size = hmm.vocab.size();
  for (std::size_t w = 0; w < hmm.vocab.size(); ++w) q.word_index[hmm.vocab[w]] = w;
  auto quantize_all = [&](const std::vector<double>& ps) {
    std::vector<std::uint32_t> out;
    out.reserve(ps.size());
    for (double p : ps) out.push_back(quantize_cost(p, scale, clamp));
    return out;
  };
  q.initial = quantize_all(hmm.initial);
  q.transition = quantize_all(hmm.transition);
  q.emission = quantize_all(hmm.emission);
  q.oov.assign(hmm.num_tags(), quantize_cost(kOovEmission, scale, clamp));
  return q;
}

TagTrace tag_trace(const QuantizedHmm& qhmm,
                   std::span<const std::string> sentence,
                   const AdderModel& adder) {
  if (adder.width() != kTaggerWidth)
    throw ConfigError("tagger needs a 16-bit adder; '" + adder.name() +
                      "' is " + std::to_string(adder.width()) + " bits");
  if (sentence.empty()) throw InputError("sentence is empty");

  constexpr std::uint32_t kSat = (1u << kTaggerWidth) - 1;
  TagTrace trace;
  auto sat_add = [&](std::uint32_t a, std::uint32_t b) {
    const std::uint64_t s = adder.evaluate_unchecked(a, b);
    if (s >= kSat) {
      trace.saturated = true;
      return kSat;
    }
    return static_cast<std::uint32_t>(s);
  };
  auto word_of = [&](const std::string& w) -> std::optional<std::size_t> {
    const auto it = qhmm.word_index.find(w);
    if (it == qhmm.word_index.end()) return std::nullopt;
    return it->second;
  };
  auto normalize = [](std::vector<std::uint32_t>& v) {
    const std::uint32_t lo = *std::min_element(v.begin(), v.end());
    for (auto& x : v) x -= lo;
  };

  const std::size_t T = qhmm.num_tags();
  std::vector<std::uint32_t> delta(T);
  const auto w0 = word_of(sentence[0]);
  for (std::size_t t = 0; t < T; ++t)
    delta[t] = sat_add(qhmm.initial[t], qhmm.emission_cost(t, w0));
  normalize(delta);
  trace.costs.push_back(delta);

  std::vector<std::vector<std::size_t>> back(sentence.size(),
                                             std::vector<std::size_t>(T, 0));
  std::vector<std::uint32_t> next(T);
  for (std::size_t k = 1; k < sentence.size(); ++k) {
    const auto wk = word_of(sentence[k]);
    for (std::size_t t = 0; t < T; ++t) {
      const std::uint32_t emit = qhmm.emission_cost(t, wk);
      std::uint32_t best = std::numeric_limits<std::uint32_t>::max();
      std::size_t arg = 0;
      for (std::size_t p = 0; p < T; ++p) {
        const std::uint32_t c =
            sat_add(sat_add(delta[p], qhmm.transition[p * T + t]), emit);
        if (c < best) {
          best = c;
          arg = p;
        }
      }
      next[t] = best;
      back[k][t] = arg;
    }
    delta.swap(next);
    normalize(delta);
    trace.costs.push_back(delta);
  }

  trace.tags.resize(sentence.size());
  std::size_t t = static_cast<std::size_t>(
      std::min_element(delta.begin(), delta.end()) - delta.begin());
  for (std::size_t k = sentence.size(); k-- > 0;) {
    trace.tags[k] = t;
    t = back[k][t];
  }
  return trace;
}

TagSequence tag(const QuantizedHmm& qhmm, std::span<const std::string> sentence,
                const AdderModel& adder) {
  return tag_trace(qhmm, sentence, adder).tags;
}

TagSequence float_viterbi(const HmmModel& hmm,
                          std::span<const std::string> sentence) {
  if (sentence.empty()) throw InputError("sentence is empty");
  const std::size_t T = hmm.num_tags();
  const std::size_t V = hmm.num_words();
  auto ln = [](double p) {
    return p > 0 ? std::log(p) : -std::numeric_limits<double>::infinity();
  };
  auto emit = [&](std::size_t t, const std::string& w) {
    const auto it = std::find(hmm.vocab.begin(), hmm.vocab.end(), w);
    if (it == hmm.vocab.end()) return ln(kOovEmission);
    return ln(hmm.emission[t * V + static_cast<std::size_t>(it - hmm.vocab.begin())]);
  };

  std::vector<double> score(T);
  for (std::size_t t = 0; t < T; ++t) score[t] = ln(hmm.initial[t]) + emit(t, sentence[0]);
  std::vector<std::vector<std::size_t>> back(sentence.size(),
                                             std::vector<std::size_t>(T, 0));
  std::vector<double> next(T);
  for (std::size_t k = 1; k < sentence.size(); ++k) {
    for (std::size_t t = 0; t < T; ++t) {
      double best = -std::numeric_limits<double>::infinity();
      std::size_t arg = 0;
      for (std::size_t p = 0; p < T; ++p) {
        const double s = score[p] + ln(hmm.transition[p * T + t]);
        if (s > best) {
          best = s;
          arg = p;
        }
      }
      next[t] = best + emit(t, sentence[k]);
      back[k][t] = arg;
    }
    score.swap(next);
  }
  TagSequence tags(sentence.size());
  std::size_t t = static_cast<std::size_t>(
      std::max_element(score.begin(), score.end()) - score.begin());
  for (std::size_t k = sentence.size(); k-- > 0;) {
    tags[k] = t;
    t = back[k][t];
  }
  return tags;
}

double accuracy(const TagSequence& predicted, const TagSequence& gold) {
  if (predicted.size() != gold.size())
    throw InputError("tag sequence lengths differ: " +
                     std::to_string(predicted.size()) + " vs " +
                     std::to_string(gold.size()));
  if (gold.empty()) return 100.0;
  std::size_t hits = 0;
  for (std::size_t i = 0; i < gold.size(); ++i) hits += predicted[i] == gold[i];
  return 100.0 * static_cast<double>(hits) / static_cast<double>(gold.size());
}

std::vector<Sentence> parse_sentences(std::string_view text) {
  std::vector<Sentence> out;
  std::istringstream in{std::string(text)};
  for (std::string line; std::getline(in, line);) {
    std::istringstream words(line);
    Sentence s;
    for (std::string w; words >> w;) s.push_back(w);
    if (!s.empty()) out.push_back(std::move(s));
  }
  return out;
}

std::vector<TagSequence> parse_gold(std::string_view text,
                                    const std::vector<std::string>& tags) {
  std::vector<TagSequence> out;
  for (const Sentence& line : parse_sentences(text)) {
    TagSequence seq;
    for (const std::string& t : line) seq.push_back(index_of(tags, t, "tag"));
    out.push_back(std::move(seq));
  }
  return out;
}

std::vector<std::string> check_alignment(const std::vector<Sentence>& sentences,
                                         const std::vector<TagSequence>& gold) {
  std::vector<std::string> errs;
  if (sentences.size() != gold.size())
    errs.push_back(std::to_string(sentences.size()) + " sentences but " +
                   std::to_string(gold.size()) + " gold lines");
  for (std::size_t i = 0; i < std::min(sentences.size(), gold.size()); ++i) {
    if (sentences[i].size() != gold[i].size())
      errs.push_back("sentence " + std::to_string(i + 1) + ": " +
                     std::to_string(sentences[i].size()) + " tokens, " +
                     std::to_string(gold[i].size()) + " gold tags");
  }
  return errs;
}

namespace {

template <typename Tagger>
TaggingScore score_with(std::string name, const std::vector<Sentence>& sentences,
                        const std::vector<TagSequence>& gold, Tagger tagger) {
  const auto errs = check_alignment(sentences, gold);
  if (!errs.empty()) throw InputError(errs.front());
  TaggingScore s;
  s.adder = std::move(name);
  std::size_t hits = 0;
  std::size_t perfect = 0;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    const TagSequence pred = tagger(sentences[i]);
    std::size_t h = 0;
    for (std::size_t k = 0; k < pred.size(); ++k) h += pred[k] == gold[i][k];
    hits += h;
    perfect += h == pred.size();
    s.tokens += pred.size();
  }
  s.accuracy_pct =
      s.tokens ? 100.0 * static_cast<double>(hits) / static_cast<double>(s.tokens) : 0;
  s.sentence_accuracy_pct =
      sentences.empty() ? 0
                        : 100.0 * static_cast<double>(perfect) /
                              static_cast<double>(sentences.size());
  return s;
}

}  // namespace

TaggingScore score_tagger(const QuantizedHmm& qhmm,
                          const std::vector<Sentence>& sentences,
                          const std::vector<TagSequence>& gold,
                          const AdderModel& adder) {
  return score_with(adder.name(), sentences, gold,
                    [&](const Sentence& s) { return tag(qhmm, s, adder); });
}

TaggingScore score_float_oracle(const HmmModel& hmm,
                                const std::vector<Sentence>& sentences,
                                const std::vector<TagSequence>& gold) {
  return score_with(std::string(kFloatOracleName), sentences, gold,
                    [&](const Sentence& s) { return float_viterbi(hmm, s); });
}

std::string scores_csv(const std::vector<TaggingScore>& scores) {
  std::ostringstream out;
  out << "adder,accuracy_pct,tokens\n";
  for (const auto& s : scores)
    out << s.adder << ',' << format_double(s.accuracy_pct) << ',' << s.tokens << '\n';
  return out.str();
}

}  // namespace approxvit::pos
