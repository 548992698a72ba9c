#include "approxvit/huffman.hpp"

#include <cmath>
#include <queue>
#include <tuple>

#include "approxvit/errors.hpp"

namespace approxvit {

HuffmanCodebook HuffmanCodebook::build(
    const std::map<unsigned char, double>& freqs) {
  if (freqs.empty()) throw InputError("Huffman alphabet is empty");
  double total = 0;
  for (const auto& [sym, p] : freqs) {
    if (!(p >= 0) || !std::isfinite(p))
      throw InputError("symbol probabilities must be finite and >= 0");
    total += p;
  }
  if (total <= 0) throw InputError("symbol probabilities are all zero");

  HuffmanCodebook cb;
  if (freqs.size() == 1) {
    cb.codes_[freqs.begin()->first] = "0";
    cb.tree_.resize(2);
    cb.tree_[0].child[0] = 1;
    cb.tree_[1].symbol = freqs.begin()->first;
    return cb;
  }

  // Build bottom-up in a scratch forest, then renumber with the root first.
  struct Scratch {
    int child[2] = {-1, -1};
    int symbol = -1;
  };
  std::vector<Scratch> forest;
  using Entry = std::tuple<double, int>;  // (weight, node id == creation order)
  std::priority_queue<Entry, std::vector<Entry>, std::greater<>> heap;
  for (const auto& [sym, p] : freqs) {
    forest.push_back(Scratch{{-1, -1}, sym});
    heap.emplace(p, static_cast<int>(forest.size()) - 1);
  }
  while (heap.size() > 1) {
    const auto [w0, n0] = heap.top();
    heap.pop();
    const auto [w1, n1] = heap.top();
    heap.pop();
    forest.push_back(Scratch{{n0, n1}, -1});
    heap.emplace(w0 + w1, static_cast<int>(forest.size()) - 1);
  }

  const int root = std::get<1>(heap.top());
  std::vector<std::pair<int, std::string>> stack{{root, ""}};
  while (!stack.empty()) {
    auto [id, prefix] = stack.back();
    stack.pop_back();
    const Scratch& s = forest[id];
    if (s.symbol >= 0) {
      cb.codes_[static_cast<unsigned char>(s.symbol)] = prefix;
      continue;
    }
    stack.emplace_back(s.child[1], prefix + "1");
    stack.emplace_back(s.child[0], prefix + "0");
  }

  // Decode tree: node 0 is the root.
  cb.tree_.assign(1, Node{});
  for (const auto& [sym, code] : cb.codes_) {
    int at = 0;
    for (char c : code) {
      const int bit = c - '0';
      if (cb.tree_[at].child[bit] < 0) {
        cb.tree_[at].child[bit] = static_cast<int>(cb.tree_.size());
        cb.tree_.push_back(Node{});
      }
      at = cb.tree_[at].child[bit];
    }
    cb.tree_[at].symbol = sym;
  }
  return cb;
}

std::map<unsigned char, double> HuffmanCodebook::frequencies(
    std::string_view text) {
  std::map<unsigned char, std::size_t> counts;
  for (char c : text) ++counts[static_cast<unsigned char>(c)];
  std::map<unsigned char, double> freqs;
  for (const auto& [sym, n] : counts)
    freqs[sym] = static_cast<double>(n) / static_cast<double>(text.size());
  return freqs;
}

double HuffmanCodebook::kraft_sum() const {
  double sum = 0;
  for (const auto& [sym, code] : codes_) sum += std::ldexp(1.0, -static_cast<int>(code.size()));
  return sum;
}

Bits HuffmanCodebook::encode(std::string_view text) const {
  Bits out;
  for (char c : text) {
    const auto it = codes_.find(static_cast<unsigned char>(c));
    if (it == codes_.end())
      throw InputError("symbol " +
                       std::to_string(static_cast<unsigned char>(c)) +
                       " has no codeword");
    for (char b : it->second) out.push_back(b == '1' ? 1 : 0);
  }
  return out;
}

HuffmanCodebook::Decoded HuffmanCodebook::decode(const Bits& bits) const {
  Decoded d;
  int at = 0;
  for (std::uint8_t bit : bits) {
    const int next = tree_[at].child[bit & 1u];
    if (next < 0) {
      d.invalid = true;
      return d;
    }
    at = next;
    if (tree_[at].symbol >= 0) {
      d.text.push_back(static_cast<char>(tree_[at].symbol));
      at = 0;
    }
  }
  d.truncated = at != 0;
  return d;
}

}  // namespace approxvit
