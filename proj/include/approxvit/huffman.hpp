#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "approxvit/conv_code.hpp"

namespace approxvit {

// Byte-symbol Huffman code. Construction is deterministic: the two lightest
// nodes are merged first, ties broken by creation order (leaves in ascending
// symbol order, then internal nodes as created). The first node popped takes
// bit 0.
class HuffmanCodebook {
 public:
  static HuffmanCodebook build(const std::map<unsigned char, double>& freqs);

  // Relative byte frequencies of `text`.
  static std::map<unsigned char, double> frequencies(std::string_view text);

  const std::map<unsigned char, std::string>& codewords() const noexcept {
    return codes_;
  }
  double kraft_sum() const;

  Bits encode(std::string_view text) const;  // throws InputError on unknown byte

  struct Decoded {
    std::string text;
    bool truncated = false;  // trailing bits did not complete a codeword
    bool invalid = false;    // hit a bit with no branch (single-symbol code)
  };
  Decoded decode(const Bits& bits) const;

 private:
  struct Node {
    int child[2] = {-1, -1};
    int symbol = -1;
  };

  std::map<unsigned char, std::string> codes_;
  std::vector<Node> tree_;  // tree_[0] is the root
};

inline HuffmanCodebook huffman_build(
    const std::map<unsigned char, double>& freqs) {
  return HuffmanCodebook::build(freqs);
}

}  // namespace approxvit
