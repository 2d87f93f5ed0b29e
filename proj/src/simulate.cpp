// SPDX-License-Identifier: Apache-2.0
#include <algorithm>

#include "bacc/aig.hpp"
#include "bacc/error.hpp"
#include "bacc/random.hpp"

namespace bacc {

namespace {

constexpr uint64_t kProjection[6] = {
    0xaaaaaaaaaaaaaaaaull, 0xccccccccccccccccull, 0xf0f0f0f0f0f0f0f0ull,
    0xff00ff00ff00ff00ull, 0xffff0000ffff0000ull, 0xffffffff00000000ull,
};

uint64_t tail_mask(size_t num_vars) {
  return num_vars >= 6 ? ~uint64_t{0} : ((uint64_t{1} << (size_t{1} << num_vars)) - 1);
}

} // namespace

std::vector<std::vector<uint64_t>>
simulate_words(const Circuit &c, std::span<const std::vector<uint64_t>> input_words,
               size_t num_words) {
  if (input_words.size() != c.num_inputs())
    fail(ErrorCode::DimensionMismatch, "stimulus count differs from input count");
  std::vector<uint64_t> values(c.nodes.size() * num_words, 0);
  auto row = [&](uint32_t id) { return values.data() + size_t{id} * num_words; };
  for (size_t i = 0; i < c.inputs.size(); ++i)
    std::copy_n(input_words[i].begin(), num_words, row(c.inputs[i]));

  for (uint32_t id : topo_order(c, TopoMethod::BFS)) {
    const Node &n = c.nodes[id];
    if (n.kind != NodeKind::And)
      continue;
    const uint64_t *a = row(n.fanins[0].node());
    const uint64_t *b = row(n.fanins[1].node());
    const uint64_t ma = n.fanins[0].complemented() ? ~uint64_t{0} : 0;
    const uint64_t mb = n.fanins[1].complemented() ? ~uint64_t{0} : 0;
    uint64_t *out = row(id);
    for (size_t w = 0; w < num_words; ++w)
      out[w] = (a[w] ^ ma) & (b[w] ^ mb);
  }

  std::vector<std::vector<uint64_t>> result;
  result.reserve(c.num_outputs());
  for (Lit o : c.outputs) {
    const uint64_t *src = row(o.node());
    const uint64_t m = o.complemented() ? ~uint64_t{0} : 0;
    std::vector<uint64_t> f(num_words);
    for (size_t w = 0; w < num_words; ++w)
      f[w] = src[w] ^ m;
    result.push_back(std::move(f));
  }
  return result;
}

TruthTable simulate_exhaustive(const Circuit &c) {
  const size_t n = c.num_inputs();
  if (n > kMaxExhaustiveInputs)
    fail(ErrorCode::TooManyInputs, std::to_string(n) + " inputs exceed the exhaustive limit of " +
                                       std::to_string(kMaxExhaustiveInputs));
  const size_t words = words_for_vars(n);
  std::vector<std::vector<uint64_t>> stimulus(n, std::vector<uint64_t>(words));
  for (size_t i = 0; i < n; ++i)
    for (size_t w = 0; w < words; ++w)
      stimulus[i][w] = i < 6 ? kProjection[i] : (((w >> (i - 6)) & 1u) ? ~uint64_t{0} : 0);

  TruthTable tt;
  tt.num_vars = n;
  tt.bits = simulate_words(c, stimulus, words);
  const uint64_t mask = tail_mask(n);
  for (auto &f : tt.bits)
    f.back() &= mask;
  return tt;
}

std::vector<uint64_t> stimulus_words(uint64_t seed, size_t input_index, size_t words) {
  SplitMix64 g(derive_seed(seed, {0x5157u, input_index}));
  std::vector<uint64_t> out(words);
  for (auto &w : out)
    w = g.next();
  return out;
}

Signature simulate_random(const Circuit &c, uint64_t seed, size_t words) {
  if (words == 0)
    fail(ErrorCode::InvalidArgument, "signature needs at least one word");
  std::vector<std::vector<uint64_t>> stimulus;
  stimulus.reserve(c.num_inputs());
  for (size_t i = 0; i < c.num_inputs(); ++i)
    stimulus.push_back(stimulus_words(seed, i, words));
  return Signature{seed, simulate_words(c, stimulus, words)};
}

std::string to_hex(std::span<const uint64_t> words, size_t num_vars) {
  static constexpr char kDigits[] = "0123456789abcdef";
  const size_t bits = size_t{1} << num_vars;
  const size_t digits = std::max<size_t>(1, bits / 4);
  std::string out(digits, '0');
  for (size_t d = 0; d < digits; ++d) {
    const size_t bit = d * 4;
    const unsigned nibble = (words[bit >> 6] >> (bit & 63)) & 0xfu;
    out[digits - 1 - d] = kDigits[nibble];
  }
  return out;
}

std::string to_hex(const TruthTable &tt, size_t func) { return to_hex(tt.bits[func], tt.num_vars); }

std::vector<uint64_t> from_hex(std::string_view hex, size_t num_vars) {
  const size_t bits = size_t{1} << num_vars;
  const size_t digits = std::max<size_t>(1, bits / 4);
  if (hex.size() != digits)
    fail(ErrorCode::ParseFailure, "hex table of wrong length");
  std::vector<uint64_t> words(words_for_vars(num_vars), 0);
  for (size_t d = 0; d < digits; ++d) {
    const char ch = hex[digits - 1 - d];
    unsigned v;
    if (ch >= '0' && ch <= '9')
      v = static_cast<unsigned>(ch - '0');
    else if (ch >= 'a' && ch <= 'f')
      v = static_cast<unsigned>(ch - 'a' + 10);
    else if (ch >= 'A' && ch <= 'F')
      v = static_cast<unsigned>(ch - 'A' + 10);
    else
      fail(ErrorCode::ParseFailure, "bad hex digit");
    const size_t bit = d * 4;
    words[bit >> 6] |= uint64_t{v} << (bit & 63);
  }
  words.back() &= tail_mask(num_vars);
  return words;
}

} // namespace bacc
