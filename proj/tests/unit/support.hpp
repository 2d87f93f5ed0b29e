// SPDX-License-Identifier: Apache-2.0
//
// Test-only oracles, written independently of the library's bit-parallel
// code paths.
//
#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "bacc/aig.hpp"

namespace testing {

/// Evaluates output `k` on one assignment by plain recursion.
inline bool eval_naive(const bacc::Circuit &c, size_t k, uint64_t assignment) {
  std::vector<int8_t> memo(c.nodes.size(), -1);
  std::function<bool(uint32_t)> node = [&](uint32_t id) -> bool {
    if (memo[id] >= 0)
      return memo[id] != 0;
    bool v = false;
    const auto &n = c.nodes[id];
    if (n.kind == bacc::NodeKind::PrimaryInput) {
      for (size_t i = 0; i < c.inputs.size(); ++i)
        if (c.inputs[i] == id)
          v = (assignment >> i) & 1u;
    } else if (n.kind == bacc::NodeKind::And) {
      v = (node(n.fanins[0].node()) != n.fanins[0].complemented()) &&
          (node(n.fanins[1].node()) != n.fanins[1].complemented());
    }
    memo[id] = v ? 1 : 0;
    return v;
  };
  const auto o = c.outputs[k];
  return node(o.node()) != o.complemented();
}

/// Table of output k as a vector<bool> indexed by assignment.
inline std::vector<bool> naive_table(const bacc::Circuit &c, size_t k) {
  std::vector<bool> t(size_t{1} << c.num_inputs());
  for (uint64_t a = 0; a < t.size(); ++a)
    t[a] = eval_naive(c, k, a);
  return t;
}

inline uint64_t naive_table_bits(const bacc::Circuit &c, size_t k) {
  uint64_t r = 0;
  const auto t = naive_table(c, k);
  for (size_t a = 0; a < t.size(); ++a)
    r |= uint64_t{t[a]} << a;
  return r;
}

inline bool same_function(const bacc::Circuit &a, const bacc::Circuit &b) {
  return bacc::simulate_exhaustive(a) == bacc::simulate_exhaustive(b);
}

// Complemented edges counted straight from the circuit, outputs included.
inline size_t complemented_edges(const bacc::Circuit &c) {
  std::vector<uint8_t> live(c.nodes.size(), 0);
  std::vector<uint32_t> stack;
  for (bacc::Lit o : c.outputs)
    stack.push_back(o.node());
  while (!stack.empty()) {
    const uint32_t id = stack.back();
    stack.pop_back();
    if (live[id])
      continue;
    live[id] = 1;
    if (c.nodes[id].kind == bacc::NodeKind::And)
      for (bacc::Lit f : c.nodes[id].fanins)
        stack.push_back(f.node());
  }
  size_t n = 0;
  for (uint32_t id = 0; id < c.nodes.size(); ++id)
    if (live[id] && c.nodes[id].kind == bacc::NodeKind::And)
      for (bacc::Lit f : c.nodes[id].fanins)
        n += f.complemented();
  for (bacc::Lit o : c.outputs)
    n += o.complemented();
  return n;
}

} // namespace testing
