// SPDX-License-Identifier: Apache-2.0
//
// Incremental circuit construction with structural hashing. Internal header.
//
#pragma once

#include <unordered_map>

#include "bacc/aig.hpp"

namespace bacc {

class Builder {
public:
  struct Options {
    bool hash = true;
    bool simplify = false; // x&0, x&1, x&x, x&!x
  };

  /// Starts a circuit with the same inputs (and names) as `shape`. `map`
  /// receives the literal of every PI of `shape`.
  Builder(const Circuit &shape, Options options, std::vector<Lit> &map);

  Lit land(Lit a, Lit b);
  Lit lor(Lit a, Lit b) { return !land(!a, !b); }

  uint32_t level(Lit l) const { return level_[l.node()]; }
  const Circuit &circuit() const { return out_; }

  /// Adds outputs with the names of `shape` and removes dangling nodes.
  Circuit finish(const Circuit &shape, const std::vector<Lit> &outputs);

private:
  Circuit out_;
  Options options_;
  std::unordered_map<uint64_t, Lit> table_;
  std::vector<uint32_t> level_;
};

} // namespace bacc
