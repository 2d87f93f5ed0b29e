// SPDX-License-Identifier: Apache-2.0
//
// Exhaustive matching-equivalence search over input/output permutation and
// negation, and the canonical keys that define class labels.
//
#pragma once

#include <optional>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "bacc/aig.hpp"
#include "bacc/transform.hpp"

namespace bacc {

using BigInt = boost::multiprecision::cpp_int;

inline constexpr double kDefaultSearchBudget = 1e7;

/// 2^n * n! * 2^m * m!, exactly.
BigInt transform_space_size(size_t n, size_t m);

bool within_budget(size_t n, size_t m, double budget = kDefaultSearchBudget);

/// Permutations of {0..n-1} ordered by the number of displaced elements, then
/// lexicographically. The identity comes first.
std::vector<std::vector<uint32_t>> ordered_permutations(size_t n);

/// n-bit masks ordered by popcount, then by value.
std::vector<uint32_t> ordered_masks(size_t n);

/// Every transform of an n x m circuit; only sensible for tiny n, m.
std::vector<MatchingTransform> enumerate_transforms(size_t n, size_t m);

/// First t (input permutation, input mask, then output side) such that
/// apply(c2, t) computes the same function as c1. The input side follows the
/// orders above; the output permutation is the lexicographically smallest one
/// that works, and its negations are forced.
std::optional<MatchingTransform> matching_equivalent(const Circuit &c1, const Circuit &c2,
                                                     double budget = kDefaultSearchBudget);

struct CanonicalKey {
  size_t n = 0;
  size_t m = 0;
  std::string hex; // "<n>:<m>:" then one table per output, '.'-separated

  friend bool operator==(const CanonicalKey &, const CanonicalKey &) = default;
  friend auto operator<=>(const CanonicalKey &, const CanonicalKey &) = default;
};

/// Minimum, over the whole transform group, of the output tables read as
/// unsigned integers and listed in order.
CanonicalKey canonical_key(const Circuit &c, double budget = kDefaultSearchBudget);
CanonicalKey canonical_key(const TruthTable &tt, double budget = kDefaultSearchBudget);

/// Dense labels in first-seen order; equal labels iff equal canonical keys.
std::vector<size_t> label_dataset(const std::vector<Circuit> &circuits,
                                  double budget = kDefaultSearchBudget);

} // namespace bacc
