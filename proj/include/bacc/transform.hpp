// SPDX-License-Identifier: Apache-2.0
//
// Input/output permutation and negation acting on circuits.
//
// A transform is stored in permute-then-negate form on both sides. Applied to
// a circuit computing f, it yields h with
//
//   h(y)_k = f(z)_{output_perm[k]} ^ output_neg[k],  z_i = y_{input_perm[i]} ^ input_neg[i]
//
// so old input i is read from new input slot input_perm[i].
//
#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "bacc/aig.hpp"

namespace bacc {

struct MatchingTransform {
  std::vector<uint32_t> input_perm;
  std::vector<uint8_t> input_neg;
  std::vector<uint32_t> output_perm;
  std::vector<uint8_t> output_neg;

  size_t num_inputs() const { return input_perm.size(); }
  size_t num_outputs() const { return output_perm.size(); }
  bool is_identity() const;

  friend bool operator==(const MatchingTransform &, const MatchingTransform &) = default;
};

MatchingTransform identity_transform(size_t n, size_t m);

/// Throws InvalidArgument unless both permutations are bijections and the
/// masks have matching lengths.
void require_valid(const MatchingTransform &t);

Circuit apply(const Circuit &c, const MatchingTransform &t);
TruthTable apply(const TruthTable &tt, const MatchingTransform &t);

MatchingTransform invert(const MatchingTransform &t);

/// The transform equivalent to applying t1 first, then t2.
MatchingTransform compose(const MatchingTransform &t2, const MatchingTransform &t1);

enum class TransformKind { Neg, Perm, NegPerm };
enum class TransformSides { Inputs, Outputs, Both };

std::string_view to_string(TransformKind kind);

/// Seeded draw that never returns the identity, except for Perm on a 1x1
/// circuit where no other permutation exists.
MatchingTransform random_transform(size_t n, size_t m, TransformKind kind, uint64_t seed,
                                   TransformSides sides = TransformSides::Both);

std::string to_json(const MatchingTransform &t);
MatchingTransform transform_from_json(std::string_view text);

} // namespace bacc
