// SPDX-License-Identifier: Apache-2.0
//
// Function-preserving rewrite passes and the randomized recipe driver that
// grows logic-equivalent groups.
//
#pragma once

#include <cstdint>
#include <optional>
#include <string_view>
#include <vector>

#include "bacc/aig.hpp"

namespace bacc {

enum class PassKind { Strash, ConstProp, DoubleNegElim, Balance, DeMorganRewrite, LocalRewrite };

inline constexpr size_t kNumPassKinds = 6;

std::string_view to_string(PassKind kind);
std::optional<PassKind> pass_from_string(std::string_view name);

struct OptRecipe {
  uint64_t seed = 0;
  std::vector<PassKind> passes;

  size_t length() const { return passes.size(); }
  friend bool operator==(const OptRecipe &, const OptRecipe &) = default;
};

Circuit pass_strash(const Circuit &c);
Circuit pass_const_prop(const Circuit &c);
Circuit pass_double_neg(const Circuit &c);
Circuit pass_balance(const Circuit &c);
Circuit pass_demorgan(const Circuit &c, uint64_t seed);
Circuit pass_local_rewrite(const Circuit &c, uint64_t seed);

/// Runs one pass; `seed` is ignored by the deterministic passes.
Circuit run_pass(const Circuit &c, PassKind kind, uint64_t seed);

OptRecipe random_recipe(uint64_t seed, size_t min_len, size_t max_len);
Circuit run_recipe(const Circuit &c, const OptRecipe &recipe);

inline constexpr unsigned kMaxRecipeAttempts = 8;

struct OptResult {
  Circuit circuit;
  OptRecipe recipe;      // the recipe that produced `circuit`
  unsigned attempts = 0; // recipes tried, 1..kMaxRecipeAttempts
  bool distinct = false; // structurally different from the input
};

/// Draws recipes until one yields a structurally distinct circuit or the
/// attempt budget runs out.
OptResult random_optimize(const Circuit &c, uint64_t seed, size_t min_len = 2,
                          size_t max_len = 10);

// ------------------------------------------------------------ rewrite library

/// A small AIG over three variables. Literal encoding: 0/1 constants, 2..7
/// variables (2 + 2v + neg), 8 + 2k + neg for step k.
struct LibraryImpl {
  std::vector<std::array<uint8_t, 2>> steps;
  uint8_t output = 0;
};

/// Implementations stored for an 8-bit, 3-variable truth table (variable v is
/// bit v of the assignment index). Never empty.
const std::vector<LibraryImpl> &library_entries(uint8_t table);

/// Truth table computed by an implementation.
uint8_t evaluate(const LibraryImpl &impl);

} // namespace bacc
