// SPDX-License-Identifier: Apache-2.0
//
// And-Inverter Graph data model. Inversion lives on edges (complemented
// literals); there is no inverter node kind in this representation.
//
#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bacc {

/// A reference to a node plus a complement flag, encoded as 2*node + neg
/// (the AIGER literal convention).
class Lit {
public:
  constexpr Lit() = default;

  static constexpr Lit make(uint32_t node, bool complemented = false) {
    return Lit((node << 1) | (complemented ? 1u : 0u));
  }
  static constexpr Lit from_raw(uint32_t raw) { return Lit(raw); }
  static constexpr Lit none() { return Lit(); }
  static constexpr Lit constant(bool value) { return Lit(value ? 1u : 0u); }

  constexpr uint32_t raw() const { return raw_; }
  constexpr uint32_t node() const { return raw_ >> 1; }
  constexpr bool complemented() const { return (raw_ & 1u) != 0; }
  constexpr bool is_none() const { return raw_ == kNone; }
  constexpr bool is_const() const { return raw_ <= 1u; }

  constexpr Lit operator!() const { return Lit(raw_ ^ 1u); }
  constexpr Lit operator^(bool flip) const { return Lit(raw_ ^ (flip ? 1u : 0u)); }
  constexpr Lit regular() const { return Lit(raw_ & ~1u); }

  friend constexpr auto operator<=>(Lit, Lit) = default;

private:
  static constexpr uint32_t kNone = std::numeric_limits<uint32_t>::max();
  constexpr explicit Lit(uint32_t raw) : raw_(raw) {}
  uint32_t raw_ = kNone;
};

enum class NodeKind : uint8_t { ConstFalse, PrimaryInput, And };

struct Node {
  NodeKind kind = NodeKind::And;
  std::array<Lit, 2> fanins{};

  friend bool operator==(const Node &, const Node &) = default;
};

/// Combinational AIG. Node 0 is always the constant-false node; literal 0 is
/// false and literal 1 is true. Circuits produced by the library keep the
/// fan-ins of every AND node at smaller ids than the node itself.
struct Circuit {
  Circuit();

  std::string name;
  std::vector<Node> nodes;
  std::vector<uint32_t> inputs; // node ids in declaration order
  std::vector<Lit> outputs;
  std::vector<std::string> input_names;  // empty or one per input
  std::vector<std::string> output_names; // empty or one per output

  size_t num_inputs() const { return inputs.size(); }
  size_t num_outputs() const { return outputs.size(); }
  size_t num_ands() const;

  Lit add_input(std::string input_name = {});
  /// Appends an AND node without hashing or simplification.
  Lit add_and(Lit a, Lit b);
  void add_output(Lit driver, std::string output_name = {});

  std::string input_name(size_t i) const;
  std::string output_name(size_t i) const;
};

// ---------------------------------------------------------------- validation

enum class ViolationKind {
  DanglingReference,
  CycleDetected,
  BadArity,
  MissingConstant,
  DuplicateConstant,
  NoInputs,
  NoOutputs,
};

struct Violation {
  ViolationKind kind;
  uint32_t node = 0;
  std::string detail;
};

std::string_view to_string(ViolationKind kind);

/// Reports every broken invariant; an empty result means the circuit is valid.
std::vector<Violation> validate(const Circuit &c);

/// Throws Error with the first violation's code when the circuit is invalid.
void require_valid(const Circuit &c);

// ------------------------------------------------------------------ ordering

enum class TopoMethod { BFS, DFS };

/// Kahn-style topological order seeded with the PIs in declaration order
/// (the constant node first when it is referenced). BFS uses a FIFO, DFS a
/// LIFO; nodes that become ready together are taken in ascending id order.
std::vector<uint32_t> topo_order(const Circuit &c, TopoMethod method);

/// Logic level per node (PIs and constant at 0).
std::vector<uint32_t> levels(const Circuit &c);
uint32_t depth(const Circuit &c);

/// Number of references (AND fan-ins plus PO drivers) per node.
std::vector<uint32_t> fanout_counts(const Circuit &c);

/// Dense renumbering: constant, PIs in declaration order, then AND nodes in a
/// topological order. Unreferenced AND nodes are kept.
Circuit renumber(const Circuit &c);

/// Removes AND nodes that no output depends on and renumbers densely.
Circuit cleanup(const Circuit &c);

/// Structural identity up to dense topological renumbering. Names ignored.
bool structurally_equal(const Circuit &a, const Circuit &b);

// --------------------------------------------------------------------- AIGER

Circuit parse_aag(std::string_view text);
std::string write_aag(const Circuit &c);
Circuit read_aag_file(const std::string &path);
void write_aag_file(const Circuit &c, const std::string &path);

// ---------------------------------------------------------------- simulation

inline constexpr size_t kMaxExhaustiveInputs = 16;
inline constexpr size_t kDefaultSignatureWords = 1024;

/// Exhaustive truth tables. Bit k of function j is the value of output j on
/// assignment k, where input i is bit i of k.
struct TruthTable {
  size_t num_vars = 0;
  std::vector<std::vector<uint64_t>> bits; // one word vector per output

  size_t num_funcs() const { return bits.size(); }
  bool get(size_t func, uint64_t assignment) const {
    return (bits[func][assignment >> 6] >> (assignment & 63)) & 1u;
  }
  friend bool operator==(const TruthTable &, const TruthTable &) = default;
};

inline size_t words_for_vars(size_t num_vars) {
  return num_vars <= 6 ? 1 : (size_t{1} << (num_vars - 6));
}

/// Hex digits, most significant assignment first; max(1, 2^n/4) digits.
std::string to_hex(std::span<const uint64_t> words, size_t num_vars);
std::vector<uint64_t> from_hex(std::string_view hex, size_t num_vars);
std::string to_hex(const TruthTable &tt, size_t func);

TruthTable simulate_exhaustive(const Circuit &c);

/// Random-vector functional fingerprint.
struct Signature {
  uint64_t seed = 0;
  std::vector<std::vector<uint64_t>> words; // one vector per output

  size_t num_funcs() const { return words.size(); }
  friend bool operator==(const Signature &, const Signature &) = default;
};

/// Stimulus applied to input `input_index`; depends only on (seed, index).
std::vector<uint64_t> stimulus_words(uint64_t seed, size_t input_index,
                                     size_t words);

Signature simulate_random(const Circuit &c, uint64_t seed,
                          size_t words = kDefaultSignatureWords);

/// Word-parallel evaluation of every output for the given per-input words.
std::vector<std::vector<uint64_t>>
simulate_words(const Circuit &c,
               std::span<const std::vector<uint64_t>> input_words,
               size_t num_words);

} // namespace bacc
