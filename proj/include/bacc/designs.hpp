// SPDX-License-Identifier: Apache-2.0
//
// Built-in circuits so experiments run without external benchmark files.
//
#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "bacc/aig.hpp"

namespace bacc {

/// Full adder, SUM shared through A^B. Inputs (A, B, Cin), outputs (SUM, Cout).
Circuit full_adder_1();
/// Full adder with Cout = AB | Cin(A|B).
Circuit full_adder_2();

/// f = x1 x2 + x3 and g = !x1 + x2 !x3.
Circuit npn_pair_f();
Circuit npn_pair_g();

Circuit ripple_carry_adder(size_t bits);
Circuit array_multiplier(size_t bits);
/// Outputs (a < b, a == b) for unsigned k-bit operands.
Circuit comparator(size_t bits);
/// 2^k data inputs then k select inputs.
Circuit multiplexer(size_t select_bits);
Circuit decoder(size_t bits);
Circuit parity(size_t bits);
Circuit majority3();
/// Index of the highest set input plus a valid flag.
Circuit priority_encoder(size_t bits);

/// Random AIG: every AND picks two earlier literals with random polarity,
/// outputs drive the last m AND nodes. Dangling logic is removed.
Circuit random_circuit(size_t inputs, size_t outputs, size_t ands, uint64_t seed);

/// Resolves ids such as "fulladder1", "rca4", "mux2" or "rand:8:2:40:7".
/// Throws InvalidArgument for unknown ids.
Circuit builtin_design(std::string_view id);

/// Every fixed id plus one example of each parameterized family.
std::vector<std::string> builtin_examples();

/// Ten small designs from distinct matching classes, used for the desk-scale
/// classification experiment.
std::vector<std::string> desk_design_ids();

} // namespace bacc
