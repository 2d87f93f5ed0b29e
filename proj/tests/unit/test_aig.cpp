// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <algorithm>

#include "bacc/designs.hpp"
#include "bacc/error.hpp"
#include "bacc/transform.hpp"
#include "support.hpp"

using namespace bacc;

namespace {

ErrorCode code_of(const std::function<void()> &fn) {
  try {
    fn();
  } catch (const Error &e) {
    return e.code();
  }
  return ErrorCode::Internal;
}

bool valid_topological(const Circuit &c, const std::vector<uint32_t> &order) {
  std::vector<int> pos(c.nodes.size(), -1);
  for (size_t i = 0; i < order.size(); ++i) {
    if (pos[order[i]] != -1)
      return false;
    pos[order[i]] = static_cast<int>(i);
  }
  for (uint32_t id = 0; id < c.nodes.size(); ++id) {
    const Node &n = c.nodes[id];
    if (n.kind != NodeKind::And)
      continue;
    if (pos[id] < 0)
      return false;
    for (Lit f : n.fanins)
      if (pos[f.node()] < 0 || pos[f.node()] >= pos[id])
        return false;
  }
  return true;
}

} // namespace

TEST_CASE("identity wire parses and writes back exactly") {
  const Circuit c = parse_aag("aag 1 1 0 1 0\n2\n2\n");
  CHECK(c.num_inputs() == 1);
  CHECK(c.num_outputs() == 1);
  CHECK(c.num_ands() == 0);
  CHECK(to_hex(simulate_exhaustive(c), 0) == "2");
  CHECK(write_aag(c) == "aag 1 1 0 1 0\n2\n2\n");
}

TEST_CASE("parser errors carry their codes") {
  CHECK(code_of([] { parse_aag("aag 5 2 0 1 3\n2\n4\n10\n6 2 4\n8 6 2\n"); }) ==
        ErrorCode::MalformedHeader);
  CHECK(code_of([] { parse_aag("aig 1 1 0 1 0\n2\n2\n"); }) == ErrorCode::MalformedHeader);
  CHECK(code_of([] { parse_aag("aag 2 1 1 1 0\n2\n4 2\n4\n"); }) ==
        ErrorCode::LatchesUnsupported);
  CHECK(code_of([] { parse_aag("aag 3 1 0 1 1\n2\n6\n6 2 4\n"); }) ==
        ErrorCode::DanglingReference);
  CHECK(code_of([] { parse_aag("aag 3 1 0 1 1\n2\n8\n6 2 2\n"); }) ==
        ErrorCode::DanglingReference);
  CHECK(code_of([] { parse_aag("aag 3 1 0 1 2\n2\n4\n4 2 6\n6 4 2\n"); }) ==
        ErrorCode::CycleDetected);
  CHECK(code_of([] { parse_aag("aag 2 1 0 1 1\n2\n4\n4 2 2\n4 2 2\n"); }) ==
        ErrorCode::MalformedHeader);
}

TEST_CASE("symbols and design name survive a round trip") {
  const Circuit fa = full_adder_1();
  const Circuit back = parse_aag(write_aag(fa));
  CHECK(back.name == "fulladder1");
  CHECK(back.input_name(2) == "Cin");
  CHECK(back.output_name(1) == "Cout");
  CHECK(structurally_equal(back, fa));
}

TEST_CASE("full adder truth tables") {
  const Circuit fa = full_adder_1();
  CHECK(validate(fa).empty());
  CHECK(fa.num_ands() == 9);
  const TruthTable tt = simulate_exhaustive(fa);
  CHECK(to_hex(tt, 0) == "96");
  CHECK(to_hex(tt, 1) == "e8");
  // Per-assignment reading of SUM = Cin ^ (A ^ B), Cout = AB | Cin(A ^ B).
  for (uint64_t k = 0; k < 8; ++k) {
    const bool a = k & 1, b = (k >> 1) & 1, cin = (k >> 2) & 1;
    CHECK(tt.get(0, k) == (cin ^ (a ^ b)));
    CHECK(tt.get(1, k) == ((a && b) || (cin && (a ^ b))));
    CHECK(testing::eval_naive(fa, 0, k) == tt.get(0, k));
  }
  CHECK(simulate_exhaustive(full_adder_2()) == tt);
}

TEST_CASE("small reference tables") {
  CHECK(to_hex(simulate_exhaustive(builtin_design("and2")), 0) == "8");
  // f = x1 x2 + x3 and g = !x1 + x2 !x3, with x1 as input 0.
  for (uint64_t k = 0; k < 8; ++k) {
    const bool x1 = k & 1, x2 = (k >> 1) & 1, x3 = (k >> 2) & 1;
    CHECK(testing::eval_naive(npn_pair_f(), 0, k) == ((x1 && x2) || x3));
    CHECK(testing::eval_naive(npn_pair_g(), 0, k) == (!x1 || (x2 && !x3)));
  }
  CHECK(to_hex(simulate_exhaustive(npn_pair_f()), 0) == "f8");
  CHECK(to_hex(simulate_exhaustive(npn_pair_g()), 0) == "5d");
  // With x1 read as the most significant bit instead.
  MatchingTransform reverse = identity_transform(3, 1);
  reverse.input_perm = {2, 1, 0};
  CHECK(to_hex(simulate_exhaustive(apply(npn_pair_f(), reverse)), 0) == "ea");
  CHECK(to_hex(simulate_exhaustive(apply(npn_pair_g(), reverse)), 0) == "4f");
}

TEST_CASE("hex conversion round trips") {
  CHECK(to_hex(std::vector<uint64_t>{1}, 0) == "1");
  for (size_t n : {1, 2, 3, 6, 7, 9}) {
    const TruthTable tt = simulate_exhaustive(random_circuit(n, 1, 12, n));
    const std::string hex = to_hex(tt, 0);
    CHECK(hex.size() == std::max<size_t>(1, (size_t{1} << n) / 4));
    CHECK(from_hex(hex, n) == tt.bits[0]);
  }
  CHECK_THROWS_AS(from_hex("8g", 3), Error);
  CHECK_THROWS_AS(from_hex("888", 3), Error);
}

TEST_CASE("round trip of random circuits") {
  for (uint64_t seed = 0; seed < 100; ++seed) {
    const Circuit c = random_circuit(8, 1 + seed % 3, 20 + seed % 40, seed);
    const Circuit back = parse_aag(write_aag(c));
    REQUIRE(structurally_equal(back, c));
  }
}

TEST_CASE("exhaustive simulation agrees with the naive evaluator") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const size_t n = 1 + seed % 8;
    const Circuit c = random_circuit(n, 1 + seed % 2, 5 + seed % 30, seed * 31 + 1);
    const TruthTable tt = simulate_exhaustive(c);
    for (size_t k = 0; k < c.num_outputs(); ++k) {
      const auto naive = testing::naive_table(c, k);
      for (uint64_t a = 0; a < naive.size(); ++a)
        REQUIRE(tt.get(k, a) == naive[a]);
    }
  }
}

TEST_CASE("exhaustive simulation refuses more than 16 inputs") {
  const Circuit c = random_circuit(17, 1, 30, 3);
  CHECK(code_of([&] { simulate_exhaustive(c); }) == ErrorCode::TooManyInputs);
  CHECK_NOTHROW(simulate_random(c, 1, 4));
}

TEST_CASE("random signatures") {
  const Circuit wire = parse_aag("aag 1 1 0 1 0\n2\n2\n");
  const Signature s = simulate_random(wire, 7, 16);
  CHECK(s.words[0] == stimulus_words(7, 0, 16));

  CHECK(simulate_random(full_adder_1(), 11) == simulate_random(full_adder_2(), 11));
  CHECK(simulate_random(full_adder_1(), 11) != simulate_random(full_adder_1(), 12));

  Circuit neg = full_adder_1();
  neg.outputs[0] = !neg.outputs[0];
  const Signature a = simulate_random(full_adder_1(), 5, 64), b = simulate_random(neg, 5, 64);
  for (size_t w = 0; w < 64; ++w)
    CHECK(a.words[0][w] != b.words[0][w]);
  CHECK(a.words[1] == b.words[1]);
}

TEST_CASE("signatures agree whenever exhaustive tables agree") {
  for (uint64_t seed = 0; seed < 60; ++seed) {
    const size_t n = 2 + seed % 9;
    const Circuit a = random_circuit(n, 1, 6 + seed % 20, seed);
    // Same function, different structure: a redundant buffer on the output.
    Circuit b = a;
    const Lit buf = b.add_and(b.outputs[0], b.outputs[0]);
    b.outputs[0] = buf;
    REQUIRE(simulate_exhaustive(a) == simulate_exhaustive(b));
    CHECK(simulate_random(a, seed, 8) == simulate_random(b, seed, 8));
  }
}

TEST_CASE("validate reports broken invariants") {
  CHECK(validate(full_adder_1()).empty());

  Circuit dangling = full_adder_1();
  dangling.nodes.back().fanins[0] = Lit::make(99);
  const auto v1 = validate(dangling);
  REQUIRE(!v1.empty());
  CHECK(v1.front().kind == ViolationKind::DanglingReference);

  Circuit cyc;
  const Lit a = cyc.add_input();
  const Lit x = cyc.add_and(a, a);
  const Lit y = cyc.add_and(x, a);
  cyc.nodes[x.node()].fanins[1] = y;
  cyc.add_output(y);
  const auto v2 = validate(cyc);
  REQUIRE(!v2.empty());
  CHECK(std::any_of(v2.begin(), v2.end(),
                    [](const Violation &v) { return v.kind == ViolationKind::CycleDetected; }));
  CHECK(code_of([&] { require_valid(cyc); }) == ErrorCode::CycleDetected);
}

TEST_CASE("topological orders") {
  Circuit chain;
  const Lit a = chain.add_input();
  chain.add_output(chain.add_and(a, a));
  CHECK(topo_order(chain, TopoMethod::BFS) == std::vector<uint32_t>{1, 2});
  CHECK(topo_order(chain, TopoMethod::DFS) == std::vector<uint32_t>{1, 2});

  // Hand trace of the Kahn traversal on the full adder (ids: A=1, B=2,
  // Cin=3, then the nine AND nodes 4..12 in construction order).
  const Circuit fa = full_adder_1();
  CHECK(topo_order(fa, TopoMethod::BFS) ==
        std::vector<uint32_t>{1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 11});
  CHECK(topo_order(fa, TopoMethod::DFS) ==
        std::vector<uint32_t>{1, 2, 4, 5, 6, 7, 3, 8, 9, 12, 10, 11});

  for (uint64_t seed = 0; seed < 50; ++seed) {
    const Circuit c = random_circuit(6, 2, 40, seed);
    CHECK(valid_topological(c, topo_order(c, TopoMethod::BFS)));
    CHECK(valid_topological(c, topo_order(c, TopoMethod::DFS)));
  }
}

TEST_CASE("cleanup drops dangling logic and keeps the function") {
  Circuit c = full_adder_1();
  c.add_and(Lit::make(1), Lit::make(3));
  const Circuit d = cleanup(c);
  CHECK(d.num_ands() == 9);
  CHECK(testing::same_function(c, d));
  CHECK(depth(full_adder_1()) == 6);
}
