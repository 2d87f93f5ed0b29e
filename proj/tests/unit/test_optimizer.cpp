// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>

#include "bacc/designs.hpp"
#include "bacc/optimizer.hpp"
#include "bacc/transform.hpp"
#include "support.hpp"

using namespace bacc;
using testing::same_function;

TEST_CASE("strash merges duplicated nodes") {
  Circuit c;
  const Lit a = c.add_input(), b = c.add_input();
  const Lit x = c.add_and(a, b), y = c.add_and(b, a);
  c.add_output(c.add_and(x, !y));
  c.add_output(y);
  const Circuit s = pass_strash(c);
  CHECK(s.num_ands() == 2);
  CHECK(same_function(s, c));
  CHECK(pass_strash(full_adder_1()).num_ands() == full_adder_1().num_ands());
}

TEST_CASE("constant propagation") {
  Circuit c;
  const Lit a = c.add_input();
  c.add_output(c.add_and(a, Lit::constant(false)));
  c.add_output(c.add_and(a, Lit::constant(true)));
  const Circuit p = pass_const_prop(c);
  CHECK(p.num_ands() == 0);
  CHECK(p.outputs[0] == Lit::constant(false));
  CHECK(p.outputs[1] == Lit::make(p.inputs[0]));
}

TEST_CASE("double negation through buffers") {
  Circuit c;
  const Lit a = c.add_input();
  const Lit buf = c.add_and(!a, !a);
  c.add_output(!buf);
  const Circuit d = pass_double_neg(c);
  CHECK(d.num_ands() == 0);
  CHECK(d.outputs[0] == Lit::make(d.inputs[0]));

  // Negating B twice returns the full adder's function.
  MatchingTransform t = identity_transform(3, 2);
  t.input_neg = {0, 1, 0};
  const Circuit twice = apply(apply(full_adder_1(), t), t);
  CHECK(same_function(pass_double_neg(twice), full_adder_1()));
}

TEST_CASE("balance shortens chains and never deepens") {
  Circuit c;
  std::vector<Lit> x;
  for (int i = 0; i < 4; ++i)
    x.push_back(c.add_input());
  c.add_output(c.add_and(c.add_and(c.add_and(x[0], x[1]), x[2]), x[3]));
  CHECK(depth(c) == 3);
  const Circuit b = pass_balance(c);
  CHECK(depth(b) == 2);
  CHECK(same_function(b, c));
  CHECK(depth(pass_balance(b)) == 2);

  for (uint64_t seed = 0; seed < 200; ++seed) {
    const Circuit r = random_circuit(3 + seed % 6, 1 + seed % 3, 10 + seed % 50, seed);
    const Circuit rb = pass_balance(r);
    REQUIRE(same_function(rb, r));
    CHECK(depth(rb) <= depth(r));
  }
}

TEST_CASE("De Morgan rewrite keeps the function") {
  Circuit c;
  const Lit a = c.add_input(), b = c.add_input();
  c.add_output(!c.add_and(!a, !b));
  for (uint64_t seed = 0; seed < 8; ++seed)
    CHECK(to_hex(simulate_exhaustive(pass_demorgan(c, seed)), 0) == "e");

  const Circuit fa2 = full_adder_2();
  bool changed = false;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Circuit r = pass_demorgan(fa2, seed);
    CHECK(same_function(r, fa2));
    changed = changed || !structurally_equal(r, fa2);
  }
  CHECK(changed);
}

TEST_CASE("local rewrite") {
  // The three-AND xor cone has an alternative implementation in the library.
  const Circuit x = builtin_design("xor2");
  CHECK(library_entries(0x66).size() >= 2);
  bool changed = false;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const Circuit r = pass_local_rewrite(x, seed);
    CHECK(to_hex(simulate_exhaustive(r), 0) == "6");
    changed = changed || !structurally_equal(r, x);
  }
  CHECK(changed);
  CHECK(structurally_equal(pass_local_rewrite(full_adder_1(), 5),
                           pass_local_rewrite(full_adder_1(), 5)));

  for (uint64_t seed = 0; seed < 500; ++seed) {
    const Circuit r = random_circuit(8, 1 + seed % 2, 20 + seed % 30, seed);
    REQUIRE(same_function(pass_local_rewrite(r, seed), r));
  }
}

TEST_CASE("rewrite library entries compute their table") {
  size_t multi = 0;
  for (int t = 0; t < 256; ++t) {
    const auto &entries = library_entries(static_cast<uint8_t>(t));
    REQUIRE(!entries.empty());
    CHECK(entries.size() <= 4);
    multi += entries.size() >= 2;
    for (const auto &e : entries)
      CHECK(evaluate(e) == t);
  }
  // Constants, projections and their complements have a single form.
  CHECK(multi >= 240);
}

TEST_CASE("every pass preserves function and interface") {
  for (uint64_t seed = 0; seed < 200; ++seed) {
    const size_t n = 2 + seed % 11;
    const Circuit c = random_circuit(n, 1 + seed % 3, 10 + seed % 60, seed);
    const TruthTable before = simulate_exhaustive(c);
    for (size_t k = 0; k < kNumPassKinds; ++k) {
      const Circuit r = run_pass(c, static_cast<PassKind>(k), seed);
      REQUIRE(r.num_inputs() == c.num_inputs());
      REQUIRE(r.num_outputs() == c.num_outputs());
      REQUIRE(simulate_exhaustive(r) == before);
      if (static_cast<PassKind>(k) == PassKind::Strash)
        CHECK(r.num_ands() <= c.num_ands());
    }
  }
}

TEST_CASE("random optimization") {
  const Circuit fa = full_adder_1();
  const OptResult r = random_optimize(fa, 3);
  CHECK(r.distinct);
  CHECK(r.recipe.length() >= 2);
  CHECK(r.recipe.length() <= 10);
  const TruthTable tt = simulate_exhaustive(r.circuit);
  CHECK(to_hex(tt, 0) == "96");
  CHECK(to_hex(tt, 1) == "e8");
  CHECK(structurally_equal(run_recipe(fa, r.recipe), r.circuit));

  // A strash-only recipe on an already hashed circuit is a fixed point; with
  // single-pass recipes the driver has to retry whenever it draws one.
  const Circuit hashed = pass_strash(fa);
  CHECK(structurally_equal(run_recipe(hashed, {7, {PassKind::Strash}}), hashed));
  bool retried = false;
  for (uint64_t seed = 0; seed < 40 && !retried; ++seed) {
    const OptResult one = random_optimize(hashed, seed, 1, 1);
    CHECK(one.recipe.length() == 1);
    CHECK(one.attempts <= kMaxRecipeAttempts);
    retried = one.attempts > 1;
  }
  CHECK(retried);

  std::set<std::string> shapes;
  const Signature ref = simulate_random(fa, 1, 4);
  for (uint64_t seed = 0; seed < 30; ++seed) {
    const OptResult s = random_optimize(fa, seed);
    CHECK(simulate_random(s.circuit, 1, 4) == ref);
    shapes.insert(write_aag(s.circuit));
  }
  CHECK(shapes.size() > 10);
  CHECK(structurally_equal(random_optimize(fa, 9).circuit, random_optimize(fa, 9).circuit));
  CHECK_THROWS(random_optimize(fa, 1, 3, 2));
}

TEST_CASE("pass names") {
  for (size_t k = 0; k < kNumPassKinds; ++k)
    CHECK(pass_from_string(to_string(static_cast<PassKind>(k))) == static_cast<PassKind>(k));
  CHECK(!pass_from_string("Nope"));
}
