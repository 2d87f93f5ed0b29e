// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <set>

#include "bacc/designs.hpp"
#include "bacc/error.hpp"
#include "bacc/optimizer.hpp"
#include "bacc/oracle.hpp"
#include "bacc/random.hpp"
#include "support.hpp"

using namespace bacc;

namespace {

// Brute-force reference: try every transform through the table action.
bool brute_force_match(const Circuit &c1, const Circuit &c2) {
  const TruthTable t1 = simulate_exhaustive(c1), t2 = simulate_exhaustive(c2);
  for (const auto &t : enumerate_transforms(c1.num_inputs(), c1.num_outputs()))
    if (apply(t2, t) == t1)
      return true;
  return false;
}

} // namespace

TEST_CASE("transform space size") {
  CHECK(transform_space_size(1, 1) == 4);
  CHECK(transform_space_size(3, 1) == 96);
  CHECK(transform_space_size(3, 2) == 384);
  CHECK(transform_space_size(20, 3).str() == "122451967494039766302720000");
  CHECK(within_budget(4, 4));
  CHECK(!within_budget(8, 2));
}

TEST_CASE("enumeration covers the group exactly once") {
  for (size_t n = 1; n <= 3; ++n)
    for (size_t m = 1; m <= 3; ++m) {
      const auto all = enumerate_transforms(n, m);
      CHECK(all.size() == transform_space_size(n, m));
      std::set<std::string> unique;
      for (const auto &t : all)
        unique.insert(to_json(t));
      CHECK(unique.size() == all.size());
      CHECK(all.front().is_identity());
    }
  CHECK(ordered_permutations(3).size() == 6);
  CHECK(ordered_permutations(3)[1] == std::vector<uint32_t>{0, 2, 1});
  CHECK(ordered_masks(3) == std::vector<uint32_t>{0, 1, 2, 4, 3, 5, 6, 7});
}

TEST_CASE("NPN pair witness") {
  const Circuit f = npn_pair_f(), g = npn_pair_g();
  const auto t = matching_equivalent(f, g);
  REQUIRE(t);
  CHECK(t->input_perm == std::vector<uint32_t>{2, 1, 0});
  CHECK(t->input_neg == std::vector<uint8_t>{1, 0, 1});
  CHECK(t->output_perm == std::vector<uint32_t>{0});
  CHECK(t->output_neg == std::vector<uint8_t>{0});
  CHECK(testing::same_function(apply(g, *t), f));
  // g(x1, x2, x3) = f(!x3, x2, !x1), checked point by point.
  for (uint64_t k = 0; k < 8; ++k) {
    const uint64_t x1 = k & 1, x2 = (k >> 1) & 1, x3 = (k >> 2) & 1;
    const uint64_t moved = (x3 ^ 1) | (x2 << 1) | ((x1 ^ 1) << 2);
    CHECK(testing::eval_naive(g, 0, k) == testing::eval_naive(f, 0, moved));
  }
}

TEST_CASE("reflexivity and a non-match") {
  const Circuit fa = full_adder_1();
  const auto self = matching_equivalent(fa, fa);
  REQUIRE(self);
  CHECK(self->is_identity());

  const Circuit a = builtin_design("and2"), x = builtin_design("xor2");
  CHECK(!matching_equivalent(a, x));
  CHECK(!brute_force_match(a, x));
  CHECK(canonical_key(a) != canonical_key(x));
  CHECK_THROWS_AS(matching_equivalent(a, fa), Error);
}

TEST_CASE("search budget guard") {
  try {
    canonical_key(decoder(3));
    FAIL("expected SearchBudgetExceeded");
  } catch (const Error &e) {
    CHECK(e.code() == ErrorCode::SearchBudgetExceeded);
  }
  CHECK_NOTHROW(canonical_key(decoder(3), 1e12));
}

TEST_CASE("canonical keys are transform invariant") {
  const Circuit c = random_circuit(4, 2, 20, 17);
  const CanonicalKey k = canonical_key(c);
  CHECK(k.n == 4);
  CHECK(k.m == 2);
  for (uint64_t seed = 0; seed < 100; ++seed)
    CHECK(canonical_key(apply(c, random_transform(4, 2, TransformKind::NegPerm, seed))) == k);
  CHECK(canonical_key(npn_pair_f()) == canonical_key(npn_pair_g()));
  CHECK(canonical_key(npn_pair_f()).hex == "3:1:" + canonical_key(npn_pair_g()).hex.substr(4));
}

TEST_CASE("labels") {
  CHECK(label_dataset({}).empty());
  CHECK(label_dataset({npn_pair_f(), npn_pair_g(), builtin_design("and2")}) ==
        std::vector<size_t>{0, 0, 1});

  MatchingTransform perm = identity_transform(3, 2);
  perm.input_perm = {1, 2, 0};
  MatchingTransform neg = identity_transform(3, 2);
  neg.input_neg = {0, 1, 0};
  neg.output_neg = {1, 0};
  const Circuit fa1 = full_adder_1(), fa2 = full_adder_2();
  CHECK(label_dataset({fa1, fa2, apply(fa1, perm), apply(fa2, perm), apply(fa1, neg),
                       apply(fa2, neg), majority3()}) ==
        std::vector<size_t>{0, 0, 0, 0, 0, 0, 1});
}

TEST_CASE("matching is an equivalence relation that agrees with keys") {
  // Small functions collide often, so both outcomes are exercised.
  std::vector<Circuit> pool;
  for (uint64_t seed = 0; seed < 24; ++seed)
    pool.push_back(random_circuit(3, 1 + seed % 2, 3 + seed % 4, seed));
  size_t matches = 0;
  for (size_t i = 0; i < pool.size(); ++i)
    for (size_t j = 0; j < pool.size(); ++j) {
      if (pool[i].num_outputs() != pool[j].num_outputs())
        continue;
      const auto t = matching_equivalent(pool[i], pool[j]);
      const bool same_key = canonical_key(pool[i]) == canonical_key(pool[j]);
      REQUIRE(t.has_value() == same_key);
      REQUIRE(t.has_value() == brute_force_match(pool[i], pool[j]));
      if (!t)
        continue;
      ++matches;
      CHECK(testing::same_function(apply(pool[j], *t), pool[i]));
      // Symmetry through the inverse witness.
      CHECK(testing::same_function(apply(pool[i], invert(*t)), pool[j]));
      // Transitivity through composition.
      for (size_t k = 0; k < pool.size(); ++k) {
        if (pool[k].num_outputs() != pool[j].num_outputs())
          continue;
        if (auto u = matching_equivalent(pool[j], pool[k]))
          CHECK(testing::same_function(apply(pool[k], compose(*t, *u)), pool[i]));
      }
    }
  CHECK(matches > pool.size());
}

TEST_CASE("closure under interleaved passes and transforms") {
  for (uint64_t seed = 0; seed < 30; ++seed) {
    Circuit c = random_circuit(4, 2, 16, seed);
    const CanonicalKey key = canonical_key(c);
    SplitMix64 rng(seed);
    for (int step = 0; step < 6; ++step) {
      if (rng.coin()) {
        c = run_pass(c, static_cast<PassKind>(rng.below(kNumPassKinds)), rng.next());
      } else {
        const auto t = random_transform(4, 2, TransformKind::NegPerm, rng.next());
        c = apply(c, t);
        CHECK(canonical_key(c) == key);
        if (rng.coin())
          c = apply(c, invert(t));
      }
      CHECK(canonical_key(c) == key);
    }
  }
}
