// SPDX-License-Identifier: Apache-2.0
#include "bacc/oracle.hpp"

#include <algorithm>
#include <bit>
#include <map>
#include <numeric>

#include "bacc/error.hpp"

namespace bacc {

BigInt transform_space_size(size_t n, size_t m) {
  BigInt r = 1;
  r <<= (n + m);
  for (size_t k = 2; k <= n; ++k)
    r *= k;
  for (size_t k = 2; k <= m; ++k)
    r *= k;
  return r;
}

bool within_budget(size_t n, size_t m, double budget) {
  return transform_space_size(n, m) <= BigInt(static_cast<uint64_t>(std::max(0.0, budget)));
}

std::vector<std::vector<uint32_t>> ordered_permutations(size_t n) {
  std::vector<std::vector<uint32_t>> perms;
  std::vector<uint32_t> p(n);
  std::iota(p.begin(), p.end(), 0u);
  do
    perms.push_back(p);
  while (std::next_permutation(p.begin(), p.end()));
  auto displaced = [](const std::vector<uint32_t> &q) {
    size_t d = 0;
    for (uint32_t i = 0; i < q.size(); ++i)
      d += q[i] != i;
    return d;
  };
  // Already lexicographic, so a stable sort on displacement keeps the
  // secondary order.
  std::stable_sort(perms.begin(), perms.end(), [&](const auto &a, const auto &b) {
    return displaced(a) < displaced(b);
  });
  return perms;
}

std::vector<uint32_t> ordered_masks(size_t n) {
  std::vector<uint32_t> masks(size_t{1} << n);
  std::iota(masks.begin(), masks.end(), 0u);
  std::stable_sort(masks.begin(), masks.end(), [](uint32_t a, uint32_t b) {
    return std::popcount(a) < std::popcount(b);
  });
  return masks;
}

namespace {

std::vector<uint8_t> mask_bits(uint32_t mask, size_t n) {
  std::vector<uint8_t> bits(n);
  for (size_t i = 0; i < n; ++i)
    bits[i] = (mask >> i) & 1u;
  return bits;
}

void require_budget(size_t n, size_t m, double budget) {
  if (n > kMaxExhaustiveInputs)
    fail(ErrorCode::TooManyInputs, "oracle needs exhaustive truth tables");
  if (!within_budget(n, m, budget))
    fail(ErrorCode::SearchBudgetExceeded,
         "transform space 2^n n! 2^m m! = " + transform_space_size(n, m).str() +
             " exceeds the search budget");
}

using Table = std::vector<uint64_t>;

// Input-side action on truth tables for one permutation: `index[y]` is the
// source assignment before negation.
struct InputAction {
  size_t n;
  std::vector<uint32_t> index;

  InputAction(size_t n_vars, const std::vector<uint32_t> &perm)
      : n(n_vars), index(size_t{1} << n_vars) {
    for (uint32_t y = 0; y < index.size(); ++y) {
      uint32_t z = 0;
      for (size_t i = 0; i < n; ++i)
        z |= ((y >> perm[i]) & 1u) << i;
      index[y] = z;
    }
  }

  void apply(const Table &src, uint32_t neg_mask, Table &dst) const {
    std::fill(dst.begin(), dst.end(), 0);
    for (uint32_t y = 0; y < index.size(); ++y) {
      const uint32_t z = index[y] ^ neg_mask;
      if ((src[z >> 6] >> (z & 63)) & 1u)
        dst[y >> 6] |= uint64_t{1} << (y & 63);
    }
  }
};

Table complement(const Table &t, size_t n) {
  Table r(t.size());
  for (size_t w = 0; w < t.size(); ++w)
    r[w] = ~t[w];
  if (n < 6)
    r.back() &= (uint64_t{1} << (size_t{1} << n)) - 1;
  return r;
}

// Numeric order of tables read as unsigned integers.
bool table_less(const Table &a, const Table &b) {
  for (size_t w = a.size(); w-- > 0;)
    if (a[w] != b[w])
      return a[w] < b[w];
  return false;
}

// Lexicographically smallest output permutation with forced negations that
// maps `have` onto `want`, by backtracking in index order.
bool match_outputs(const std::vector<Table> &want, const std::vector<Table> &have,
                   const std::vector<Table> &have_neg, std::vector<uint32_t> &perm,
                   std::vector<uint8_t> &neg) {
  const size_t m = want.size();
  std::vector<uint8_t> used(m, 0);
  perm.assign(m, 0);
  neg.assign(m, 0);
  std::vector<uint32_t> next(m, 0);
  size_t k = 0;
  while (true) {
    if (k == m)
      return true;
    bool placed = false;
    for (uint32_t j = next[k]; j < m; ++j) {
      if (used[j])
        continue;
      const bool plain = have[j] == want[k];
      if (plain || have_neg[j] == want[k]) {
        perm[k] = j;
        neg[k] = plain ? 0 : 1;
        used[j] = 1;
        next[k] = j + 1;
        placed = true;
        break;
      }
    }
    if (placed) {
      ++k;
      if (k < m)
        next[k] = 0;
      continue;
    }
    if (k == 0)
      return false;
    --k;
    used[perm[k]] = 0;
  }
}

} // namespace

std::vector<MatchingTransform> enumerate_transforms(size_t n, size_t m) {
  std::vector<MatchingTransform> all;
  const auto ip = ordered_permutations(n), op = ordered_permutations(m);
  const auto im = ordered_masks(n), om = ordered_masks(m);
  for (const auto &p : ip)
    for (uint32_t a : im)
      for (const auto &q : op)
        for (uint32_t b : om)
          all.push_back({p, mask_bits(a, n), q, mask_bits(b, m)});
  return all;
}

std::optional<MatchingTransform> matching_equivalent(const Circuit &c1, const Circuit &c2,
                                                     double budget) {
  const size_t n = c1.num_inputs(), m = c1.num_outputs();
  if (c2.num_inputs() != n || c2.num_outputs() != m)
    fail(ErrorCode::DimensionMismatch, "circuits differ in input or output count");
  require_budget(n, m, budget);
  const TruthTable t1 = simulate_exhaustive(c1), t2 = simulate_exhaustive(c2);

  const size_t words = words_for_vars(n);
  std::vector<Table> have(m, Table(words)), have_neg(m);
  std::vector<uint32_t> operm;
  std::vector<uint8_t> oneg;
  const auto masks = ordered_masks(n);
  for (const auto &perm : ordered_permutations(n)) {
    const InputAction action(n, perm);
    for (uint32_t mask : masks) {
      for (size_t k = 0; k < m; ++k) {
        action.apply(t2.bits[k], mask, have[k]);
        have_neg[k] = complement(have[k], n);
      }
      if (match_outputs(t1.bits, have, have_neg, operm, oneg))
        return MatchingTransform{perm, mask_bits(mask, n), operm, oneg};
    }
  }
  return std::nullopt;
}

CanonicalKey canonical_key(const TruthTable &tt, double budget) {
  const size_t n = tt.num_vars, m = tt.num_funcs();
  require_budget(n, m, budget);
  const size_t words = words_for_vars(n);
  std::vector<Table> best, cur(m, Table(words));
  for (const auto &perm : ordered_permutations(n)) {
    const InputAction action(n, perm);
    for (uint32_t mask = 0; mask < (uint32_t{1} << n); ++mask) {
      for (size_t k = 0; k < m; ++k) {
        action.apply(tt.bits[k], mask, cur[k]);
        Table neg = complement(cur[k], n);
        if (table_less(neg, cur[k]))
          cur[k] = std::move(neg);
      }
      std::sort(cur.begin(), cur.end(), table_less);
      if (best.empty() || std::lexicographical_compare(cur.begin(), cur.end(), best.begin(),
                                                       best.end(), table_less))
        best = cur;
    }
  }
  CanonicalKey key{n, m, std::to_string(n) + ":" + std::to_string(m) + ":"};
  for (size_t k = 0; k < m; ++k) {
    if (k)
      key.hex += '.';
    key.hex += to_hex(best[k], n);
  }
  return key;
}

CanonicalKey canonical_key(const Circuit &c, double budget) {
  require_budget(c.num_inputs(), c.num_outputs(), budget);
  return canonical_key(simulate_exhaustive(c), budget);
}

std::vector<size_t> label_dataset(const std::vector<Circuit> &circuits, double budget) {
  std::map<CanonicalKey, size_t> seen;
  std::vector<size_t> labels;
  labels.reserve(circuits.size());
  for (const auto &c : circuits) {
    auto [it, inserted] = seen.try_emplace(canonical_key(c, budget), seen.size());
    labels.push_back(it->second);
  }
  return labels;
}

} // namespace bacc
