// SPDX-License-Identifier: Apache-2.0
//
// Exact isomorphism test for encoded graphs: colour refinement seeded with the
// feature rows, then backtracking over same-coloured candidates. Test-only.
//
#pragma once

#include <algorithm>
#include <functional>
#include <map>
#include <vector>

#include "bacc/encode.hpp"

namespace testing {

namespace detail {

struct Multigraph {
  size_t n = 0;
  std::vector<std::vector<uint32_t>> out, in;
  std::map<std::pair<uint32_t, uint32_t>, int> mult;

  explicit Multigraph(const bacc::EncodedGraph &g) : n(g.num_nodes), out(n), in(n) {
    for (auto [s, d] : g.edges) {
      out[s].push_back(d);
      in[d].push_back(s);
      ++mult[{s, d}];
    }
  }

  int edges(uint32_t s, uint32_t d) const {
    auto it = mult.find({s, d});
    return it == mult.end() ? 0 : it->second;
  }
};

} // namespace detail

/// Returns a node mapping a -> b that preserves edges with multiplicity and
/// feature rows, or an empty vector when none exists.
inline std::vector<uint32_t> find_isomorphism(const bacc::EncodedGraph &a,
                                              const bacc::EncodedGraph &b) {
  if (a.num_nodes != b.num_nodes || a.edges.size() != b.edges.size() ||
      a.features.cols() != b.features.cols())
    return {};
  const size_t n = a.num_nodes;
  if (n == 0)
    return {};
  const detail::Multigraph ga(a), gb(b);

  // Joint colour refinement over both graphs so colours are comparable.
  using Key = std::vector<double>;
  std::map<Key, int> palette;
  std::vector<int> ca(n), cb(n);
  for (size_t v = 0; v < n; ++v) {
    Key ka(a.features.row(v).begin(), a.features.row(v).end());
    Key kb(b.features.row(v).begin(), b.features.row(v).end());
    ca[v] = palette.try_emplace(ka, static_cast<int>(palette.size())).first->second;
    cb[v] = palette.try_emplace(kb, static_cast<int>(palette.size())).first->second;
  }
  for (size_t round = 0; round < n; ++round) {
    std::map<std::vector<int>, int> next;
    auto signature = [](const detail::Multigraph &g, const std::vector<int> &c, size_t v) {
      std::vector<int> o, i;
      for (uint32_t u : g.out[v])
        o.push_back(c[u]);
      for (uint32_t u : g.in[v])
        i.push_back(c[u]);
      std::sort(o.begin(), o.end());
      std::sort(i.begin(), i.end());
      std::vector<int> s{c[v], -1};
      s.insert(s.end(), o.begin(), o.end());
      s.push_back(-2);
      s.insert(s.end(), i.begin(), i.end());
      return s;
    };
    std::vector<int> na(n), nb(n);
    for (size_t v = 0; v < n; ++v)
      na[v] = next.try_emplace(signature(ga, ca, v), static_cast<int>(next.size())).first->second;
    for (size_t v = 0; v < n; ++v)
      nb[v] = next.try_emplace(signature(gb, cb, v), static_cast<int>(next.size())).first->second;
    const bool stable = next.size() == palette.size();
    palette.clear();
    for (size_t k = 0; k < next.size(); ++k)
      palette[{static_cast<double>(k)}] = static_cast<int>(k);
    ca.swap(na);
    cb.swap(nb);
    if (stable)
      break;
  }
  std::vector<int> ha = ca, hb = cb;
  std::sort(ha.begin(), ha.end());
  std::sort(hb.begin(), hb.end());
  if (ha != hb)
    return {};

  constexpr uint32_t kFree = UINT32_MAX;
  std::vector<uint32_t> map(n, kFree), back(n, kFree);
  std::function<bool(size_t)> extend = [&](size_t v) -> bool {
    if (v == n)
      return true;
    for (uint32_t w = 0; w < n; ++w) {
      if (back[w] != kFree || cb[w] != ca[v])
        continue;
      bool ok = ga.edges(v, v) == gb.edges(w, w);
      for (size_t u = 0; u < v && ok; ++u)
        ok = ga.edges(u, v) == gb.edges(map[u], w) && ga.edges(v, u) == gb.edges(w, map[u]);
      if (!ok)
        continue;
      map[v] = w;
      back[w] = v;
      if (extend(v + 1))
        return true;
      map[v] = back[w] = kFree;
    }
    return false;
  };
  return extend(0) ? map : std::vector<uint32_t>{};
}

inline bool isomorphic(const bacc::EncodedGraph &a, const bacc::EncodedGraph &b) {
  return !find_isomorphism(a, b).empty();
}

} // namespace testing
