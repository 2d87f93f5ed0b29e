// SPDX-License-Identifier: Apache-2.0
#include "bacc/optimizer.hpp"

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <queue>
#include <set>
#include <string>

#include "bacc/error.hpp"
#include "bacc/random.hpp"
#include "builder.hpp"

namespace bacc {

std::string_view to_string(PassKind kind) {
  switch (kind) {
  case PassKind::Strash: return "Strash";
  case PassKind::ConstProp: return "ConstProp";
  case PassKind::DoubleNegElim: return "DoubleNegElim";
  case PassKind::Balance: return "Balance";
  case PassKind::DeMorganRewrite: return "DeMorganRewrite";
  case PassKind::LocalRewrite: return "LocalRewrite";
  }
  return "?";
}

std::optional<PassKind> pass_from_string(std::string_view name) {
  for (size_t k = 0; k < kNumPassKinds; ++k)
    if (to_string(static_cast<PassKind>(k)) == name)
      return static_cast<PassKind>(k);
  return std::nullopt;
}

namespace {

using AndRule = std::function<Lit(Builder &, uint32_t id, Lit a, Lit b)>;

// Rebuilds c node by node in topological order; `rule` produces the new
// literal of each AND node from its already-mapped fan-ins.
Circuit rebuild(const Circuit &c, Builder::Options options, const AndRule &rule) {
  std::vector<Lit> map;
  Builder b(c, options, map);
  for (uint32_t id : topo_order(c, TopoMethod::BFS)) {
    const Node &n = c.nodes[id];
    if (n.kind != NodeKind::And)
      continue;
    map[id] = rule(b, id, map[n.fanins[0].node()] ^ n.fanins[0].complemented(),
                   map[n.fanins[1].node()] ^ n.fanins[1].complemented());
  }
  std::vector<Lit> outs;
  for (Lit o : c.outputs)
    outs.push_back(map[o.node()] ^ o.complemented());
  return b.finish(c, outs);
}

// Random subset of AND nodes, never empty when the circuit has AND nodes.
std::vector<uint8_t> pick_sites(const Circuit &c, SplitMix64 &rng, double p) {
  std::vector<uint8_t> chosen(c.nodes.size(), 0);
  std::vector<uint32_t> ands;
  for (uint32_t i = 0; i < c.nodes.size(); ++i)
    if (c.nodes[i].kind == NodeKind::And)
      ands.push_back(i);
  bool any = false;
  for (uint32_t id : ands)
    if (rng.coin(p))
      chosen[id] = 1, any = true;
  if (!any && !ands.empty())
    chosen[ands[rng.below(ands.size())]] = 1;
  return chosen;
}

const Node *and_node(const Builder &b, Lit l) {
  const Node &n = b.circuit().nodes[l.node()];
  return n.kind == NodeKind::And ? &n : nullptr;
}

} // namespace

Circuit pass_strash(const Circuit &c) {
  return rebuild(c, {.hash = true, .simplify = false},
                 [](Builder &b, uint32_t, Lit x, Lit y) { return b.land(x, y); });
}

Circuit pass_const_prop(const Circuit &c) {
  return rebuild(c, {.hash = true, .simplify = true},
                 [](Builder &b, uint32_t, Lit x, Lit y) { return b.land(x, y); });
}

Circuit pass_double_neg(const Circuit &c) {
  // Buffers are AND(x, x) and AND(x, 1); collapsing them lets the complement
  // flags on either side of the buffer cancel.
  return rebuild(c, {.hash = false, .simplify = false},
                 [](Builder &b, uint32_t, Lit x, Lit y) {
                   if (x == y || y == Lit::constant(true))
                     return x;
                   if (x == Lit::constant(true))
                     return y;
                   return b.land(x, y);
                 });
}

Circuit pass_balance(const Circuit &c) {
  const auto fanout = fanout_counts(c);
  std::vector<Lit> map;
  Builder b(c, {.hash = true, .simplify = true}, map);
  for (uint32_t id : topo_order(c, TopoMethod::BFS)) {
    const Node &root = c.nodes[id];
    if (root.kind != NodeKind::And)
      continue;
    // Leaves of the supergate: expand through plain, single-fanout ANDs.
    std::vector<Lit> leaves;
    std::vector<Lit> stack{root.fanins[0], root.fanins[1]};
    while (!stack.empty()) {
      const Lit f = stack.back();
      stack.pop_back();
      const Node &n = c.nodes[f.node()];
      if (!f.complemented() && n.kind == NodeKind::And && fanout[f.node()] == 1) {
        stack.push_back(n.fanins[0]);
        stack.push_back(n.fanins[1]);
      } else {
        leaves.push_back(map[f.node()] ^ f.complemented());
      }
    }
    std::sort(leaves.begin(), leaves.end());
    leaves.erase(std::unique(leaves.begin(), leaves.end()), leaves.end());
    bool zero = false;
    for (size_t i = 0; i + 1 < leaves.size(); ++i)
      zero = zero || leaves[i + 1] == !leaves[i];
    if (zero || (!leaves.empty() && leaves.front() == Lit::constant(false))) {
      map[id] = Lit::constant(false);
      continue;
    }
    std::erase(leaves, Lit::constant(true));
    if (leaves.empty()) {
      map[id] = Lit::constant(true);
      continue;
    }
    // Pair the two shallowest operands until one remains.
    using Item = std::tuple<uint32_t, uint32_t, uint32_t>; // level, seq, raw literal
    std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
    uint32_t seq = 0;
    for (Lit l : leaves)
      heap.emplace(b.level(l), seq++, l.raw());
    while (heap.size() > 1) {
      const Lit x = Lit::from_raw(std::get<2>(heap.top()));
      heap.pop();
      const Lit y = Lit::from_raw(std::get<2>(heap.top()));
      heap.pop();
      const Lit z = b.land(x, y);
      heap.emplace(b.level(z), seq++, z.raw());
    }
    map[id] = Lit::from_raw(std::get<2>(heap.top()));
  }
  std::vector<Lit> outs;
  for (Lit o : c.outputs)
    outs.push_back(map[o.node()] ^ o.complemented());
  return b.finish(c, outs);
}

Circuit pass_demorgan(const Circuit &c, uint64_t seed) {
  SplitMix64 rng(derive_seed(seed, {0x646du}));
  const auto sites = pick_sites(c, rng, 0.25);
  return rebuild(c, {.hash = true, .simplify = true}, [&](Builder &b, uint32_t id, Lit x, Lit y) {
    if (!sites[id])
      return b.land(x, y);
    std::vector<std::function<Lit()>> moves;
    for (int side = 0; side < 2; ++side) {
      const Lit u = side ? y : x, v = side ? x : y;
      const Node *inner = u.complemented() ? and_node(b, u) : nullptr;
      if (!inner)
        continue;
      const Lit p = inner->fanins[0], q = inner->fanins[1];
      // v & !(p & q)  =  !(!(v & !p) & !(v & !q))
      moves.push_back([&b, v, p, q] { return !b.land(!b.land(v, !p), !b.land(v, !q)); });
      // v & !(v & q)  =  v & !q
      if (p == v || q == v) {
        const Lit rest = p == v ? q : p;
        moves.push_back([&b, v, rest] { return b.land(v, !rest); });
      }
    }
    const Node *nx = x.complemented() ? and_node(b, x) : nullptr;
    const Node *ny = y.complemented() ? and_node(b, y) : nullptr;
    if (nx && ny) {
      // !(s & u) & !(s & w)  =  !(s & !(!u & !w))
      for (int i = 0; i < 2; ++i)
        for (int j = 0; j < 2; ++j)
          if (nx->fanins[i] == ny->fanins[j]) {
            const Lit s = nx->fanins[i], u = nx->fanins[1 - i], w = ny->fanins[1 - j];
            moves.push_back([&b, s, u, w] { return !b.land(s, !b.land(!u, !w)); });
          }
    }
    if (x.complemented() && y.complemented()) {
      // !a & !b  =  !a & !(!a & b)
      moves.push_back([&b, x, y] { return b.land(x, !b.land(x, !y)); });
    }
    if (moves.empty())
      return b.land(x, y);
    return moves[rng.below(moves.size())]();
  });
}

// ------------------------------------------------------------ rewrite library

namespace {

constexpr uint8_t kVarMask[3] = {0xaa, 0xcc, 0xf0};

struct MiniBuilder {
  LibraryImpl impl;
  std::map<std::pair<uint8_t, uint8_t>, uint8_t> table;

  uint8_t land(uint8_t a, uint8_t b) {
    if (a > b)
      std::swap(a, b);
    if (a == 0 || (a ^ 1) == b)
      return 0;
    if (a == 1 || a == b)
      return b;
    if (auto it = table.find({a, b}); it != table.end())
      return it->second;
    impl.steps.push_back({a, b});
    const auto r = static_cast<uint8_t>(8 + 2 * (impl.steps.size() - 1));
    table.emplace(std::pair{a, b}, r);
    return r;
  }
  uint8_t lor(uint8_t a, uint8_t b) { return land(a ^ 1, b ^ 1) ^ 1; }
};

uint8_t var_lit(int v, bool neg) { return static_cast<uint8_t>(2 + 2 * v + (neg ? 1 : 0)); }

uint8_t cofactor(uint8_t tt, int v, bool value) {
  const uint8_t m = kVarMask[v];
  const int s = 1 << v;
  return value ? static_cast<uint8_t>((tt & m) | ((tt & m) >> s))
               : static_cast<uint8_t>((tt & ~m) | ((tt & ~m) << s));
}

bool depends_on(uint8_t tt, int v) { return cofactor(tt, v, true) != cofactor(tt, v, false); }

uint8_t shannon(MiniBuilder &mb, uint8_t tt, const std::array<int, 3> &order, size_t at) {
  if (tt == 0x00)
    return 0;
  if (tt == 0xff)
    return 1;
  for (int v = 0; v < 3; ++v) {
    if (tt == kVarMask[v])
      return var_lit(v, false);
    if (tt == static_cast<uint8_t>(~kVarMask[v]))
      return var_lit(v, true);
  }
  while (!depends_on(tt, order[at]))
    ++at;
  const int v = order[at];
  const uint8_t f1 = cofactor(tt, v, true), f0 = cofactor(tt, v, false);
  const uint8_t x = var_lit(v, false);
  const uint8_t b1 = shannon(mb, f1, order, at + 1);
  const uint8_t b0 = shannon(mb, f0, order, at + 1);
  return mb.lor(mb.land(x, b1), mb.land(x ^ 1, b0));
}

uint8_t sop(MiniBuilder &mb, uint8_t tt, bool product_of_sums) {
  const uint8_t target = product_of_sums ? static_cast<uint8_t>(~tt) : tt;
  std::vector<int> support;
  for (int v = 0; v < 3; ++v)
    if (depends_on(tt, v))
      support.push_back(v);
  uint8_t acc = 0;
  for (int k = 0; k < 8; ++k) {
    if (!((target >> k) & 1))
      continue;
    bool canonical = true;
    for (int v = 0; v < 3; ++v)
      if (std::find(support.begin(), support.end(), v) == support.end() && ((k >> v) & 1))
        canonical = false;
    if (!canonical)
      continue;
    uint8_t term = 1;
    for (int v : support)
      term = mb.land(term, var_lit(v, !((k >> v) & 1)));
    acc = mb.lor(acc, term);
  }
  return product_of_sums ? acc ^ 1 : acc;
}

std::string expression(const LibraryImpl &impl, uint8_t lit) {
  std::string neg = (lit & 1) ? "!" : "";
  if (lit < 2)
    return lit ? "1" : "0";
  if (lit < 8)
    return neg + static_cast<char>('a' + (lit - 2) / 2);
  const auto &s = impl.steps[(lit - 8) / 2];
  std::string l = expression(impl, s[0]), r = expression(impl, s[1]);
  if (l > r)
    std::swap(l, r);
  return neg + "(" + l + "&" + r + ")";
}

std::array<std::vector<LibraryImpl>, 256> build_library() {
  std::array<std::vector<LibraryImpl>, 256> lib;
  std::array<int, 3> order{0, 1, 2};
  std::vector<std::array<int, 3>> orders;
  do
    orders.push_back(order);
  while (std::next_permutation(order.begin(), order.end()));

  for (int t = 0; t < 256; ++t) {
    const auto tt = static_cast<uint8_t>(t);
    std::vector<LibraryImpl> candidates;
    for (const auto &o : orders) {
      MiniBuilder mb;
      mb.impl.output = shannon(mb, tt, o, 0);
      candidates.push_back(std::move(mb.impl));
    }
    for (bool pos : {false, true}) {
      MiniBuilder mb;
      mb.impl.output = sop(mb, tt, pos);
      candidates.push_back(std::move(mb.impl));
    }
    std::set<std::string> seen;
    for (auto &cand : candidates) {
      if (evaluate(cand) != tt)
        fail(ErrorCode::Internal, "rewrite library entry computes the wrong function");
      if (seen.insert(expression(cand, cand.output)).second && lib[t].size() < 4)
        lib[t].push_back(std::move(cand));
    }
  }
  return lib;
}

} // namespace

uint8_t evaluate(const LibraryImpl &impl) {
  std::vector<uint8_t> vals;
  auto value = [&](uint8_t lit) -> uint8_t {
    uint8_t v;
    if (lit < 2)
      v = 0;
    else if (lit < 8)
      v = kVarMask[(lit - 2) / 2];
    else
      v = vals[(lit - 8) / 2];
    return (lit & 1) ? static_cast<uint8_t>(~v) : v;
  };
  for (const auto &s : impl.steps)
    vals.push_back(value(s[0]) & value(s[1]));
  return value(impl.output);
}

const std::vector<LibraryImpl> &library_entries(uint8_t table) {
  static const auto lib = build_library();
  return lib[table];
}

Circuit pass_local_rewrite(const Circuit &c, uint64_t seed) {
  SplitMix64 rng(derive_seed(seed, {0x6c72u}));
  const auto sites = pick_sites(c, rng, 0.25);
  // Cuts are taken in the original circuit; leaves are then looked up in the
  // rebuilt one through `map`.
  std::vector<Lit> map;
  Builder b(c, {.hash = true, .simplify = true}, map);
  for (uint32_t id : topo_order(c, TopoMethod::BFS)) {
    const Node &n = c.nodes[id];
    if (n.kind != NodeKind::And)
      continue;
    const Lit x = map[n.fanins[0].node()] ^ n.fanins[0].complemented();
    const Lit y = map[n.fanins[1].node()] ^ n.fanins[1].complemented();
    if (!sites[id]) {
      map[id] = b.land(x, y);
      continue;
    }

    std::vector<uint32_t> leaves{n.fanins[0].node(), n.fanins[1].node()};
    std::vector<uint32_t> cone{id};
    auto normalize = [](std::vector<uint32_t> &v) {
      std::sort(v.begin(), v.end());
      v.erase(std::unique(v.begin(), v.end()), v.end());
    };
    normalize(leaves);
    const size_t target = 2 + rng.below(2);
    while (cone.size() < target) {
      std::vector<std::vector<uint32_t>> options;
      std::vector<uint32_t> expanded;
      for (uint32_t l : leaves) {
        if (c.nodes[l].kind != NodeKind::And)
          continue;
        std::vector<uint32_t> next;
        for (uint32_t k : leaves)
          if (k != l)
            next.push_back(k);
        next.push_back(c.nodes[l].fanins[0].node());
        next.push_back(c.nodes[l].fanins[1].node());
        normalize(next);
        if (next.size() <= 3) {
          options.push_back(std::move(next));
          expanded.push_back(l);
        }
      }
      if (options.empty())
        break;
      const size_t pick = rng.below(options.size());
      leaves = std::move(options[pick]);
      cone.push_back(expanded[pick]);
    }

    // Function of the cone root over its leaves.
    std::map<uint32_t, uint8_t> value;
    for (size_t i = 0; i < leaves.size(); ++i)
      value[leaves[i]] = kVarMask[i];
    std::sort(cone.begin(), cone.end());
    std::function<uint8_t(uint32_t)> eval = [&](uint32_t node) -> uint8_t {
      if (auto it = value.find(node); it != value.end())
        return it->second;
      const Node &cn = c.nodes[node];
      auto fv = [&](Lit f) {
        const uint8_t v = eval(f.node());
        return f.complemented() ? static_cast<uint8_t>(~v) : v;
      };
      const uint8_t r = fv(cn.fanins[0]) & fv(cn.fanins[1]);
      value[node] = r;
      return r;
    };
    const uint8_t tt = eval(id);
    const auto &entries = library_entries(tt);
    const LibraryImpl &impl = entries[rng.below(entries.size())];

    std::vector<Lit> step_lits;
    auto resolve = [&](uint8_t lit) {
      Lit r;
      if (lit < 2)
        r = Lit::constant(false);
      else if (lit < 8)
        r = map[leaves[(lit - 2) / 2]];
      else
        r = step_lits[(lit - 8) / 2];
      return r ^ ((lit & 1) != 0);
    };
    for (const auto &s : impl.steps)
      step_lits.push_back(b.land(resolve(s[0]), resolve(s[1])));
    map[id] = resolve(impl.output);
  }
  std::vector<Lit> outs;
  for (Lit o : c.outputs)
    outs.push_back(map[o.node()] ^ o.complemented());
  return b.finish(c, outs);
}

// ------------------------------------------------------------------- recipes

Circuit run_pass(const Circuit &c, PassKind kind, uint64_t seed) {
  switch (kind) {
  case PassKind::Strash: return pass_strash(c);
  case PassKind::ConstProp: return pass_const_prop(c);
  case PassKind::DoubleNegElim: return pass_double_neg(c);
  case PassKind::Balance: return pass_balance(c);
  case PassKind::DeMorganRewrite: return pass_demorgan(c, seed);
  case PassKind::LocalRewrite: return pass_local_rewrite(c, seed);
  }
  fail(ErrorCode::Internal, "unknown pass kind");
}

OptRecipe random_recipe(uint64_t seed, size_t min_len, size_t max_len) {
  if (min_len < 1 || min_len > max_len)
    fail(ErrorCode::InvalidArgument, "recipe length bounds need 1 <= min <= max");
  SplitMix64 rng(derive_seed(seed, {0x726370u}));
  OptRecipe r;
  r.seed = seed;
  const size_t len = min_len + rng.below(max_len - min_len + 1);
  for (size_t k = 0; k < len; ++k)
    r.passes.push_back(static_cast<PassKind>(rng.below(kNumPassKinds)));
  return r;
}

Circuit run_recipe(const Circuit &c, const OptRecipe &recipe) {
  Circuit cur = c;
  for (size_t k = 0; k < recipe.passes.size(); ++k)
    cur = run_pass(cur, recipe.passes[k], derive_seed(recipe.seed, {k}));
  return cur;
}

OptResult random_optimize(const Circuit &c, uint64_t seed, size_t min_len, size_t max_len) {
  OptResult result;
  for (unsigned attempt = 0; attempt < kMaxRecipeAttempts; ++attempt) {
    result.recipe = random_recipe(derive_seed(seed, {attempt}), min_len, max_len);
    result.circuit = run_recipe(c, result.recipe);
    result.attempts = attempt + 1;
    result.distinct = !structurally_equal(result.circuit, c);
    if (result.distinct)
      break;
  }
  return result;
}

} // namespace bacc
