// SPDX-License-Identifier: Apache-2.0
#include "bacc/designs.hpp"

#include <charconv>
#include <optional>

#include "bacc/error.hpp"
#include "bacc/random.hpp"

namespace bacc {

namespace {

const Lit kFalse = Lit::constant(false);
const Lit kTrue = Lit::constant(true);

// Gate helpers with constant folding so the generators never emit
// AND nodes with constant fan-ins.
struct Gates {
  Circuit &c;

  Lit and2(Lit a, Lit b) {
    if (a == kFalse || b == kFalse || a == !b)
      return kFalse;
    if (a == kTrue || a == b)
      return b;
    if (b == kTrue)
      return a;
    return c.add_and(a, b);
  }
  Lit or2(Lit a, Lit b) { return !and2(!a, !b); }
  Lit xor2(Lit a, Lit b) {
    if (a.is_const())
      return b ^ (a == kTrue);
    if (b.is_const())
      return a ^ (b == kTrue);
    // Three-AND form: n = ab, xnor = !(a !n) !(b !n).
    const Lit n = and2(a, b);
    return !and2(!and2(a, !n), !and2(b, !n));
  }
  Lit mux(Lit s, Lit hi, Lit lo) { return or2(and2(s, hi), and2(!s, lo)); }

  std::pair<Lit, Lit> full_add(Lit a, Lit b, Lit cin) {
    const Lit p = xor2(a, b);
    const Lit sum = xor2(p, cin);
    const Lit carry = or2(and2(a, b), and2(cin, p));
    return {sum, carry};
  }
};

std::vector<Lit> add_inputs(Circuit &c, const std::string &prefix, size_t count) {
  std::vector<Lit> v;
  for (size_t i = 0; i < count; ++i)
    v.push_back(c.add_input(prefix + std::to_string(i)));
  return v;
}

size_t ceil_log2(size_t v) {
  size_t b = 0;
  while ((size_t{1} << b) < v)
    ++b;
  return b;
}

void require_range(size_t value, size_t lo, size_t hi, const char *what) {
  if (value < lo || value > hi)
    fail(ErrorCode::InvalidArgument, std::string(what) + " parameter must lie in [" +
                                         std::to_string(lo) + ", " + std::to_string(hi) + "]");
}

} // namespace

Circuit full_adder_1() {
  Circuit c;
  c.name = "fulladder1";
  const Lit a = c.add_input("A"), b = c.add_input("B"), cin = c.add_input("Cin");
  const Lit n1 = c.add_and(a, b);
  const Lit n2 = c.add_and(a, !n1);
  const Lit n3 = c.add_and(b, !n1);
  const Lit x = c.add_and(!n2, !n3); // A xnor B
  const Lit n5 = c.add_and(cin, x);
  const Lit n6 = c.add_and(cin, !n5); // Cin & (A ^ B)
  const Lit n7 = c.add_and(x, !n5);
  const Lit s = c.add_and(!n6, !n7);
  const Lit n8 = c.add_and(!n1, !n6);
  c.add_output(s, "SUM");
  c.add_output(!n8, "Cout");
  return c;
}

Circuit full_adder_2() {
  Circuit c;
  c.name = "fulladder2";
  const Lit a = c.add_input("A"), b = c.add_input("B"), cin = c.add_input("Cin");
  const Lit n1 = c.add_and(a, b);
  const Lit n2 = c.add_and(a, !n1);
  const Lit n3 = c.add_and(b, !n1);
  const Lit x = c.add_and(!n2, !n3);
  const Lit n5 = c.add_and(cin, x);
  const Lit n6 = c.add_and(cin, !n5);
  const Lit n7 = c.add_and(x, !n5);
  const Lit s = c.add_and(!n6, !n7);
  const Lit o = c.add_and(!a, !b);   // !(A | B)
  const Lit t = c.add_and(cin, !o);  // Cin & (A | B)
  const Lit n8 = c.add_and(!n1, !t);
  c.add_output(s, "SUM");
  c.add_output(!n8, "Cout");
  return c;
}

Circuit npn_pair_f() {
  Circuit c;
  c.name = "fig6_f";
  const Lit x1 = c.add_input("x1"), x2 = c.add_input("x2"), x3 = c.add_input("x3");
  c.add_output(!c.add_and(!c.add_and(x1, x2), !x3), "f");
  return c;
}

Circuit npn_pair_g() {
  Circuit c;
  c.name = "fig6_g";
  const Lit x1 = c.add_input("x1"), x2 = c.add_input("x2"), x3 = c.add_input("x3");
  c.add_output(!c.add_and(x1, !c.add_and(x2, !x3)), "g");
  return c;
}

Circuit ripple_carry_adder(size_t bits) {
  require_range(bits, 1, 32, "rca");
  Circuit c;
  Gates g{c};
  const auto a = add_inputs(c, "a", bits), b = add_inputs(c, "b", bits);
  Lit carry = kFalse;
  for (size_t i = 0; i < bits; ++i) {
    auto [s, co] = g.full_add(a[i], b[i], carry);
    c.add_output(s, "s" + std::to_string(i));
    carry = co;
  }
  c.add_output(carry, "cout");
  return c;
}

Circuit array_multiplier(size_t bits) {
  require_range(bits, 1, 8, "mult");
  Circuit c;
  Gates g{c};
  const auto a = add_inputs(c, "a", bits), b = add_inputs(c, "b", bits);
  std::vector<Lit> acc(2 * bits, kFalse);
  for (size_t i = 0; i < bits; ++i) {
    Lit carry = kFalse;
    for (size_t j = 0; j < bits; ++j) {
      auto [s, co] = g.full_add(acc[i + j], g.and2(a[j], b[i]), carry);
      acc[i + j] = s;
      carry = co;
    }
    acc[i + bits] = carry;
  }
  for (size_t k = 0; k < acc.size(); ++k)
    c.add_output(acc[k], "p" + std::to_string(k));
  return c;
}

Circuit comparator(size_t bits) {
  require_range(bits, 1, 32, "cmp");
  Circuit c;
  Gates g{c};
  const auto a = add_inputs(c, "a", bits), b = add_inputs(c, "b", bits);
  Lit lt = kFalse, eq = kTrue;
  for (size_t i = 0; i < bits; ++i) {
    const Lit same = !g.xor2(a[i], b[i]);
    lt = g.or2(g.and2(!a[i], b[i]), g.and2(same, lt));
    eq = g.and2(eq, same);
  }
  c.add_output(lt, "lt");
  c.add_output(eq, "eq");
  return c;
}

Circuit multiplexer(size_t select_bits) {
  require_range(select_bits, 1, 4, "mux");
  Circuit c;
  Gates g{c};
  auto level = add_inputs(c, "d", size_t{1} << select_bits);
  const auto s = add_inputs(c, "s", select_bits);
  for (size_t k = 0; k < select_bits; ++k) {
    std::vector<Lit> next;
    for (size_t i = 0; i + 1 < level.size(); i += 2)
      next.push_back(g.mux(s[k], level[i + 1], level[i]));
    level = std::move(next);
  }
  c.add_output(level[0], "y");
  return c;
}

Circuit decoder(size_t bits) {
  require_range(bits, 1, 6, "dec");
  Circuit c;
  Gates g{c};
  const auto x = add_inputs(c, "x", bits);
  for (size_t j = 0; j < (size_t{1} << bits); ++j) {
    Lit term = kTrue;
    for (size_t i = 0; i < bits; ++i)
      term = g.and2(term, x[i] ^ !((j >> i) & 1u));
    c.add_output(term, "y" + std::to_string(j));
  }
  return c;
}

Circuit parity(size_t bits) {
  require_range(bits, 2, 64, "parity");
  Circuit c;
  Gates g{c};
  const auto x = add_inputs(c, "x", bits);
  Lit p = x[0];
  for (size_t i = 1; i < bits; ++i)
    p = g.xor2(p, x[i]);
  c.add_output(p, "p");
  return c;
}

Circuit majority3() {
  Circuit c;
  Gates g{c};
  const Lit a = c.add_input("a"), b = c.add_input("b"), d = c.add_input("c");
  c.add_output(g.or2(g.or2(g.and2(a, b), g.and2(a, d)), g.and2(b, d)), "maj");
  return c;
}

Circuit priority_encoder(size_t bits) {
  require_range(bits, 2, 32, "prio");
  Circuit c;
  Gates g{c};
  const auto x = add_inputs(c, "x", bits);
  std::vector<Lit> hit(bits);
  Lit higher = kFalse;
  for (size_t i = bits; i-- > 0;) {
    hit[i] = g.and2(x[i], !higher);
    higher = g.or2(higher, x[i]);
  }
  for (size_t k = 0; k < ceil_log2(bits); ++k) {
    Lit bit = kFalse;
    for (size_t i = 0; i < bits; ++i)
      if ((i >> k) & 1u)
        bit = g.or2(bit, hit[i]);
    c.add_output(bit, "y" + std::to_string(k));
  }
  c.add_output(higher, "valid");
  return c;
}

Circuit random_circuit(size_t inputs, size_t outputs, size_t ands, uint64_t seed) {
  if (inputs < 1 || outputs < 1 || ands < outputs)
    fail(ErrorCode::InvalidArgument, "random circuit needs n, m >= 1 and ands >= m");
  SplitMix64 rng(derive_seed(seed, {0x726e64u}));
  Circuit c;
  std::vector<Lit> pool;
  for (size_t i = 0; i < inputs; ++i)
    pool.push_back(c.add_input());
  // Half of the picks come from the most recent nodes so depth grows.
  auto pick = [&] {
    const size_t window = std::min(pool.size(), std::max<size_t>(2 * inputs, 4));
    const size_t idx = rng.coin() ? rng.below(pool.size())
                                  : pool.size() - 1 - rng.below(window);
    return pool[idx] ^ rng.coin();
  };
  std::vector<Lit> gates;
  for (size_t k = 0; k < ands; ++k) {
    Lit a = pick(), b = pick();
    while (b.node() == a.node() && pool.size() > 1)
      b = pick();
    const Lit r = c.add_and(a, b);
    pool.push_back(r);
    gates.push_back(r);
  }
  for (size_t j = 0; j < outputs; ++j)
    c.add_output(gates[gates.size() - outputs + j] ^ rng.coin());
  return cleanup(c);
}

namespace {

std::optional<size_t> suffix_number(std::string_view id, std::string_view prefix) {
  if (id.size() <= prefix.size() || id.substr(0, prefix.size()) != prefix)
    return std::nullopt;
  size_t v = 0;
  const auto rest = id.substr(prefix.size());
  auto [p, ec] = std::from_chars(rest.data(), rest.data() + rest.size(), v);
  if (ec != std::errc() || p != rest.data() + rest.size())
    return std::nullopt;
  return v;
}

Circuit resolve(std::string_view id) {
  if (id == "fulladder1")
    return full_adder_1();
  if (id == "fulladder2")
    return full_adder_2();
  if (id == "fig6_f")
    return npn_pair_f();
  if (id == "fig6_g")
    return npn_pair_g();
  if (id == "maj")
    return majority3();
  if (id == "and2" || id == "xor2") {
    Circuit c;
    Gates g{c};
    const Lit a = c.add_input("a"), b = c.add_input("b");
    c.add_output(id == "and2" ? g.and2(a, b) : g.xor2(a, b), "y");
    return c;
  }
  if (id.substr(0, 5) == "rand:") {
    std::vector<uint64_t> fields;
    std::string_view rest = id.substr(5);
    while (!rest.empty()) {
      const size_t colon = rest.find(':');
      const auto tok = rest.substr(0, colon);
      uint64_t v = 0;
      auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
      if (ec != std::errc() || p != tok.data() + tok.size())
        fail(ErrorCode::InvalidArgument, "bad random design id '" + std::string(id) + "'");
      fields.push_back(v);
      rest = colon == std::string_view::npos ? std::string_view{} : rest.substr(colon + 1);
    }
    if (fields.size() != 4)
      fail(ErrorCode::InvalidArgument, "random design id is rand:n:m:ands:seed");
    require_range(fields[0], 1, 64, "rand inputs");
    require_range(fields[1], 1, 64, "rand outputs");
    require_range(fields[2], 1, 100000, "rand ands");
    return random_circuit(fields[0], fields[1], fields[2], fields[3]);
  }
  struct Family {
    std::string_view prefix;
    Circuit (*make)(size_t);
  };
  static const Family families[] = {
      {"rca", ripple_carry_adder}, {"mult", array_multiplier}, {"cmp", comparator},
      {"mux", multiplexer},        {"dec", decoder},          {"parity", parity},
      {"prio", priority_encoder},
  };
  for (const auto &f : families)
    if (auto k = suffix_number(id, f.prefix))
      return f.make(*k);
  fail(ErrorCode::InvalidArgument, "unknown builtin design '" + std::string(id) + "'");
}

} // namespace

Circuit builtin_design(std::string_view id) {
  Circuit c = resolve(id);
  c.name = std::string(id);
  require_valid(c);
  return c;
}

std::vector<std::string> builtin_examples() {
  return {"fulladder1", "fulladder2", "fig6_f", "fig6_g", "and2",   "xor2",
          "maj",        "rca4",       "mult3",  "cmp4",   "mux2",   "dec3",
          "parity6",    "prio8",      "rand:8:2:40:1"};
}

std::vector<std::string> desk_design_ids() {
  return {"fulladder1", "rca2", "mult2",   "cmp3", "mux2",
          "dec3",       "parity5", "maj", "prio4", "rand:6:2:30:11"};
}

} // namespace bacc
