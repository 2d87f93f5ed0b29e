// SPDX-License-Identifier: Apache-2.0
#include "bacc/transform.hpp"

#include <algorithm>
#include <numeric>

#include "bacc/error.hpp"
#include "bacc/random.hpp"
#include "json_util.hpp"

namespace bacc {

namespace {

bool is_permutation_of_iota(const std::vector<uint32_t> &p) {
  std::vector<uint8_t> seen(p.size(), 0);
  for (uint32_t v : p) {
    if (v >= p.size() || seen[v])
      return false;
    seen[v] = 1;
  }
  return true;
}

std::vector<uint32_t> inverse_perm(const std::vector<uint32_t> &p) {
  std::vector<uint32_t> inv(p.size());
  for (uint32_t i = 0; i < p.size(); ++i)
    inv[p[i]] = i;
  return inv;
}

void require_dims(const MatchingTransform &t, size_t n, size_t m) {
  if (t.num_inputs() != n || t.num_outputs() != m)
    fail(ErrorCode::DimensionMismatch,
         "transform is " + std::to_string(t.num_inputs()) + "x" +
             std::to_string(t.num_outputs()) + ", circuit is " + std::to_string(n) + "x" +
             std::to_string(m));
}

} // namespace

bool MatchingTransform::is_identity() const {
  for (uint32_t i = 0; i < input_perm.size(); ++i)
    if (input_perm[i] != i || input_neg[i])
      return false;
  for (uint32_t i = 0; i < output_perm.size(); ++i)
    if (output_perm[i] != i || output_neg[i])
      return false;
  return true;
}

MatchingTransform identity_transform(size_t n, size_t m) {
  MatchingTransform t;
  t.input_perm.resize(n);
  std::iota(t.input_perm.begin(), t.input_perm.end(), 0u);
  t.input_neg.assign(n, 0);
  t.output_perm.resize(m);
  std::iota(t.output_perm.begin(), t.output_perm.end(), 0u);
  t.output_neg.assign(m, 0);
  return t;
}

void require_valid(const MatchingTransform &t) {
  if (t.input_neg.size() != t.input_perm.size() || t.output_neg.size() != t.output_perm.size())
    fail(ErrorCode::InvalidArgument, "negation mask length differs from permutation length");
  if (!is_permutation_of_iota(t.input_perm))
    fail(ErrorCode::InvalidArgument, "input_perm is not a bijection");
  if (!is_permutation_of_iota(t.output_perm))
    fail(ErrorCode::InvalidArgument, "output_perm is not a bijection");
}

Circuit apply(const Circuit &c, const MatchingTransform &t) {
  require_valid(t);
  require_dims(t, c.num_inputs(), c.num_outputs());
  const size_t n = c.num_inputs();
  const auto inv = inverse_perm(t.input_perm);

  Circuit out;
  out.name = c.name;
  std::vector<Lit> slots(n);
  for (size_t j = 0; j < n; ++j)
    slots[j] = out.add_input(c.input_names.empty() ? "" : c.input_name(inv[j]));

  std::vector<Lit> map(c.nodes.size(), Lit::none());
  map[0] = Lit::constant(false);
  for (size_t i = 0; i < n; ++i)
    map[c.inputs[i]] = slots[t.input_perm[i]] ^ (t.input_neg[i] != 0);
  for (uint32_t id : topo_order(c, TopoMethod::BFS)) {
    const Node &node = c.nodes[id];
    if (node.kind != NodeKind::And)
      continue;
    map[id] = out.add_and(map[node.fanins[0].node()] ^ node.fanins[0].complemented(),
                          map[node.fanins[1].node()] ^ node.fanins[1].complemented());
  }
  for (uint32_t id = 0; id < c.nodes.size(); ++id)
    if (map[id].is_none() && c.nodes[id].kind == NodeKind::And)
      fail(ErrorCode::Internal, "node unreachable during apply");

  for (size_t k = 0; k < c.num_outputs(); ++k) {
    const Lit src = c.outputs[t.output_perm[k]];
    out.add_output(map[src.node()] ^ src.complemented() ^ (t.output_neg[k] != 0),
                   c.output_names.empty() ? "" : c.output_name(t.output_perm[k]));
  }
  return out;
}

TruthTable apply(const TruthTable &tt, const MatchingTransform &t) {
  require_valid(t);
  require_dims(t, tt.num_vars, tt.num_funcs());
  const size_t n = tt.num_vars;
  const uint64_t count = uint64_t{1} << n;
  uint64_t neg_mask = 0;
  for (size_t i = 0; i < n; ++i)
    neg_mask |= uint64_t{t.input_neg[i]} << i;

  std::vector<uint64_t> source(count);
  for (uint64_t y = 0; y < count; ++y) {
    uint64_t z = 0;
    for (size_t i = 0; i < n; ++i)
      z |= ((y >> t.input_perm[i]) & 1u) << i;
    source[y] = z ^ neg_mask;
  }

  TruthTable out;
  out.num_vars = n;
  out.bits.assign(tt.num_funcs(), std::vector<uint64_t>(words_for_vars(n), 0));
  for (size_t k = 0; k < tt.num_funcs(); ++k) {
    const size_t from = t.output_perm[k];
    const bool flip = t.output_neg[k] != 0;
    for (uint64_t y = 0; y < count; ++y)
      if (tt.get(from, source[y]) != flip)
        out.bits[k][y >> 6] |= uint64_t{1} << (y & 63);
  }
  return out;
}

MatchingTransform invert(const MatchingTransform &t) {
  require_valid(t);
  MatchingTransform r;
  r.input_perm = inverse_perm(t.input_perm);
  r.input_neg.resize(t.num_inputs());
  for (size_t j = 0; j < t.num_inputs(); ++j)
    r.input_neg[j] = t.input_neg[r.input_perm[j]];
  r.output_perm = inverse_perm(t.output_perm);
  r.output_neg.resize(t.num_outputs());
  for (size_t l = 0; l < t.num_outputs(); ++l)
    r.output_neg[l] = t.output_neg[r.output_perm[l]];
  return r;
}

MatchingTransform compose(const MatchingTransform &t2, const MatchingTransform &t1) {
  require_valid(t1);
  require_valid(t2);
  require_dims(t2, t1.num_inputs(), t1.num_outputs());
  MatchingTransform r;
  const size_t n = t1.num_inputs(), m = t1.num_outputs();
  r.input_perm.resize(n);
  r.input_neg.resize(n);
  for (size_t i = 0; i < n; ++i) {
    r.input_perm[i] = t2.input_perm[t1.input_perm[i]];
    r.input_neg[i] = t1.input_neg[i] ^ t2.input_neg[t1.input_perm[i]];
  }
  r.output_perm.resize(m);
  r.output_neg.resize(m);
  for (size_t l = 0; l < m; ++l) {
    r.output_perm[l] = t1.output_perm[t2.output_perm[l]];
    r.output_neg[l] = t2.output_neg[l] ^ t1.output_neg[t2.output_perm[l]];
  }
  return r;
}

std::string_view to_string(TransformKind kind) {
  switch (kind) {
  case TransformKind::Neg: return "Neg";
  case TransformKind::Perm: return "Perm";
  case TransformKind::NegPerm: return "NP";
  }
  return "?";
}

MatchingTransform random_transform(size_t n, size_t m, TransformKind kind, uint64_t seed,
                                   TransformSides sides) {
  if (n == 0 || m == 0)
    fail(ErrorCode::InvalidArgument, "transform needs n, m >= 1");
  const bool use_in = sides != TransformSides::Outputs;
  const bool use_out = sides != TransformSides::Inputs;
  const bool want_neg = kind != TransformKind::Perm;
  const bool want_perm = kind != TransformKind::Neg;
  const size_t perm_room = (use_in ? n : 1) + (use_out ? m : 1);
  if (kind == TransformKind::Perm && perm_room <= 2)
    return identity_transform(n, m);

  SplitMix64 rng(derive_seed(seed, {0x7472u, static_cast<uint64_t>(kind)}));
  for (;;) {
    MatchingTransform t = identity_transform(n, m);
    if (want_perm) {
      if (use_in)
        rng.shuffle(std::span<uint32_t>(t.input_perm));
      if (use_out)
        rng.shuffle(std::span<uint32_t>(t.output_perm));
    }
    if (want_neg) {
      if (use_in)
        for (auto &b : t.input_neg)
          b = rng.coin() ? 1 : 0;
      if (use_out)
        for (auto &b : t.output_neg)
          b = rng.coin() ? 1 : 0;
    }
    if (!t.is_identity())
      return t;
  }
}

void to_json(Json &j, const MatchingTransform &t) {
  j = Json{{"input_perm", t.input_perm},
           {"input_neg", t.input_neg},
           {"output_perm", t.output_perm},
           {"output_neg", t.output_neg}};
}

void from_json(const Json &j, MatchingTransform &t) {
  t.input_perm = field<std::vector<uint32_t>>(j, "input_perm");
  t.input_neg = field<std::vector<uint8_t>>(j, "input_neg");
  t.output_perm = field<std::vector<uint32_t>>(j, "output_perm");
  t.output_neg = field<std::vector<uint8_t>>(j, "output_neg");
  for (auto b : t.input_neg)
    if (b > 1)
      fail(ErrorCode::SchemaMismatch, "negation masks hold 0 or 1");
  for (auto b : t.output_neg)
    if (b > 1)
      fail(ErrorCode::SchemaMismatch, "negation masks hold 0 or 1");
  require_valid(t);
}

Json parse_json(std::string_view text, const char *what) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    fail(ErrorCode::ParseFailure, std::string(what) + ": " + e.what());
  }
}

std::string to_json(const MatchingTransform &t) { return Json(t).dump(); }

MatchingTransform transform_from_json(std::string_view text) {
  return parse_json(text, "transform").get<MatchingTransform>();
}

} // namespace bacc
