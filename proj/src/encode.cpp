// SPDX-License-Identifier: Apache-2.0
#include "bacc/encode.hpp"

#include <algorithm>
#include <cmath>

#include "bacc/error.hpp"
#include "json_util.hpp"

namespace bacc {

size_t ExplicitCircuit::count(GraphNodeKind kind) const {
  return static_cast<size_t>(std::count_if(nodes.begin(), nodes.end(),
                                           [&](const GraphNode &n) { return n.kind == kind; }));
}

ExplicitCircuit materialize_inverters(const Circuit &c) {
  require_valid(c);
  ExplicitCircuit g;
  constexpr uint32_t kNone = UINT32_MAX;
  std::vector<uint32_t> index(c.nodes.size(), kNone);
  auto add = [&](GraphNodeKind kind, std::vector<uint32_t> fanins) {
    g.nodes.push_back({kind, std::move(fanins)});
    return static_cast<uint32_t>(g.nodes.size() - 1);
  };
  for (uint32_t pi : c.inputs)
    index[pi] = add(GraphNodeKind::Input, {});

  bool const_used = std::any_of(c.outputs.begin(), c.outputs.end(),
                                [](Lit l) { return l.node() == 0; });
  const auto order = topo_order(c, TopoMethod::BFS);
  for (uint32_t id : order)
    if (c.nodes[id].kind == NodeKind::And)
      for (Lit f : c.nodes[id].fanins)
        const_used = const_used || f.node() == 0;
  if (const_used)
    index[0] = add(GraphNodeKind::Const, {});

  auto source = [&](Lit l) {
    const uint32_t src = index[l.node()];
    return l.complemented() ? add(GraphNodeKind::Inverter, {src}) : src;
  };
  for (uint32_t id : order) {
    const Node &n = c.nodes[id];
    if (n.kind != NodeKind::And)
      continue;
    const uint32_t a = source(n.fanins[0]), b = source(n.fanins[1]);
    index[id] = add(GraphNodeKind::And, {a, b});
  }
  for (Lit o : c.outputs)
    add(GraphNodeKind::Output, {source(o)});
  return g;
}

ExplicitCircuit drop_two_degree(const ExplicitCircuit &g) {
  const size_t n = g.nodes.size();
  std::vector<uint32_t> out_degree(n, 0);
  for (const auto &node : g.nodes)
    for (uint32_t f : node.fanins)
      ++out_degree[f];
  std::vector<uint8_t> dropped(n, 0);
  for (size_t v = 0; v < n; ++v)
    dropped[v] = g.nodes[v].fanins.size() == 1 && out_degree[v] == 1;

  ExplicitCircuit r;
  std::vector<uint32_t> index(n, UINT32_MAX);
  for (size_t v = 0; v < n; ++v) {
    if (dropped[v])
      continue;
    GraphNode node{g.nodes[v].kind, {}};
    for (uint32_t f : g.nodes[v].fanins) {
      while (dropped[f])
        f = g.nodes[f].fanins[0];
      node.fanins.push_back(index[f]);
    }
    index[v] = static_cast<uint32_t>(r.nodes.size());
    r.nodes.push_back(std::move(node));
  }
  return r;
}

std::string_view to_string(Direction d) {
  return d == Direction::Digraph ? "digraph" : "bidigraph";
}

std::string_view to_string(InverterMode m) { return m == InverterMode::With ? "with" : "without"; }

std::optional<Direction> direction_from_string(std::string_view name) {
  if (name == "digraph")
    return Direction::Digraph;
  if (name == "bidigraph")
    return Direction::Bidigraph;
  return std::nullopt;
}

std::optional<InverterMode> inverter_mode_from_string(std::string_view name) {
  if (name == "with")
    return InverterMode::With;
  if (name == "without")
    return InverterMode::Without;
  return std::nullopt;
}

NormAdjacency normalize(size_t num_nodes,
                        const std::vector<std::pair<uint32_t, uint32_t>> &edges) {
  std::vector<uint32_t> in_degree(num_nodes, 0);
  for (auto [src, dst] : edges)
    ++in_degree[dst];
  auto c = [&](uint32_t u, uint32_t v) {
    return 1.0 / std::sqrt((in_degree[u] + 1.0) * (in_degree[v] + 1.0));
  };
  std::vector<std::vector<std::pair<uint32_t, double>>> rows(num_nodes);
  for (uint32_t v = 0; v < num_nodes; ++v)
    rows[v].emplace_back(v, c(v, v));
  for (auto [src, dst] : edges)
    rows[dst].emplace_back(src, c(src, dst));

  NormAdjacency adj;
  adj.row_ptr.push_back(0);
  for (auto &row : rows) {
    std::sort(row.begin(), row.end(),
              [](const auto &a, const auto &b) { return a.first < b.first; });
    for (size_t k = 0; k < row.size(); ++k) {
      if (k > 0 && row[k].first == adj.col.back()) {
        adj.weight.back() += row[k].second; // parallel edges add up
        continue;
      }
      adj.col.push_back(row[k].first);
      adj.weight.push_back(row[k].second);
    }
    adj.row_ptr.push_back(static_cast<uint32_t>(adj.col.size()));
  }
  return adj;
}

EncodedGraph encode(const ExplicitCircuit &g, const EncodeOptions &options, size_t label) {
  const size_t n = g.nodes.size();
  std::vector<uint32_t> out_degree(n, 0), inv_fanouts(n, 0), level(n, 0);
  for (const auto &node : g.nodes)
    for (uint32_t f : node.fanins) {
      ++out_degree[f];
      inv_fanouts[f] += node.kind == GraphNodeKind::Inverter;
    }
  uint32_t max_in = 0, max_out = 0, max_level = 0;
  for (size_t v = 0; v < n; ++v) {
    for (uint32_t f : g.nodes[v].fanins)
      level[v] = std::max(level[v], level[f] + 1);
    max_in = std::max(max_in, static_cast<uint32_t>(g.nodes[v].fanins.size()));
    max_out = std::max(max_out, out_degree[v]);
    max_level = std::max(max_level, level[v]);
  }
  auto ratio = [](double a, double b) { return b > 0 ? a / b : 0.0; };

  EncodedGraph e;
  e.num_nodes = n;
  e.options = options;
  e.label = label;
  e.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), kNumFeatures);
  for (size_t v = 0; v < n; ++v) {
    const GraphNode &node = g.nodes[v];
    auto row = e.features.row(static_cast<Eigen::Index>(v));
    if (node.kind != GraphNodeKind::Const)
      row(static_cast<int>(node.kind)) = 1.0;
    size_t inv_fanins = 0;
    for (uint32_t f : node.fanins)
      inv_fanins += g.nodes[f].kind == GraphNodeKind::Inverter;
    row(4) = ratio(node.fanins.size(), max_in);
    row(5) = ratio(out_degree[v], max_out);
    row(6) = ratio(level[v], max_level);
    row(7) = ratio(inv_fanins, node.fanins.size());
    row(8) = ratio(inv_fanouts[v], out_degree[v]);
    row(9) = 1.0;
  }

  for (uint32_t v = 0; v < n; ++v)
    for (uint32_t f : g.nodes[v].fanins) {
      if (options.direction == Direction::Digraph && options.reverse)
        e.edges.emplace_back(v, f);
      else
        e.edges.emplace_back(f, v);
    }
  if (options.direction == Direction::Bidigraph) {
    const size_t forward = e.edges.size();
    for (size_t k = 0; k < forward; ++k)
      e.edges.emplace_back(e.edges[k].second, e.edges[k].first);
  }
  e.adj = normalize(n, e.edges);
  return e;
}

EncodedGraph encode(const Circuit &c, const EncodeOptions &options, size_t label) {
  ExplicitCircuit g = materialize_inverters(c);
  if (options.inverters == InverterMode::Without)
    g = drop_two_degree(g);
  return encode(g, options, label);
}

std::string to_json(const EncodedGraph &g) {
  Json edges = Json::array();
  for (auto [s, d] : g.edges)
    edges.push_back({s, d});
  Json features = Json::array();
  for (Eigen::Index v = 0; v < g.features.rows(); ++v) {
    Json row = Json::array();
    for (Eigen::Index k = 0; k < g.features.cols(); ++k)
      row.push_back(g.features(v, k));
    features.push_back(std::move(row));
  }
  Json adj = Json::array();
  for (size_t v = 0; v + 1 < g.adj.row_ptr.size(); ++v)
    for (uint32_t k = g.adj.row_ptr[v]; k < g.adj.row_ptr[v + 1]; ++k)
      adj.push_back({v, g.adj.col[k], g.adj.weight[k]});
  Json j{{"num_nodes", g.num_nodes},
         {"direction", std::string(to_string(g.options.direction))},
         {"inverters", std::string(to_string(g.options.inverters))},
         {"reverse", g.options.reverse},
         {"label", g.label},
         {"edges", edges},
         {"features", features},
         {"norm_adj", adj}};
  return j.dump() + "\n";
}

} // namespace bacc
