// SPDX-License-Identifier: Apache-2.0
//
// Graph views of a circuit for the classifier: explicit inverter nodes,
// removal of one-in/one-out nodes, node features and the normalized
// adjacency used by the convolution layers.
//
#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bacc/aig.hpp"

namespace bacc {

enum class GraphNodeKind : uint8_t { Input, And, Inverter, Output, Const };

struct GraphNode {
  GraphNodeKind kind = GraphNodeKind::And;
  std::vector<uint32_t> fanins; // node indices, always smaller than the node's own
};

/// A circuit with complemented edges replaced by inverter nodes. Every
/// complemented edge gets its own inverter, including output edges.
struct ExplicitCircuit {
  std::vector<GraphNode> nodes;

  size_t count(GraphNodeKind kind) const;
};

ExplicitCircuit materialize_inverters(const Circuit &c);

/// Removes every node with exactly one fan-in and one fan-out and connects its
/// neighbors directly. Complement information is dropped with the inverters.
ExplicitCircuit drop_two_degree(const ExplicitCircuit &g);

enum class Direction { Digraph, Bidigraph };
enum class InverterMode { With, Without };

std::string_view to_string(Direction d);
std::string_view to_string(InverterMode m);
std::optional<Direction> direction_from_string(std::string_view name);
std::optional<InverterMode> inverter_mode_from_string(std::string_view name);

struct EncodeOptions {
  Direction direction = Direction::Bidigraph;
  InverterMode inverters = InverterMode::Without;
  bool reverse = false; // digraph only: aggregate fan-out -> fan-in instead
};

inline constexpr int kNumFeatures = 10;

/// Sparse normalized adjacency with self loops, rows are receivers:
/// out[v] = sum over (v, u, w) of w * in[u].
struct NormAdjacency {
  std::vector<uint32_t> row_ptr;
  std::vector<uint32_t> col;
  std::vector<double> weight;
};

struct EncodedGraph {
  size_t num_nodes = 0;
  std::vector<std::pair<uint32_t, uint32_t>> edges; // (src, dst) message edges
  Eigen::MatrixXd features;                         // num_nodes x kNumFeatures
  NormAdjacency adj;
  EncodeOptions options;
  size_t label = 0;
};

/// Feature columns: one-hot kind (input, and, inverter, output), in-degree and
/// out-degree over their graph maxima, level over depth, fraction of fan-ins
/// and of fan-outs that are inverters, constant 1. A constant node has an
/// all-zero one-hot.
EncodedGraph encode(const Circuit &c, const EncodeOptions &options, size_t label = 0);
EncodedGraph encode(const ExplicitCircuit &g, const EncodeOptions &options, size_t label = 0);

/// Weight c_uv = 1 / sqrt((d_u + 1)(d_v + 1)), with d the in-degree over the
/// message edges.
NormAdjacency normalize(size_t num_nodes, const std::vector<std::pair<uint32_t, uint32_t>> &edges);

std::string to_json(const EncodedGraph &g);

} // namespace bacc
