// SPDX-License-Identifier: Apache-2.0
//
// Helpers shared by the classifier tests and the acceptance runner.
//
#pragma once

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

#include "bacc/gnn.hpp"
#include "bacc/random.hpp"

namespace testing {

/// Random graph with features in [0, 1) and about `edges` random edges.
inline bacc::EncodedGraph random_graph(size_t nodes, size_t edges, uint64_t seed) {
  bacc::SplitMix64 rng(seed);
  bacc::EncodedGraph g;
  g.num_nodes = nodes;
  g.features.resize(static_cast<Eigen::Index>(nodes), bacc::kNumFeatures);
  for (Eigen::Index i = 0; i < g.features.size(); ++i)
    g.features.data()[i] = rng.unit();
  for (size_t e = 0; e < edges; ++e) {
    const auto s = static_cast<uint32_t>(rng.below(nodes)), d = static_cast<uint32_t>(rng.below(nodes));
    if (s != d)
      g.edges.emplace_back(s, d);
  }
  g.adj = bacc::normalize(nodes, g.edges);
  return g;
}

/// Same graph with node v renamed to perm[v].
inline bacc::EncodedGraph relabel(const bacc::EncodedGraph &g, const std::vector<uint32_t> &perm) {
  bacc::EncodedGraph r = g;
  for (size_t v = 0; v < g.num_nodes; ++v)
    r.features.row(perm[v]) = g.features.row(static_cast<Eigen::Index>(v));
  for (auto &[s, d] : r.edges) {
    s = perm[s];
    d = perm[d];
  }
  r.adj = bacc::normalize(r.num_nodes, r.edges);
  return r;
}

struct GradCheck {
  double max_rel_error = 0;
  size_t checked = 0;
  size_t skipped = 0; // steps that crossed a ReLU or Top-K boundary
};

/// Central differences over every parameter component. Components whose
/// perturbation changes the activation pattern are skipped. The relative
/// error is |a - n| / max(|a|, |n|, floor).
inline GradCheck finite_difference_check(const std::vector<bacc::Sample> &batch,
                                         bacc::Model model, double eps, double floor) {
  GradCheck out;
  bacc::Params grad;
  bacc::loss_and_grad(batch, model, &grad);
  auto pattern = [&](const bacc::Model &m) {
    std::vector<uint8_t> all;
    for (const auto &s : batch) {
      auto p = bacc::activation_pattern(*s.graph, m);
      all.insert(all.end(), p.begin(), p.end());
    }
    return all;
  };
  const auto base = pattern(model);
  for (size_t i = 0; i < bacc::kNumParams; ++i)
    for (Eigen::Index k = 0; k < model.params[i].size(); ++k) {
      double &w = model.params[i].data()[k];
      const double saved = w;
      w = saved + eps;
      const bool same_plus = pattern(model) == base;
      const double up = bacc::loss_and_grad(batch, model, nullptr);
      w = saved - eps;
      const bool same_minus = pattern(model) == base;
      const double down = bacc::loss_and_grad(batch, model, nullptr);
      w = saved;
      if (!same_plus || !same_minus) {
        ++out.skipped;
        continue;
      }
      const double numeric = (up - down) / (2 * eps);
      const double analytic = grad[i].data()[k];
      const double denom = std::max({std::abs(numeric), std::abs(analytic), floor});
      out.max_rel_error = std::max(out.max_rel_error, std::abs(numeric - analytic) / denom);
      ++out.checked;
    }
  return out;
}

} // namespace testing
