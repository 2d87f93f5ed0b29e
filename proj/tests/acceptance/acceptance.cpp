// SPDX-License-Identifier: Apache-2.0
//
// Acceptance runner: one PASS/FAIL line per criterion, exit status 1 if any
// fails. Pass criterion numbers as arguments to run a subset.
//
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "bacc/dataset.hpp"
#include "bacc/designs.hpp"
#include "bacc/encode.hpp"
#include "bacc/gnn.hpp"
#include "bacc/optimizer.hpp"
#include "bacc/oracle.hpp"
#include "bacc/random.hpp"
#include "bacc/transform.hpp"
#include "gnn_support.hpp"
#include "graph_iso.hpp"
#include "support.hpp"

using namespace bacc;
namespace fs = std::filesystem;

namespace {

// Tolerances and limits, fixed here.
constexpr double kWitnessSeconds = 1.0;
constexpr size_t kSoundnessPairs = 1000;
constexpr double kSoundnessSeconds = 120.0;
constexpr size_t kClosureRuns = 200;
constexpr size_t kClosureSteps = 8;
constexpr double kClosureSeconds = 120.0;
constexpr size_t kNegationCircuits = 100;
constexpr size_t kGradGraphs = 50;
constexpr double kGradEps = 1e-4;
constexpr double kGradFloor = 1e-7; // denominator floor for near-zero gradients
constexpr double kGradTolerance = 1e-4;
constexpr double kGradSeconds = 60.0;
constexpr size_t kRelabelings = 20;
constexpr double kLogitTolerance = 1e-6;
constexpr uint64_t kDeskDatasetSeed = 1;
constexpr uint64_t kDeskTrainSeeds[] = {1, 2, 3};
constexpr double kDeskMinAccuracy = 0.85;
constexpr double kDeskNegBelowPerm = 0.05;
constexpr double kDeskInverterGain = 0.10;
constexpr double kDeskSeconds = 900.0;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string fmt(const char *f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

// ------------------------------------------------------------ 1

Outcome witness() {
  const auto t0 = std::chrono::steady_clock::now();
  const Circuit f = npn_pair_f(), g = npn_pair_g();
  const auto t = matching_equivalent(f, g);
  const double sec = seconds_since(t0);
  if (!t)
    return {false, "no witness found"};
  bool ok = testing::same_function(apply(g, *t), f);
  // g(x1, x2, x3) = f(!x3, x2, !x1) point by point.
  for (uint64_t k = 0; k < 8; ++k) {
    const uint64_t x1 = k & 1, x2 = (k >> 1) & 1, x3 = (k >> 2) & 1;
    const uint64_t moved = (x3 ^ 1) | (x2 << 1) | ((x1 ^ 1) << 2);
    ok = ok && testing::eval_naive(g, 0, k) == testing::eval_naive(f, 0, moved);
  }
  ok = ok && t->input_perm == std::vector<uint32_t>{2, 1, 0} &&
       t->input_neg == std::vector<uint8_t>{1, 0, 1};
  return {ok && sec < kWitnessSeconds, fmt("witness %s, %.4f s", to_json(*t).c_str(), sec)};
}

// ------------------------------------------------------------ 2

Outcome space_size() {
  bool ok = transform_space_size(3, 1) == 96;
  size_t cases = 0;
  for (size_t n = 1; n <= 3; ++n)
    for (size_t m = 1; m <= 3; ++m) {
      const auto all = enumerate_transforms(n, m);
      std::set<std::string> unique;
      for (const auto &t : all)
        unique.insert(to_json(t));
      // Direct count: n! * 2^n * m! * 2^m by plain multiplication.
      size_t direct = 1;
      for (size_t k = 2; k <= n; ++k)
        direct *= k;
      for (size_t k = 2; k <= m; ++k)
        direct *= k;
      direct <<= (n + m);
      ok = ok && unique.size() == all.size() && all.size() == direct &&
           transform_space_size(n, m) == direct;
      ++cases;
    }
  return {ok, fmt("size(3,1) = %s, %zu (n, m) pairs match enumeration",
                  transform_space_size(3, 1).str().c_str(), cases)};
}

// ------------------------------------------------------------ 3

Outcome soundness() {
  const auto t0 = std::chrono::steady_clock::now();
  size_t failures = 0, longest = 0, max_inputs = 0;
  for (uint64_t k = 0; k < kSoundnessPairs; ++k) {
    SplitMix64 rng(derive_seed(0x5011d, {k}));
    const size_t n = 1 + rng.below(10), m = 1 + rng.below(4), ands = 4 + rng.below(60);
    const Circuit c = random_circuit(n, m, ands, rng.next());
    const OptRecipe r = random_recipe(rng.next(), 1, 10);
    const Circuit out = run_recipe(c, r);
    failures += !(simulate_exhaustive(c) == simulate_exhaustive(out)) ||
                out.num_inputs() != n || out.num_outputs() != m;
    longest = std::max(longest, r.length());
    max_inputs = std::max(max_inputs, n);
  }
  const double sec = seconds_since(t0);
  return {failures == 0 && sec < kSoundnessSeconds,
          fmt("%zu pairs, %zu failures, up to %zu inputs and %zu passes, %.1f s", kSoundnessPairs,
              failures, max_inputs, longest, sec)};
}

// ------------------------------------------------------------ 4

Outcome closure() {
  const auto t0 = std::chrono::steady_clock::now();
  size_t failures = 0, passes = 0, transforms = 0;
  for (uint64_t run = 0; run < kClosureRuns; ++run) {
    SplitMix64 rng(derive_seed(0xc705e, {run}));
    Circuit c = random_circuit(4, 2, 8 + rng.below(24), rng.next());
    const CanonicalKey key = canonical_key(c);
    for (size_t step = 0; step < kClosureSteps; ++step) {
      if (rng.coin()) {
        c = run_pass(c, static_cast<PassKind>(rng.below(kNumPassKinds)), rng.next());
        ++passes;
      } else {
        const auto t = random_transform(4, 2, TransformKind::NegPerm, rng.next());
        c = apply(c, t);
        failures += !(canonical_key(c) == key);
        if (rng.coin())
          c = apply(c, invert(t));
        ++transforms;
      }
      failures += !(canonical_key(c) == key);
    }
  }
  const double sec = seconds_since(t0);
  return {failures == 0 && sec < kClosureSeconds,
          fmt("%zu runs, %zu passes, %zu transforms, %zu failures, %.1f s", kClosureRuns, passes,
              transforms, failures, sec)};
}

// ------------------------------------------------------------ 5

Outcome negation_invariance() {
  size_t iso_failures = 0, count_failures = 0, changed = 0;
  const EncodeOptions with{Direction::Bidigraph, InverterMode::With};
  for (uint64_t k = 0; k < kNegationCircuits; ++k) {
    SplitMix64 rng(derive_seed(0x4e6, {k}));
    const size_t n = 2 + rng.below(7), m = 1 + rng.below(3);
    const Circuit c = random_circuit(n, m, 6 + rng.below(40), rng.next());
    const Circuit neg = apply(c, random_transform(n, m, TransformKind::Neg, rng.next()));
    for (auto dir : {Direction::Digraph, Direction::Bidigraph}) {
      const auto a = encode(c, {dir, InverterMode::Without});
      const auto b = encode(neg, {dir, InverterMode::Without});
      // The oracle maps nodes onto nodes with identical feature rows.
      iso_failures += !testing::isomorphic(a, b);
    }
    const auto wa = encode(c, with), wb = encode(neg, with);
    const long delta = static_cast<long>(testing::complemented_edges(neg)) -
                       static_cast<long>(testing::complemented_edges(c));
    count_failures += static_cast<long>(wb.num_nodes) - static_cast<long>(wa.num_nodes) != delta;
    changed += delta != 0;
  }
  return {iso_failures == 0 && count_failures == 0,
          fmt("%zu circuits, %zu non-isomorphic, %zu node-count mismatches, %zu changed inverters",
              kNegationCircuits, iso_failures, count_failures, changed)};
}

// ------------------------------------------------------------ 6

Outcome gradients() {
  const auto t0 = std::chrono::steady_clock::now();
  double worst = 0;
  size_t checked = 0, skipped = 0;
  for (uint64_t k = 0; k < kGradGraphs; ++k) {
    SplitMix64 rng(derive_seed(0x9ad, {k}));
    GnnConfig c;
    c.hidden = 4 + rng.below(5);
    c.seed = rng.next();
    c.weight_decay = 1e-4;
    c.pooling = k % 5 != 4;
    const size_t classes = 2 + rng.below(3);
    const Model m = init_model(kNumFeatures, classes, c);
    const size_t nodes = 3 + rng.below(10);
    const EncodedGraph g = testing::random_graph(nodes, nodes + rng.below(2 * nodes), rng.next());
    const auto r = testing::finite_difference_check({{&g, rng.below(classes)}}, m, kGradEps, kGradFloor);
    worst = std::max(worst, r.max_rel_error);
    checked += r.checked;
    skipped += r.skipped;
  }
  const double sec = seconds_since(t0);
  return {worst < kGradTolerance && checked > 0 && sec < kGradSeconds,
          fmt("%zu graphs, %zu components, %zu skipped at kinks, worst rel err %.3g, %.1f s",
              kGradGraphs, checked, skipped, worst, sec)};
}

// ------------------------------------------------------------ 7

Outcome node_order() {
  std::vector<EncodedGraph> graphs;
  for (const auto &id : desk_design_ids())
    graphs.push_back(encode(builtin_design(id), {Direction::Bidigraph, InverterMode::With}));
  for (uint64_t k = 0; k < 10; ++k)
    graphs.push_back(encode(random_circuit(6, 2, 20 + 3 * k, k), {Direction::Digraph, InverterMode::Without}));
  double worst = 0;
  for (bool pooling : {true, false}) {
    GnnConfig c;
    c.seed = 7;
    c.pooling = pooling;
    const Model m = init_model(kNumFeatures, 10, c);
    for (size_t i = 0; i < graphs.size(); ++i) {
      const auto &g = graphs[i];
      const auto ref = gcn_forward(g, m).logits;
      SplitMix64 rng(derive_seed(0x0de7, {i}));
      for (size_t t = 0; t < kRelabelings; ++t) {
        std::vector<uint32_t> perm(g.num_nodes);
        std::iota(perm.begin(), perm.end(), 0u);
        rng.shuffle(std::span<uint32_t>(perm));
        worst = std::max(worst, (gcn_forward(testing::relabel(g, perm), m).logits - ref)
                                    .cwiseAbs()
                                    .maxCoeff());
      }
    }
  }
  return {worst < kLogitTolerance, fmt("%zu graphs x %zu relabelings x 2 readouts, max |diff| %.3g",
                                       graphs.size(), kRelabelings, worst)};
}

// ------------------------------------------------------------ 8

struct DeskRun {
  double le = 0, neg = 0, perm = 0;
};

Outcome desk_scale() {
  const auto t0 = std::chrono::steady_clock::now();
  std::vector<Circuit> designs;
  for (const auto &id : desk_design_ids())
    designs.push_back(builtin_design(id));
  const auto m = split_dataset(generate_dataset(designs, kDeskDatasetSeed, GenParams{}), SplitConfig{});

  auto run = [&](Direction dir, InverterMode inv) {
    const EncodeOptions enc{dir, inv};
    const auto samples = make_samples(m, enc);
    DeskRun mean;
    for (uint64_t seed : kDeskTrainSeeds) {
      GnnConfig c;
      c.seed = seed;
      c.eval_every = 0;
      const auto r = train(samples, m.num_classes(), c, enc);
      const auto &acc = *r.history.epochs.back().group_accuracy;
      mean.le += acc[static_cast<size_t>(GroupKind::LE)];
      mean.neg += acc[static_cast<size_t>(GroupKind::Neg)];
      mean.perm += acc[static_cast<size_t>(GroupKind::Perm)];
    }
    const double n = static_cast<double>(std::size(kDeskTrainSeeds));
    mean.le /= n;
    mean.neg /= n;
    mean.perm /= n;
    std::printf("    %-9s %-7s LE %.3f  Neg %.3f  Perm %.3f\n", std::string(to_string(dir)).c_str(),
                std::string(to_string(inv)).c_str(), mean.le, mean.neg, mean.perm);
    std::fflush(stdout);
    return mean;
  };
  const DeskRun bi_with = run(Direction::Bidigraph, InverterMode::With);
  const DeskRun bi_without = run(Direction::Bidigraph, InverterMode::Without);
  const DeskRun di_with = run(Direction::Digraph, InverterMode::With);
  const double sec = seconds_since(t0);

  const bool a = bi_with.le >= kDeskMinAccuracy && bi_with.perm >= kDeskMinAccuracy;
  const bool b = bi_with.perm - bi_with.neg >= kDeskNegBelowPerm;
  const bool c = bi_without.neg - bi_with.neg >= kDeskInverterGain;
  const bool d = bi_with.le >= di_with.le;
  return {a && b && c && d && sec < kDeskSeconds,
          fmt("(a) LE %.3f Perm %.3f %s; (b) Perm-Neg %.3f %s; (c) Neg gain %.3f %s; "
              "(d) bi LE %.3f vs di %.3f %s; %.0f s",
              bi_with.le, bi_with.perm, a ? "ok" : "FAIL", bi_with.perm - bi_with.neg,
              b ? "ok" : "FAIL", bi_without.neg - bi_with.neg, c ? "ok" : "FAIL", bi_with.le,
              di_with.le, d ? "ok" : "FAIL", sec)};
}

// ------------------------------------------------------------ 9

std::string slurp(const fs::path &p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

int run_cli(const std::string &args) {
  const std::string cmd = std::string("'") + BACC_EXE + "' " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

Outcome determinism() {
  const fs::path root = fs::temp_directory_path() / "bacc_acceptance_determinism";
  fs::remove_all(root);
  auto q = [](const fs::path &p) { return "'" + p.string() + "'"; };
  bool ok = true;
  for (const char *run : {"a", "b"}) {
    const std::string jobs = run[0] == 'a' ? "1" : "2";
    ok = ok && run_cli("gen --designs desk --per-group 6 --seed 11 --jobs " + jobs + " --out " +
                       q(root / run)) == 0;
    ok = ok && run_cli("train --manifest " + q(root / run / "manifest.json") +
                       " --epochs 3 --seed 5 --inverters with --out " + q(root / run / "t")) == 0;
  }
  const std::string ma = slurp(root / "a" / "manifest.json"), mb = slurp(root / "b" / "manifest.json");
  const std::string ha = slurp(root / "a" / "t" / "history.csv");
  const std::string hb = slurp(root / "b" / "t" / "history.csv");
  const bool same_manifest = !ma.empty() && ma == mb;
  const bool same_history = !ha.empty() && ha == hb;
  const bool same_model = slurp(root / "a" / "t" / "model.json") == slurp(root / "b" / "t" / "model.json");
  fs::remove_all(root);
  return {ok && same_manifest && same_history && same_model,
          fmt("manifest %s (%zu bytes, jobs 1 vs 2), history %s, checkpoint %s",
              same_manifest ? "identical" : "DIFFERS", ma.size(), same_history ? "identical" : "DIFFERS",
              same_model ? "identical" : "DIFFERS")};
}

struct Criterion {
  int id;
  const char *name;
  std::function<Outcome()> fn;
};

} // namespace

int main(int argc, char **argv) {
  const std::vector<Criterion> all{
      {1, "oracle witness for the NPN pair", witness},
      {2, "transform space size", space_size},
      {3, "optimizer soundness", soundness},
      {4, "closure of keys under passes and transforms", closure},
      {5, "negation invariance of the encoding", negation_invariance},
      {6, "gradient check", gradients},
      {7, "node-order invariance", node_order},
      {8, "desk-scale directional reproduction", desk_scale},
      {9, "determinism of gen and train", determinism},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i)
    only.insert(std::atoi(argv[i]));

  int failed = 0;
  for (const auto &c : all) {
    if (!only.empty() && !only.count(c.id))
      continue;
    Outcome o;
    try {
      o = c.fn();
    } catch (const std::exception &e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    std::printf("[%s] %d %s: %s\n", o.pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%s\n", failed ? "acceptance: FAILED" : "acceptance: all criteria passed");
  return failed ? 1 : 0;
}
