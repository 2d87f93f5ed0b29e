// SPDX-License-Identifier: Apache-2.0
#include "bacc/aig.hpp"

#include <algorithm>
#include <deque>
#include <map>
#include <tuple>

#include "bacc/error.hpp"

namespace bacc {

Circuit::Circuit() { nodes.push_back(Node{NodeKind::ConstFalse, {}}); }

size_t Circuit::num_ands() const {
  return static_cast<size_t>(std::count_if(
      nodes.begin(), nodes.end(),
      [](const Node &n) { return n.kind == NodeKind::And; }));
}

Lit Circuit::add_input(std::string input_name) {
  const auto id = static_cast<uint32_t>(nodes.size());
  nodes.push_back(Node{NodeKind::PrimaryInput, {}});
  inputs.push_back(id);
  if (!input_name.empty() || !input_names.empty()) {
    input_names.resize(inputs.size() - 1);
    input_names.push_back(std::move(input_name));
  }
  return Lit::make(id);
}

Lit Circuit::add_and(Lit a, Lit b) {
  const auto id = static_cast<uint32_t>(nodes.size());
  nodes.push_back(Node{NodeKind::And, {a, b}});
  return Lit::make(id);
}

void Circuit::add_output(Lit driver, std::string output_name) {
  outputs.push_back(driver);
  if (!output_name.empty() || !output_names.empty()) {
    output_names.resize(outputs.size() - 1);
    output_names.push_back(std::move(output_name));
  }
}

std::string Circuit::input_name(size_t i) const {
  if (i < input_names.size() && !input_names[i].empty())
    return input_names[i];
  return "i" + std::to_string(i);
}

std::string Circuit::output_name(size_t i) const {
  if (i < output_names.size() && !output_names[i].empty())
    return output_names[i];
  return "o" + std::to_string(i);
}

// ---------------------------------------------------------------- validation

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
  case ViolationKind::DanglingReference: return "DanglingReference";
  case ViolationKind::CycleDetected: return "CycleDetected";
  case ViolationKind::BadArity: return "BadArity";
  case ViolationKind::MissingConstant: return "MissingConstant";
  case ViolationKind::DuplicateConstant: return "DuplicateConstant";
  case ViolationKind::NoInputs: return "NoInputs";
  case ViolationKind::NoOutputs: return "NoOutputs";
  }
  return "Unknown";
}

std::vector<Violation> validate(const Circuit &c) {
  std::vector<Violation> out;
  const auto n = static_cast<uint32_t>(c.nodes.size());
  auto in_range = [&](Lit l) { return !l.is_none() && l.node() < n; };

  if (n == 0 || c.nodes[0].kind != NodeKind::ConstFalse)
    out.push_back({ViolationKind::MissingConstant, 0, "node 0 must be the constant"});
  for (uint32_t i = 0; i < n; ++i) {
    const Node &node = c.nodes[i];
    switch (node.kind) {
    case NodeKind::ConstFalse:
    case NodeKind::PrimaryInput:
      if (i > 0 && node.kind == NodeKind::ConstFalse)
        out.push_back({ViolationKind::DuplicateConstant, i, "second constant node"});
      if (!node.fanins[0].is_none() || !node.fanins[1].is_none())
        out.push_back({ViolationKind::BadArity, i, "source node with fan-ins"});
      break;
    case NodeKind::And:
      for (Lit f : node.fanins) {
        if (f.is_none())
          out.push_back({ViolationKind::BadArity, i, "AND node needs two fan-ins"});
        else if (!in_range(f))
          out.push_back({ViolationKind::DanglingReference, i,
                         "fan-in references node " + std::to_string(f.node())});
      }
      break;
    }
  }

  std::vector<uint8_t> is_declared(n, 0);
  for (uint32_t id : c.inputs) {
    if (id >= n || c.nodes[id].kind != NodeKind::PrimaryInput) {
      out.push_back({ViolationKind::DanglingReference, id, "input slot is not a PI node"});
      continue;
    }
    ++is_declared[id];
  }
  for (uint32_t i = 0; i < n; ++i)
    if (c.nodes[i].kind == NodeKind::PrimaryInput && is_declared[i] != 1)
      out.push_back({ViolationKind::BadArity, i, "PI must be declared exactly once"});
  for (Lit o : c.outputs)
    if (!in_range(o))
      out.push_back({ViolationKind::DanglingReference, o.is_none() ? 0 : o.node(),
                     "output driver out of range"});
  if (c.inputs.empty())
    out.push_back({ViolationKind::NoInputs, 0, "circuit has no inputs"});
  if (c.outputs.empty())
    out.push_back({ViolationKind::NoOutputs, 0, "circuit has no outputs"});

  // Cycle detection over well-formed AND edges: iterative three-color DFS.
  std::vector<uint8_t> color(n, 0);
  for (uint32_t root = 0; root < n; ++root) {
    if (color[root] != 0)
      continue;
    std::vector<std::pair<uint32_t, int>> stack{{root, 0}};
    color[root] = 1;
    while (!stack.empty()) {
      auto &[id, next] = stack.back();
      const Node &node = c.nodes[id];
      if (node.kind == NodeKind::And && next < 2) {
        Lit f = node.fanins[next++];
        if (!in_range(f))
          continue;
        const uint32_t child = f.node();
        if (color[child] == 1) {
          out.push_back({ViolationKind::CycleDetected, child,
                         "cycle through node " + std::to_string(child)});
        } else if (color[child] == 0) {
          color[child] = 1;
          stack.emplace_back(child, 0);
        }
        continue;
      }
      color[id] = 2;
      stack.pop_back();
    }
  }
  return out;
}

void require_valid(const Circuit &c) {
  const auto violations = validate(c);
  if (violations.empty())
    return;
  const Violation &v = violations.front();
  ErrorCode code = ErrorCode::InvalidArgument;
  if (v.kind == ViolationKind::DanglingReference)
    code = ErrorCode::DanglingReference;
  else if (v.kind == ViolationKind::CycleDetected)
    code = ErrorCode::CycleDetected;
  fail(code, std::string(to_string(v.kind)) + " at node " +
                 std::to_string(v.node) + ": " + v.detail);
}

// ------------------------------------------------------------------ ordering

std::vector<uint32_t> fanout_counts(const Circuit &c) {
  std::vector<uint32_t> counts(c.nodes.size(), 0);
  for (const Node &node : c.nodes)
    if (node.kind == NodeKind::And)
      for (Lit f : node.fanins)
        ++counts[f.node()];
  for (Lit o : c.outputs)
    ++counts[o.node()];
  return counts;
}

namespace {

// Fan-out adjacency with multiplicity folded: (target, edge count), targets
// ascending.
std::vector<std::vector<std::pair<uint32_t, uint32_t>>>
fanout_lists(const Circuit &c) {
  std::vector<std::vector<std::pair<uint32_t, uint32_t>>> lists(c.nodes.size());
  for (uint32_t i = 0; i < c.nodes.size(); ++i) {
    const Node &node = c.nodes[i];
    if (node.kind != NodeKind::And)
      continue;
    const uint32_t a = node.fanins[0].node(), b = node.fanins[1].node();
    if (a == b) {
      lists[a].emplace_back(i, 2);
    } else {
      lists[a].emplace_back(i, 1);
      lists[b].emplace_back(i, 1);
    }
  }
  for (auto &l : lists)
    std::sort(l.begin(), l.end());
  return lists;
}

bool ids_topological(const Circuit &c) {
  for (uint32_t i = 0; i < c.nodes.size(); ++i) {
    const Node &node = c.nodes[i];
    if (node.kind == NodeKind::And &&
        (node.fanins[0].node() >= i || node.fanins[1].node() >= i))
      return false;
  }
  return true;
}

} // namespace

std::vector<uint32_t> topo_order(const Circuit &c, TopoMethod method) {
  const auto lists = fanout_lists(c);
  std::vector<uint32_t> pending(c.nodes.size(), 0);
  for (uint32_t i = 0; i < c.nodes.size(); ++i)
    if (c.nodes[i].kind == NodeKind::And)
      pending[i] = 2;

  std::vector<uint32_t> seeds;
  bool const_used = !lists[0].empty();
  for (Lit o : c.outputs)
    const_used = const_used || o.node() == 0;
  if (const_used)
    seeds.push_back(0);
  seeds.insert(seeds.end(), c.inputs.begin(), c.inputs.end());

  std::vector<uint32_t> order;
  order.reserve(c.nodes.size());
  std::deque<uint32_t> work(seeds.begin(), seeds.end());
  std::vector<uint32_t> ready;
  while (!work.empty()) {
    // For DFS the front of the deque is the top of the stack.
    const uint32_t id = work.front();
    work.pop_front();
    order.push_back(id);
    ready.clear();
    for (auto [target, mult] : lists[id]) {
      pending[target] -= mult;
      if (pending[target] == 0)
        ready.push_back(target);
    }
    if (method == TopoMethod::BFS)
      work.insert(work.end(), ready.begin(), ready.end());
    else
      work.insert(work.begin(), ready.begin(), ready.end());
  }
  return order;
}

std::vector<uint32_t> levels(const Circuit &c) {
  std::vector<uint32_t> level(c.nodes.size(), 0);
  for (uint32_t id : topo_order(c, TopoMethod::BFS)) {
    const Node &node = c.nodes[id];
    if (node.kind == NodeKind::And)
      level[id] = 1 + std::max(level[node.fanins[0].node()],
                               level[node.fanins[1].node()]);
  }
  return level;
}

uint32_t depth(const Circuit &c) {
  const auto level = levels(c);
  uint32_t d = 0;
  for (Lit o : c.outputs)
    d = std::max(d, level[o.node()]);
  return d;
}

namespace {

Circuit rebuild_with(const Circuit &c, const std::vector<uint8_t> &keep) {
  std::vector<uint32_t> and_order;
  if (ids_topological(c)) {
    for (uint32_t i = 0; i < c.nodes.size(); ++i)
      if (c.nodes[i].kind == NodeKind::And)
        and_order.push_back(i);
  } else {
    for (uint32_t id : topo_order(c, TopoMethod::BFS))
      if (c.nodes[id].kind == NodeKind::And)
        and_order.push_back(id);
  }

  Circuit out;
  out.name = c.name;
  std::vector<Lit> map(c.nodes.size(), Lit::none());
  map[0] = Lit::constant(false);
  for (size_t i = 0; i < c.inputs.size(); ++i)
    map[c.inputs[i]] = out.add_input(i < c.input_names.size() ? c.input_names[i] : "");
  for (uint32_t id : and_order) {
    if (!keep[id])
      continue;
    const Node &node = c.nodes[id];
    map[id] = out.add_and(map[node.fanins[0].node()] ^ node.fanins[0].complemented(),
                          map[node.fanins[1].node()] ^ node.fanins[1].complemented());
  }
  for (size_t i = 0; i < c.outputs.size(); ++i)
    out.add_output(map[c.outputs[i].node()] ^ c.outputs[i].complemented(),
                   i < c.output_names.size() ? c.output_names[i] : "");
  return out;
}

} // namespace

Circuit renumber(const Circuit &c) {
  return rebuild_with(c, std::vector<uint8_t>(c.nodes.size(), 1));
}

Circuit cleanup(const Circuit &c) {
  std::vector<uint8_t> keep(c.nodes.size(), 0);
  std::vector<uint32_t> stack;
  for (Lit o : c.outputs)
    stack.push_back(o.node());
  while (!stack.empty()) {
    const uint32_t id = stack.back();
    stack.pop_back();
    if (keep[id])
      continue;
    keep[id] = 1;
    const Node &node = c.nodes[id];
    if (node.kind == NodeKind::And) {
      stack.push_back(node.fanins[0].node());
      stack.push_back(node.fanins[1].node());
    }
  }
  return rebuild_with(c, keep);
}

bool structurally_equal(const Circuit &a, const Circuit &b) {
  if (a.num_inputs() != b.num_inputs() || a.num_outputs() != b.num_outputs() ||
      a.nodes.size() != b.nodes.size())
    return false;

  // Hash-cons both circuits into one table of canonical structural ids.
  std::map<std::tuple<uint32_t, uint32_t>, uint32_t> table;
  auto canon = [&](const Circuit &c, std::vector<uint32_t> &and_ids,
                   std::vector<uint32_t> &outs) {
    std::vector<uint32_t> id(c.nodes.size(), 0);
    id[0] = 0;
    for (size_t i = 0; i < c.inputs.size(); ++i)
      id[c.inputs[i]] = static_cast<uint32_t>(1 + i);
    const uint32_t base = static_cast<uint32_t>(1 + c.inputs.size());
    for (uint32_t n : topo_order(c, TopoMethod::BFS)) {
      const Node &node = c.nodes[n];
      if (node.kind != NodeKind::And)
        continue;
      uint32_t x = 2 * id[node.fanins[0].node()] + node.fanins[0].complemented();
      uint32_t y = 2 * id[node.fanins[1].node()] + node.fanins[1].complemented();
      if (x > y)
        std::swap(x, y);
      auto [it, inserted] =
          table.try_emplace({x, y}, base + static_cast<uint32_t>(table.size()));
      id[n] = it->second;
      and_ids.push_back(it->second);
    }
    std::sort(and_ids.begin(), and_ids.end());
    for (Lit o : c.outputs)
      outs.push_back(2 * id[o.node()] + o.complemented());
  };
  std::vector<uint32_t> ands_a, ands_b, outs_a, outs_b;
  canon(a, ands_a, outs_a);
  canon(b, ands_b, outs_b);
  return ands_a == ands_b && outs_a == outs_b;
}

} // namespace bacc
