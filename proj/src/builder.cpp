// SPDX-License-Identifier: Apache-2.0
#include "builder.hpp"

#include <algorithm>

namespace bacc {

Builder::Builder(const Circuit &shape, Options options, std::vector<Lit> &map)
    : options_(options) {
  out_.name = shape.name;
  map.assign(shape.nodes.size(), Lit::none());
  map[0] = Lit::constant(false);
  for (size_t i = 0; i < shape.inputs.size(); ++i)
    map[shape.inputs[i]] =
        out_.add_input(i < shape.input_names.size() ? shape.input_names[i] : "");
  level_.assign(out_.nodes.size(), 0);
}

Lit Builder::land(Lit a, Lit b) {
  if (a > b)
    std::swap(a, b);
  if (options_.simplify) {
    if (a == Lit::constant(false) || a == !b)
      return Lit::constant(false);
    if (a == Lit::constant(true) || a == b)
      return b;
  }
  const uint64_t key = (uint64_t{a.raw()} << 32) | b.raw();
  if (options_.hash)
    if (auto it = table_.find(key); it != table_.end())
      return it->second;
  const Lit r = out_.add_and(a, b);
  level_.push_back(1 + std::max(level_[a.node()], level_[b.node()]));
  if (options_.hash)
    table_.emplace(key, r);
  return r;
}

Circuit Builder::finish(const Circuit &shape, const std::vector<Lit> &outputs) {
  for (size_t i = 0; i < outputs.size(); ++i)
    out_.add_output(outputs[i], i < shape.output_names.size() ? shape.output_names[i] : "");
  return cleanup(out_);
}

} // namespace bacc
