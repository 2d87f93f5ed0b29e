// SPDX-License-Identifier: Apache-2.0
//
// ASCII AIGER ("aag"), combinational subset.
//
#include <charconv>
#include <fstream>
#include <optional>
#include <sstream>

#include "bacc/aig.hpp"
#include "bacc/error.hpp"

namespace bacc {

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r'))
      ++i;
    size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r')
      ++j;
    if (j > i)
      tokens.push_back(line.substr(i, j - i));
    i = j;
  }
  return tokens;
}

std::optional<uint64_t> to_uint(std::string_view s) {
  uint64_t v = 0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    return std::nullopt;
  return v;
}

struct LineReader {
  std::string_view text;
  size_t pos = 0;
  size_t line_no = 0;

  std::optional<std::string_view> next() {
    if (pos >= text.size())
      return std::nullopt;
    size_t end = text.find('\n', pos);
    if (end == std::string_view::npos)
      end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    return line;
  }
};

} // namespace

Circuit parse_aag(std::string_view text) {
  LineReader reader{text};
  auto header_line = reader.next();
  if (!header_line)
    fail(ErrorCode::MalformedHeader, "empty input");
  const auto header = split_ws(*header_line);
  if (header.size() != 6 || header[0] != "aag")
    fail(ErrorCode::MalformedHeader, "expected 'aag M I L O A'");
  uint64_t nums[5];
  for (int k = 0; k < 5; ++k) {
    auto v = to_uint(header[k + 1]);
    if (!v)
      fail(ErrorCode::MalformedHeader, "non-numeric header field");
    nums[k] = *v;
  }
  const uint64_t max_var = nums[0], num_in = nums[1], num_latch = nums[2],
                 num_out = nums[3], num_and = nums[4];
  if (num_latch > 0)
    fail(ErrorCode::LatchesUnsupported, "only combinational AIGER (L = 0) is accepted");
  if (num_in + num_and > max_var)
    fail(ErrorCode::MalformedHeader, "M smaller than I + L + A");
  if (max_var > (uint64_t{1} << 30))
    fail(ErrorCode::MalformedHeader, "M too large");

  auto read_literals = [&](size_t count, const char *what) {
    auto line = reader.next();
    if (!line)
      fail(ErrorCode::MalformedHeader,
           std::string("header promises more ") + what + " lines than present");
    const auto tokens = split_ws(*line);
    if (tokens.size() != count)
      fail(ErrorCode::ParseFailure, "line " + std::to_string(reader.line_no) +
                                        ": expected " + std::to_string(count) +
                                        " literal(s)");
    std::vector<uint32_t> lits;
    for (auto t : tokens) {
      auto v = to_uint(t);
      if (!v)
        fail(ErrorCode::ParseFailure,
             "line " + std::to_string(reader.line_no) + ": bad literal");
      if ((*v >> 1) > max_var)
        fail(ErrorCode::DanglingReference,
             "line " + std::to_string(reader.line_no) + ": literal exceeds M");
      lits.push_back(static_cast<uint32_t>(*v));
    }
    return lits;
  };

  enum class Def : uint8_t { None, Input, And };
  std::vector<Def> def(max_var + 1, Def::None);
  std::vector<uint32_t> input_vars;
  std::vector<uint32_t> output_lits;
  std::vector<std::array<uint32_t, 2>> and_rhs(max_var + 1);
  std::vector<uint32_t> and_vars;

  for (uint64_t i = 0; i < num_in; ++i) {
    const uint32_t lit = read_literals(1, "input")[0];
    if (lit < 2 || (lit & 1u))
      fail(ErrorCode::ParseFailure, "input literal must be even and non-constant");
    if (def[lit >> 1] != Def::None)
      fail(ErrorCode::ParseFailure, "variable defined twice");
    def[lit >> 1] = Def::Input;
    input_vars.push_back(lit >> 1);
  }
  for (uint64_t i = 0; i < num_out; ++i)
    output_lits.push_back(read_literals(1, "output")[0]);
  for (uint64_t i = 0; i < num_and; ++i) {
    const auto lits = read_literals(3, "AND");
    if (lits[0] < 2 || (lits[0] & 1u))
      fail(ErrorCode::ParseFailure, "AND lhs must be even and non-constant");
    const uint32_t var = lits[0] >> 1;
    if (def[var] != Def::None)
      fail(ErrorCode::ParseFailure, "variable defined twice");
    def[var] = Def::And;
    and_rhs[var] = {lits[1], lits[2]};
    and_vars.push_back(var);
  }

  std::vector<std::string> in_names(num_in), out_names(num_out);
  std::string design_name;
  bool any_in_name = false, any_out_name = false;
  while (auto line = reader.next()) {
    if (line->empty())
      continue;
    const char kind = (*line)[0];
    if (kind == 'c') {
      // The first comment line carries the design name when present.
      if (auto comment = reader.next())
        design_name = std::string(*comment);
      break;
    }
    const size_t space = line->find(' ');
    if ((kind != 'i' && kind != 'o' && kind != 'l' && kind != 'b' && kind != 'j' &&
         kind != 'f') ||
        space == std::string_view::npos) {
      // Content after the AND section that is neither symbol nor comment means
      // the header undercounted the body.
      fail(ErrorCode::MalformedHeader,
           "line " + std::to_string(reader.line_no) + ": unexpected content");
    }
    auto index = to_uint(line->substr(1, space - 1));
    const std::string name(line->substr(space + 1));
    if (!index)
      fail(ErrorCode::ParseFailure, "bad symbol table entry");
    if (kind == 'i' && *index < num_in) {
      in_names[*index] = name;
      any_in_name = true;
    } else if (kind == 'o' && *index < num_out) {
      out_names[*index] = name;
      any_out_name = true;
    }
  }

  auto check_ref = [&](uint32_t lit) {
    const uint32_t var = lit >> 1;
    if (var != 0 && def[var] == Def::None)
      fail(ErrorCode::DanglingReference,
           "literal " + std::to_string(lit) + " references an undefined variable");
  };
  for (uint32_t var : and_vars)
    for (uint32_t l : and_rhs[var])
      check_ref(l);
  for (uint32_t l : output_lits)
    check_ref(l);

  Circuit c;
  c.name = design_name;
  std::vector<Lit> map(max_var + 1, Lit::none());
  map[0] = Lit::constant(false);
  for (size_t i = 0; i < input_vars.size(); ++i)
    map[input_vars[i]] = c.add_input(any_in_name ? in_names[i] : "");

  // Post-order DFS in file order; a file already in topological order keeps
  // its AND order.
  std::vector<uint8_t> state(max_var + 1, 0);
  auto resolve = [&](uint32_t lit) { return map[lit >> 1] ^ ((lit & 1u) != 0); };
  for (uint32_t root : and_vars) {
    if (state[root] != 0)
      continue;
    std::vector<std::pair<uint32_t, int>> stack{{root, 0}};
    state[root] = 1;
    while (!stack.empty()) {
      auto &[var, next] = stack.back();
      if (next < 2) {
        const uint32_t child = and_rhs[var][next++] >> 1;
        if (def[child] != Def::And)
          continue;
        if (state[child] == 1)
          fail(ErrorCode::CycleDetected,
               "AND variable " + std::to_string(child) + " depends on itself");
        if (state[child] == 0) {
          state[child] = 1;
          stack.emplace_back(child, 0);
        }
        continue;
      }
      map[var] = c.add_and(resolve(and_rhs[var][0]), resolve(and_rhs[var][1]));
      state[var] = 2;
      stack.pop_back();
    }
  }
  for (size_t i = 0; i < output_lits.size(); ++i)
    c.add_output(resolve(output_lits[i]), any_out_name ? out_names[i] : "");
  require_valid(c);
  return c;
}

std::string write_aag(const Circuit &input) {
  const Circuit c = renumber(input);
  std::ostringstream os;
  const size_t num_in = c.num_inputs();
  os << "aag " << (c.nodes.size() - 1) << ' ' << num_in << " 0 "
     << c.num_outputs() << ' ' << c.num_ands() << '\n';
  for (uint32_t id : c.inputs)
    os << 2 * id << '\n';
  for (Lit o : c.outputs)
    os << o.raw() << '\n';
  for (uint32_t i = 0; i < c.nodes.size(); ++i) {
    const Node &n = c.nodes[i];
    if (n.kind == NodeKind::And)
      os << 2 * i << ' ' << n.fanins[0].raw() << ' ' << n.fanins[1].raw() << '\n';
  }
  for (size_t i = 0; i < c.input_names.size(); ++i)
    if (!c.input_names[i].empty())
      os << 'i' << i << ' ' << c.input_names[i] << '\n';
  for (size_t i = 0; i < c.output_names.size(); ++i)
    if (!c.output_names[i].empty())
      os << 'o' << i << ' ' << c.output_names[i] << '\n';
  if (!c.name.empty())
    os << "c\n" << c.name << '\n';
  return os.str();
}

Circuit read_aag_file(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::MissingFile, "cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_aag(buffer.str());
}

void write_aag_file(const Circuit &c, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    fail(ErrorCode::MissingFile, "cannot write '" + path + "'");
  out << write_aag(c);
}

} // namespace bacc
