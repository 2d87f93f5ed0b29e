// SPDX-License-Identifier: Apache-2.0
#include "bacc/dataset.hpp"

#include <algorithm>
#include <climits>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "bacc/designs.hpp"
#include "bacc/error.hpp"
#include "bacc/random.hpp"
#include "json_util.hpp"
#include "parallel.hpp"

namespace bacc {

namespace fs = std::filesystem;

namespace {

constexpr const char *kKindNames[] = {"LE", "Neg", "Perm", "NP"};
constexpr const char *kFormat = "bacc-dataset";
constexpr unsigned kMemberRetries = 4;
constexpr size_t kAuditWords = 256;
constexpr uint64_t kAuditSeed = 0xa0d17;

TransformKind transform_kind(GroupKind kind) {
  switch (kind) {
  case GroupKind::Neg:
    return TransformKind::Neg;
  case GroupKind::Perm:
    return TransformKind::Perm;
  default:
    return TransformKind::NegPerm;
  }
}

std::string record_file(size_t design, GroupKind kind, size_t member) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "d%02zu_%s_%03zu.aag", design, kKindNames[static_cast<int>(kind)],
                member);
  return buf;
}

struct DesignGroups {
  std::vector<DatasetRecord> records;
};

// LE members first, then one variant of each kind per member.
DesignGroups generate_design(const Circuit &base, size_t d, uint64_t seed,
                             const GenParams &params) {
  DesignGroups out;
  std::vector<OptResult> members;
  for (size_t i = 0; i < params.per_group; ++i) {
    std::optional<OptResult> pick;
    for (unsigned retry = 0; retry < kMemberRetries; ++retry) {
      OptResult r = random_optimize(base, derive_seed(seed, {d, i, retry}), params.min_recipe,
                                    params.max_recipe);
      if (!r.distinct)
        continue;
      const bool repeat = std::any_of(members.begin(), members.end(), [&](const OptResult &o) {
        return structurally_equal(o.circuit, r.circuit);
      });
      pick = std::move(r);
      if (!repeat)
        break;
    }
    if (!pick)
      fail(ErrorCode::GenerationFailure,
           "no structurally distinct circuit for design '" + base.name + "' member " +
               std::to_string(i));
    members.push_back(std::move(*pick));
  }

  const size_t n = base.num_inputs(), m = base.num_outputs();
  for (size_t k = 0; k < kNumGroupKinds; ++k) {
    const auto kind = static_cast<GroupKind>(k);
    for (size_t i = 0; i < members.size(); ++i) {
      DatasetRecord r;
      r.file = record_file(d, kind, i);
      r.label = d;
      r.design = d;
      r.member = i;
      r.kind = kind;
      r.recipe = members[i].recipe;
      if (kind == GroupKind::LE) {
        r.transform = identity_transform(n, m);
        r.circuit = members[i].circuit;
      } else {
        r.transform =
            random_transform(n, m, transform_kind(kind), derive_seed(seed, {d, i, 1000 + k}));
        r.circuit = apply(members[i].circuit, r.transform);
      }
      r.circuit.name = r.file.substr(0, r.file.size() - 4);
      out.records.push_back(std::move(r));
    }
  }
  return out;
}

std::string join_dir(const std::string &dir, const std::string &file) {
  if (dir.empty() || fs::path(file).is_absolute())
    return file;
  return (fs::path(dir) / file).string();
}

Json recipe_json(const OptRecipe &r) {
  Json passes = Json::array();
  for (PassKind p : r.passes)
    passes.push_back(std::string(to_string(p)));
  return Json{{"seed", r.seed}, {"passes", passes}};
}

OptRecipe recipe_from(const Json &j) {
  OptRecipe r;
  r.seed = field<uint64_t>(j, "seed");
  for (const auto &name : field<std::vector<std::string>>(j, "passes")) {
    auto p = pass_from_string(name);
    if (!p)
      fail(ErrorCode::SchemaMismatch, "unknown pass '" + name + "'");
    r.passes.push_back(*p);
  }
  return r;
}

GroupKind kind_from(const std::string &name) {
  auto k = group_from_string(name);
  if (!k)
    fail(ErrorCode::SchemaMismatch, "unknown group kind '" + name + "'");
  return *k;
}

} // namespace

// ------------------------------------------------------------------- names

std::string_view to_string(GroupKind kind) { return kKindNames[static_cast<int>(kind)]; }

std::optional<GroupKind> group_from_string(std::string_view name) {
  for (size_t k = 0; k < kNumGroupKinds; ++k)
    if (name == kKindNames[k])
      return static_cast<GroupKind>(k);
  return std::nullopt;
}

std::vector<GroupKind> parse_group_kinds(std::string_view list) {
  std::vector<GroupKind> kinds;
  while (!list.empty()) {
    const size_t comma = list.find(',');
    const auto tok = list.substr(0, comma);
    auto k = group_from_string(tok);
    if (!k)
      fail(ErrorCode::InvalidArgument, "unknown group kind '" + std::string(tok) + "'");
    if (std::find(kinds.begin(), kinds.end(), *k) == kinds.end())
      kinds.push_back(*k);
    list = comma == std::string_view::npos ? std::string_view{} : list.substr(comma + 1);
  }
  if (kinds.empty())
    fail(ErrorCode::InvalidArgument, "empty group kind list");
  return kinds;
}

std::string_view to_string(Split split) { return split == Split::Train ? "train" : "eval"; }

std::string_view to_string(SplitMode mode) {
  return mode == SplitMode::ByCircuit ? "by-circuit" : "by-group-kind";
}

std::optional<SplitMode> split_mode_from_string(std::string_view name) {
  if (name == "by-circuit")
    return SplitMode::ByCircuit;
  if (name == "by-group-kind")
    return SplitMode::ByGroupKind;
  return std::nullopt;
}

// -------------------------------------------------------------- generation

DatasetManifest generate_dataset(const std::vector<Circuit> &designs, uint64_t seed,
                                 const GenParams &params) {
  if (designs.empty())
    fail(ErrorCode::InvalidArgument, "no designs given");
  if (params.per_group == 0)
    fail(ErrorCode::InvalidArgument, "per_group must be at least 1");
  if (params.min_recipe < 1 || params.min_recipe > params.max_recipe)
    fail(ErrorCode::InvalidArgument, "recipe length bounds must satisfy 1 <= min <= max");
  for (const auto &d : designs)
    require_valid(d);

  DatasetManifest m;
  m.seed = seed;
  m.params = params;
  for (const auto &d : designs)
    m.designs.push_back({d.name, "builtin:" + d.name, d.num_inputs(), d.num_outputs()});

  std::vector<DesignGroups> groups(designs.size());
  parallel_for(designs.size(), params.jobs,
               [&](size_t d) { groups[d] = generate_design(designs[d], d, seed, params); });
  for (auto &g : groups)
    for (auto &r : g.records)
      m.records.push_back(std::move(r));
  return m;
}

DatasetManifest split_dataset(DatasetManifest m, const SplitConfig &config) {
  if (!(config.train_fraction > 0.0 && config.train_fraction < 1.0))
    fail(ErrorCode::InvalidArgument, "train fraction must lie strictly between 0 and 1");
  const size_t classes = m.num_classes();
  std::vector<std::vector<size_t>> by_class(classes);
  for (size_t i = 0; i < m.records.size(); ++i) {
    if (m.records[i].label >= classes)
      fail(ErrorCode::SchemaMismatch, "record label out of range");
    by_class[m.records[i].label].push_back(i);
  }

  if (config.mode == SplitMode::ByGroupKind) {
    if (config.train_kinds.empty())
      fail(ErrorCode::InvalidArgument, "no train group kinds given");
    for (auto &r : m.records)
      r.split = std::find(config.train_kinds.begin(), config.train_kinds.end(), r.kind) !=
                        config.train_kinds.end()
                    ? Split::Train
                    : Split::Eval;
  } else {
    for (size_t c = 0; c < classes; ++c) {
      auto &idx = by_class[c];
      SplitMix64 rng(derive_seed(config.seed, {c}));
      rng.shuffle(std::span<size_t>(idx));
      const auto train =
          static_cast<size_t>(std::llround(config.train_fraction * static_cast<double>(idx.size())));
      for (size_t k = 0; k < idx.size(); ++k)
        m.records[idx[k]].split = k < train ? Split::Train : Split::Eval;
    }
  }

  for (size_t c = 0; c < classes; ++c) {
    const bool any = std::any_of(by_class[c].begin(), by_class[c].end(),
                                 [&](size_t i) { return m.records[i].split == Split::Train; });
    if (!any)
      fail(ErrorCode::EmptySplit, "class " + std::to_string(c) + " ('" + m.designs[c].name +
                                      "') has no train record");
  }
  m.split = config;
  return m;
}

// --------------------------------------------------------------- manifest

std::string manifest_to_json(const DatasetManifest &m) {
  Json designs = Json::array();
  for (const auto &d : m.designs)
    designs.push_back(
        {{"name", d.name}, {"source", d.source}, {"inputs", d.inputs}, {"outputs", d.outputs}});
  Json kinds = Json::array();
  for (GroupKind k : m.split.train_kinds)
    kinds.push_back(std::string(to_string(k)));
  Json records = Json::array();
  for (const auto &r : m.records)
    records.push_back({{"file", r.file},
                       {"label", r.label},
                       {"design", r.design},
                       {"member", r.member},
                       {"kind", std::string(to_string(r.kind))},
                       {"split", std::string(to_string(r.split))},
                       {"recipe", recipe_json(r.recipe)},
                       {"transform", r.transform}});
  Json j{{"format", kFormat},
         {"version", DatasetManifest::kSchemaVersion},
         {"seed", m.seed},
         {"params",
          {{"per_group", m.params.per_group},
           {"min_recipe", m.params.min_recipe},
           {"max_recipe", m.params.max_recipe}}},
         {"split",
          {{"mode", std::string(to_string(m.split.mode))},
           {"train_fraction", m.split.train_fraction},
           {"train_kinds", kinds},
           {"seed", m.split.seed}}},
         {"designs", designs},
         {"records", records}};
  return j.dump(1) + "\n";
}

void save_manifest(const DatasetManifest &m, const std::string &path) {
  const fs::path dir = fs::path(path).parent_path();
  if (!dir.empty())
    fs::create_directories(dir);
  for (const auto &r : m.records)
    write_aag_file(r.circuit, join_dir(dir.string(), r.file));
  std::ofstream out(path, std::ios::binary);
  if (!out)
    fail(ErrorCode::MissingFile, "cannot write '" + path + "'");
  out << manifest_to_json(m);
}

DatasetManifest load_manifest(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::MissingFile, "cannot open manifest '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  const Json j = parse_json(buffer.str(), "manifest");
  if (field<std::string>(j, "format") != kFormat)
    fail(ErrorCode::SchemaMismatch, "not a dataset manifest");
  if (field<int>(j, "version") != DatasetManifest::kSchemaVersion)
    fail(ErrorCode::SchemaMismatch, "unsupported manifest version");

  DatasetManifest m;
  m.seed = field<uint64_t>(j, "seed");
  const Json &p = j.at("params");
  m.params.per_group = field<size_t>(p, "per_group");
  m.params.min_recipe = field<size_t>(p, "min_recipe");
  m.params.max_recipe = field<size_t>(p, "max_recipe");
  const Json &s = field<Json>(j, "split");
  auto mode = split_mode_from_string(field<std::string>(s, "mode"));
  if (!mode)
    fail(ErrorCode::SchemaMismatch, "unknown split mode");
  m.split.mode = *mode;
  m.split.train_fraction = field<double>(s, "train_fraction");
  m.split.seed = field<uint64_t>(s, "seed");
  m.split.train_kinds.clear();
  for (const auto &k : field<std::vector<std::string>>(s, "train_kinds"))
    m.split.train_kinds.push_back(kind_from(k));

  for (const auto &d : field<Json>(j, "designs"))
    m.designs.push_back({field<std::string>(d, "name"), field<std::string>(d, "source"),
                         field<size_t>(d, "inputs"), field<size_t>(d, "outputs")});

  const std::string dir = fs::path(path).parent_path().string();
  for (const auto &jr : field<Json>(j, "records")) {
    DatasetRecord r;
    r.file = field<std::string>(jr, "file");
    r.label = field<size_t>(jr, "label");
    r.design = field<size_t>(jr, "design");
    r.member = field<size_t>(jr, "member");
    r.kind = kind_from(field<std::string>(jr, "kind"));
    const auto split = field<std::string>(jr, "split");
    if (split != "train" && split != "eval")
      fail(ErrorCode::SchemaMismatch, "unknown split '" + split + "'");
    r.split = split == "train" ? Split::Train : Split::Eval;
    r.recipe = recipe_from(field<Json>(jr, "recipe"));
    try {
      r.transform = field<Json>(jr, "transform").get<MatchingTransform>();
    } catch (const Error &e) {
      fail(ErrorCode::SchemaMismatch, r.file + ": " + e.what());
    }
    if (r.design >= m.designs.size())
      fail(ErrorCode::SchemaMismatch, r.file + ": design index out of range");
    r.circuit = read_aag_file(join_dir(dir, r.file));
    require_valid(r.circuit);
    const auto &d = m.designs[r.design];
    if (r.circuit.num_inputs() != d.inputs || r.circuit.num_outputs() != d.outputs ||
        r.transform.input_perm.size() != d.inputs || r.transform.output_perm.size() != d.outputs)
      fail(ErrorCode::SchemaMismatch, r.file + ": interface differs from its design");
    m.records.push_back(std::move(r));
  }
  return m;
}

Circuit resolve_design(const std::string &source, const std::string &base_dir) {
  constexpr std::string_view prefix = "builtin:";
  if (source.compare(0, prefix.size(), prefix) == 0)
    return builtin_design(std::string_view(source).substr(prefix.size()));
  Circuit c = read_aag_file(join_dir(base_dir, source));
  require_valid(c);
  if (c.name.empty())
    c.name = fs::path(source).stem().string();
  return c;
}

std::string stats_csv(const DatasetManifest &m) {
  std::ostringstream out;
  out << "index,design,label,kind,split,inputs,outputs,ands,depth\n";
  for (size_t i = 0; i < m.records.size(); ++i) {
    const auto &r = m.records[i];
    out << i << ',' << m.designs[r.design].name << ',' << r.label << ',' << to_string(r.kind)
        << ',' << to_string(r.split) << ',' << r.circuit.num_inputs() << ','
        << r.circuit.num_outputs() << ',' << r.circuit.num_ands() << ',' << depth(r.circuit)
        << '\n';
  }
  return out.str();
}

// ------------------------------------------------------------------ audit

AuditReport audit_dataset(const DatasetManifest &m, const std::vector<Circuit> &designs,
                          double budget) {
  if (designs.size() != m.designs.size())
    fail(ErrorCode::DimensionMismatch, "audit needs one base circuit per manifest design");
  AuditReport report;
  auto add = [&](size_t record, const char *check, bool ok, std::string detail = {}) {
    report.entries.push_back({record, check, ok, std::move(detail)});
    report.failures += !ok;
  };

  std::vector<Signature> base_sig;
  std::vector<std::optional<CanonicalKey>> base_key(designs.size());
  for (size_t d = 0; d < designs.size(); ++d) {
    const Circuit &c = designs[d];
    base_sig.push_back(simulate_random(c, kAuditSeed, kAuditWords));
    if (c.num_inputs() <= kMaxExhaustiveInputs &&
        within_budget(c.num_inputs(), c.num_outputs(), budget))
      base_key[d] = canonical_key(c, budget);
    else
      report.notes.push_back("design '" + m.designs[d].name +
                             "' exceeds the oracle budget; signature audit only");
  }

  for (size_t a = 0; a < designs.size(); ++a)
    for (size_t b = a + 1; b < designs.size(); ++b)
      if (base_key[a] && base_key[b] && *base_key[a] == *base_key[b])
        report.notes.push_back("designs '" + m.designs[a].name + "' and '" + m.designs[b].name +
                               "' are matching equivalent but carry separate provenance labels");

  for (size_t i = 0; i < m.records.size(); ++i) {
    const auto &r = m.records[i];
    if (r.design >= designs.size()) {
      add(i, "label", false, "design index out of range");
      continue;
    }
    const Circuit &base = designs[r.design];
    add(i, "label", r.label == r.design,
        r.label == r.design ? "" : "label " + std::to_string(r.label) + " but design " +
                                       std::to_string(r.design));

    const Circuit replay = run_recipe(base, r.recipe);
    const bool replay_ok = structurally_equal(
        r.kind == GroupKind::LE ? replay : apply(replay, r.transform), r.circuit);
    add(i, "recipe", replay_ok, replay_ok ? "" : "replaying the recipe gives another structure");

    const bool sig_ok =
        simulate_random(apply(r.circuit, invert(r.transform)), kAuditSeed, kAuditWords) ==
        base_sig[r.design];
    add(i, "signature", sig_ok, sig_ok ? "" : "undoing the transform does not recover the design");

    if (base_key[r.design]) {
      const bool key_ok = canonical_key(r.circuit, budget) == *base_key[r.design];
      add(i, "key", key_ok, key_ok ? "" : "canonical key differs from the design's");
    }
  }

  for (size_t d = 0; d < designs.size(); ++d) {
    std::vector<const Circuit *> le;
    for (const auto &r : m.records)
      if (r.design == d && r.kind == GroupKind::LE)
        le.push_back(&r.circuit);
    if (le.size() < 2)
      continue;
    bool distinct = false;
    for (size_t k = 1; k < le.size() && !distinct; ++k)
      distinct = !structurally_equal(*le[0], *le[k]);
    add(SIZE_MAX, "non-degenerate", distinct,
        distinct ? m.designs[d].name : "all LE members of '" + m.designs[d].name + "' coincide");
  }
  return report;
}

std::string audit_to_json(const AuditReport &r) {
  Json entries = Json::array();
  for (const auto &e : r.entries) {
    Json j{{"check", e.check}, {"ok", e.ok}};
    if (e.record != SIZE_MAX)
      j["record"] = e.record;
    if (!e.detail.empty())
      j["detail"] = e.detail;
    entries.push_back(std::move(j));
  }
  Json j{{"ok", r.ok()}, {"failures", r.failures}, {"notes", r.notes}, {"entries", entries}};
  return j.dump(1) + "\n";
}

} // namespace bacc
