// SPDX-License-Identifier: Apache-2.0
//
// Labeled circuit datasets: logic-equivalent groups grown by random
// optimization, their Neg/Perm/NP variants, train/eval splits, and the
// on-disk manifest (one JSON file plus sibling .aag files).
//
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bacc/aig.hpp"
#include "bacc/optimizer.hpp"
#include "bacc/oracle.hpp"
#include "bacc/transform.hpp"

namespace bacc {

enum class GroupKind { LE, Neg, Perm, NP };
inline constexpr size_t kNumGroupKinds = 4;

std::string_view to_string(GroupKind kind);
std::optional<GroupKind> group_from_string(std::string_view name);
/// Parses "LE,Neg"; throws InvalidArgument on unknown names or an empty list.
std::vector<GroupKind> parse_group_kinds(std::string_view list);

enum class Split { Train, Eval };
std::string_view to_string(Split split);

enum class SplitMode { ByCircuit, ByGroupKind };
std::string_view to_string(SplitMode mode);
std::optional<SplitMode> split_mode_from_string(std::string_view name);

struct GenParams {
  size_t per_group = 30;
  size_t min_recipe = 2;
  size_t max_recipe = 10;
  unsigned jobs = 1; // worker threads; output does not depend on it
};

struct SplitConfig {
  SplitMode mode = SplitMode::ByGroupKind;
  double train_fraction = 0.5; // by-circuit mode only
  std::vector<GroupKind> train_kinds{GroupKind::LE};
  uint64_t seed = 0;
};

struct DesignEntry {
  std::string name;
  std::string source; // "builtin:<id>" or an AIGER path; generate() assumes builtin
  size_t inputs = 0;
  size_t outputs = 0;
};

struct DatasetRecord {
  std::string file; // relative to the manifest directory
  size_t label = 0;
  size_t design = 0;
  size_t member = 0; // index of the LE member the record derives from
  GroupKind kind = GroupKind::LE;
  OptRecipe recipe;            // base design -> LE member
  MatchingTransform transform; // LE member -> record (identity for LE)
  Split split = Split::Train;
  Circuit circuit; // not serialized; filled by generate() and load_manifest()
};

struct DatasetManifest {
  static constexpr int kSchemaVersion = 1;
  uint64_t seed = 0;
  GenParams params;
  SplitConfig split;
  std::vector<DesignEntry> designs;
  std::vector<DatasetRecord> records;

  size_t num_classes() const { return designs.size(); }
};

/// Builds per_group LE members per design and one Neg, Perm and NP variant of
/// each. Labels are design indices. Deterministic in (designs, seed, params).
/// Records start in the train split; call split_dataset() afterwards.
DatasetManifest generate_dataset(const std::vector<Circuit> &designs, uint64_t seed,
                                 const GenParams &params);

/// Assigns train/eval. Throws InvalidArgument for a fraction outside (0, 1)
/// and EmptySplit when a class would get no train record.
DatasetManifest split_dataset(DatasetManifest m, const SplitConfig &config);

/// Writes the manifest JSON and every record's .aag file next to it.
void save_manifest(const DatasetManifest &m, const std::string &path);
std::string manifest_to_json(const DatasetManifest &m);

/// Reads the manifest and parses and validates every record circuit.
/// Throws SchemaMismatch, MissingFile or ParseFailure.
DatasetManifest load_manifest(const std::string &path);

/// Resolves a design source; relative paths are taken from base_dir.
Circuit resolve_design(const std::string &source, const std::string &base_dir = "");

/// One CSV row per record: index, design, label, kind, split, inputs,
/// outputs, ands, depth.
std::string stats_csv(const DatasetManifest &m);

struct AuditEntry {
  size_t record = 0; // SIZE_MAX for class-level checks
  std::string check;
  bool ok = true;
  std::string detail;
};

struct AuditReport {
  std::vector<AuditEntry> entries;
  std::vector<std::string> notes;
  size_t failures = 0;

  bool ok() const { return failures == 0; }
};

/// Integrity checks against the base designs: provenance label, recipe replay,
/// signature equality after undoing the recorded transform, and the canonical
/// key when the design fits the oracle budget.
AuditReport audit_dataset(const DatasetManifest &m, const std::vector<Circuit> &designs,
                          double budget = kDefaultSearchBudget);
std::string audit_to_json(const AuditReport &r);

} // namespace bacc
