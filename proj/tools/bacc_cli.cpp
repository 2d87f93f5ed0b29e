// SPDX-License-Identifier: Apache-2.0
//
// bacc: dataset generation, training, evaluation, auditing and circuit
// transforms on top of the C library interface.
//
// Exit codes: 0 success, 1 internal error, 2 user-input error.
//
#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "bacc/bacc.h"

namespace fs = std::filesystem;
using Json = nlohmann::ordered_json;

namespace {

constexpr int kExitInternal = 1;
constexpr int kExitUser = 2;

struct Failure : std::runtime_error {
  int exit_code;
  Failure(int code, const std::string &msg) : std::runtime_error(msg), exit_code(code) {}
};

void check(bacc_status s) {
  if (s == BACC_OK)
    return;
  throw Failure(bacc_status_is_user_error(s) ? kExitUser : kExitInternal, bacc_last_error());
}

[[noreturn]] void user_error(const std::string &msg) { throw Failure(kExitUser, msg); }

struct StrFree {
  void operator()(char *s) const { bacc_string_free(s); }
};
struct CircuitFree {
  void operator()(bacc_circuit *c) const { bacc_circuit_free(c); }
};
struct DatasetFree {
  void operator()(bacc_dataset *d) const { bacc_dataset_free(d); }
};
struct ModelFree {
  void operator()(bacc_model *m) const { bacc_model_free(m); }
};
using CString = std::unique_ptr<char, StrFree>;
using Circuit = std::unique_ptr<bacc_circuit, CircuitFree>;
using Dataset = std::unique_ptr<bacc_dataset, DatasetFree>;
using Model = std::unique_ptr<bacc_model, ModelFree>;

std::string take(char *s) {
  CString owned(s);
  return s ? std::string(s) : std::string();
}

void write_file(const fs::path &path, const std::string &text) {
  if (path.has_parent_path())
    fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out)
    user_error("MissingFile: cannot write '" + path.string() + "'");
  out << text;
  if (!out)
    throw Failure(kExitInternal, "Internal: short write to '" + path.string() + "'");
}

std::string read_file(const fs::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    user_error("MissingFile: cannot read '" + path.string() + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

Dataset load_dataset(const std::string &path) {
  bacc_dataset *d = nullptr;
  check(bacc_dataset_load(path.c_str(), &d));
  return Dataset(d);
}

Circuit load_circuit(const std::string &source) {
  bacc_circuit *c = nullptr;
  check(bacc_circuit_resolve(source.c_str(), "", &c));
  return Circuit(c);
}

struct Global {
  uint64_t seed = 1;
  unsigned jobs = 1;
  std::string out = ".";
};

// ---------------------------------------------------------------- gen

struct GenOptions {
  std::vector<std::string> designs;
  bacc_gen_params params{};
  std::string split = "by-group-kind";
  std::string train_kinds = "LE";
  double train_fraction = 0.5;
  std::string manifest = "manifest.json";
  std::string stats = "dataset_stats.csv";
};

// Expands "desk" and stores AIGER paths relative to the output directory so
// the manifest can be audited from wherever it lives.
std::vector<std::string> design_sources(const std::vector<std::string> &designs,
                                        const fs::path &out_dir) {
  static const char *const kDesk[] = {"fulladder1", "rca2",    "mult2", "cmp3",  "mux2",
                                      "dec3",       "parity5", "maj",   "prio4", "rand:6:2:30:11"};
  std::vector<std::string> out;
  for (const auto &d : designs) {
    if (d == "desk") {
      for (const char *id : kDesk)
        out.push_back(std::string("builtin:") + id);
    } else if (d.rfind("builtin:", 0) == 0) {
      out.push_back(d);
    } else {
      if (!fs::exists(d))
        user_error("MissingFile: design file '" + d + "' does not exist");
      out.push_back(fs::relative(fs::absolute(d), fs::absolute(out_dir)).generic_string());
    }
  }
  return out;
}

int cmd_gen(const Global &g, const GenOptions &o) {
  if (o.designs.empty())
    user_error("InvalidArgument: --designs is empty");
  const fs::path out_dir(g.out);
  fs::create_directories(out_dir);
  const auto sources = design_sources(o.designs, out_dir);
  std::vector<const char *> ptrs;
  for (const auto &s : sources)
    ptrs.push_back(s.c_str());
  bacc_gen_params p = o.params;
  p.jobs = g.jobs;
  bacc_dataset *raw = nullptr;
  const std::string base = out_dir.string();
  check(bacc_dataset_generate(ptrs.data(), ptrs.size(), base.c_str(), g.seed, &p, &raw));
  Dataset d(raw);
  check(bacc_dataset_split(d.get(), o.split.c_str(), o.train_fraction, o.train_kinds.c_str(),
                           g.seed));
  const auto manifest = out_dir / o.manifest;
  check(bacc_dataset_save(d.get(), manifest.string().c_str()));
  char *csv = nullptr;
  check(bacc_dataset_stats_csv(d.get(), &csv));
  write_file(out_dir / o.stats, take(csv));
  char *summary = nullptr;
  check(bacc_dataset_summary(d.get(), &summary));
  std::cout << take(summary) << "manifest: " << manifest.string() << '\n';
  return 0;
}

// -------------------------------------------------------------- train

struct TrainOptions {
  std::string manifest;
  std::string train_kinds; // empty keeps the manifest's split
  std::string direction = "bidigraph";
  std::string inverters = "without";
  bool reverse = false;
  bacc_train_config config{};
  bool no_pooling = false;
  std::string checkpoint = "model.json";
  std::string history = "history.csv";
  std::string summary = "train_summary.json";
};

// Re-splits by group kind when the caller names the training kinds.
void maybe_resplit(bacc_dataset *d, const std::string &kinds, uint64_t seed) {
  if (!kinds.empty())
    check(bacc_dataset_split(d, "by-group-kind", 0.5, kinds.c_str(), seed));
}

int cmd_train(const Global &g, const TrainOptions &o) {
  auto d = load_dataset(o.manifest);
  maybe_resplit(d.get(), o.train_kinds, g.seed);
  bacc_train_config c = o.config;
  c.seed = g.seed;
  c.direction = o.direction.c_str();
  c.inverters = o.inverters.c_str();
  c.reverse = o.reverse;
  c.pooling = !o.no_pooling;
  bacc_model *raw = nullptr;
  char *history = nullptr, *summary = nullptr;
  check(bacc_train(d.get(), &c, &raw, &history, &summary));
  Model m(raw);
  const std::string history_text = take(history), summary_text = take(summary);
  const fs::path out_dir(g.out);
  fs::create_directories(out_dir);
  check(bacc_model_save(m.get(), (out_dir / o.checkpoint).string().c_str()));
  write_file(out_dir / o.history, history_text);
  write_file(out_dir / o.summary, summary_text + "\n");

  const auto s = Json::parse(summary_text);
  const auto &fin = s["final"];
  std::printf("epochs %zu  final loss %.6f  train acc %.4f\n", c.epochs,
              fin["loss"].get<double>(), fin["train_accuracy"].get<double>());
  for (const auto &[kind, acc] : fin["groups"].items())
    if (!acc.is_null())
      std::printf("  %-5s %.4f\n", kind.c_str(), acc.get<double>());
  if (!s["best"].is_null())
    std::printf("best epoch %zu\n", s["best"]["epoch"].get<size_t>());
  std::printf("checkpoint: %s\n", (out_dir / o.checkpoint).string().c_str());
  return 0;
}

// --------------------------------------------------------------- eval

struct EvalOptions {
  std::string manifest;
  std::vector<std::string> checkpoints;
  std::string train_kinds;
  std::string metrics = "metrics.json";
  std::string embeddings = "embeddings.csv";
};

// Sample standard deviation; 0 for a single value.
std::pair<double, double> mean_std(const std::vector<double> &xs) {
  double mean = 0;
  for (double x : xs)
    mean += x;
  mean /= static_cast<double>(xs.size());
  double var = 0;
  for (double x : xs)
    var += (x - mean) * (x - mean);
  const double sd = xs.size() > 1 ? std::sqrt(var / static_cast<double>(xs.size() - 1)) : 0.0;
  return {mean, sd};
}

int cmd_eval(const Global &g, const EvalOptions &o) {
  if (o.checkpoints.empty())
    user_error("InvalidArgument: at least one --checkpoint is required");
  auto d = load_dataset(o.manifest);
  maybe_resplit(d.get(), o.train_kinds, g.seed);
  const fs::path out_dir(g.out);
  fs::create_directories(out_dir);

  Json runs = Json::array();
  std::vector<std::string> kinds;
  for (size_t i = 0; i < o.checkpoints.size(); ++i) {
    bacc_model *raw = nullptr;
    check(bacc_model_load(o.checkpoints[i].c_str(), &raw));
    Model m(raw);
    char *metrics = nullptr, *emb = nullptr;
    check(bacc_evaluate(m.get(), d.get(), &metrics, &emb));
    Json run = Json::parse(take(metrics));
    run["checkpoint"] = o.checkpoints[i];
    runs.push_back(run);
    fs::path emb_path = out_dir / o.embeddings;
    if (o.checkpoints.size() > 1)
      emb_path.replace_filename(emb_path.stem().string() + "_" + std::to_string(i) +
                                emb_path.extension().string());
    write_file(emb_path, take(emb));
  }

  Json out;
  out["runs"] = runs.size();
  std::vector<double> overall;
  for (const auto &r : runs)
    overall.push_back(r["accuracy"].get<double>());
  auto [om, os] = mean_std(overall);
  out["acc.all.mean"] = om;
  out["acc.all.std"] = os;
  std::printf("%-5s %8s %8s  %s\n", "group", "mean", "std", "scored on");
  for (const auto &[kind, first] : runs[0]["groups"].items()) {
    if (first.is_null())
      continue;
    std::vector<double> xs;
    for (const auto &r : runs)
      xs.push_back(r["groups"][kind]["accuracy"].get<double>());
    auto [m, s] = mean_std(xs);
    out["acc." + kind + ".mean"] = m;
    out["acc." + kind + ".std"] = s;
    out["acc." + kind + ".scored_on"] = first["scored_on"];
    std::printf("%-5s %8.4f %8.4f  %s\n", kind.c_str(), m, s,
                first["scored_on"].get<std::string>().c_str());
  }
  std::printf("%-5s %8.4f %8.4f  eval\n", "all", om, os);
  out["per_run"] = runs;
  write_file(out_dir / o.metrics, out.dump(2) + "\n");
  return 0;
}

// -------------------------------------------------------------- audit

struct AuditOptions {
  std::string manifest;
  double budget = 1e7;
  std::string report = "audit.json";
};

int cmd_audit(const Global &g, const AuditOptions &o) {
  auto d = load_dataset(o.manifest);
  int ok = 0;
  char *report = nullptr;
  check(bacc_dataset_audit(d.get(), nullptr, o.budget, &ok, &report));
  const std::string text = take(report);
  const fs::path out_dir(g.out);
  write_file(out_dir / o.report, text + "\n");
  const auto j = Json::parse(text);
  size_t checks = 0;
  for (const auto &e : j["entries"]) {
    ++checks;
    if (!e["ok"].get<bool>())
      std::printf("FAIL %s record %s: %s\n", e["check"].get<std::string>().c_str(),
                  e["record"].dump().c_str(), e["detail"].get<std::string>().c_str());
  }
  for (const auto &n : j["notes"])
    std::printf("note: %s\n", n.get<std::string>().c_str());
  std::printf("%zu checks, %zu failed\n", checks, j["failures"].get<size_t>());
  return ok ? 0 : kExitUser;
}

// ---------------------------------------------------------- transform

struct TransformOptions {
  std::string in;
  std::string output = "transformed.aag";
  std::string transform_json;
  std::string transform_file;
  std::vector<std::string> neg_inputs, neg_outputs;
  std::vector<uint32_t> perm_inputs, perm_outputs;
  bool invert = false;
  bool optimize = false;
  size_t len = 0;
  size_t min_len = 2, max_len = 10;
};

std::string flags_transform(const bacc_circuit *c, const TransformOptions &o) {
  const size_t n = bacc_circuit_num_inputs(c), m = bacc_circuit_num_outputs(c);
  std::vector<uint32_t> ip(n), op(m);
  std::vector<int> in(n, 0), on(m, 0);
  for (size_t i = 0; i < n; ++i)
    ip[i] = static_cast<uint32_t>(i);
  for (size_t i = 0; i < m; ++i)
    op[i] = static_cast<uint32_t>(i);
  if (!o.perm_inputs.empty())
    ip = o.perm_inputs;
  if (!o.perm_outputs.empty())
    op = o.perm_outputs;
  for (const auto &name : o.neg_inputs) {
    size_t k = 0;
    check(bacc_circuit_input_index(c, name.c_str(), &k));
    in[k] = 1;
  }
  for (const auto &name : o.neg_outputs) {
    size_t k = 0;
    check(bacc_circuit_output_index(c, name.c_str(), &k));
    on[k] = 1;
  }
  return Json{{"input_perm", ip}, {"input_neg", in}, {"output_perm", op}, {"output_neg", on}}.dump();
}

void print_tables(const bacc_circuit *c) {
  const size_t n = bacc_circuit_num_inputs(c), m = bacc_circuit_num_outputs(c);
  std::printf("%zu inputs, %zu outputs, %zu ands, depth %zu\n", n, m, bacc_circuit_num_ands(c),
              bacc_circuit_depth(c));
  if (n > 16)
    return;
  for (size_t k = 0; k < m; ++k) {
    char *hex = nullptr;
    check(bacc_circuit_truth_hex(c, k, &hex));
    std::printf("out %zu: %s\n", k, take(hex).c_str());
  }
}

int cmd_transform(const Global &g, const TransformOptions &o) {
  auto c = load_circuit(o.in);
  const fs::path out_dir(g.out);
  const fs::path output = out_dir / o.output;
  bacc_circuit *raw = nullptr;
  std::string sidecar;
  if (o.optimize) {
    const size_t lo = o.len ? o.len : o.min_len, hi = o.len ? o.len : o.max_len;
    char *recipe = nullptr;
    check(bacc_circuit_optimize(c.get(), g.seed, lo, hi, &raw, &recipe));
    sidecar = take(recipe);
    std::printf("recipe: %s\n", sidecar.c_str());
  } else {
    std::string t;
    if (!o.transform_json.empty())
      t = o.transform_json;
    else if (!o.transform_file.empty())
      t = read_file(o.transform_file);
    else
      t = flags_transform(c.get(), o);
    check(bacc_circuit_transform(c.get(), t.c_str(), o.invert, &raw));
    if (o.invert) {
      char *inv = nullptr;
      check(bacc_transform_invert(t.c_str(), &inv));
      sidecar = take(inv);
    } else {
      sidecar = Json::parse(t).dump();
    }
    std::printf("transform: %s\n", sidecar.c_str());
  }
  Circuit result(raw);
  if (output.has_parent_path())
    fs::create_directories(output.parent_path());
  check(bacc_circuit_write(result.get(), output.string().c_str()));
  // The applied transform or recipe, so the step can be undone or replayed.
  write_file(output.string() + ".json", sidecar + "\n");
  print_tables(result.get());
  std::printf("wrote %s\n", output.string().c_str());
  return 0;
}

// ------------------------------------------------------------- encode

struct EncodeOptions {
  std::string in;
  std::string direction = "bidigraph";
  std::string inverters = "without";
  bool reverse = false;
  std::string output = "graph.json";
};

int cmd_encode(const Global &g, const EncodeOptions &o) {
  auto c = load_circuit(o.in);
  char *json = nullptr;
  check(bacc_encode_json(c.get(), o.direction.c_str(), o.inverters.c_str(), o.reverse, &json));
  write_file(fs::path(g.out) / o.output, take(json) + "\n");
  return 0;
}

// Global keys plus the active subcommand's section; other sections are
// dropped so the echo reads back as the same run.
void echo_config(const CLI::App &app, const Global &g, const std::string &name) {
  std::istringstream all(app.config_to_str(true, false));
  std::string text, line;
  while (std::getline(all, line)) {
    const auto eq = line.find('=');
    const auto dot = line.find('.');
    const bool global = dot == std::string::npos || dot > eq;
    if (global || line.compare(0, name.size() + 1, name + ".") == 0)
      text += line + '\n';
  }
  write_file(fs::path(g.out) / ("config." + name + ".toml"), text);
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Boolean-circuit matching datasets and graph classifiers"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "INI/TOML-style file; command-line flags override it");

  Global g;
  app.add_option("--seed", g.seed, "Global random seed")->capture_default_str();
  app.add_option("--jobs", g.jobs, "Worker threads; results do not depend on it")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  app.add_option("--out", g.out, "Output directory")->capture_default_str();

  GenOptions gen;
  bacc_gen_params_default(&gen.params);
  auto *gen_cmd = app.add_subcommand("gen", "Generate a labeled dataset");
  gen_cmd->add_option("--designs", gen.designs, "builtin:<id>, AIGER paths, or 'desk'")
      ->delimiter(',')
      ->required();
  gen_cmd->add_option("--per-group", gen.params.per_group, "LE members per design")
      ->capture_default_str();
  gen_cmd->add_option("--min-recipe", gen.params.min_recipe)->capture_default_str();
  gen_cmd->add_option("--max-recipe", gen.params.max_recipe)->capture_default_str();
  gen_cmd->add_option("--split", gen.split, "by-group-kind or by-circuit")->capture_default_str();
  gen_cmd->add_option("--train-kinds", gen.train_kinds, "Group kinds in the train split, e.g. LE,Neg")
      ->capture_default_str();
  gen_cmd->add_option("--train-fraction", gen.train_fraction, "by-circuit split only")
      ->capture_default_str();
  gen_cmd->add_option("--manifest", gen.manifest, "Manifest name inside --out")
      ->capture_default_str();
  gen_cmd->add_option("--stats", gen.stats, "Stats CSV name inside --out")->capture_default_str();

  TrainOptions tr;
  bacc_train_config_default(&tr.config);
  auto *train_cmd = app.add_subcommand("train", "Train a classifier on a manifest");
  train_cmd->add_option("--manifest", tr.manifest)->required();
  train_cmd->add_option("--train-kinds", tr.train_kinds, "Re-split so these kinds train");
  train_cmd->add_option("--direction", tr.direction, "digraph or bidigraph")->capture_default_str();
  train_cmd->add_option("--inverters", tr.inverters, "with or without")->capture_default_str();
  train_cmd->add_flag("--reverse", tr.reverse, "Digraph: aggregate from fan-out to fan-in");
  train_cmd->add_option("--epochs", tr.config.epochs)->capture_default_str();
  train_cmd->add_option("--hidden", tr.config.hidden)->capture_default_str();
  train_cmd->add_option("--lr", tr.config.lr)->capture_default_str();
  train_cmd->add_option("--weight-decay", tr.config.weight_decay)->capture_default_str();
  train_cmd->add_option("--batch", tr.config.batch)->capture_default_str();
  train_cmd->add_option("--pool-ratio", tr.config.pool_ratio)->capture_default_str();
  train_cmd->add_flag("--no-pooling", tr.no_pooling, "Mean readout over all nodes");
  train_cmd->add_option("--eval-every", tr.config.eval_every, "0 scores the last epoch only")
      ->capture_default_str();
  train_cmd->add_option("--checkpoint", tr.checkpoint)->capture_default_str();
  train_cmd->add_option("--history", tr.history)->capture_default_str();
  train_cmd->add_option("--summary", tr.summary)->capture_default_str();

  EvalOptions ev;
  auto *eval_cmd = app.add_subcommand("eval", "Score checkpoints; mean and std across them");
  eval_cmd->add_option("--manifest", ev.manifest)->required();
  eval_cmd->add_option("--checkpoint", ev.checkpoints, "One per training seed")
      ->delimiter(',')
      ->required();
  eval_cmd->add_option("--train-kinds", ev.train_kinds, "Re-split so these kinds train");
  eval_cmd->add_option("--metrics", ev.metrics)->capture_default_str();
  eval_cmd->add_option("--embeddings", ev.embeddings)->capture_default_str();

  AuditOptions au;
  auto *audit_cmd = app.add_subcommand("audit", "Check dataset labels and transforms");
  audit_cmd->add_option("--manifest", au.manifest)->required();
  audit_cmd->add_option("--budget", au.budget, "Oracle search budget")->capture_default_str();
  audit_cmd->add_option("--report", au.report)->capture_default_str();

  TransformOptions tf;
  auto *tf_cmd = app.add_subcommand("transform", "Apply a transform or optimizer recipe");
  tf_cmd->add_option("--in", tf.in, "AIGER path or builtin:<id>")->required();
  tf_cmd->add_option("--output", tf.output, "Result name inside --out")->capture_default_str();
  auto *tj = tf_cmd->add_option("--transform", tf.transform_json, "Transform as JSON");
  auto *tfile = tf_cmd->add_option("--transform-file", tf.transform_file, "Transform JSON file");
  tj->excludes(tfile);
  tf_cmd->add_option("--neg-inputs", tf.neg_inputs, "Input names or indices")->delimiter(',');
  tf_cmd->add_option("--neg-outputs", tf.neg_outputs, "Output names or indices")->delimiter(',');
  tf_cmd->add_option("--perm-inputs", tf.perm_inputs, "Input permutation")->delimiter(',');
  tf_cmd->add_option("--perm-outputs", tf.perm_outputs, "Output permutation")->delimiter(',');
  tf_cmd->add_flag("--invert", tf.invert, "Apply the inverse transform");
  auto *opt = tf_cmd->add_flag("--optimize", tf.optimize, "Run a random optimizer recipe");
  opt->excludes(tj)->excludes(tfile);
  tf_cmd->add_option("--len", tf.len, "Recipe length (overrides min/max)");
  tf_cmd->add_option("--min-len", tf.min_len)->capture_default_str();
  tf_cmd->add_option("--max-len", tf.max_len)->capture_default_str();

  EncodeOptions en;
  auto *enc_cmd = app.add_subcommand("encode", "Write the graph encoding of a circuit");
  enc_cmd->add_option("--in", en.in, "AIGER path or builtin:<id>")->required();
  enc_cmd->add_option("--direction", en.direction)->capture_default_str();
  enc_cmd->add_option("--inverters", en.inverters)->capture_default_str();
  enc_cmd->add_flag("--reverse", en.reverse);
  enc_cmd->add_option("--output", en.output)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    app.exit(e);
    return kExitUser;
  }

  try {
    auto *sub = app.get_subcommands().front();
    fs::create_directories(g.out);
    echo_config(app, g, sub->get_name());
    if (sub == gen_cmd)
      return cmd_gen(g, gen);
    if (sub == train_cmd)
      return cmd_train(g, tr);
    if (sub == eval_cmd)
      return cmd_eval(g, ev);
    if (sub == audit_cmd)
      return cmd_audit(g, au);
    if (sub == tf_cmd)
      return cmd_transform(g, tf);
    return cmd_encode(g, en);
  } catch (const Failure &e) {
    std::cerr << "error: " << e.what() << '\n';
    return e.exit_code;
  } catch (const fs::filesystem_error &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUser;
  } catch (const std::exception &e) {
    std::cerr << "error: Internal: " << e.what() << '\n';
    return kExitInternal;
  }
}
