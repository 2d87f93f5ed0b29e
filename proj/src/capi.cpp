// SPDX-License-Identifier: Apache-2.0
#include "bacc/bacc.h"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <limits>
#include <new>
#include <sstream>
#include <string>
#include <vector>

#include "bacc/dataset.hpp"
#include "bacc/designs.hpp"
#include "bacc/encode.hpp"
#include "bacc/error.hpp"
#include "bacc/gnn.hpp"
#include "bacc/optimizer.hpp"
#include "bacc/oracle.hpp"
#include "bacc/transform.hpp"
#include "json_util.hpp"

struct bacc_circuit {
  bacc::Circuit c;
};

struct bacc_dataset {
  bacc::DatasetManifest m;
  std::string dir; // directory the manifest was loaded from, for design paths
};

struct bacc_model {
  bacc::Model m;
};

namespace {

using bacc::ErrorCode;
using bacc::fail;
using bacc::Json;

thread_local std::string g_last_error;

template <typename F> bacc_status guard(F &&body) {
  try {
    body();
    g_last_error.clear();
    return BACC_OK;
  } catch (const bacc::Error &e) {
    g_last_error = e.what();
    return static_cast<bacc_status>(e.code());
  } catch (const std::bad_alloc &) {
    g_last_error = "Internal: out of memory";
  } catch (const std::exception &e) {
    g_last_error = std::string("Internal: ") + e.what();
  } catch (...) {
    g_last_error = "Internal: unknown exception";
  }
  return BACC_ERR_INTERNAL;
}

void need(const void *p, const char *what) {
  if (!p)
    fail(ErrorCode::InvalidArgument, std::string(what) + " must not be null");
}

char *dup(const std::string &s) {
  char *out = static_cast<char *>(std::malloc(s.size() + 1));
  if (!out)
    throw std::bad_alloc();
  std::memcpy(out, s.data(), s.size() + 1);
  return out;
}

void put(char **out, const std::string &s) {
  if (out)
    *out = dup(s);
}

size_t find_name(const std::vector<std::string> &names, size_t count, const char *name,
                 const char *what) {
  need(name, what);
  const std::string_view n(name);
  for (size_t i = 0; i < names.size(); ++i)
    if (names[i] == n)
      return i;
  // Fall back to a decimal index.
  if (!n.empty() && n.find_first_not_of("0123456789") == std::string_view::npos) {
    const size_t i = std::stoul(std::string(n));
    if (i < count)
      return i;
  }
  fail(ErrorCode::InvalidArgument, std::string("no ") + what + " named '" + name + "'");
}

bacc::EncodeOptions encode_options(const char *direction, const char *inverters, int reverse) {
  bacc::EncodeOptions o;
  if (direction) {
    auto d = bacc::direction_from_string(direction);
    if (!d)
      fail(ErrorCode::InvalidArgument, std::string("unknown direction '") + direction + "'");
    o.direction = *d;
  }
  if (inverters) {
    auto i = bacc::inverter_mode_from_string(inverters);
    if (!i)
      fail(ErrorCode::InvalidArgument, std::string("unknown inverter mode '") + inverters + "'");
    o.inverters = *i;
  }
  o.reverse = reverse != 0;
  return o;
}

Json recipe_to_json(const bacc::OptRecipe &r) {
  Json passes = Json::array();
  for (auto p : r.passes)
    passes.push_back(std::string(bacc::to_string(p)));
  return {{"seed", r.seed}, {"passes", passes}};
}

Json num_or_null(double x) { return std::isnan(x) ? Json(nullptr) : Json(x); }

} // namespace

extern "C" {

const char *bacc_version(void) { return "0.1.0"; }

const char *bacc_last_error(void) { return g_last_error.c_str(); }

const char *bacc_status_name(bacc_status status) {
  if (status == BACC_OK)
    return "Ok";
  if (status < BACC_ERR_MALFORMED_HEADER || status > BACC_ERR_INTERNAL)
    return "Unknown";
  return bacc::to_string(static_cast<ErrorCode>(status)).data();
}

int bacc_status_is_user_error(bacc_status status) {
  if (status < BACC_ERR_MALFORMED_HEADER || status > BACC_ERR_INTERNAL)
    return 0;
  return bacc::is_user_error(static_cast<ErrorCode>(status)) ? 1 : 0;
}

void bacc_string_free(char *s) { std::free(s); }

// ------------------------------------------------------------ circuits

bacc_status bacc_circuit_read(const char *path, bacc_circuit **out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new bacc_circuit{bacc::read_aag_file(path)};
  });
}

bacc_status bacc_circuit_parse(const char *aag_text, bacc_circuit **out) {
  return guard([&] {
    need(aag_text, "aag_text");
    need(out, "out");
    *out = new bacc_circuit{bacc::parse_aag(aag_text)};
  });
}

bacc_status bacc_circuit_builtin(const char *id, bacc_circuit **out) {
  return guard([&] {
    need(id, "id");
    need(out, "out");
    *out = new bacc_circuit{bacc::builtin_design(id)};
  });
}

bacc_status bacc_circuit_resolve(const char *source, const char *base_dir, bacc_circuit **out) {
  return guard([&] {
    need(source, "source");
    need(out, "out");
    *out = new bacc_circuit{bacc::resolve_design(source, base_dir ? base_dir : "")};
  });
}

void bacc_circuit_free(bacc_circuit *c) { delete c; }

bacc_status bacc_circuit_write(const bacc_circuit *c, const char *path) {
  return guard([&] {
    need(c, "circuit");
    need(path, "path");
    bacc::write_aag_file(c->c, path);
  });
}

bacc_status bacc_circuit_to_aag(const bacc_circuit *c, char **aag_text) {
  return guard([&] {
    need(c, "circuit");
    need(aag_text, "aag_text");
    *aag_text = dup(bacc::write_aag(c->c));
  });
}

size_t bacc_circuit_num_inputs(const bacc_circuit *c) { return c ? c->c.num_inputs() : 0; }
size_t bacc_circuit_num_outputs(const bacc_circuit *c) { return c ? c->c.num_outputs() : 0; }
size_t bacc_circuit_num_ands(const bacc_circuit *c) { return c ? c->c.num_ands() : 0; }
size_t bacc_circuit_depth(const bacc_circuit *c) { return c ? bacc::depth(c->c) : 0; }

bacc_status bacc_circuit_input_index(const bacc_circuit *c, const char *name, size_t *index) {
  return guard([&] {
    need(c, "circuit");
    need(index, "index");
    *index = find_name(c->c.input_names, c->c.num_inputs(), name, "input");
  });
}

bacc_status bacc_circuit_output_index(const bacc_circuit *c, const char *name, size_t *index) {
  return guard([&] {
    need(c, "circuit");
    need(index, "index");
    *index = find_name(c->c.output_names, c->c.num_outputs(), name, "output");
  });
}

bacc_status bacc_circuit_truth_hex(const bacc_circuit *c, size_t output, char **hex) {
  return guard([&] {
    need(c, "circuit");
    need(hex, "hex");
    if (c->c.num_inputs() > 16)
      fail(ErrorCode::TooManyInputs, "truth tables are printed for at most 16 inputs");
    if (output >= c->c.num_outputs())
      fail(ErrorCode::InvalidArgument, "output index out of range");
    *hex = dup(bacc::to_hex(bacc::simulate_exhaustive(c->c), output));
  });
}

bacc_status bacc_circuit_same_function(const bacc_circuit *a, const bacc_circuit *b, int *same) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(same, "same");
    *same = bacc::simulate_exhaustive(a->c) == bacc::simulate_exhaustive(b->c);
  });
}

bacc_status bacc_circuit_structurally_equal(const bacc_circuit *a, const bacc_circuit *b,
                                            int *equal) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(equal, "equal");
    *equal = bacc::structurally_equal(a->c, b->c);
  });
}

bacc_status bacc_circuit_transform(const bacc_circuit *c, const char *transform_json, int invert,
                                   bacc_circuit **out) {
  return guard([&] {
    need(c, "circuit");
    need(transform_json, "transform_json");
    need(out, "out");
    auto t = bacc::transform_from_json(transform_json);
    if (invert)
      t = bacc::invert(t);
    *out = new bacc_circuit{bacc::apply(c->c, t)};
  });
}

bacc_status bacc_transform_invert(const char *transform_json, char **inverse_json) {
  return guard([&] {
    need(transform_json, "transform_json");
    need(inverse_json, "inverse_json");
    *inverse_json = dup(bacc::to_json(bacc::invert(bacc::transform_from_json(transform_json))));
  });
}

bacc_status bacc_circuit_optimize(const bacc_circuit *c, uint64_t seed, size_t min_len,
                                  size_t max_len, bacc_circuit **out, char **recipe_json) {
  return guard([&] {
    need(c, "circuit");
    need(out, "out");
    auto r = bacc::random_optimize(c->c, seed, min_len, max_len);
    Json j = recipe_to_json(r.recipe);
    j["attempts"] = r.attempts;
    j["distinct"] = r.distinct;
    put(recipe_json, j.dump());
    *out = new bacc_circuit{std::move(r.circuit)};
  });
}

bacc_status bacc_matching_equivalent(const bacc_circuit *a, const bacc_circuit *b, double budget,
                                     int *found, char **transform_json) {
  return guard([&] {
    need(a, "a");
    need(b, "b");
    need(found, "found");
    auto t = bacc::matching_equivalent(a->c, b->c, budget);
    *found = t.has_value();
    if (t)
      put(transform_json, bacc::to_json(*t));
  });
}

bacc_status bacc_canonical_key(const bacc_circuit *c, double budget, char **key) {
  return guard([&] {
    need(c, "circuit");
    need(key, "key");
    *key = dup(bacc::canonical_key(c->c, budget).hex);
  });
}

bacc_status bacc_encode_json(const bacc_circuit *c, const char *direction, const char *inverters,
                             int reverse, char **json) {
  return guard([&] {
    need(c, "circuit");
    need(json, "json");
    *json = dup(bacc::to_json(bacc::encode(c->c, encode_options(direction, inverters, reverse))));
  });
}

// ------------------------------------------------------------- datasets

void bacc_gen_params_default(bacc_gen_params *p) {
  if (!p)
    return;
  const bacc::GenParams d;
  p->per_group = d.per_group;
  p->min_recipe = d.min_recipe;
  p->max_recipe = d.max_recipe;
  p->jobs = d.jobs;
}

bacc_status bacc_dataset_generate(const char *const *sources, size_t count, const char *base_dir,
                                  uint64_t seed, const bacc_gen_params *params,
                                  bacc_dataset **out) {
  return guard([&] {
    need(out, "out");
    if (count == 0)
      fail(ErrorCode::InvalidArgument, "no designs given");
    need(sources, "sources");
    bacc::GenParams p;
    if (params) {
      p.per_group = params->per_group;
      p.min_recipe = params->min_recipe;
      p.max_recipe = params->max_recipe;
      p.jobs = params->jobs;
    }
    const std::string base = base_dir ? base_dir : "";
    std::vector<bacc::Circuit> designs;
    for (size_t i = 0; i < count; ++i) {
      need(sources[i], "design source");
      designs.push_back(bacc::resolve_design(sources[i], base));
    }
    auto m = bacc::generate_dataset(designs, seed, p);
    for (size_t i = 0; i < count; ++i)
      m.designs[i].source = sources[i];
    *out = new bacc_dataset{std::move(m), base};
  });
}

bacc_status bacc_dataset_split(bacc_dataset *d, const char *mode, double train_fraction,
                               const char *train_kinds, uint64_t seed) {
  return guard([&] {
    need(d, "dataset");
    bacc::SplitConfig config;
    if (mode) {
      auto sm = bacc::split_mode_from_string(mode);
      if (!sm)
        fail(ErrorCode::InvalidArgument, std::string("unknown split mode '") + mode + "'");
      config.mode = *sm;
    }
    config.train_fraction = train_fraction;
    if (train_kinds)
      config.train_kinds = bacc::parse_group_kinds(train_kinds);
    config.seed = seed;
    d->m = bacc::split_dataset(std::move(d->m), config);
  });
}

bacc_status bacc_dataset_save(const bacc_dataset *d, const char *path) {
  return guard([&] {
    need(d, "dataset");
    need(path, "path");
    bacc::save_manifest(d->m, path);
  });
}

bacc_status bacc_dataset_load(const char *path, bacc_dataset **out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    auto m = bacc::load_manifest(path);
    *out = new bacc_dataset{std::move(m), std::filesystem::path(path).parent_path().string()};
  });
}

void bacc_dataset_free(bacc_dataset *d) { delete d; }

size_t bacc_dataset_num_records(const bacc_dataset *d) { return d ? d->m.records.size() : 0; }
size_t bacc_dataset_num_classes(const bacc_dataset *d) { return d ? d->m.num_classes() : 0; }

bacc_status bacc_dataset_manifest_json(const bacc_dataset *d, char **json) {
  return guard([&] {
    need(d, "dataset");
    need(json, "json");
    *json = dup(bacc::manifest_to_json(d->m));
  });
}

bacc_status bacc_dataset_summary(const bacc_dataset *d, char **text) {
  return guard([&] {
    need(d, "dataset");
    need(text, "text");
    const auto &m = d->m;
    // counts[class][kind][split]
    std::vector<std::array<std::array<size_t, 2>, bacc::kNumGroupKinds>> counts(
        m.num_classes(), std::array<std::array<size_t, 2>, bacc::kNumGroupKinds>{});
    for (const auto &r : m.records)
      ++counts[r.label][static_cast<size_t>(r.kind)][static_cast<size_t>(r.split)];
    std::ostringstream out;
    char line[256];
    std::snprintf(line, sizeof line, "%-5s %-18s %4s %4s", "class", "design", "in", "out");
    out << line;
    for (size_t k = 0; k < bacc::kNumGroupKinds; ++k) {
      std::snprintf(line, sizeof line, " %9s", std::string(bacc::to_string(bacc::GroupKind(k))).c_str());
      out << line;
    }
    out << "   (train/eval)\n";
    for (size_t c = 0; c < m.num_classes(); ++c) {
      std::snprintf(line, sizeof line, "%-5zu %-18s %4zu %4zu", c, m.designs[c].name.c_str(),
                    m.designs[c].inputs, m.designs[c].outputs);
      out << line;
      for (size_t k = 0; k < bacc::kNumGroupKinds; ++k) {
        std::snprintf(line, sizeof line, " %4zu/%-4zu", counts[c][k][0], counts[c][k][1]);
        out << line;
      }
      out << '\n';
    }
    size_t train = 0;
    for (const auto &r : m.records)
      train += r.split == bacc::Split::Train;
    out << m.records.size() << " records, " << m.num_classes() << " classes, " << train
        << " train, " << m.records.size() - train << " eval\n";
    *text = dup(out.str());
  });
}

bacc_status bacc_dataset_stats_csv(const bacc_dataset *d, char **csv) {
  return guard([&] {
    need(d, "dataset");
    need(csv, "csv");
    *csv = dup(bacc::stats_csv(d->m));
  });
}

bacc_status bacc_dataset_audit(const bacc_dataset *d, const char *manifest_dir, double budget,
                               int *ok, char **report_json) {
  return guard([&] {
    need(d, "dataset");
    need(ok, "ok");
    const std::string dir = manifest_dir ? manifest_dir : d->dir;
    std::vector<bacc::Circuit> designs;
    for (const auto &e : d->m.designs)
      designs.push_back(bacc::resolve_design(e.source, dir));
    const auto report = bacc::audit_dataset(d->m, designs, budget);
    *ok = report.ok();
    put(report_json, bacc::audit_to_json(report));
  });
}

// ------------------------------------------------------------- training

void bacc_train_config_default(bacc_train_config *c) {
  if (!c)
    return;
  const bacc::GnnConfig g;
  c->hidden = g.hidden;
  c->lr = g.lr;
  c->weight_decay = g.weight_decay;
  c->batch = g.batch;
  c->epochs = g.epochs;
  c->pooling = g.pooling;
  c->pool_ratio = g.pool_ratio;
  c->seed = g.seed;
  c->eval_every = g.eval_every;
  c->direction = "bidigraph";
  c->inverters = "without";
  c->reverse = 0;
}

bacc_status bacc_train(const bacc_dataset *d, const bacc_train_config *config, bacc_model **model,
                       char **history_csv, char **summary_json) {
  return guard([&] {
    need(d, "dataset");
    need(config, "config");
    need(model, "model");
    bacc::GnnConfig g;
    g.hidden = config->hidden;
    g.lr = config->lr;
    g.weight_decay = config->weight_decay;
    g.batch = config->batch;
    g.epochs = config->epochs;
    g.pooling = config->pooling != 0;
    g.pool_ratio = config->pool_ratio;
    g.seed = config->seed;
    g.eval_every = config->eval_every;
    if (g.hidden == 0 || g.epochs == 0)
      fail(ErrorCode::InvalidArgument, "hidden width and epoch count must be positive");
    if (!(g.pool_ratio > 0 && g.pool_ratio <= 1))
      fail(ErrorCode::InvalidArgument, "pool ratio must lie in (0, 1]");
    const auto enc = encode_options(config->direction, config->inverters, config->reverse);
    const auto samples = bacc::make_samples(d->m, enc);
    auto result = bacc::train(samples, d->m.num_classes(), g, enc);
    put(history_csv, bacc::history_csv(result.history));
    if (summary_json) {
      const auto &h = result.history;
      auto epoch_json = [&](const bacc::EpochStats &e) {
        Json groups = Json::object();
        for (size_t k = 0; k < bacc::kNumGroupKinds; ++k)
          groups[std::string(bacc::to_string(bacc::GroupKind(k)))] =
              e.group_accuracy ? num_or_null((*e.group_accuracy)[k]) : Json(nullptr);
        return Json{{"epoch", e.epoch},
                    {"loss", e.loss},
                    {"train_accuracy", e.train_accuracy},
                    {"groups", groups}};
      };
      Json j;
      j["final"] = epoch_json(h.epochs.back());
      const auto best = h.best_epoch();
      j["best"] = best ? epoch_json(h.epochs[*best - 1]) : Json(nullptr);
      Json on_train = Json::array();
      for (size_t k = 0; k < bacc::kNumGroupKinds; ++k)
        if (h.scored_on_train[k])
          on_train.push_back(std::string(bacc::to_string(bacc::GroupKind(k))));
      j["scored_on_train"] = on_train;
      *summary_json = dup(j.dump(2));
    }
    *model = new bacc_model{std::move(result.model)};
  });
}

bacc_status bacc_model_save(const bacc_model *m, const char *path) {
  return guard([&] {
    need(m, "model");
    need(path, "path");
    bacc::save_model(m->m, path);
  });
}

bacc_status bacc_model_load(const char *path, bacc_model **out) {
  return guard([&] {
    need(path, "path");
    need(out, "out");
    *out = new bacc_model{bacc::load_model(path)};
  });
}

void bacc_model_free(bacc_model *m) { delete m; }

bacc_status bacc_evaluate(const bacc_model *m, const bacc_dataset *d, char **metrics_json,
                          char **embeddings_csv) {
  return guard([&] {
    need(m, "model");
    need(d, "dataset");
    need(metrics_json, "metrics_json");
    const auto &model = m->m;
    if (model.num_classes != d->m.num_classes())
      fail(ErrorCode::DimensionMismatch,
           "model has " + std::to_string(model.num_classes) + " classes, dataset has " +
               std::to_string(d->m.num_classes()));
    const auto samples = bacc::make_samples(d->m, model.encoding);

    std::vector<bacc::Sample> eval_set;
    for (const auto &s : samples)
      if (s.split == bacc::Split::Eval)
        eval_set.push_back({&s.graph, s.label});
    if (eval_set.empty())
      fail(ErrorCode::EmptyEval, "the dataset has no eval records");
    const auto overall = bacc::evaluate(model, eval_set);

    Json groups = Json::object();
    for (size_t k = 0; k < bacc::kNumGroupKinds; ++k) {
      const auto kind = bacc::GroupKind(k);
      std::vector<bacc::Sample> set;
      for (const auto &s : samples)
        if (s.kind == kind && s.split == bacc::Split::Eval)
          set.push_back({&s.graph, s.label});
      const char *scored_on = "eval";
      if (set.empty()) {
        scored_on = "train";
        for (const auto &s : samples)
          if (s.kind == kind)
            set.push_back({&s.graph, s.label});
      }
      const std::string name(bacc::to_string(kind));
      if (set.empty()) {
        groups[name] = nullptr;
        continue;
      }
      groups[name] = {{"accuracy", bacc::evaluate(model, set).accuracy},
                      {"count", set.size()},
                      {"scored_on", scored_on}};
    }
    Json per_class = Json::array();
    for (double a : overall.per_class)
      per_class.push_back(num_or_null(a));
    Json j{{"eval_records", eval_set.size()},
           {"accuracy", overall.accuracy},
           {"groups", groups},
           {"per_class", per_class}};
    *metrics_json = dup(j.dump(2));

    if (embeddings_csv) {
      std::vector<bacc::Sample> all;
      std::vector<size_t> ids, labels;
      for (size_t i = 0; i < samples.size(); ++i) {
        all.push_back({&samples[i].graph, samples[i].label});
        ids.push_back(i);
        labels.push_back(samples[i].label);
      }
      *embeddings_csv = dup(bacc::embeddings_csv(ids, labels, bacc::evaluate(model, all)));
    }
  });
}

} // extern "C"
