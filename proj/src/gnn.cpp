// SPDX-License-Identifier: Apache-2.0
#include "bacc/gnn.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>

#include "bacc/error.hpp"
#include "bacc/random.hpp"
#include "json_util.hpp"

namespace bacc {

const std::array<const char *, kNumParams> kParamNames = {"W1", "b1", "W2", "b2", "score",
                                                          "M1", "c1", "M2", "c2"};

namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

constexpr const char *kFormat = "bacc-model";
constexpr int kModelVersion = 1;

// out = A * m, A given as receiver rows.
RowMat spmm(const NormAdjacency &a, const RowMat &m) {
  RowMat out = RowMat::Zero(m.rows(), m.cols());
  for (Eigen::Index v = 0; v < m.rows(); ++v)
    for (uint32_t k = a.row_ptr[v]; k < a.row_ptr[v + 1]; ++k)
      out.row(v).noalias() += a.weight[k] * m.row(a.col[k]);
  return out;
}

// out = A^T * m.
RowMat spmm_t(const NormAdjacency &a, const RowMat &m) {
  RowMat out = RowMat::Zero(m.rows(), m.cols());
  for (Eigen::Index v = 0; v < m.rows(); ++v)
    for (uint32_t k = a.row_ptr[v]; k < a.row_ptr[v + 1]; ++k)
      out.row(a.col[k]).noalias() += a.weight[k] * m.row(v);
  return out;
}

double sigmoid(double x) { return 1.0 / (1.0 + std::exp(-x)); }

struct Trace {
  RowMat ax, z1, h1, ah1, z2, h2;
  Eigen::VectorXd score; // per node
  double score_norm = 0;
  std::vector<uint32_t> kept;
  Eigen::VectorXd gate; // per kept node
  Eigen::RowVectorXd readout, a1, h, logits;
};

void forward(const EncodedGraph &g, const Model &model, Trace &t) {
  const auto &p = model.params;
  if (static_cast<size_t>(g.features.cols()) != model.num_features)
    fail(ErrorCode::DimensionMismatch,
         "graph has " + std::to_string(g.features.cols()) + " features, model expects " +
             std::to_string(model.num_features));
  const auto n = static_cast<Eigen::Index>(g.num_nodes);
  if (n == 0 || g.features.rows() != n || g.adj.row_ptr.size() != g.num_nodes + 1)
    fail(ErrorCode::DimensionMismatch, "malformed encoded graph");

  t.ax = spmm(g.adj, RowMat(g.features));
  t.z1 = t.ax * p[kW1];
  t.z1.rowwise() += p[kB1].row(0);
  t.h1 = t.z1.cwiseMax(0.0);
  t.ah1 = spmm(g.adj, t.h1);
  t.z2 = t.ah1 * p[kW2];
  t.z2.rowwise() += p[kB2].row(0);
  t.h2 = t.z2.cwiseMax(0.0);

  if (model.config.pooling) {
    t.score_norm = p[kScore].norm();
    t.score = t.score_norm > 0 ? Eigen::VectorXd(t.h2 * p[kScore].transpose() / t.score_norm)
                               : Eigen::VectorXd::Zero(n);
    const auto k = std::clamp<Eigen::Index>(
        static_cast<Eigen::Index>(std::ceil(model.config.pool_ratio * static_cast<double>(n))), 1,
        n);
    std::vector<uint32_t> order(static_cast<size_t>(n));
    std::iota(order.begin(), order.end(), 0u);
    std::stable_sort(order.begin(), order.end(),
                     [&](uint32_t a, uint32_t b) { return t.score(a) > t.score(b); });
    t.kept.assign(order.begin(), order.begin() + k);
    t.gate.resize(k);
    t.readout = Eigen::RowVectorXd::Zero(t.h2.cols());
    for (Eigen::Index i = 0; i < k; ++i) {
      t.gate(i) = sigmoid(t.score(t.kept[i]));
      t.readout.noalias() += t.gate(i) * t.h2.row(t.kept[i]);
    }
    t.readout /= static_cast<double>(k);
  } else {
    t.kept.clear();
    t.readout = t.h2.colwise().mean();
  }
  t.a1 = t.readout * p[kM1] + p[kC1];
  t.h = t.a1.cwiseMax(0.0);
  t.logits = t.h * p[kM2] + p[kC2];
}

// Accumulates d(loss)/d(params) for one graph given d(loss)/d(logits).
void backward(const EncodedGraph &g, const Model &model, const Trace &t,
              const Eigen::RowVectorXd &dlogits, Params &grad) {
  const auto &p = model.params;
  grad[kM2].noalias() += t.h.transpose() * dlogits;
  grad[kC2] += dlogits;
  const Eigen::RowVectorXd da1 =
      (dlogits * p[kM2].transpose()).cwiseProduct((t.a1.array() > 0).cast<double>().matrix());
  grad[kM1].noalias() += t.readout.transpose() * da1;
  grad[kC1] += da1;
  const Eigen::RowVectorXd dr = da1 * p[kM1].transpose();

  RowMat dh2 = RowMat::Zero(t.h2.rows(), t.h2.cols());
  if (model.config.pooling) {
    const double k = static_cast<double>(t.kept.size());
    Eigen::RowVectorXd dshat = Eigen::RowVectorXd::Zero(p[kScore].cols());
    const Eigen::RowVectorXd shat =
        t.score_norm > 0 ? Eigen::RowVectorXd(p[kScore] / t.score_norm) : dshat;
    for (size_t i = 0; i < t.kept.size(); ++i) {
      const uint32_t v = t.kept[i];
      const double gate = t.gate(static_cast<Eigen::Index>(i));
      dh2.row(v).noalias() += (gate / k) * dr;
      const double dgate = t.h2.row(v).dot(dr) / k;
      const double dscore = dgate * gate * (1.0 - gate);
      if (t.score_norm > 0) {
        dh2.row(v).noalias() += dscore * shat;
        dshat.noalias() += dscore * t.h2.row(v);
      }
    }
    if (t.score_norm > 0)
      grad[kScore] += (dshat - shat * shat.dot(dshat)) / t.score_norm;
  } else {
    dh2.rowwise() += dr / static_cast<double>(t.h2.rows());
  }

  const RowMat dz2 = dh2.cwiseProduct((t.z2.array() > 0).cast<double>().matrix());
  grad[kW2].noalias() += t.ah1.transpose() * dz2;
  grad[kB2] += dz2.colwise().sum();
  const RowMat dh1 = spmm_t(g.adj, dz2 * p[kW2].transpose());
  const RowMat dz1 = dh1.cwiseProduct((t.z1.array() > 0).cast<double>().matrix());
  grad[kW1].noalias() += t.ax.transpose() * dz1;
  grad[kB1] += dz1.colwise().sum();
}

double log_sum_exp(const Eigen::RowVectorXd &x) {
  const double mx = x.maxCoeff();
  return mx + std::log((x.array() - mx).exp().sum());
}

size_t argmax(const Eigen::RowVectorXd &x) {
  Eigen::Index i = 0;
  x.maxCoeff(&i);
  return static_cast<size_t>(i);
}

double squared_norm(const Params &p) {
  double s = 0;
  for (const auto &m : p)
    s += m.squaredNorm();
  return s;
}

Params zeros_like(const Params &p) {
  Params z;
  for (size_t i = 0; i < kNumParams; ++i)
    z[i] = Eigen::MatrixXd::Zero(p[i].rows(), p[i].cols());
  return z;
}

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.10g", x);
  return buf;
}

} // namespace

Model init_model(size_t num_features, size_t num_classes, const GnnConfig &config,
                 const EncodeOptions &encoding) {
  if (num_features == 0 || num_classes == 0 || config.hidden == 0)
    fail(ErrorCode::InvalidArgument, "model dimensions must be positive");
  if (!(config.pool_ratio > 0.0 && config.pool_ratio <= 1.0))
    fail(ErrorCode::InvalidArgument, "pool ratio must lie in (0, 1]");
  Model m;
  m.config = config;
  m.encoding = encoding;
  m.num_features = num_features;
  m.num_classes = num_classes;
  const auto f = static_cast<Eigen::Index>(num_features), h = static_cast<Eigen::Index>(config.hidden),
             k = static_cast<Eigen::Index>(num_classes);
  const std::array<std::pair<Eigen::Index, Eigen::Index>, kNumParams> shapes = {
      {{f, h}, {1, h}, {h, h}, {1, h}, {1, h}, {h, h}, {1, h}, {h, k}, {1, k}}};
  SplitMix64 rng(derive_seed(config.seed, {0x1417}));
  for (size_t i = 0; i < kNumParams; ++i) {
    auto [rows, cols] = shapes[i];
    m.params[i] = Eigen::MatrixXd::Zero(rows, cols);
    const bool bias = i == kB1 || i == kB2 || i == kC1 || i == kC2;
    if (bias)
      continue;
    // The score vector maps H features to one value.
    const double fan_in = i == kScore ? static_cast<double>(h) : static_cast<double>(rows);
    const double fan_out = i == kScore ? 1.0 : static_cast<double>(cols);
    const double bound = std::sqrt(6.0 / (fan_in + fan_out));
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index c = 0; c < cols; ++c)
        m.params[i](r, c) = (2.0 * rng.unit() - 1.0) * bound;
  }
  return m;
}

ForwardResult gcn_forward(const EncodedGraph &g, const Model &model) {
  Trace t;
  forward(g, model, t);
  return {Eigen::MatrixXd(t.h2), t.kept, t.readout, t.logits};
}

Eigen::RowVectorXd softmax(const Eigen::RowVectorXd &logits) {
  return (logits.array() - log_sum_exp(logits)).exp().matrix();
}

double loss_and_grad(const std::vector<Sample> &batch, const Model &model, Params *grad) {
  if (batch.empty())
    fail(ErrorCode::InvalidArgument, "empty batch");
  if (grad)
    *grad = zeros_like(model.params);
  const double scale = 1.0 / static_cast<double>(batch.size());
  double loss = 0;
  Trace t;
  for (const auto &s : batch) {
    if (s.label >= model.num_classes)
      fail(ErrorCode::InvalidArgument, "label out of range");
    forward(*s.graph, model, t);
    const double lse = log_sum_exp(t.logits);
    loss += (lse - t.logits(static_cast<Eigen::Index>(s.label))) * scale;
    if (grad) {
      Eigen::RowVectorXd d = (t.logits.array() - lse).exp().matrix();
      d(static_cast<Eigen::Index>(s.label)) -= 1.0;
      backward(*s.graph, model, t, d * scale, *grad);
    }
  }
  const double wd = model.config.weight_decay;
  loss += 0.5 * wd * squared_norm(model.params);
  if (grad && wd != 0)
    for (size_t i = 0; i < kNumParams; ++i)
      (*grad)[i] += wd * model.params[i];
  return loss;
}

std::vector<uint8_t> activation_pattern(const EncodedGraph &g, const Model &model) {
  Trace t;
  forward(g, model, t);
  std::vector<uint8_t> bits;
  for (const RowMat *z : {&t.z1, &t.z2})
    for (Eigen::Index i = 0; i < z->size(); ++i)
      bits.push_back(z->data()[i] > 0);
  std::vector<uint8_t> kept(g.num_nodes, 0);
  for (uint32_t v : t.kept)
    kept[v] = 1;
  bits.insert(bits.end(), kept.begin(), kept.end());
  for (Eigen::Index i = 0; i < t.a1.size(); ++i)
    bits.push_back(t.a1(i) > 0);
  return bits;
}

EvalResult evaluate(const Model &model, const std::vector<Sample> &records) {
  if (records.empty())
    fail(ErrorCode::EmptyEval, "no records to evaluate");
  EvalResult r;
  r.embeddings.resize(static_cast<Eigen::Index>(records.size()),
                      static_cast<Eigen::Index>(model.config.hidden));
  std::vector<size_t> hits(model.num_classes, 0), totals(model.num_classes, 0);
  size_t correct = 0;
  Trace t;
  for (size_t i = 0; i < records.size(); ++i) {
    forward(*records[i].graph, model, t);
    const size_t pred = argmax(t.logits);
    r.predictions.push_back(pred);
    r.embeddings.row(static_cast<Eigen::Index>(i)) = t.readout;
    const size_t label = records[i].label;
    correct += pred == label;
    if (label < model.num_classes) {
      ++totals[label];
      hits[label] += pred == label;
    }
  }
  r.accuracy = static_cast<double>(correct) / static_cast<double>(records.size());
  for (size_t c = 0; c < model.num_classes; ++c)
    r.per_class.push_back(totals[c] ? static_cast<double>(hits[c]) / static_cast<double>(totals[c])
                                    : std::numeric_limits<double>::quiet_NaN());
  return r;
}

std::optional<size_t> TrainHistory::best_epoch() const {
  std::optional<size_t> best;
  double best_score = -1;
  for (const auto &e : epochs) {
    if (!e.group_accuracy)
      continue;
    double sum = 0;
    size_t count = 0;
    for (double a : *e.group_accuracy)
      if (!std::isnan(a)) {
        sum += a;
        ++count;
      }
    const double score = count ? sum / static_cast<double>(count) : 0.0;
    if (score > best_score) {
      best_score = score;
      best = e.epoch;
    }
  }
  return best;
}

std::vector<TrainSample> make_samples(const DatasetManifest &m, const EncodeOptions &encoding) {
  std::vector<TrainSample> out;
  out.reserve(m.records.size());
  for (const auto &r : m.records)
    out.push_back({encode(r.circuit, encoding, r.label), r.label, r.kind, r.split});
  return out;
}

TrainResult train(const std::vector<TrainSample> &samples, size_t num_classes,
                  const GnnConfig &config, const EncodeOptions &encoding) {
  if (config.batch == 0)
    fail(ErrorCode::InvalidArgument, "batch size must be positive");
  std::vector<size_t> train_ids;
  std::vector<uint8_t> has_train(num_classes, 0);
  for (size_t i = 0; i < samples.size(); ++i) {
    if (samples[i].label >= num_classes)
      fail(ErrorCode::InvalidArgument, "label out of range");
    if (samples[i].split == Split::Train) {
      train_ids.push_back(i);
      has_train[samples[i].label] = 1;
    }
  }
  for (size_t c = 0; c < num_classes; ++c)
    if (!has_train[c])
      fail(ErrorCode::EmptySplit, "class " + std::to_string(c) + " has no train sample");
  if (train_ids.empty())
    fail(ErrorCode::EmptySplit, "no train samples");

  TrainResult result;
  TrainHistory &history = result.history;
  history.config = config;
  Model &model = result.model;
  model = init_model(static_cast<size_t>(samples[train_ids[0]].graph.features.cols()), num_classes,
                     config, encoding);

  // Scoring sets per group kind.
  std::array<std::vector<Sample>, kNumGroupKinds> score_sets;
  for (size_t k = 0; k < kNumGroupKinds; ++k) {
    const auto kind = static_cast<GroupKind>(k);
    for (const auto &s : samples)
      if (s.kind == kind && s.split == Split::Eval)
        score_sets[k].push_back({&s.graph, s.label});
    if (score_sets[k].empty()) {
      for (const auto &s : samples)
        if (s.kind == kind)
          score_sets[k].push_back({&s.graph, s.label});
      history.scored_on_train[k] = !score_sets[k].empty();
    }
  }

  Params m1 = zeros_like(model.params), m2 = zeros_like(model.params), grad;
  size_t step = 0;
  std::vector<double> sample_loss(train_ids.size());
  std::vector<uint8_t> sample_hit(train_ids.size());
  std::vector<size_t> order(train_ids.size());
  Trace t;
  for (size_t epoch = 1; epoch <= config.epochs; ++epoch) {
    std::iota(order.begin(), order.end(), size_t{0});
    SplitMix64 rng(derive_seed(config.seed, {0xe90c, epoch}));
    rng.shuffle(std::span<size_t>(order));

    for (size_t start = 0; start < order.size(); start += config.batch) {
      const size_t end = std::min(order.size(), start + config.batch);
      const double scale = 1.0 / static_cast<double>(end - start);
      grad = zeros_like(model.params);
      for (size_t b = start; b < end; ++b) {
        const size_t slot = order[b];
        const TrainSample &s = samples[train_ids[slot]];
        forward(s.graph, model, t);
        const double lse = log_sum_exp(t.logits);
        sample_loss[slot] = lse - t.logits(static_cast<Eigen::Index>(s.label));
        sample_hit[slot] = argmax(t.logits) == s.label;
        Eigen::RowVectorXd d = (t.logits.array() - lse).exp().matrix();
        d(static_cast<Eigen::Index>(s.label)) -= 1.0;
        backward(s.graph, model, t, d * scale, grad);
      }
      ++step;
      const double c1 = 1.0 - std::pow(config.beta1, static_cast<double>(step));
      const double c2 = 1.0 - std::pow(config.beta2, static_cast<double>(step));
      for (size_t i = 0; i < kNumParams; ++i) {
        const Eigen::MatrixXd g = grad[i] + config.weight_decay * model.params[i];
        m1[i] = config.beta1 * m1[i] + (1.0 - config.beta1) * g;
        m2[i] = config.beta2 * m2[i] + (1.0 - config.beta2) * g.cwiseProduct(g);
        model.params[i].array() -=
            config.lr * (m1[i].array() / c1) / ((m2[i].array() / c2).sqrt() + config.adam_eps);
      }
    }

    EpochStats stats;
    stats.epoch = epoch;
    double loss = 0, hits = 0;
    for (size_t i = 0; i < sample_loss.size(); ++i) {
      loss += sample_loss[i];
      hits += sample_hit[i];
    }
    const auto n = static_cast<double>(sample_loss.size());
    stats.loss = loss / n + 0.5 * config.weight_decay * squared_norm(model.params);
    stats.train_accuracy = hits / n;
    const bool eval_now =
        epoch == config.epochs || (config.eval_every > 0 && epoch % config.eval_every == 0);
    if (eval_now) {
      std::array<double, kNumGroupKinds> acc;
      for (size_t k = 0; k < kNumGroupKinds; ++k)
        acc[k] = score_sets[k].empty() ? std::numeric_limits<double>::quiet_NaN()
                                       : evaluate(model, score_sets[k]).accuracy;
      stats.group_accuracy = acc;
    }
    history.epochs.push_back(stats);
  }
  return result;
}

std::string history_csv(const TrainHistory &h) {
  std::string out = "epoch,loss,train_acc,acc_LE,acc_Neg,acc_Perm,acc_NP\n";
  for (const auto &e : h.epochs) {
    out += std::to_string(e.epoch) + ',' + fmt(e.loss) + ',' + fmt(e.train_accuracy);
    for (size_t k = 0; k < kNumGroupKinds; ++k) {
      out += ',';
      if (e.group_accuracy && !std::isnan((*e.group_accuracy)[k]))
        out += fmt((*e.group_accuracy)[k]);
    }
    out += '\n';
  }
  return out;
}

std::string embeddings_csv(const std::vector<size_t> &record_ids, const std::vector<size_t> &labels,
                           const EvalResult &r) {
  const auto rows = static_cast<size_t>(r.embeddings.rows());
  if (record_ids.size() != rows || labels.size() != rows)
    fail(ErrorCode::DimensionMismatch, "one record id and label per embedding row");
  std::string out = "record,label,prediction";
  for (Eigen::Index c = 0; c < r.embeddings.cols(); ++c)
    out += ",e" + std::to_string(c);
  out += '\n';
  for (size_t i = 0; i < rows; ++i) {
    out += std::to_string(record_ids[i]) + ',' + std::to_string(labels[i]) + ',' +
           std::to_string(r.predictions[i]);
    for (Eigen::Index c = 0; c < r.embeddings.cols(); ++c)
      out += ',' + fmt(r.embeddings(static_cast<Eigen::Index>(i), c));
    out += '\n';
  }
  return out;
}

// -------------------------------------------------------------- checkpoint

std::string model_to_json(const Model &m) {
  const GnnConfig &c = m.config;
  Json params = Json::object();
  for (size_t i = 0; i < kNumParams; ++i) {
    const auto &p = m.params[i];
    std::vector<double> data;
    for (Eigen::Index r = 0; r < p.rows(); ++r)
      for (Eigen::Index k = 0; k < p.cols(); ++k)
        data.push_back(p(r, k));
    params[kParamNames[i]] = {{"rows", p.rows()}, {"cols", p.cols()}, {"data", data}};
  }
  Json j{{"format", kFormat},
         {"version", kModelVersion},
         {"num_features", m.num_features},
         {"num_classes", m.num_classes},
         {"encoding",
          {{"direction", std::string(to_string(m.encoding.direction))},
           {"inverters", std::string(to_string(m.encoding.inverters))},
           {"reverse", m.encoding.reverse}}},
         {"config",
          {{"hidden", c.hidden},
           {"lr", c.lr},
           {"weight_decay", c.weight_decay},
           {"batch", c.batch},
           {"epochs", c.epochs},
           {"pooling", c.pooling},
           {"pool_ratio", c.pool_ratio},
           {"beta1", c.beta1},
           {"beta2", c.beta2},
           {"adam_eps", c.adam_eps},
           {"seed", c.seed},
           {"eval_every", c.eval_every}}},
         {"params", params}};
  return j.dump() + "\n";
}

Model model_from_json(std::string_view text) {
  const Json j = parse_json(text, "model");
  if (field<std::string>(j, "format") != kFormat)
    fail(ErrorCode::SchemaMismatch, "not a model checkpoint");
  if (field<int>(j, "version") != kModelVersion)
    fail(ErrorCode::SchemaMismatch, "unsupported checkpoint version");
  Model m;
  m.num_features = field<size_t>(j, "num_features");
  m.num_classes = field<size_t>(j, "num_classes");
  const Json &e = field<Json>(j, "encoding");
  auto dir = direction_from_string(field<std::string>(e, "direction"));
  auto inv = inverter_mode_from_string(field<std::string>(e, "inverters"));
  if (!dir || !inv)
    fail(ErrorCode::SchemaMismatch, "unknown encoding");
  m.encoding = {*dir, *inv, field<bool>(e, "reverse")};
  const Json &c = field<Json>(j, "config");
  GnnConfig &g = m.config;
  g.hidden = field<size_t>(c, "hidden");
  g.lr = field<double>(c, "lr");
  g.weight_decay = field<double>(c, "weight_decay");
  g.batch = field<size_t>(c, "batch");
  g.epochs = field<size_t>(c, "epochs");
  g.pooling = field<bool>(c, "pooling");
  g.pool_ratio = field<double>(c, "pool_ratio");
  g.beta1 = field<double>(c, "beta1");
  g.beta2 = field<double>(c, "beta2");
  g.adam_eps = field<double>(c, "adam_eps");
  g.seed = field<uint64_t>(c, "seed");
  g.eval_every = field<size_t>(c, "eval_every");

  const auto f = static_cast<Eigen::Index>(m.num_features), h = static_cast<Eigen::Index>(g.hidden),
             k = static_cast<Eigen::Index>(m.num_classes);
  const std::array<std::pair<Eigen::Index, Eigen::Index>, kNumParams> shapes = {
      {{f, h}, {1, h}, {h, h}, {1, h}, {1, h}, {h, h}, {1, h}, {h, k}, {1, k}}};
  const Json &params = field<Json>(j, "params");
  for (size_t i = 0; i < kNumParams; ++i) {
    const Json &p = field<Json>(params, kParamNames[i]);
    const auto rows = field<Eigen::Index>(p, "rows"), cols = field<Eigen::Index>(p, "cols");
    const auto data = field<std::vector<double>>(p, "data");
    if (rows != shapes[i].first || cols != shapes[i].second ||
        data.size() != static_cast<size_t>(rows * cols))
      fail(ErrorCode::SchemaMismatch, std::string("parameter '") + kParamNames[i] +
                                          "' has the wrong shape");
    m.params[i].resize(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
      for (Eigen::Index q = 0; q < cols; ++q) {
        const double v = data[static_cast<size_t>(r * cols + q)];
        if (!std::isfinite(v))
          fail(ErrorCode::SchemaMismatch, "non-finite parameter value");
        m.params[i](r, q) = v;
      }
  }
  return m;
}

void save_model(const Model &m, const std::string &path) {
  std::ofstream out(path, std::ios::binary);
  if (!out)
    fail(ErrorCode::MissingFile, "cannot write '" + path + "'");
  out << model_to_json(m);
}

Model load_model(const std::string &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in)
    fail(ErrorCode::MissingFile, "cannot open checkpoint '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return model_from_json(buffer.str());
}

} // namespace bacc
