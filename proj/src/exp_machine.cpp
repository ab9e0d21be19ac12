#include "tnvq/exp_machine.hpp"

#include <cmath>
#include <cstdio>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "tnvq/rng.hpp"
#include "tnvq/tt_manifold.hpp"

namespace tnvq::tn {

namespace {

double stable_log1pexp(double z) {  // log(1 + e^z) without overflow
  if (z > 0.0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

double per_sample_loss(LossKind kind, double yhat, int y) {
  if (kind == LossKind::kLogistic) return stable_log1pexp(-double(y) * yhat);
  return (yhat - y) * (yhat - y);
}

// d(per-sample loss)/d(yhat)
double loss_slope(LossKind kind, double yhat, int y) {
  if (kind == LossKind::kLogistic) {
    return -double(y) / (1.0 + std::exp(double(y) * yhat));
  }
  return 2.0 * (yhat - y);
}

void check_batch(const TnModel& m, const LabeledDataset& batch) {
  if (batch.size() == 0) throw std::invalid_argument("empty batch");
  if (batch.dim() != m.num_features()) {
    throw std::invalid_argument("feature count does not match the model");
  }
  for (int y : batch.labels) {
    if (y != 1 && y != -1) throw std::invalid_argument("labels must be +-1");
  }
}

double regularizer(const TnModel& m) {
  if (m.lambda == 0.0) return 0.0;
  double nrm = frobenius_norm(m.weights);
  return m.squared_reg ? 0.5 * m.lambda * nrm * nrm : 0.5 * m.lambda * nrm;
}

std::vector<std::vector<double>> pair_factors(const std::vector<double>& x) {
  std::vector<std::vector<double>> f;
  f.reserve(x.size());
  for (double v : x) f.push_back({1.0, v});
  return f;
}

}  // namespace

std::vector<int> clamped_ranks(int d, int r) {
  std::vector<int> ranks(static_cast<size_t>(d) + 1, 1);
  for (int k = 1; k < d; ++k) {
    long long cap = 1;
    for (int e = 0; e < std::min(k, d - k) && cap < r; ++e) cap *= 2;
    ranks[static_cast<size_t>(k)] = static_cast<int>(std::min<long long>(r, cap));
  }
  return ranks;
}

TtTensor encode_features(const std::vector<double>& x) {
  if (x.empty()) throw std::invalid_argument("feature vector is empty");
  for (double v : x) {
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature");
  }
  TtTensor t;
  for (double v : x) {
    TtCore c(1, 2, 1);
    c.at(0, 0, 0) = 1.0;
    c.at(0, 1, 0) = v;
    t.cores.push_back(std::move(c));
  }
  return t;
}

double predict_raw(const TnModel& m, const std::vector<double>& x) {
  if (static_cast<int>(x.size()) != m.num_features()) {
    throw std::invalid_argument("feature count does not match the model");
  }
  // Contraction of encode_features(x) with the weights, specialized for the
  // rank-1 encoding: row vector sweep, O(d r^2).
  Eigen::RowVectorXd v = Eigen::RowVectorXd::Ones(1);
  for (size_t k = 0; k < x.size(); ++k) {
    const TtCore& c = m.weights.cores[k];
    Eigen::RowVectorXd nxt = v * c.slice(0);
    nxt.noalias() += x[k] * (v * c.slice(1));
    v = std::move(nxt);
  }
  return v(0);
}

int classify(const TnModel& m, const std::vector<double>& x) {
  return predict_raw(m, x) < 0.0 ? -1 : +1;
}

double loss(const TnModel& m, const LabeledDataset& batch) {
  check_batch(m, batch);
  double sum = 0.0;
  for (int s = 0; s < batch.size(); ++s) {
    double yhat = predict_raw(m, batch.row(s));
    sum += per_sample_loss(m.loss_kind, yhat, batch.labels[size_t(s)]);
  }
  return sum / batch.size() + regularizer(m);
}

TtTensor euclidean_gradient(const TnModel& m, const LabeledDataset& batch) {
  check_batch(m, batch);
  const int n = batch.size();

  // The sum of rank-1 terms is accumulated exactly; compression happens only
  // when the formal rank has clearly outgrown the numerical rank, and keeps
  // every direction above the singular floor, so the result is the true
  // gradient up to machine precision regardless of batch size.
  TtTensor g;
  bool first = true;
  int compressed_rank = 1;
  auto accumulate = [&](const TtTensor& term) {
    if (first) {
      g = term;
      first = false;
    } else {
      g = tt_add(g, term);
    }
    int cur = 1;
    for (int r : g.ranks()) cur = std::max(cur, r);
    if (cur >= 2 * compressed_rank + 8) {
      g = tt_round(g, std::numeric_limits<int>::max());
      compressed_rank = 1;
      for (int r : g.ranks()) compressed_rank = std::max(compressed_rank, r);
    }
  };

  for (int s = 0; s < n; ++s) {
    std::vector<double> x = batch.row(s);
    double coef = loss_slope(m.loss_kind, predict_raw(m, x),
                             batch.labels[size_t(s)]) /
                  n;
    accumulate(tt_scale(encode_features(x), coef));
  }
  if (m.lambda != 0.0) {
    double coef = m.squared_reg
                      ? m.lambda
                      : 0.5 * m.lambda / frobenius_norm(m.weights);
    accumulate(tt_scale(m.weights, coef));
  }
  return g;
}

TnModel fit(const LabeledDataset& train, const TnTrainConfig& cfg,
            const TnEpochObserver& on_epoch) {
  if (train.size() == 0) throw std::invalid_argument("empty training set");
  if (cfg.rank < 1) throw std::invalid_argument("rank must be positive");
  if (cfg.epochs < 0) throw std::invalid_argument("epochs must be nonnegative");
  const int d = train.dim();

  TnModel m;
  m.loss_kind = cfg.loss_kind;
  m.lambda = cfg.lambda;
  m.squared_reg = cfg.squared_reg;

  // Seeded random point on the manifold, normalized to unit Frobenius norm.
  Rng rng(cfg.seed);
  std::vector<int> ranks = clamped_ranks(d, cfg.rank);
  for (int k = 0; k < d; ++k) {
    TtCore c(ranks[size_t(k)], 2, ranks[size_t(k) + 1]);
    for (double& v : c.a) v = rng.normal();
    m.weights.cores.push_back(std::move(c));
  }
  m.weights = tt_scale(m.weights, 1.0 / frobenius_norm(m.weights));

  const int n = train.size();
  std::vector<std::vector<std::vector<double>>> factors;
  factors.reserve(static_cast<size_t>(n));
  for (int s = 0; s < n; ++s) factors.push_back(pair_factors(train.row(s)));

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    TangentProjector proj(m.weights);
    for (int s = 0; s < n; ++s) {
      double yhat = predict_raw(m, train.row(s));
      double coef =
          loss_slope(m.loss_kind, yhat, train.labels[size_t(s)]) / n;
      proj.add_rank_one(factors[size_t(s)], coef);
    }
    if (m.lambda != 0.0) {
      proj.add_scaled_base(m.squared_reg
                               ? m.lambda
                               : 0.5 * m.lambda / frobenius_norm(m.weights));
    }
    m.weights = retract(m.weights, proj.take(), cfg.alpha);

    double l = loss(m, train);
    if (!std::isfinite(l)) {
      throw std::runtime_error("training loss diverged at epoch " +
                               std::to_string(epoch));
    }
    m.loss_history.push_back(l);
    if (on_epoch) on_epoch(epoch, m);
  }
  return m;
}

long long count_params(int d, int r) {
  return 2LL * d * r * r;
}

long long stored_params(const TnModel& m) {
  long long total = 0;
  for (const TtCore& c : m.weights.cores) {
    total += static_cast<long long>(c.a.size());
  }
  return total;
}

std::string serialize(const TnModel& m) {
  const int d = m.num_features();
  if (d == 0) throw std::invalid_argument("cannot serialize an empty model");
  std::vector<int> ranks = m.weights.ranks();
  int r = 1;
  for (int v : ranks) r = std::max(r, v);
  if (ranks != clamped_ranks(d, r)) {
    throw std::invalid_argument(
        "weights do not carry the uniform clamped rank profile");
  }
  std::ostringstream out;
  out << "tnmodel-v1 " << d << ' ' << r << ' '
      << (m.loss_kind == LossKind::kLogistic ? "logistic" : "mse") << ' ';
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", m.lambda);
  out << buf << '\n';
  for (const TtCore& c : m.weights.cores) {
    for (size_t i = 0; i < c.a.size(); ++i) {
      std::snprintf(buf, sizeof buf, "%.17g", c.a[i]);
      out << buf << (i + 1 == c.a.size() ? '\n' : ' ');
    }
  }
  return out.str();
}

TnModel deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string magic, kind;
  int d = 0, r = 0;
  double lambda = 0.0;
  if (!(in >> magic >> d >> r >> kind >> lambda) || magic != "tnmodel-v1") {
    throw std::invalid_argument("unrecognized model header");
  }
  if (d < 1 || r < 1) throw std::invalid_argument("bad model dimensions");
  if (kind != "logistic" && kind != "mse") {
    throw std::invalid_argument("unknown loss kind '" + kind + "'");
  }
  TnModel m;
  m.loss_kind = kind == "logistic" ? LossKind::kLogistic : LossKind::kMse;
  m.lambda = lambda;
  std::vector<int> ranks = clamped_ranks(d, r);
  for (int k = 0; k < d; ++k) {
    TtCore c(ranks[size_t(k)], 2, ranks[size_t(k) + 1]);
    for (double& v : c.a) {
      if (!(in >> v)) throw std::invalid_argument("truncated model payload");
    }
    m.weights.cores.push_back(std::move(c));
  }
  double extra;
  if (in >> extra) throw std::invalid_argument("trailing model payload");
  return m;
}

}  // namespace tnvq::tn
