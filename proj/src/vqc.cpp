#include "tnvq/vqc.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <cstdio>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "tnvq/rng.hpp"

namespace tnvq::vqc {

namespace {

constexpr double kPi = std::numbers::pi;

struct Gate {
  bool is_ry;
  int qubit;     // rotation target, or CNOT control
  int other;     // CNOT target (unused for Ry)
  int angle_idx;  // index into VqcParams::angles (Ry only)
};

std::vector<Gate> circuit_of(const VqcParams& p) {
  std::vector<Gate> gates;
  int idx = 0;
  auto ry_layer = [&] {
    for (int q = 1; q <= p.n; ++q) gates.push_back({true, q, 0, idx++});
  };
  auto cnot_chain = [&](int first_control) {
    for (int q = first_control; q + 1 <= p.n; q += 2) {
      gates.push_back({false, q, q + 1, -1});
    }
  };
  ry_layer();
  for (int layer = 1; layer <= p.l; ++layer) {
    cnot_chain(1);
    ry_layer();
    cnot_chain(2);
    ry_layer();
  }
  return gates;
}

void check_params(const VqcParams& p) {
  if (p.n < 1 || p.n > 24) throw std::invalid_argument("bad qubit count");
  if (p.l < 0) throw std::invalid_argument("bad layer count");
  if (static_cast<int>(p.angles.size()) != p.angle_count()) {
    throw std::invalid_argument("angle vector has the wrong length");
  }
}

void check_batch(const LabeledDataset& batch, const VqcParams& p) {
  if (batch.size() == 0) throw std::invalid_argument("empty batch");
  if (batch.dim() != p.n) {
    throw std::invalid_argument("feature count does not match qubit count");
  }
  for (int y : batch.labels) {
    if (y != 1 && y != -1) throw std::invalid_argument("labels must be +-1");
  }
}

// ---- batched real-amplitude simulation: rows = samples, cols = basis states

using Mat = Eigen::MatrixXd;

Mat encode_batch(const Eigen::MatrixXd& xs) {
  const int b = static_cast<int>(xs.rows());
  const int n = static_cast<int>(xs.cols());
  Mat s = Mat::Ones(b, 1);
  for (int k = 0; k < n; ++k) {
    Eigen::ArrayXd c = (kPi * 0.5 * xs.col(k).array()).cos();
    Eigen::ArrayXd sn = (kPi * 0.5 * xs.col(k).array()).sin();
    Mat t(b, 2 * s.cols());
    for (long j = 0; j < s.cols(); ++j) {
      t.col(2 * j) = s.col(j).array() * c;
      t.col(2 * j + 1) = s.col(j).array() * sn;
    }
    s = std::move(t);
  }
  return s;
}

void bry(Mat& m, int n, int qubit, double theta, Eigen::VectorXd& scratch) {
  const long stride = 1L << (n - qubit);
  const long dim = 1L << n;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  for (long base = 0; base < dim; base += 2 * stride) {
    for (long i = base; i < base + stride; ++i) {
      scratch = c * m.col(i) - s * m.col(i + stride);
      m.col(i + stride) = s * m.col(i) + c * m.col(i + stride);
      m.col(i) = scratch;
    }
  }
}

void bcnot(Mat& m, int n, int control, int target) {
  const long cbit = 1L << (n - control);
  const long tbit = 1L << (n - target);
  const long dim = 1L << n;
  for (long i = 0; i < dim; ++i) {
    if ((i & cbit) && !(i & tbit)) m.col(i).swap(m.col(i | tbit));
  }
}

// Sum over all entries of A .* (dRy/dtheta applied to F), where F is the
// state before the gate. dRy/dtheta = 0.5 * Ry(theta + pi).
double bry_grad(const Mat& f, const Mat& a, int n, int qubit, double theta) {
  const long stride = 1L << (n - qubit);
  const long dim = 1L << n;
  const double c = std::cos(theta / 2), s = std::sin(theta / 2);
  double acc = 0.0;
  for (long base = 0; base < dim; base += 2 * stride) {
    for (long i = base; i < base + stride; ++i) {
      acc += a.col(i).dot((-0.5 * s) * f.col(i) + (-0.5 * c) * f.col(i + stride));
      acc += a.col(i + stride)
                 .dot((0.5 * c) * f.col(i) + (-0.5 * s) * f.col(i + stride));
    }
  }
  return acc;
}

struct BatchEval {
  Eigen::VectorXd probs;
  std::vector<double> grad;  // empty unless requested
};

BatchEval eval_batch(const Eigen::MatrixXd& xs, const std::vector<int>& ys,
                     const VqcParams& p, bool signed_output, bool want_grad) {
  const int b = static_cast<int>(xs.rows());
  const long half = 1L << (p.n - 1);
  const std::vector<Gate> gates = circuit_of(p);

  Mat f = encode_batch(xs);
  Eigen::VectorXd scratch(b);
  for (const Gate& g : gates) {
    if (g.is_ry) {
      bry(f, p.n, g.qubit, p.angles[static_cast<size_t>(g.angle_idx)], scratch);
    } else {
      bcnot(f, p.n, g.qubit, g.other);
    }
  }

  BatchEval out;
  out.probs = f.rightCols(half).rowwise().squaredNorm();
  if (!want_grad) return out;

  // dLoss/dP per sample: mean of (P - t)^2, or of (2P-1-y)^2 when signed.
  Eigen::VectorXd w(b);
  for (int s = 0; s < b; ++s) {
    double t = (ys[static_cast<size_t>(s)] + 1) * 0.5;
    w(s) = (signed_output ? 8.0 : 2.0) * (out.probs(s) - t) / b;
  }

  Mat a = Mat::Zero(b, 1L << p.n);
  a.rightCols(half) = (2.0 * w.array()).matrix().asDiagonal() * f.rightCols(half);

  out.grad.assign(static_cast<size_t>(p.angle_count()), 0.0);
  for (auto it = gates.rbegin(); it != gates.rend(); ++it) {
    if (it->is_ry) {
      const double theta = p.angles[static_cast<size_t>(it->angle_idx)];
      bry(f, p.n, it->qubit, -theta, scratch);  // recover the pre-gate state
      out.grad[static_cast<size_t>(it->angle_idx)] +=
          bry_grad(f, a, p.n, it->qubit, theta);
      bry(a, p.n, it->qubit, -theta, scratch);
    } else {
      bcnot(f, p.n, it->qubit, it->other);
      bcnot(a, p.n, it->qubit, it->other);
    }
  }
  return out;
}

double loss_of_probs(const Eigen::VectorXd& probs, const std::vector<int>& ys,
                     bool signed_output) {
  double sum = 0.0;
  for (long s = 0; s < probs.size(); ++s) {
    double t = (ys[static_cast<size_t>(s)] + 1) * 0.5;
    double d = probs(s) - t;
    sum += (signed_output ? 4.0 : 1.0) * d * d;
  }
  return sum / static_cast<double>(probs.size());
}

// Memory-bounded chunk size for full-dataset forward passes.
int eval_chunk_rows(int n) {
  const long budget = 1L << 25;  // ~33M doubles across F
  long rows = budget >> n;
  if (rows < 1) rows = 1;
  if (rows > 256) rows = 256;
  return static_cast<int>(rows);
}

}  // namespace

Statevector encode(const std::vector<double>& x) {
  const int n = static_cast<int>(x.size());
  Statevector s = new_zero_state(n);
  for (int q = 1; q <= n; ++q) {
    apply_ry(s, q, kPi * x[static_cast<size_t>(q - 1)]);
  }
  return s;
}

Statevector apply_ansatz(const Statevector& s, const VqcParams& p) {
  check_params(p);
  if (s.n != p.n) {
    throw std::invalid_argument("state qubit count does not match parameters");
  }
  Statevector out = s;
  for (const Gate& g : circuit_of(p)) {
    if (g.is_ry) {
      apply_ry(out, g.qubit, p.angles[static_cast<size_t>(g.angle_idx)]);
    } else {
      apply_cnot(out, g.qubit, g.other);
    }
  }
  return out;
}

double predict(const std::vector<double>& x, const VqcParams& p) {
  if (static_cast<int>(x.size()) != p.n) {
    throw std::invalid_argument("feature count does not match qubit count");
  }
  return prob_first_qubit_one(apply_ansatz(encode(x), p));
}

int classify(const std::vector<double>& x, const VqcParams& p,
             double threshold) {
  return predict(x, p) < threshold ? -1 : +1;
}

int classify(const std::vector<double>& x, const VqcParams& p) {
  return classify(x, p, p.threshold);
}

double mse_loss(const LabeledDataset& batch, const VqcParams& p,
                bool signed_output) {
  check_params(p);
  check_batch(batch, p);
  double sum = 0.0;
  for (int s = 0; s < batch.size(); ++s) {
    double t = (batch.labels[static_cast<size_t>(s)] + 1) * 0.5;
    double d = predict(batch.row(s), p) - t;
    sum += (signed_output ? 4.0 : 1.0) * d * d;
  }
  return sum / batch.size();
}

std::vector<double> gradient(const LabeledDataset& batch, const VqcParams& p,
                             bool signed_output) {
  check_params(p);
  check_batch(batch, p);
  const int b = batch.size();
  const int m = p.angle_count();
  std::vector<double> g(static_cast<size_t>(m), 0.0);
  VqcParams shifted = p;
  for (int s = 0; s < b; ++s) {
    std::vector<double> x = batch.row(s);
    double t = (batch.labels[static_cast<size_t>(s)] + 1) * 0.5;
    double slope =
        (signed_output ? 8.0 : 2.0) * (predict(x, p) - t) / b;
    for (int j = 0; j < m; ++j) {
      shifted.angles[static_cast<size_t>(j)] = p.angles[static_cast<size_t>(j)] + kPi / 2;
      double up = predict(x, shifted);
      shifted.angles[static_cast<size_t>(j)] = p.angles[static_cast<size_t>(j)] - kPi / 2;
      double dn = predict(x, shifted);
      shifted.angles[static_cast<size_t>(j)] = p.angles[static_cast<size_t>(j)];
      g[static_cast<size_t>(j)] += slope * 0.5 * (up - dn);
    }
  }
  return g;
}

std::vector<double> gradient_adjoint(const LabeledDataset& batch,
                                     const VqcParams& p, bool signed_output) {
  check_params(p);
  check_batch(batch, p);
  return eval_batch(batch.features, batch.labels, p, signed_output, true).grad;
}

VqcParams fit(const LabeledDataset& train, const VqcTrainConfig& cfg,
              const VqcEpochObserver& on_epoch) {
  if (train.size() == 0) throw std::invalid_argument("empty training set");
  if (cfg.layers < 0 || cfg.epochs < 0 || cfg.batch_size < 1) {
    throw std::invalid_argument("bad training configuration");
  }
  if (!(cfg.decay > 0.0 && cfg.decay <= 1.0)) {
    throw std::invalid_argument("decay must lie in (0,1]");
  }
  if (!(cfg.threshold > 0.0 && cfg.threshold < 1.0)) {
    throw std::invalid_argument("threshold must lie in (0,1)");
  }

  VqcParams p;
  p.n = train.dim();
  p.l = cfg.layers;
  p.threshold = cfg.threshold;
  if (p.n < 1 || p.n > 24) throw std::invalid_argument("bad qubit count");

  Rng rng(cfg.seed);
  p.angles.resize(static_cast<size_t>(p.angle_count()));
  for (double& a : p.angles) a = rng.uniform(0.0, 2.0 * kPi);

  const bool use_adjoint = cfg.grad == GradMode::kAdjoint ||
                           (cfg.grad == GradMode::kAuto && p.n > 3);
  const int m = p.angle_count();
  std::vector<double> adam_m(static_cast<size_t>(m), 0.0);
  std::vector<double> adam_v(static_cast<size_t>(m), 0.0);
  long step = 0;

  const int n_samples = train.size();
  std::vector<int> order(static_cast<size_t>(n_samples));
  for (int i = 0; i < n_samples; ++i) order[static_cast<size_t>(i)] = i;

  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    const double lr = cfg.lr0 * std::pow(cfg.decay, epoch);
    rng.shuffle(order);
    for (int start = 0; start < n_samples; start += cfg.batch_size) {
      const int count = std::min(cfg.batch_size, n_samples - start);
      Eigen::MatrixXd xs(count, p.n);
      std::vector<int> ys(static_cast<size_t>(count));
      for (int i = 0; i < count; ++i) {
        const int src = order[static_cast<size_t>(start + i)];
        xs.row(i) = train.features.row(src);
        ys[static_cast<size_t>(i)] = train.labels[static_cast<size_t>(src)];
      }
      std::vector<double> g;
      if (use_adjoint) {
        g = eval_batch(xs, ys, p, cfg.signed_output, true).grad;
      } else {
        LabeledDataset chunk;
        chunk.features = xs;
        chunk.labels = ys;
        g = gradient(chunk, p, cfg.signed_output);
      }
      ++step;
      const double bc1 = 1.0 - std::pow(cfg.beta1, static_cast<double>(step));
      const double bc2 = 1.0 - std::pow(cfg.beta2, static_cast<double>(step));
      for (int j = 0; j < m; ++j) {
        auto ju = static_cast<size_t>(j);
        adam_m[ju] = cfg.beta1 * adam_m[ju] + (1.0 - cfg.beta1) * g[ju];
        adam_v[ju] = cfg.beta2 * adam_v[ju] + (1.0 - cfg.beta2) * g[ju] * g[ju];
        const double mh = adam_m[ju] / bc1;
        const double vh = adam_v[ju] / bc2;
        p.angles[ju] -= lr * mh / (std::sqrt(vh) + cfg.adam_eps);
      }
    }

    // Epoch loss over the full training set, evaluated in bounded chunks.
    double sum = 0.0;
    const int chunk_rows = eval_chunk_rows(p.n);
    for (int start = 0; start < n_samples; start += chunk_rows) {
      const int count = std::min(chunk_rows, n_samples - start);
      Eigen::MatrixXd xs = train.features.middleRows(start, count);
      std::vector<int> ys(train.labels.begin() + start,
                          train.labels.begin() + start + count);
      Eigen::VectorXd probs =
          eval_batch(xs, ys, p, cfg.signed_output, false).probs;
      sum += loss_of_probs(probs, ys, cfg.signed_output) * count;
    }
    const double epoch_loss = sum / n_samples;
    if (!std::isfinite(epoch_loss)) {
      throw std::runtime_error("training loss diverged at epoch " +
                               std::to_string(epoch));
    }
    p.loss_history.push_back(epoch_loss);
    if (on_epoch) on_epoch(epoch, p);
  }
  return p;
}

long long count_params(int n, int l) {
  return static_cast<long long>(n) * (2LL * l + 1LL);
}

long long stored_params(const VqcParams& p) {
  return static_cast<long long>(p.angles.size());
}

std::string serialize(const VqcParams& p) {
  check_params(p);
  std::ostringstream out;
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", p.threshold);
  out << "vqcparams-v1 " << p.n << ' ' << p.l << ' ' << buf << '\n';
  for (size_t i = 0; i < p.angles.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", p.angles[i]);
    out << buf << (i + 1 == p.angles.size() ? '\n' : ' ');
  }
  return out.str();
}

VqcParams deserialize(const std::string& text) {
  std::istringstream in(text);
  std::string magic;
  VqcParams p;
  if (!(in >> magic >> p.n >> p.l >> p.threshold) || magic != "vqcparams-v1") {
    throw std::invalid_argument("unrecognized parameter header");
  }
  if (p.n < 1 || p.n > 24 || p.l < 0) {
    throw std::invalid_argument("bad parameter dimensions");
  }
  p.angles.resize(static_cast<size_t>(p.angle_count()));
  for (double& a : p.angles) {
    if (!(in >> a)) throw std::invalid_argument("truncated parameter payload");
  }
  double extra;
  if (in >> extra) throw std::invalid_argument("trailing parameter payload");
  return p;
}

}  // namespace tnvq::vqc
