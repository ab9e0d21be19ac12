#include "tnvq/tt_manifold.hpp"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace tnvq {

namespace {

void check_same_shape(const TtTensor& a, const TtTensor& b) {
  if (a.shape() != b.shape()) {
    throw std::invalid_argument("tensors live on different mode shapes");
  }
}

TtCore zero_core_like(const TtCore& c) {
  TtCore z;
  z.r_left = c.r_left;
  z.n = c.n;
  z.r_right = c.r_right;
  z.a.assign(c.a.size(), 0.0);
  return z;
}

// Removes the component of each slice stack that lies in the column span of
// the left frame: delta^L -= U^L (U^L^T delta^L).
void apply_gauge(TtCore& delta, const TtCore& u) {
  auto d_unf = delta.left_unfold();
  auto u_unf = u.left_unfold();
  d_unf -= u_unf * (u_unf.transpose() * d_unf).eval();
}

}  // namespace

std::shared_ptr<const TangentFrames> make_frames(const TtTensor& w) {
  w.validate();
  auto frames = std::make_shared<TangentFrames>();
  TtTensor lc = orthogonalize(w, OrthDir::kLeft);
  TtTensor rc = orthogonalize(w, OrthDir::kRight);
  if (lc.ranks() != rc.ranks()) {
    throw std::invalid_argument(
        "base point is rank-deficient: orthogonalization sweeps disagree");
  }
  frames->ranks = lc.ranks();
  frames->left = std::move(lc.cores);
  frames->right = std::move(rc.cores);
  return frames;
}

namespace {

// Shared core of the projection: given z in TT form, produce the gauge-free
// delta cores L_{k-1}^T Z_k R_k (gauge applied by the caller via take()).
std::vector<TtCore> project_raw(const TangentFrames& frames, const TtTensor& z) {
  const int d = frames.order();
  using Mat = Eigen::MatrixXd;

  // Left environments: L[k] contracts z cores 1..k against U_1..U_k.
  std::vector<Mat> lenv(d);
  Mat cur = Mat::Ones(1, 1);
  for (int k = 0; k + 1 < d; ++k) {
    const TtCore& zc = z.cores[k];
    const TtCore& uc = frames.left[k];
    Mat nxt = Mat::Zero(zc.r_right, uc.r_right);
    for (int j = 0; j < zc.n; ++j) {
      nxt.noalias() += zc.slice(j).transpose() * cur * uc.slice(j);
    }
    lenv[k] = cur;
    cur = std::move(nxt);
  }
  lenv[d - 1] = cur;

  // Right environments: R[k] contracts z cores k+2..d against V_{k+2}..V_d.
  std::vector<Mat> renv(d);
  cur = Mat::Ones(1, 1);
  for (int k = d - 1; k > 0; --k) {
    renv[k] = cur;
    const TtCore& zc = z.cores[k];
    const TtCore& vc = frames.right[k];
    Mat nxt = Mat::Zero(zc.r_left, vc.r_left);
    for (int j = 0; j < zc.n; ++j) {
      nxt.noalias() += zc.slice(j) * cur * vc.slice(j).transpose();
    }
    cur = std::move(nxt);
  }
  renv[0] = cur;

  std::vector<TtCore> delta(d);
  for (int k = 0; k < d; ++k) {
    delta[k] = zero_core_like(frames.left[k]);
    for (int j = 0; j < z.cores[k].n; ++j) {
      delta[k].slice(j).noalias() =
          lenv[k].transpose() * z.cores[k].slice(j) * renv[k];
    }
  }
  return delta;
}

}  // namespace

TtTangentVector project_to_tangent(const TtTensor& w, const TtTensor& z) {
  check_same_shape(w, z);
  z.validate();
  auto frames = make_frames(w);
  TtTangentVector p;
  p.delta = project_raw(*frames, z);
  const int d = frames->order();
  for (int k = 0; k + 1 < d; ++k) apply_gauge(p.delta[k], frames->left[k]);
  p.frames = std::move(frames);
  return p;
}

TtTensor tangent_to_tt(const TtTangentVector& p) {
  const TangentFrames& fr = *p.frames;
  const int d = fr.order();
  TtTensor out;
  if (d == 1) {
    out.cores.push_back(p.delta[0]);
    return out;
  }
  out.cores.resize(d);
  for (int k = 0; k < d; ++k) {
    const TtCore& dc = p.delta[k];
    TtCore blk;
    blk.n = dc.n;
    blk.r_left = (k == 0) ? 1 : 2 * dc.r_left;
    blk.r_right = (k == d - 1) ? 1 : 2 * dc.r_right;
    blk.a.assign(static_cast<size_t>(blk.r_left) * blk.n * blk.r_right, 0.0);
    for (int j = 0; j < blk.n; ++j) {
      auto b = blk.slice(j);
      if (k == 0) {
        b.leftCols(dc.r_right) = dc.slice(j);
        b.rightCols(dc.r_right) = fr.left[k].slice(j);
      } else if (k == d - 1) {
        b.topRows(dc.r_left) = fr.right[k].slice(j);
        b.bottomRows(dc.r_left) = dc.slice(j);
      } else {
        b.topLeftCorner(dc.r_left, dc.r_right) = fr.right[k].slice(j);
        b.bottomLeftCorner(dc.r_left, dc.r_right) = dc.slice(j);
        b.bottomRightCorner(dc.r_left, dc.r_right) = fr.left[k].slice(j);
      }
    }
    out.cores[k] = std::move(blk);
  }
  return out;
}

double tangent_norm(const TtTangentVector& p) {
  // Gauge conditions make the delta cores mutually orthogonal summands, so
  // the norm is a plain root-sum-of-squares.
  double s = 0.0;
  for (const TtCore& c : p.delta) {
    for (double v : c.a) s += v * v;
  }
  return std::sqrt(s);
}

TtTensor retract(const TtTensor& w, const TtTangentVector& p, double alpha) {
  const TangentFrames& fr = *p.frames;
  {
    std::vector<int> fshape;
    for (const TtCore& c : fr.left) fshape.push_back(c.n);
    if (w.shape() != fshape) {
      throw std::invalid_argument("tangent vector was built at another point");
    }
  }
  const int d = fr.order();
  TtTensor step;
  if (d == 1) {
    TtCore c = fr.left[0];
    Eigen::Map<Eigen::VectorXd>(c.a.data(), c.a.size()) -=
        alpha * Eigen::Map<const Eigen::VectorXd>(p.delta[0].a.data(),
                                                  p.delta[0].a.size());
    step.cores.push_back(std::move(c));
    return step;
  }
  step.cores.resize(d);
  int max_rank = 1;
  for (int r : fr.ranks) max_rank = std::max(max_rank, r);
  for (int k = 0; k < d; ++k) {
    const TtCore& dc = p.delta[k];
    TtCore blk;
    blk.n = dc.n;
    blk.r_left = (k == 0) ? 1 : 2 * dc.r_left;
    blk.r_right = (k == d - 1) ? 1 : 2 * dc.r_right;
    blk.a.assign(static_cast<size_t>(blk.r_left) * blk.n * blk.r_right, 0.0);
    for (int j = 0; j < blk.n; ++j) {
      auto b = blk.slice(j);
      if (k == 0) {
        b.leftCols(dc.r_right) = -alpha * dc.slice(j);
        b.rightCols(dc.r_right) = fr.left[k].slice(j);
      } else if (k == d - 1) {
        b.topRows(dc.r_left) = fr.right[k].slice(j);
        b.bottomRows(dc.r_left) =
            fr.left[k].slice(j) - alpha * dc.slice(j);
      } else {
        b.topLeftCorner(dc.r_left, dc.r_right) = fr.right[k].slice(j);
        b.bottomLeftCorner(dc.r_left, dc.r_right) = -alpha * dc.slice(j);
        b.bottomRightCorner(dc.r_left, dc.r_right) = fr.left[k].slice(j);
      }
    }
    step.cores[k] = std::move(blk);
  }
  return tt_round(step, max_rank);
}

TtTensor riemannian_step(const TtTensor& w, const TtTensor& euclid_grad,
                         double alpha) {
  return retract(w, project_to_tangent(w, euclid_grad), alpha);
}

TangentProjector::TangentProjector(const TtTensor& w) : frames_(make_frames(w)) {
  reset_accum();
}

void TangentProjector::reset_accum() {
  accum_.clear();
  for (const TtCore& c : frames_->left) accum_.push_back(zero_core_like(c));
}

void TangentProjector::add_rank_one(
    const std::vector<std::vector<double>>& factors, double c) {
  const TangentFrames& fr = *frames_;
  const int d = fr.order();
  if (static_cast<int>(factors.size()) != d) {
    throw std::invalid_argument("factor count does not match tensor order");
  }
  using RVec = Eigen::RowVectorXd;

  // lrow[k]: the length-k prefix of the rank-1 tensor contracted through the
  // left frames; rrow[k]: the suffix past mode k+1 through the right frames.
  std::vector<RVec> lrow(d), rrow(d);
  RVec cur = RVec::Ones(1);
  for (int k = 0; k + 1 < d; ++k) {
    const TtCore& uc = fr.left[k];
    if (static_cast<int>(factors[k].size()) != uc.n) {
      throw std::invalid_argument("factor length does not match mode size");
    }
    RVec nxt = RVec::Zero(uc.r_right);
    for (int j = 0; j < uc.n; ++j) {
      if (factors[k][j] != 0.0) nxt.noalias() += factors[k][j] * (cur * uc.slice(j));
    }
    lrow[k] = cur;
    cur = std::move(nxt);
  }
  lrow[d - 1] = cur;

  cur = RVec::Ones(1);
  for (int k = d - 1; k > 0; --k) {
    rrow[k] = cur;
    const TtCore& vc = fr.right[k];
    if (static_cast<int>(factors[k].size()) != vc.n) {
      throw std::invalid_argument("factor length does not match mode size");
    }
    RVec nxt = RVec::Zero(vc.r_left);
    for (int j = 0; j < vc.n; ++j) {
      if (factors[k][j] != 0.0) {
        nxt.noalias() += factors[k][j] * (cur * vc.slice(j).transpose());
      }
    }
    cur = std::move(nxt);
  }
  rrow[0] = cur;

  for (int k = 0; k < d; ++k) {
    for (int j = 0; j < accum_[k].n; ++j) {
      const double f = factors[k][j];
      if (f == 0.0) continue;
      accum_[k].slice(j).noalias() +=
          (c * f) * (lrow[k].transpose() * rrow[k]);
    }
  }
}

void TangentProjector::add_scaled_base(double c) {
  // The projection of the base point has zero gauge-fixed deltas except for
  // the last core, which is the value-carrying core itself.
  const TtCore& cd = frames_->left.back();
  TtCore& acc = accum_.back();
  Eigen::Map<Eigen::VectorXd>(acc.a.data(), acc.a.size()) +=
      c * Eigen::Map<const Eigen::VectorXd>(cd.a.data(), cd.a.size());
}

TtTangentVector TangentProjector::take() {
  TtTangentVector p;
  const int d = frames_->order();
  for (int k = 0; k + 1 < d; ++k) apply_gauge(accum_[k], frames_->left[k]);
  p.delta = std::move(accum_);
  p.frames = frames_;
  reset_accum();
  return p;
}

}  // namespace tnvq
