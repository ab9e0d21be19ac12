#include "tnvq/tt_tensor.hpp"

#include <Eigen/QR>
#include <Eigen/SVD>

#include <cmath>
#include <stdexcept>

namespace tnvq {

namespace {

constexpr double kSingularFloor = 1e-12;  // relative to the largest value

void check_same_shape(const TtTensor& a, const TtTensor& b) {
  if (a.shape() != b.shape())
    throw std::invalid_argument("TT operands have mismatched shapes");
}

// Rank after truncation: keep values above the relative floor, then drop the
// largest tail whose energy fits in delta, then cap. The cap wins over eps.
int select_rank(const Eigen::VectorXd& sv, int max_rank, double delta) {
  int keep = 0;
  double smax = sv.size() > 0 ? sv(0) : 0.0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > kSingularFloor * smax) keep = i + 1;
  if (delta > 0.0) {
    double tail = 0.0;
    while (keep > 1) {
      double cand = tail + sv(keep - 1) * sv(keep - 1);
      if (std::sqrt(cand) > delta) break;
      tail = cand;
      --keep;
    }
  }
  keep = std::max(keep, 1);
  return std::min(keep, max_rank);
}

}  // namespace

std::vector<int> TtTensor::shape() const {
  std::vector<int> s;
  s.reserve(cores.size());
  for (const auto& c : cores) s.push_back(c.n);
  return s;
}

std::vector<int> TtTensor::ranks() const {
  std::vector<int> r;
  r.reserve(cores.size() + 1);
  r.push_back(cores.empty() ? 1 : cores.front().r_left);
  for (const auto& c : cores) r.push_back(c.r_right);
  return r;
}

void TtTensor::validate() const {
  if (cores.empty()) throw std::invalid_argument("TT must have >= 1 core");
  if (cores.front().r_left != 1 || cores.back().r_right != 1)
    throw std::invalid_argument("boundary TT ranks must be 1");
  for (std::size_t k = 0; k < cores.size(); ++k) {
    const auto& c = cores[k];
    if (c.n < 1 || c.r_left < 1 || c.r_right < 1)
      throw std::invalid_argument("TT core dimensions must be >= 1");
    if (c.a.size() != static_cast<std::size_t>(c.r_left) * c.n * c.r_right)
      throw std::invalid_argument("TT core buffer size mismatch");
    if (k + 1 < cores.size() && c.r_right != cores[k + 1].r_left)
      throw std::invalid_argument("adjacent TT core ranks must match");
  }
}

TtTensor tt_svd(const DenseTensor& t, int max_rank, double eps) {
  if (t.data.size() != DenseTensor::size_from_shape(t.shape))
    throw std::invalid_argument("dense tensor size does not match shape");
  if (max_rank < 1) throw std::invalid_argument("max_rank must be >= 1");
  const int d = t.order();
  const double norm = Eigen::Map<const Eigen::VectorXd>(
                          t.data.data(), static_cast<long>(t.data.size()))
                          .norm();
  const double delta =
      (d > 1 && eps > 0.0) ? eps * norm / std::sqrt(static_cast<double>(d - 1)) : 0.0;

  TtTensor out;
  out.cores.reserve(d);
  RowMat m = Eigen::Map<const RowMat>(t.data.data(), t.shape[0],
                                      static_cast<long>(t.data.size()) / t.shape[0]);
  int r_prev = 1;
  for (int k = 0; k + 1 < d; ++k) {
    Eigen::BDCSVD<RowMat> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const int r = select_rank(svd.singularValues(), max_rank, delta);
    TtCore core(r_prev, t.shape[k], r);
    Eigen::Map<RowMat>(core.a.data(), static_cast<long>(r_prev) * t.shape[k], r) =
        svd.matrixU().leftCols(r);
    out.cores.push_back(std::move(core));

    RowMat rest = svd.singularValues().head(r).asDiagonal() *
                  svd.matrixV().leftCols(r).transpose();
    const long next_cols = rest.cols() / t.shape[k + 1];
    m = Eigen::Map<const RowMat>(rest.data(), static_cast<long>(r) * t.shape[k + 1],
                                 next_cols);
    r_prev = r;
  }
  TtCore last(r_prev, t.shape[d - 1], 1);
  Eigen::Map<Eigen::VectorXd>(last.a.data(), m.rows()) = m.col(0);
  out.cores.push_back(std::move(last));
  return out;
}

DenseTensor tt_to_dense(const TtTensor& t) {
  t.validate();
  DenseTensor out(t.shape());
  RowMat b = RowMat::Ones(1, 1);
  for (const auto& core : t.cores) {
    RowMat next(b.rows() * core.n, core.r_right);
    for (int j = 0; j < core.n; ++j) {
      RowMat tmp = b * core.slice(j);
      for (long p = 0; p < b.rows(); ++p) next.row(p * core.n + j) = tmp.row(p);
    }
    b = std::move(next);
  }
  Eigen::Map<Eigen::VectorXd>(out.data.data(), static_cast<long>(out.size())) =
      b.col(0);
  return out;
}

double tt_inner(const TtTensor& a, const TtTensor& b) {
  a.validate();
  b.validate();
  check_same_shape(a, b);
  RowMat m = RowMat::Ones(1, 1);
  for (int k = 0; k < a.order(); ++k) {
    const auto& ca = a.cores[k];
    const auto& cb = b.cores[k];
    RowMat next = RowMat::Zero(ca.r_right, cb.r_right);
    for (int j = 0; j < ca.n; ++j)
      next.noalias() += ca.slice(j).transpose() * m * cb.slice(j);
    m = std::move(next);
  }
  return m(0, 0);
}

double frobenius_norm(const TtTensor& t) {
  return std::sqrt(std::max(0.0, tt_inner(t, t)));
}

TtTensor tt_scale(const TtTensor& a, double c) {
  a.validate();
  TtTensor out = a;
  for (double& v : out.cores.front().a) v *= c;
  return out;
}

TtTensor tt_add(const TtTensor& a, const TtTensor& b) {
  a.validate();
  b.validate();
  check_same_shape(a, b);
  const int d = a.order();
  TtTensor out;
  out.cores.reserve(d);
  if (d == 1) {
    TtCore c(1, a.cores[0].n, 1);
    for (int j = 0; j < c.n; ++j) c.at(0, j, 0) = a.cores[0].at(0, j, 0) + b.cores[0].at(0, j, 0);
    out.cores.push_back(std::move(c));
    return out;
  }
  for (int k = 0; k < d; ++k) {
    const auto& ca = a.cores[k];
    const auto& cb = b.cores[k];
    const int rl = (k == 0) ? 1 : ca.r_left + cb.r_left;
    const int rr = (k == d - 1) ? 1 : ca.r_right + cb.r_right;
    TtCore c(rl, ca.n, rr);
    for (int j = 0; j < ca.n; ++j) {
      auto dst = c.slice(j);
      dst.topLeftCorner(ca.r_left, ca.r_right) = ca.slice(j);
      dst.bottomRightCorner(cb.r_left, cb.r_right) = cb.slice(j);
    }
    out.cores.push_back(std::move(c));
  }
  return out;
}

TtTensor orthogonalize(const TtTensor& t, OrthDir direction) {
  t.validate();
  TtTensor out = t;
  const int d = out.order();
  if (direction == OrthDir::kLeft) {
    for (int k = 0; k + 1 < d; ++k) {
      auto& c = out.cores[k];
      const long rows = static_cast<long>(c.r_left) * c.n;
      const int m = static_cast<int>(std::min<long>(rows, c.r_right));
      Eigen::HouseholderQR<RowMat> qr(c.left_unfold());
      RowMat q = qr.householderQ() * RowMat::Identity(rows, m);
      RowMat r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
      for (int i = 0; i < m; ++i) {
        if (r(i, i) < 0.0) {
          r.row(i) = -r.row(i);
          q.col(i) = -q.col(i);
        }
      }
      auto& nxt = out.cores[k + 1];
      TtCore replaced(m, nxt.n, nxt.r_right);
      Eigen::Map<RowMat>(replaced.a.data(), m, static_cast<long>(nxt.n) * nxt.r_right) =
          r * nxt.right_unfold();
      TtCore cq(c.r_left, c.n, m);
      Eigen::Map<RowMat>(cq.a.data(), rows, m) = q;
      c = std::move(cq);
      nxt = std::move(replaced);
    }
  } else {
    for (int k = d - 1; k > 0; --k) {
      auto& c = out.cores[k];
      const long cols = static_cast<long>(c.n) * c.r_right;
      const int m = static_cast<int>(std::min<long>(cols, c.r_left));
      RowMat at = c.right_unfold().transpose();  // cols x r_left
      Eigen::HouseholderQR<RowMat> qr(at);
      RowMat q = qr.householderQ() * RowMat::Identity(cols, m);
      RowMat r = qr.matrixQR().topRows(m).triangularView<Eigen::Upper>();
      for (int i = 0; i < m; ++i) {
        if (r(i, i) < 0.0) {
          r.row(i) = -r.row(i);
          q.col(i) = -q.col(i);
        }
      }
      auto& prev = out.cores[k - 1];
      TtCore lmerged(prev.r_left, prev.n, m);
      Eigen::Map<RowMat>(lmerged.a.data(), static_cast<long>(prev.r_left) * prev.n, m) =
          prev.left_unfold() * r.transpose();
      TtCore cq(m, c.n, c.r_right);
      Eigen::Map<RowMat>(cq.a.data(), m, cols) = q.transpose();
      c = std::move(cq);
      prev = std::move(lmerged);
    }
  }
  return out;
}

TtTensor tt_round(const TtTensor& t, int target_rank) {
  if (target_rank < 1) throw std::invalid_argument("target_rank must be >= 1");
  TtTensor out = orthogonalize(t, OrthDir::kRight);
  const int d = out.order();
  for (int k = 0; k + 1 < d; ++k) {
    auto& c = out.cores[k];
    Eigen::BDCSVD<RowMat> svd(c.left_unfold(),
                              Eigen::ComputeThinU | Eigen::ComputeThinV);
    const int r = select_rank(svd.singularValues(), target_rank, 0.0);
    TtCore cu(c.r_left, c.n, r);
    Eigen::Map<RowMat>(cu.a.data(), static_cast<long>(c.r_left) * c.n, r) =
        svd.matrixU().leftCols(r);
    RowMat carry = svd.singularValues().head(r).asDiagonal() *
                   svd.matrixV().leftCols(r).transpose();
    auto& nxt = out.cores[k + 1];
    TtCore merged(r, nxt.n, nxt.r_right);
    Eigen::Map<RowMat>(merged.a.data(), r, static_cast<long>(nxt.n) * nxt.r_right) =
        carry * nxt.right_unfold();
    c = std::move(cu);
    nxt = std::move(merged);
  }
  return out;
}

}  // namespace tnvq
