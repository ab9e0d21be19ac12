#pragma once

#include <memory>
#include <vector>

#include "tnvq/tt_tensor.hpp"

namespace tnvq {

struct ManifoldSpec {
  std::vector<int> shape;  // mode dimensions
  int rank = 1;            // uniform interior TT-rank target
};

// Orthogonal frames of a manifold point W:
//   left[k]  = U_{k+1}, left-orthonormal for k < d-1; left[d-1] carries the value (C_d)
//   right[k] = V_{k+1}, right-orthonormal for k > 0;  right[0] carries the value (C_1)
// Both factorizations represent the same tensor and share the rank profile.
struct TangentFrames {
  std::vector<TtCore> left;
  std::vector<TtCore> right;
  std::vector<int> ranks;  // r_0..r_d of the base point

  int order() const { return static_cast<int>(left.size()); }
};

// Tangent vector at a base point, gauge-fixed so the representation is
// unique: for k < d the delta core is orthogonal to U_k's column span.
struct TtTangentVector {
  std::shared_ptr<const TangentFrames> frames;
  std::vector<TtCore> delta;  // delta[k] has the frame core's dimensions
};

std::shared_ptr<const TangentFrames> make_frames(const TtTensor& w);

TtTangentVector project_to_tangent(const TtTensor& w, const TtTensor& z);
TtTensor tangent_to_tt(const TtTangentVector& p);
double tangent_norm(const TtTangentVector& p);

TtTensor retract(const TtTensor& w, const TtTangentVector& p, double alpha);
TtTensor riemannian_step(const TtTensor& w, const TtTensor& euclid_grad,
                         double alpha);

// Accumulates tangent projections of many rank-1 tensors (plus optional
// multiples of the base point) without forming any of them explicitly.
// Equivalent to project_to_tangent of the accumulated sum; O(d n r^2) per
// summand instead of TT-addition blowup.
class TangentProjector {
 public:
  explicit TangentProjector(const TtTensor& w);

  // Adds c * (f_1 x f_2 x ... x f_d); factors[k] has length n_k.
  void add_rank_one(const std::vector<std::vector<double>>& factors, double c);
  // Adds c * W.
  void add_scaled_base(double c);

  TtTangentVector take();  // gauge-fixes and returns; resets the accumulator
  const std::shared_ptr<const TangentFrames>& frames() const { return frames_; }

 private:
  std::shared_ptr<const TangentFrames> frames_;
  std::vector<TtCore> accum_;
  void reset_accum();
};

}  // namespace tnvq
