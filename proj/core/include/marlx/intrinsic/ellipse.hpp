#pragma once

#include <vector>

#include "marlx/numkit/matrix.hpp"

namespace marlx::intrinsic {

/// Episodic elliptical bonus state: the inverse of C = sum(psi psi^T) + lambda*I
/// over the embeddings seen this episode, maintained incrementally by
/// rank-one updates. Reset to (1/lambda)*I at each episode start.
class EllipseState {
public:
  EllipseState(std::size_t dim, double lambda);

  std::size_t dim() const { return c_inv_.rows; }
  double lambda() const { return lambda_; }
  const numkit::Matrix& c_inv() const { return c_inv_; }

  void reset();

  /// Quadratic form psi^T C^-1 psi. Call before update() for the same embedding.
  double bonus(const std::vector<double>& embedding) const;

  /// Folds the embedding into C via a Sherman-Morrison update of the inverse.
  void update(const std::vector<double>& embedding);

private:
  numkit::Matrix c_inv_;
  double lambda_;
  std::vector<double> scratch_;
};

/// Episodic exploration criterion sqrt(2 * bonus): smooths large bonuses and
/// lifts small ones.
double eec(const EllipseState& ellipse, const std::vector<double>& embedding);

}  // namespace marlx::intrinsic
