#include "marlx/intrinsic/ellipse.hpp"

#include <cmath>

#include "marlx/errors.hpp"
#include "marlx/numkit/sherman.hpp"

namespace marlx::intrinsic {

EllipseState::EllipseState(std::size_t dim, double lambda) : lambda_(lambda) {
  if (dim == 0) throw ShapeError("EllipseState: zero dimension");
  if (lambda <= 0.0) throw NumericError("EllipseState: ridge must be positive");
  c_inv_ = numkit::Matrix::identity(dim, 1.0 / lambda_);
}

void EllipseState::reset() { c_inv_ = numkit::Matrix::identity(dim(), 1.0 / lambda_); }

double EllipseState::bonus(const std::vector<double>& embedding) const {
  if (embedding.size() != dim()) throw ShapeError("EllipseState::bonus: embedding dimension mismatch");
  double q = 0.0;
  for (std::size_t i = 0; i < dim(); ++i) {
    const double* row = c_inv_.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < dim(); ++j) s += row[j] * embedding[j];
    q += embedding[i] * s;
  }
  return q;
}

void EllipseState::update(const std::vector<double>& embedding) {
  if (embedding.size() != dim()) throw ShapeError("EllipseState::update: embedding dimension mismatch");
  numkit::sherman_morrison_update_inplace(c_inv_, embedding.data(), embedding.size(), scratch_);
}

double eec(const EllipseState& ellipse, const std::vector<double>& embedding) {
  return std::sqrt(2.0 * ellipse.bonus(embedding));
}

}  // namespace marlx::intrinsic
