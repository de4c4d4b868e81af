#include "marlx/numkit/sherman.hpp"

#include "marlx/errors.hpp"

namespace marlx::numkit {

void sherman_morrison_update_inplace(Matrix& c_inv, const double* v, std::size_t n,
                                     std::vector<double>& scratch) {
  if (c_inv.rows != c_inv.cols) throw ShapeError("sherman_morrison: matrix not square");
  if (c_inv.rows != n) throw ShapeError("sherman_morrison: vector length mismatch");

  scratch.assign(n, 0.0);
  double* u = scratch.data();  // u = M v
  for (std::size_t i = 0; i < n; ++i) {
    const double* row = c_inv.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < n; ++j) s += row[j] * v[j];
    u[i] = s;
  }
  double denom = 1.0;
  for (std::size_t i = 0; i < n; ++i) denom += v[i] * u[i];
  if (denom <= 0.0) throw NumericError("sherman_morrison: non-positive denominator (input not SPD?)");

  double inv_denom = 1.0 / denom;
  for (std::size_t i = 0; i < n; ++i) {
    double ui = u[i] * inv_denom;
    if (ui == 0.0) continue;
    double* row = c_inv.row(i);
    for (std::size_t j = 0; j < n; ++j) row[j] -= ui * u[j];
  }
  // Symmetrize to keep round-off from accumulating over long update chains.
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double s = 0.5 * (c_inv(i, j) + c_inv(j, i));
      c_inv(i, j) = s;
      c_inv(j, i) = s;
    }
}

Matrix sherman_morrison_update(const Matrix& c_inv, const std::vector<double>& v) {
  Matrix out = c_inv;
  std::vector<double> scratch;
  sherman_morrison_update_inplace(out, v.data(), v.size(), scratch);
  return out;
}

}  // namespace marlx::numkit
