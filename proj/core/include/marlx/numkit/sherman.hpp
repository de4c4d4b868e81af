#pragma once

#include <vector>

#include "marlx/numkit/matrix.hpp"

namespace marlx::numkit {

/// Rank-one inverse update: given M = C^-1 (symmetric positive definite),
/// returns (C + v v^T)^-1 = M - (M v)(M v)^T / (1 + v^T M v).
/// Throws NumericError if the denominator is not positive.
Matrix sherman_morrison_update(const Matrix& c_inv, const std::vector<double>& v);

/// In-place variant; `scratch` is resized as needed and avoids allocation
/// in per-step loops.
void sherman_morrison_update_inplace(Matrix& c_inv, const double* v, std::size_t n,
                                     std::vector<double>& scratch);

}  // namespace marlx::numkit
