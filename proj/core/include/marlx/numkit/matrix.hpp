#pragma once

#include <cstddef>
#include <vector>

namespace marlx::numkit {

/// Dense row-major matrix of doubles.
struct Matrix {
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::vector<double> data;

  Matrix() = default;
  Matrix(std::size_t r, std::size_t c, double fill = 0.0) : rows(r), cols(c), data(r * c, fill) {}

  double& operator()(std::size_t i, std::size_t j) { return data[i * cols + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * cols + j]; }

  double* row(std::size_t i) { return data.data() + i * cols; }
  const double* row(std::size_t i) const { return data.data() + i * cols; }

  bool same_shape(const Matrix& o) const { return rows == o.rows && cols == o.cols; }

  void fill(double v) { data.assign(data.size(), v); }

  static Matrix identity(std::size_t n, double scale = 1.0) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = scale;
    return m;
  }
};

/// C = A * B.
Matrix matmul(const Matrix& a, const Matrix& b);
/// C = A * B^T.
Matrix matmul_nt(const Matrix& a, const Matrix& b);
/// C = A^T * B.
Matrix matmul_tn(const Matrix& a, const Matrix& b);

/// C += A^T * B, accumulating into an existing matrix.
void matmul_tn_acc(const Matrix& a, const Matrix& b, Matrix& c);

/// y = M * x.
std::vector<double> matvec(const Matrix& m, const std::vector<double>& x);

void add_in_place(Matrix& a, const Matrix& b);
void scale_in_place(Matrix& a, double s);

double frobenius_norm(const Matrix& m);
/// ||a - b||_F / max(||b||_F, eps)
double frobenius_rel_error(const Matrix& a, const Matrix& b);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& v);

bool all_finite(const Matrix& m);
bool all_finite(const std::vector<double>& v);

}  // namespace marlx::numkit
