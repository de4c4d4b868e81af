#include "marlx/numkit/matrix.hpp"

#include <cmath>

#include "marlx/errors.hpp"

namespace marlx::numkit {

namespace {

// C[i,:] += s * B[k,:] row kernel; the i-k-j order keeps the inner loop
// contiguous in both B and C so the compiler can vectorize it.
inline void axpy_row(double s, const double* b, double* c, std::size_t n) {
  for (std::size_t j = 0; j < n; ++j) c[j] += s * b[j];
}

// Dot product over eight independent accumulator lanes. The serial
// dependency of a naive reduction caps throughput at the fma latency; the
// lanes vectorize and keep summation order fixed, so results stay
// deterministic.
inline double dot_rows(const double* a, const double* b, std::size_t n) {
  double acc[8] = {0, 0, 0, 0, 0, 0, 0, 0};
  std::size_t j = 0;
  for (; j + 8 <= n; j += 8)
    for (std::size_t l = 0; l < 8; ++l) acc[l] += a[j + l] * b[j + l];
  double s = ((acc[0] + acc[1]) + (acc[2] + acc[3])) + ((acc[4] + acc[5]) + (acc[6] + acc[7]));
  for (; j < n; ++j) s += a[j] * b[j];
  return s;
}

}  // namespace

Matrix matmul(const Matrix& a, const Matrix& b) {
  if (a.cols != b.rows) throw ShapeError("matmul: inner dimensions differ");
  Matrix c(a.rows, b.cols);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (std::size_t k = 0; k < a.cols; ++k) {
      double s = arow[k];
      if (s != 0.0) axpy_row(s, b.row(k), crow, b.cols);
    }
  }
  return c;
}

Matrix matmul_nt(const Matrix& a, const Matrix& b) {
  if (a.cols != b.cols) throw ShapeError("matmul_nt: inner dimensions differ");
  Matrix c(a.rows, b.rows);
  for (std::size_t i = 0; i < a.rows; ++i) {
    const double* arow = a.row(i);
    double* crow = c.row(i);
    for (std::size_t k = 0; k < b.rows; ++k) crow[k] = dot_rows(arow, b.row(k), a.cols);
  }
  return c;
}

Matrix matmul_tn(const Matrix& a, const Matrix& b) {
  if (a.rows != b.rows) throw ShapeError("matmul_tn: inner dimensions differ");
  Matrix c(a.cols, b.cols);
  matmul_tn_acc(a, b, c);
  return c;
}

void matmul_tn_acc(const Matrix& a, const Matrix& b, Matrix& c) {
  if (a.rows != b.rows) throw ShapeError("matmul_tn_acc: inner dimensions differ");
  if (c.rows != a.cols || c.cols != b.cols) throw ShapeError("matmul_tn_acc: output shape mismatch");
  for (std::size_t k = 0; k < a.rows; ++k) {
    const double* arow = a.row(k);
    const double* brow = b.row(k);
    for (std::size_t i = 0; i < a.cols; ++i) {
      double s = arow[i];
      if (s != 0.0) axpy_row(s, brow, c.row(i), b.cols);
    }
  }
}

std::vector<double> matvec(const Matrix& m, const std::vector<double>& x) {
  if (m.cols != x.size()) throw ShapeError("matvec: dimension mismatch");
  std::vector<double> y(m.rows, 0.0);
  for (std::size_t i = 0; i < m.rows; ++i) y[i] = dot_rows(m.row(i), x.data(), m.cols);
  return y;
}

void add_in_place(Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw ShapeError("add_in_place: shape mismatch");
  for (std::size_t i = 0; i < a.data.size(); ++i) a.data[i] += b.data[i];
}

void scale_in_place(Matrix& a, double s) {
  for (double& v : a.data) v *= s;
}

double frobenius_norm(const Matrix& m) {
  double s = 0.0;
  for (double v : m.data) s += v * v;
  return std::sqrt(s);
}

double frobenius_rel_error(const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) throw ShapeError("frobenius_rel_error: shape mismatch");
  double num = 0.0;
  for (std::size_t i = 0; i < a.data.size(); ++i) {
    double d = a.data[i] - b.data[i];
    num += d * d;
  }
  double den = frobenius_norm(b);
  return std::sqrt(num) / (den > 1e-300 ? den : 1e-300);
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() != b.size()) throw ShapeError("dot: length mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

bool all_finite(const Matrix& m) {
  for (double v : m.data)
    if (!std::isfinite(v)) return false;
  return true;
}

bool all_finite(const std::vector<double>& v) {
  for (double x : v)
    if (!std::isfinite(x)) return false;
  return true;
}

}  // namespace marlx::numkit
