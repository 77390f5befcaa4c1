// Small dense linear algebra for chart-sized objects (n <= 8).
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace cartan {

using Vec = std::vector<double>;

struct Error : std::runtime_error {
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};
struct ParseError : Error {
  ParseError(const std::string& what, std::size_t line = 0, std::size_t col = 0)
      : Error(what), line(line), col(col) {}
  std::size_t line = 0, col = 0;
};
struct EvalError : Error {
  using Error::Error;
};
struct ValidationError : Error {
  using Error::Error;
};
struct NumericalError : Error {
  using Error::Error;
};

class Mat {
 public:
  Mat() = default;
  Mat(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), a_(rows * cols, fill) {}
  static Mat identity(std::size_t n) {
    Mat m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }
  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  double& operator()(std::size_t i, std::size_t j) { return a_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return a_[i * cols_ + j]; }
  const std::vector<double>& data() const { return a_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

// Rank-3 and rank-4 cubes over a single dimension n.
class T3 {
 public:
  T3() = default;
  explicit T3(std::size_t n, double fill = 0.0) : n_(n), a_(n * n * n, fill) {}
  std::size_t dim() const { return n_; }
  double& operator()(std::size_t a, std::size_t b, std::size_t c) {
    return a_[(a * n_ + b) * n_ + c];
  }
  double operator()(std::size_t a, std::size_t b, std::size_t c) const {
    return a_[(a * n_ + b) * n_ + c];
  }
  const std::vector<double>& data() const { return a_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

class T4 {
 public:
  T4() = default;
  explicit T4(std::size_t n, double fill = 0.0) : n_(n), a_(n * n * n * n, fill) {}
  std::size_t dim() const { return n_; }
  double& operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
    return a_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  double operator()(std::size_t a, std::size_t b, std::size_t c, std::size_t d) const {
    return a_[((a * n_ + b) * n_ + c) * n_ + d];
  }
  const std::vector<double>& data() const { return a_; }

 private:
  std::size_t n_ = 0;
  std::vector<double> a_;
};

inline Mat matmul(const Mat& a, const Mat& b) {
  Mat c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

inline Vec matvec(const Mat& a, const Vec& v) {
  Vec r(a.rows(), 0.0);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) r[i] += a(i, j) * v[j];
  return r;
}

inline Mat transpose(const Mat& a) {
  Mat t(a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) t(j, i) = a(i, j);
  return t;
}

// Gauss-Jordan inverse with partial pivoting. Throws NumericalError when the
// pivot collapses; det_out receives the determinant when requested.
inline Mat inverse(const Mat& m, double* det_out = nullptr) {
  const std::size_t n = m.rows();
  Mat a = m;
  Mat inv = Mat::identity(n);
  double det = 1.0;
  for (std::size_t col = 0; col < n; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < n; ++r)
      if (std::fabs(a(r, col)) > std::fabs(a(piv, col))) piv = r;
    if (std::fabs(a(piv, col)) < 1e-300)
      throw NumericalError("matrix is singular (zero pivot in column " +
                           std::to_string(col) + ")");
    if (piv != col) {
      for (std::size_t j = 0; j < n; ++j) {
        std::swap(a(piv, j), a(col, j));
        std::swap(inv(piv, j), inv(col, j));
      }
      det = -det;
    }
    const double p = a(col, col);
    det *= p;
    const double pinv = 1.0 / p;
    for (std::size_t j = 0; j < n; ++j) {
      a(col, j) *= pinv;
      inv(col, j) *= pinv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == col) continue;
      const double f = a(r, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < n; ++j) {
        a(r, j) -= f * a(col, j);
        inv(r, j) -= f * inv(col, j);
      }
    }
  }
  if (det_out) *det_out = det;
  return inv;
}

// Cyclic Jacobi eigensolver for a symmetric matrix. Eigenpairs are returned
// sorted by descending eigenvalue; evecs columns are the eigenvectors.
inline void jacobi_eigen_sym(const Mat& m, Vec& evals, Mat& evecs) {
  const std::size_t n = m.rows();
  Mat a = m;
  Mat v = Mat::identity(n);
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) off += a(p, q) * a(p, q);
    if (off < 1e-30) break;
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        if (std::fabs(a(p, q)) < 1e-300) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * a(p, q));
        const double t = (theta >= 0 ? 1.0 : -1.0) /
                         (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          const double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }
  std::vector<std::size_t> order(n);
  for (std::size_t i = 0; i < n; ++i) order[i] = i;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (a(order[j], order[j]) > a(order[i], order[i])) std::swap(order[i], order[j]);
  evals.assign(n, 0.0);
  evecs = Mat(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    evals[i] = a(order[i], order[i]);
    for (std::size_t k = 0; k < n; ++k) evecs(k, i) = v(k, order[i]);
  }
}

inline double max_abs(const std::vector<double>& a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::fabs(x));
  return m;
}
inline double max_abs(const Mat& a) { return max_abs(a.data()); }
inline double max_abs(const T3& a) { return max_abs(a.data()); }
inline double max_abs(const T4& a) { return max_abs(a.data()); }

}  // namespace cartan
