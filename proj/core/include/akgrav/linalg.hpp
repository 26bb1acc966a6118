#pragma once

#include <vector>

#include "akgrav/expr.hpp"

namespace akgrav {

// Small dense matrix of symbolic entries, row-major.
class ExprMatrix {
public:
  ExprMatrix() = default;
  ExprMatrix(int rows, int cols)
      : rows_(rows), cols_(cols),
        a_(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols)) {}

  static ExprMatrix identity(int k);
  static ExprMatrix zero(int k) { return ExprMatrix(k, k); }

  int rows() const { return rows_; }
  int cols() const { return cols_; }

  Expr& at(int r, int c) { return a_[static_cast<std::size_t>(r) * cols_ + c]; }
  const Expr& at(int r, int c) const { return a_[static_cast<std::size_t>(r) * cols_ + c]; }

  ExprMatrix simplified() const;
  bool is_structurally_zero() const;

private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Expr> a_;
};

Expr sym_det(const ExprMatrix& m);

// Cofactor (adjugate/det) inverse. Exact for diagonal and 2x2 blocks, and
// works for the 4x4 coordinate metrics used here; entries are rational in the
// inputs, so degeneracy surfaces as a per-point domain error at evaluation.
ExprMatrix sym_inverse(const ExprMatrix& m);

ExprMatrix sym_mul(const ExprMatrix& a, const ExprMatrix& b);
ExprMatrix sym_transpose(const ExprMatrix& m);

// Dense numeric matrix, small sizes only.
struct Mat {
  int rows = 0;
  int cols = 0;
  std::vector<double> a;

  Mat() = default;
  Mat(int r, int c) : rows(r), cols(c), a(static_cast<std::size_t>(r) * c, 0.0) {}
  static Mat identity(int k);

  double& at(int r, int c) { return a[static_cast<std::size_t>(r) * cols + c]; }
  double at(int r, int c) const { return a[static_cast<std::size_t>(r) * cols + c]; }
};

Mat eval_matrix(const ExprMatrix& m, EvalCache& cache);
Mat eval_matrix(const ExprMatrix& m, const Point& p);

Mat mat_mul(const Mat& a, const Mat& b);
Mat mat_transpose(const Mat& m);
double mat_det(const Mat& m);
double frobenius(const Mat& m);

// Gauss-Jordan with partial pivoting. Throws DegenerateMetricError when
// |det| <= 1e-12 * scale, scale from row norms.
Mat num_inverse(const Mat& m);

// Eigenvalues of a symmetric matrix by cyclic Jacobi; used for signature checks.
std::vector<double> sym_eigenvalues(const Mat& m);

// Number of negative eigenvalues of a symmetric matrix.
int signature_negatives(const Mat& m);

}  // namespace akgrav
