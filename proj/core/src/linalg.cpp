#include "akgrav/linalg.hpp"

#include <algorithm>
#include <cmath>

namespace akgrav {

ExprMatrix ExprMatrix::identity(int k) {
  ExprMatrix m(k, k);
  for (int i = 0; i < k; ++i) m.at(i, i) = Expr::number(1.0);
  return m;
}

ExprMatrix ExprMatrix::simplified() const {
  ExprMatrix out(rows_, cols_);
  for (int r = 0; r < rows_; ++r)
    for (int c = 0; c < cols_; ++c) out.at(r, c) = simplify(at(r, c));
  return out;
}

bool ExprMatrix::is_structurally_zero() const {
  for (const Expr& e : a_)
    if (!simplify(e).is_number(0.0)) return false;
  return true;
}

namespace {

ExprMatrix minor_matrix(const ExprMatrix& m, int row, int col) {
  ExprMatrix out(m.rows() - 1, m.cols() - 1);
  int rr = 0;
  for (int r = 0; r < m.rows(); ++r) {
    if (r == row) continue;
    int cc = 0;
    for (int c = 0; c < m.cols(); ++c) {
      if (c == col) continue;
      out.at(rr, cc) = m.at(r, c);
      ++cc;
    }
    ++rr;
  }
  return out;
}

bool is_diagonal(const ExprMatrix& m) {
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c)
      if (r != c && !m.at(r, c).is_number(0.0)) return false;
  return true;
}

}  // namespace

Expr sym_det(const ExprMatrix& m) {
  int k = m.rows();
  if (k == 1) return m.at(0, 0);
  if (k == 2)
    return simplify(m.at(0, 0) * m.at(1, 1) - m.at(0, 1) * m.at(1, 0));
  std::vector<Expr> terms;
  for (int c = 0; c < k; ++c) {
    Expr cof = m.at(0, c) * sym_det(minor_matrix(m, 0, c));
    terms.push_back(c % 2 == 0 ? cof : -cof);
  }
  return simplify(Expr::sum(std::move(terms)));
}

ExprMatrix sym_inverse(const ExprMatrix& m) {
  int k = m.rows();
  if (k != m.cols()) throw DimensionMismatchError("sym_inverse: matrix not square");
  ExprMatrix out(k, k);
  if (is_diagonal(m)) {
    for (int i = 0; i < k; ++i) out.at(i, i) = simplify(Expr::pow(m.at(i, i), -1));
    return out;
  }
  Expr det = sym_det(m);
  Expr inv_det = Expr::pow(det, -1);
  if (k == 1) {
    out.at(0, 0) = inv_det;
    return out;
  }
  for (int r = 0; r < k; ++r) {
    for (int c = 0; c < k; ++c) {
      Expr cof = sym_det(minor_matrix(m, c, r));  // adjugate: transposed cofactors
      if ((r + c) % 2 != 0) cof = -cof;
      out.at(r, c) = simplify(cof * inv_det);
    }
  }
  return out;
}

ExprMatrix sym_mul(const ExprMatrix& a, const ExprMatrix& b) {
  ExprMatrix out(a.rows(), b.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < b.cols(); ++c) {
      std::vector<Expr> terms;
      for (int k = 0; k < a.cols(); ++k) terms.push_back(a.at(r, k) * b.at(k, c));
      out.at(r, c) = simplify(Expr::sum(std::move(terms)));
    }
  return out;
}

ExprMatrix sym_transpose(const ExprMatrix& m) {
  ExprMatrix out(m.cols(), m.rows());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out.at(c, r) = m.at(r, c);
  return out;
}

Mat Mat::identity(int k) {
  Mat m(k, k);
  for (int i = 0; i < k; ++i) m.at(i, i) = 1.0;
  return m;
}

Mat eval_matrix(const ExprMatrix& m, EvalCache& cache) {
  Mat out(m.rows(), m.cols());
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) out.at(r, c) = eval(m.at(r, c), cache);
  return out;
}

Mat eval_matrix(const ExprMatrix& m, const Point& p) {
  EvalCache cache(p);
  return eval_matrix(m, cache);
}

Mat mat_mul(const Mat& a, const Mat& b) {
  Mat out(a.rows, b.cols);
  for (int r = 0; r < a.rows; ++r)
    for (int k = 0; k < a.cols; ++k) {
      double v = a.at(r, k);
      if (v == 0.0) continue;
      for (int c = 0; c < b.cols; ++c) out.at(r, c) += v * b.at(k, c);
    }
  return out;
}

Mat mat_transpose(const Mat& m) {
  Mat out(m.cols, m.rows);
  for (int r = 0; r < m.rows; ++r)
    for (int c = 0; c < m.cols; ++c) out.at(c, r) = m.at(r, c);
  return out;
}

double frobenius(const Mat& m) {
  double s = 0.0;
  for (double v : m.a) s += v * v;
  return std::sqrt(s);
}

namespace {

double degeneracy_scale(const Mat& m) {
  double scale = 1.0;
  for (int r = 0; r < m.rows; ++r) {
    double row = 0.0;
    for (int c = 0; c < m.cols; ++c) row = std::max(row, std::abs(m.at(r, c)));
    scale *= std::max(row, 1e-300);
  }
  return scale;
}

}  // namespace

double mat_det(const Mat& m) {
  int k = m.rows;
  Mat a = m;
  double det = 1.0;
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(a.at(r, col)) > std::abs(a.at(piv, col))) piv = r;
    if (a.at(piv, col) == 0.0) return 0.0;
    if (piv != col) {
      for (int c = 0; c < k; ++c) std::swap(a.at(piv, c), a.at(col, c));
      det = -det;
    }
    det *= a.at(col, col);
    for (int r = col + 1; r < k; ++r) {
      double f = a.at(r, col) / a.at(col, col);
      for (int c = col; c < k; ++c) a.at(r, c) -= f * a.at(col, c);
    }
  }
  return det;
}

Mat num_inverse(const Mat& m) {
  int k = m.rows;
  if (k != m.cols) throw DimensionMismatchError("num_inverse: matrix not square");
  double det = mat_det(m);
  if (std::abs(det) <= 1e-12 * degeneracy_scale(m))
    throw DegenerateMetricError("matrix numerically degenerate (|det| = " +
                                std::to_string(std::abs(det)) + ")");
  Mat a = m;
  Mat inv = Mat::identity(k);
  for (int col = 0; col < k; ++col) {
    int piv = col;
    for (int r = col + 1; r < k; ++r)
      if (std::abs(a.at(r, col)) > std::abs(a.at(piv, col))) piv = r;
    if (piv != col)
      for (int c = 0; c < k; ++c) {
        std::swap(a.at(piv, c), a.at(col, c));
        std::swap(inv.at(piv, c), inv.at(col, c));
      }
    double d = a.at(col, col);
    for (int c = 0; c < k; ++c) {
      a.at(col, c) /= d;
      inv.at(col, c) /= d;
    }
    for (int r = 0; r < k; ++r) {
      if (r == col) continue;
      double f = a.at(r, col);
      if (f == 0.0) continue;
      for (int c = 0; c < k; ++c) {
        a.at(r, c) -= f * a.at(col, c);
        inv.at(r, c) -= f * inv.at(col, c);
      }
    }
  }
  return inv;
}

std::vector<double> sym_eigenvalues(const Mat& m) {
  int k = m.rows;
  Mat a = m;
  for (int sweep = 0; sweep < 64; ++sweep) {
    double off = 0.0;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) off += a.at(p, q) * a.at(p, q);
    if (off < 1e-24) break;
    for (int p = 0; p < k; ++p)
      for (int q = p + 1; q < k; ++q) {
        if (std::abs(a.at(p, q)) < 1e-300) continue;
        double theta = (a.at(q, q) - a.at(p, p)) / (2.0 * a.at(p, q));
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (int r = 0; r < k; ++r) {
          double arp = a.at(r, p), arq = a.at(r, q);
          a.at(r, p) = c * arp - s * arq;
          a.at(r, q) = s * arp + c * arq;
        }
        for (int r = 0; r < k; ++r) {
          double apr = a.at(p, r), aqr = a.at(q, r);
          a.at(p, r) = c * apr - s * aqr;
          a.at(q, r) = s * apr + c * aqr;
        }
      }
  }
  std::vector<double> eig(static_cast<std::size_t>(k));
  for (int i = 0; i < k; ++i) eig[static_cast<std::size_t>(i)] = a.at(i, i);
  std::sort(eig.begin(), eig.end());
  return eig;
}

int signature_negatives(const Mat& m) {
  int neg = 0;
  for (double v : sym_eigenvalues(m))
    if (v < 0.0) ++neg;
  return neg;
}

}  // namespace akgrav
