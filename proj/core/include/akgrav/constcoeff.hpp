#pragma once

#include "akgrav/curvature.hpp"

namespace akgrav {

// Constant-coefficient d-connection: only the v-h block L0^a_{bk} is nonzero
// and every entry is a number.
struct ConstDConnection {
  int n = 2, m = 2;
  std::vector<double> L0;  // m*m*n, [a][b][k]

  static ConstDConnection zeros(int n, int m);
  double& at(int a, int b, int k);
  double at(int a, int b, int k) const;
};

struct ConstDMetric {
  Mat g0;  // n x n, symmetric, invertible
  Mat h0;  // m x m, symmetric, invertible
};

// max over points of |2 L0^a_{bk} - dN^a_k/dy^b + h^{ac} h_{db} dN^d_k/dy^c|
SweepResult verify_auxf1(const NConnection& ncon, const Mat& h0,
                         const ConstDConnection& L0, const std::vector<Point>& pts);

// Closed-form solution for the linear family N^a_k = A^a_{kb} y^b:
// L0^a_{bk} = 1/2 (A^a_{kb} - h^{ac} h_{db} A^d_{kc}).
ConstDConnection solve_auxf1_linear(const Mat& h0, const std::vector<double>& A,
                                    int n, int m);  // A layout [a][k][b]

// Extracts the linear coefficient matrix from a symbolic N by differentiation
// and verifies constancy over the points; NonConstantRhsError otherwise.
ConstDConnection solve_auxf1_from_n(const Mat& h0, const NConnection& ncon,
                                    const std::vector<Point>& pts,
                                    double tol = 1e-10);

// R0^a_{bjk} = L0^c_{bj} L0^a_{ck} - L0^c_{bk} L0^a_{cj}; all other curvature
// blocks of the constant-coefficient connection vanish.
std::vector<double> const_curvature(const ConstDConnection& L0);  // [a][b][j][k]

// h^{ab}-trace of the first-to-fourth contraction; zero by slot types, kept as
// a computed value plus a constancy sweep through the full curvature path.
struct ConstScalarResult {
  double value = 0.0;
  double variance = 0.0;  // of the d-scalar along the sweep
  SweepResult sweep;
};

ConstScalarResult const_scalar(const ConstDMetric& gm, const ConstDConnection& L0,
                               const NConnection& ncon, const std::vector<Point>& pts);

// Builds the constant-coefficient connection as a DConnection over the chart.
DConnection as_dconnection(const ConstDConnection& L0, const Chart& chart);

}  // namespace akgrav
