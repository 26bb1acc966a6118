#pragma once

#include "akgrav/linalg.hpp"
#include "akgrav/tensor.hpp"

namespace akgrav {

// N-connection coefficients N^a_i (m x n matrix of fields over the chart).
struct NConnection {
  Chart chart = Chart::standard();
  ExprMatrix N;  // rows: v-index a (0..m-1), cols: h-index i (0..n-1)

  static NConnection zero(const Chart& chart);
  bool is_structurally_zero() const { return N.is_structurally_zero(); }
};

struct SprayCoefficients {
  Chart chart = Chart::standard();
  std::vector<Expr> G;  // one per v-index
};

// Structure functions w^gamma_{alpha beta} of the N-adapted frame,
// [e_alpha, e_beta] = w^gamma_{alpha beta} e_gamma. Antisymmetric in the
// lower pair; the only nonzero blocks are w^b_{ia} = dN^b_i/dy^a and
// w^a_{ij} = Omega^a_{ij}.
struct AnholonomyCoefficients {
  Chart chart = Chart::standard();
  std::vector<Expr> w;  // (n+m)^3, layout [gamma][alpha][beta]

  Expr& at(int g, int a, int b);
  const Expr& at(int g, int a, int b) const;
};

// h_ab = 1/2 d^2L/dy^a dy^b
ExprMatrix hessian(const Expr& L, const Chart& chart);

// Canonical N-connection of a regular generating function:
//   G^a = 1/4 h^{a,(i)} ( d^2L/dy^(i)dx^k * y^(k) - dL/dx^i ),  N^a_i = dG^a/dy^(i)
// with (i) the v-coordinate paired to h-index i. Requires n == m.
std::pair<SprayCoefficients, NConnection> canonical_nconnection(const Expr& L,
                                                                const Chart& chart);

// e_i f = df/dx^i - N^a_i df/dy^a for h slots; e_a f = df/dy^a for v slots.
Expr adapted_derivative(const NConnection& ncon, const Expr& f, int slot);

AnholonomyCoefficients anholonomy(const NConnection& ncon);

// Omega^a_{ij} = dN^a_i/dx^j - dN^a_j/dx^i + N^b_i dN^a_j/dy^b - N^b_j dN^a_i/dy^b
// Slots: (v up, h down, h down), antisymmetric in (i,j).
TensorField ncurvature(const NConnection& ncon);

// Same object through the frame-derivative route e_j(N^a_i) - e_i(N^a_j);
// used as the dual-formula oracle against ncurvature.
TensorField ncurvature_via_frames(const NConnection& ncon);

// N-elongated frame matrix A (rows: frame index, cols: coordinate index) with
// e_alpha = A_alpha^mu d_mu, and its closed-form inverse B (the coframe,
// e^alpha = B^alpha_mu du^mu). Both unit block-triangular in N.
ExprMatrix frame_matrix(const NConnection& ncon);
ExprMatrix coframe_matrix(const NConnection& ncon);

}  // namespace akgrav
