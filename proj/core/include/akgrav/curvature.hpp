#pragma once

#include "akgrav/connections.hpp"

namespace akgrav {

// Curvature of the normal d-connection. Rhhh/Phva/Svvv are the component
// formulas; `full` is the frame curvature array of the same connection,
// R[up][row][dir1][dir2] = <e^up, R(e_dir1, e_dir2) e_row>, used for
// contractions. Displayed coefficients map as
//   R^i_{hjk} = full[i][h][k][j],  S^a_{bcd} = full[a'][b'][d'][c'].
struct CurvatureBundle {
  Chart chart = Chart::standard();
  std::vector<Expr> Rhhh;  // R^i_{hjk}, n^4, antisymmetric in (j,k)
  std::vector<Expr> Phva;  // P^i_{jka}, n*n*n*m
  std::vector<Expr> Svvv;  // S^a_{bcd}, m^4, antisymmetric in (c,d)
  std::vector<Expr> full;  // (n+m)^4

  Expr& rhhh(int i, int h, int j, int k);
  Expr& phva(int i, int j, int k, int a);
  Expr& svvv(int a, int b, int c, int d);
  const Expr& rhhh(int i, int h, int j, int k) const;
  const Expr& phva(int i, int j, int k, int a) const;
  const Expr& svvv(int a, int b, int c, int d) const;
  Expr& full_at(int up, int row, int d1, int d2);
  const Expr& full_at(int up, int row, int d1, int d2) const;
};

// Frame curvature of an arbitrary coefficient array ([up][row][dir] layout)
// in the N-adapted frame: R(X,Y) = [D_X, D_Y] - D_{[X,Y]}.
std::vector<Expr> frame_curvature(const std::vector<Expr>& gamma,
                                  const NConnection& ncon);

CurvatureBundle dcurvature(const DConnection& dc, const NConnection& ncon);

// Ricci contraction R_{bg} = R^a_{bga} over the full mixed array (first to
// fourth slot). Not symmetric for a general d-connection.
TensorField dricci(const CurvatureBundle& cb);

// g^{ij} R_ij + h^{ab} R_ab
Expr dscalar(const DMetric& dm, const TensorField& ricci);

// Coordinate-basis Levi-Civita curvature oracle.
struct LcCurvature {
  ChristoffelField christoffel;
  std::vector<Expr> riemann;  // R^r_{s,m,n} = d_m G^r_{ns} - d_n G^r_{ms} + GG - GG
  ExprMatrix ricci;
  Expr scalar;
};

LcCurvature lc_riemann(const ExprMatrix& g_full, const Chart& chart);

// Second Cartan structure equation residual: the curvature 2-forms rebuilt
// from d(connection 1-form) and its wedge square against the displayed
// component blocks (h-rows: hh part vs R, hv part vs P; v-rows: vv part vs S).
SweepResult cart2_residual(const DConnection& dc, const NConnection& ncon,
                           const CurvatureBundle& cb, const std::vector<Point>& pts);

enum class ConnectionChoice { LeviCivita, NormalD };

struct EinsteinInputs {
  double lambda = 0.0;
  double newton_g = 1.0;
  TensorField stress;  // (0,2) symmetric; empty means vacuum
  bool has_stress = false;
};

struct EinsteinBlockResiduals {
  SweepResult hh, hv, vh, vv;
  double max_residual() const;
};

// residual_{bg} = Ric_{bg} - 1/2 (R + lambda) g_{bg} - 8 pi G T_{bg}
// with the chosen connection's Ricci and scalar in its natural frame.
EinsteinBlockResiduals einstein_residual(const DMetric& dm, const EinsteinInputs& inputs,
                                         ConnectionChoice choice,
                                         const std::vector<Point>& pts);

}  // namespace akgrav
