#include "akgrav/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace akgrav {

// ---------------------------------------------------------------------------
// Random expressions for the derivative/simplify probes
// ---------------------------------------------------------------------------

Expr ExprGen::next(int depth) {
  std::uniform_int_distribution<int> pick(0, depth <= 0 ? 2 : 9);
  std::uniform_real_distribution<double> coef(-2.0, 2.0);
  switch (pick(rng_)) {
    case 0: return Expr::number(std::round(coef(rng_) * 4.0) / 4.0);
    case 1:
    case 2: {
      std::uniform_int_distribution<int> v(0, chart_.dim() - 1);
      return Expr::variable(v(rng_));
    }
    case 3: return next(depth - 1) + next(depth - 1);
    case 4: return next(depth - 1) * next(depth - 1);
    case 5: return Expr::pow(next(depth - 1), 2);
    case 6: return Expr::sin(next(depth - 1));
    case 7: return Expr::cos(next(depth - 1));
    case 8: {
      // keep the argument small so exp stays finite
      return Expr::exp(Expr::number(0.25) * Expr::sin(next(depth - 1)));
    }
    default: {
      // guarded log / sqrt / quotient: argument bounded away from zero
      Expr safe = Expr::number(0.5) + Expr::pow(next(depth - 1), 2);
      std::uniform_int_distribution<int> f(0, 2);
      switch (f(rng_)) {
        case 0: return Expr::log(safe);
        case 1: return Expr::sqrt(safe);
        default: return next(depth - 1) / safe;
      }
    }
  }
}

Point ExprGen::next_point(double lo, double hi) {
  std::uniform_real_distribution<double> u(lo, hi);
  Point p(static_cast<std::size_t>(chart_.dim()));
  for (double& x : p) x = u(rng_);
  return p;
}

double default_tolerance(const std::string& check_id) {
  static const std::map<std::string, double> table = {
      {"deriv_fd", 1e-5},
      {"deriv_clairaut", 1e-9},
      {"simplify_value", 1e-12},
      {"jj_identity", 1e-12},
      {"anholonomy_commutator", 1e-9},
      {"ncurv_dual", 1e-10},
      {"homogeneity_n", 1e-10},
      {"assemble_extract", 1e-10},
      {"frame_match", 1e-9},
      {"theta_antisym", 1e-10},
      {"theta_g_compat", 1e-10},
      {"theta_closed", 1e-10},
      {"theta_potential", 1e-10},
      {"dd_zero", 1e-10},
      {"neijenhuis_commutator", 1e-9},
      {"dg_compat", 1e-10},
      {"dtheta_compat", 1e-10},
      {"torsion_pattern", 1e-10},
      {"cart1", 1e-10},
      {"cart2", 1e-10},
      {"deflc", 1e-9},
      {"lc_symmetry", 1e-9},
      {"lc_bianchi", 1e-9},
      {"ricci_vacuum", 1e-8},
      {"ricci_vacuum_nadapted", 1e-8},
      {"lc_scalar_consistency", 1e-8},
      {"lc_scalar_value", 1e-9},
      {"auxf1", 1e-12},
      {"const_curv_match", 1e-12},
      {"dcurv_constancy", 1e-12},
      {"dscalar_constancy", 1e-12},
  };
  auto it = table.find(check_id);
  if (it == table.end()) throw Error("no default tolerance for check '" + check_id + "'");
  return it->second;
}

namespace {

double tol_for(const Scenario& scn, const RunOptions& opts, const std::string& id) {
  if (auto it = opts.tolerances.find(id); it != opts.tolerances.end()) return it->second;
  if (auto it = scn.tolerances.find(id); it != scn.tolerances.end()) return it->second;
  return default_tolerance(id);
}

bool is_control(const RunOptions& opts, const std::string& id) {
  return opts.negative_control == id;
}

// --- synthetic expression probes -----------------------------------------

void expression_checks(const Scenario& scn, const RunOptions& opts, CheckReport& rep) {
  ExprGen gen(scn.chart, scn.seed * 7919 + 11);

  {  // symbolic derivative vs central differences, relative
    double worst = 0.0;
    int evaluated = 0, skipped = 0;
    for (int probe = 0; probe < 200; ++probe) {
      Expr e = gen.next();
      Point p = gen.next_point();
      std::uniform_int_distribution<int> v(0, scn.chart.dim() - 1);
      ExprGen pick = gen;  // variable choice comes from the same stream
      int var = probe % scn.chart.dim();
      try {
        Expr de = deriv(e, var);
        double sym = eval(de, p);
        if (is_control(opts, "deriv_fd")) sym += 0.1;
        double fd = central_difference(e, var, p, 1e-5);
        worst = std::max(worst, std::abs(fd - sym) / (1.0 + std::abs(sym)));
        ++evaluated;
      } catch (const DomainError&) {
        ++skipped;
      }
    }
    rep.add_value("deriv_fd", worst, tol_for(scn, opts, "deriv_fd"), evaluated, skipped,
                  "central difference h=1e-5, 200 probes");
  }

  {  // mixed partials commute
    double worst = 0.0;
    int evaluated = 0, skipped = 0;
    for (int probe = 0; probe < 100; ++probe) {
      Expr e = gen.next();
      Point p = gen.next_point();
      int u = probe % scn.chart.dim();
      int v = (probe / 2 + 1) % scn.chart.dim();
      try {
        double base = std::abs(eval(e, p));
        double duv = eval(deriv(deriv(e, u), v), p);
        double dvu = eval(deriv(deriv(e, v), u), p);
        worst = std::max(worst, std::abs(duv - dvu) / (1.0 + base));
        ++evaluated;
      } catch (const DomainError&) {
        ++skipped;
      }
    }
    rep.add_value("deriv_clairaut", worst, tol_for(scn, opts, "deriv_clairaut"),
                  evaluated, skipped, "100 random expressions");
  }

  {  // simplification preserves values
    double worst = 0.0;
    int evaluated = 0, skipped = 0;
    for (int probe = 0; probe < 100; ++probe) {
      Expr e = gen.next();
      Expr s = simplify(e);
      Point p = gen.next_point();
      try {
        double a = eval(e, p), b = eval(s, p);
        worst = std::max(worst, std::abs(a - b) / (1.0 + std::abs(a)));
        ++evaluated;
      } catch (const DomainError&) {
        ++skipped;
      }
    }
    rep.add_value("simplify_value", worst, tol_for(scn, opts, "simplify_value"),
                  evaluated, skipped, "");
  }
}

// --- frame checks ----------------------------------------------------------

void frame_checks(const ScenarioObjects& so, const RunOptions& opts, CheckReport& rep) {
  const Scenario& scn = so.scenario;
  const Chart& chart = scn.chart;
  const NConnection& ncon = so.dm.ncon;
  int d = chart.dim();

  {  // [e_a, e_b] u^g = w^g'_{ab} e_g' u^g for every pair and coordinate
    AnholonomyCoefficients w = anholonomy(ncon);
    std::vector<Expr> residuals;
    bool corrupt = is_control(opts, "anholonomy_commutator");
    for (int al = 0; al < d; ++al)
      for (int be = al + 1; be < d; ++be)
        for (int g = 0; g < d; ++g) {
          Expr ug = Expr::variable(g);
          Expr lhs = adapted_derivative(ncon, adapted_derivative(ncon, ug, be), al) -
                     adapted_derivative(ncon, adapted_derivative(ncon, ug, al), be);
          std::vector<Expr> rhs;
          for (int gp = 0; gp < d; ++gp) {
            Expr wv = w.at(gp, al, be);
            if (corrupt && gp == al + be) wv = wv + Expr::number(0.1);
            rhs.push_back(wv * adapted_derivative(ncon, ug, gp));
          }
          residuals.push_back(simplify(lhs - Expr::sum(std::move(rhs))));
        }
    rep.add_sweep("anholonomy_commutator",
                  sweep_max(so.points, [&](const Point& p) { return max_abs_at(residuals, p); }),
                  tol_for(scn, opts, "anholonomy_commutator"),
                  "commutators applied to coordinate functions");
  }

  {  // the two N-curvature formulas agree
    TensorField o1 = ncurvature(ncon);
    TensorField o2 = ncurvature_via_frames(ncon);
    std::vector<Expr> residuals;
    for (std::size_t i = 0; i < o1.components().size(); ++i) {
      Expr r = o1.components()[i] - o2.components()[i];
      if (is_control(opts, "ncurv_dual") && i == 1) r = r + Expr::number(0.1);
      residuals.push_back(simplify(r));
    }
    rep.add_sweep("ncurv_dual",
                  sweep_max(so.points, [&](const Point& p) { return max_abs_at(residuals, p); }),
                  tol_for(scn, opts, "ncurv_dual"), "");
  }

  if (scn.kind == SourceKind::GeneratingFunction) {
    // canonical N is invariant under L -> c^2 L (c = 3)
    auto [spray_scaled, ncon_scaled] =
        canonical_nconnection(Expr::number(9.0) * scn.generating_function, chart);
    (void)spray_scaled;
    std::vector<Expr> residuals;
    for (int a = 0; a < chart.m(); ++a)
      for (int i = 0; i < chart.n(); ++i)
        residuals.push_back(simplify(ncon.N.at(a, i) - ncon_scaled.N.at(a, i)));
    rep.add_sweep("homogeneity_n",
                  sweep_max(so.points, [&](const Point& p) { return max_abs_at(residuals, p); }),
                  tol_for(scn, opts, "homogeneity_n"), "L vs 9L");
  }
}

// --- metric checks ---------------------------------------------------------

void metric_checks(const ScenarioObjects& so, const RunOptions& opts, CheckReport& rep) {
  const Scenario& scn = so.scenario;
  const Chart& chart = scn.chart;
  int n = chart.n(), m = chart.m();

  {  // assemble then extract reproduces N
    ExprMatrix G = assemble_coordinate_metric(so.dm);
    NConnection back = extract_nconnection(G, chart);
    std::vector<Expr> residuals;
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < n; ++i)
        residuals.push_back(simplify(back.N.at(a, i) - so.dm.ncon.N.at(a, i)));
    rep.add_sweep("assemble_extract",
                  sweep_max(so.points, [&](const Point& p) { return max_abs_at(residuals, p); }),
                  tol_for(scn, opts, "assemble_extract"), "round trip");
  }

  {  // pointwise vierbein matching: identity target and a c^2-scaled target
    DMetric scaled = so.dm;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) scaled.g.at(i, j) = Expr::number(4.0) * so.dm.g.at(i, j);
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) scaled.h.at(a, b) = Expr::number(4.0) * so.dm.h.at(a, b);
    SweepResult sweep;
    std::size_t count = std::min<std::size_t>(so.points.size(), 20);
    for (std::size_t i = 0; i < count; ++i) {
      const Point& p = so.points[i];
      try {
        Vierbein v1 = frame_match_solve(so.dm, so.dm, p);
        Vierbein v2 = frame_match_solve(scaled, so.dm, p);
        double r = std::max(frame_match_residual(so.dm, so.dm, p, v1),
                            frame_match_residual(scaled, so.dm, p, v2));
        sweep.max_residual = std::max(sweep.max_residual, r);
        ++sweep.evaluated;
      } catch (const DomainError&) {
        ++sweep.skipped;
      } catch (const NoConvergenceError&) {
        sweep.max_residual = std::numeric_limits<double>::infinity();
        ++sweep.evaluated;
      }
    }
    rep.add_sweep("frame_match", sweep, tol_for(scn, opts, "frame_match"),
                  "identity and 4x-scaled targets");
  }
}

// --- almost-complex / symplectic checks -------------------------------------

struct ThetaObjects {
  TensorField J;
  bool have_theta = false;
  DifferentialForm theta;
};

ThetaObjects almost_kahler_checks(const ScenarioObjects& so, const RunOptions& opts,
                                  CheckReport& rep) {
  const Scenario& scn = so.scenario;
  const Chart& chart = scn.chart;
  const NConnection& ncon = so.dm.ncon;
  int n = chart.n(), d = chart.dim();
  ThetaObjects out;

  if (chart.n() != chart.m()) {
    rep.add_info("jj_identity", 0.0, "not applicable: n != m");
    return out;
  }

  out.J = almost_complex(ncon);

  {  // J o J = -I in the coordinate basis
    TensorField Jc = to_coordinate(out.J, ncon);
    std::vector<Expr> residuals;
    for (int al = 0; al < d; ++al)
      for (int be = 0; be < d; ++be) {
        std::vector<Expr> terms;
        for (int g = 0; g < d; ++g) terms.push_back(Jc.at({al, g}) * Jc.at({g, be}));
        if (al == be) terms.push_back(Expr::number(1.0));
        if (is_control(opts, "jj_identity") && al == 0 && be == 0)
          terms.push_back(Expr::number(0.1));
        residuals.push_back(simplify(Expr::sum(std::move(terms))));
      }
    rep.add_sweep("jj_identity",
                  sweep_max(so.points, [&](const Point& p) { return max_abs_at(residuals, p); }),
                  tol_for(scn, opts, "jj_identity"), "coordinate basis");
  }

  TensorField theta_raw = symplectic_candidate(so.dm, out.J);

  {  // antisymmetry of the candidate; identification scenarios must pass
    std::vector<Expr> residuals;
    for (int a = 0; a < d; ++a)
      for (int b = a; b < d; ++b)
        residuals.push_back(simplify(theta_raw.at({a, b}) + theta_raw.at({b, a})));
    SweepResult sweep =
        sweep_max(so.points, [&](const Point& p) { return max_abs_at(residuals, p); });
    if (so.dm.identification_holds(so.points)) {
      rep.add_sweep("theta_antisym", sweep, tol_for(scn, opts, "theta_antisym"), "");
    } else {
      rep.add_info("theta_antisym", sweep.max_residual,
                   "informative: no g-h identification, theta is not a 2-form");
      return out;
    }
  }

  out.have_theta = true;
  out.theta = DifferentialForm(chart, 2, FrameTag::NAdapted);
  for (int a = 0; a < d; ++a)
    for (int b = 0; b < d; ++b) out.theta.at({a, b}) = theta_raw.at({a, b});

  {  // theta(X,Y) = g(JX,Y) on all basis pairs
    TensorField gf = frame_metric(so.dm);
    std::vector<Expr> residuals;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        std::vector<Expr> terms{out.theta.at({a, b})};
        for (int g = 0; g < d; ++g) terms.push_back(-(gf.at({g, b}) * out.J.at({g, a})));
        residuals.push_back(simplify(Expr::sum(std::move(terms))));
      }
    rep.add_sweep("theta_g_compat",
                  sweep_max(so.points, [&](const Point& p) { return max_abs_at(residuals, p); }),
                  tol_for(scn, opts, "theta_g_compat"), "16 basis pairs");
  }

  AnholonomyCoefficients w = anholonomy(ncon);

  {  // d theta; a verdict only for generating-function scenarios
    DifferentialForm theta_for_d = out.theta;
    if (is_control(opts, "theta_closed"))
      theta_for_d.at({0, n}) = theta_for_d.at({0, n}) + Expr::variable(0);
    DifferentialForm dtheta = exterior_derivative(theta_for_d, ncon, w);
    SweepResult sweep = sweep_max(
        so.points, [&](const Point& p) { return max_abs_at(dtheta.components(), p); });
    if (scn.kind == SourceKind::GeneratingFunction) {
      rep.add_sweep("theta_closed", sweep, tol_for(scn, opts, "theta_closed"), "");
    } else {
      rep.add_info("theta_closed", sweep.max_residual,
                   "informative: almost-symplectic form of a non-Lagrange splitting");
    }
  }

  if (scn.kind == SourceKind::GeneratingFunction) {
    // theta = d omega for the canonical potential
    DifferentialForm omega = liouville_potential(scn.generating_function, chart);
    DifferentialForm domega_coord = exterior_derivative(omega);
    DifferentialForm domega = form_to_adapted(domega_coord, ncon);
    std::vector<Expr> residuals;
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) {
        Expr r = domega.at({a, b}) - out.theta.at({a, b});
        if (is_control(opts, "theta_potential") && a == 0 && b == n)
          r = r + Expr::number(0.1);
        residuals.push_back(simplify(r));
      }
    rep.add_sweep("theta_potential",
                  sweep_max(so.points, [&](const Point& p) { return max_abs_at(residuals, p); }),
                  tol_for(scn, opts, "theta_potential"), "theta vs d(omega)");
  }

  {  // d^2 = 0 on scalars and on a 1-form, in the anholonomic frame
    ExprGen gen(chart, scn.seed * 31 + 5);
    std::vector<Expr> residuals;
    for (int probe = 0; probe < 20; ++probe) {
      DifferentialForm f0(chart, 0, FrameTag::NAdapted);
      f0.components()[0] = gen.next(2);
      DifferentialForm dd = exterior_derivative(exterior_derivative(f0, ncon, w), ncon, w);
      for (const Expr& e : dd.components()) residuals.push_back(e);
    }
    DifferentialForm f1(chart, 1, FrameTag::NAdapted);
    for (int g = 0; g < d; ++g) f1.at({g}) = gen.next(2);
    DifferentialForm dd1 = exterior_derivative(exterior_derivative(f1, ncon, w), ncon, w);
    for (const Expr& e : dd1.components()) residuals.push_back(e);
    rep.add_sweep("dd_zero",
                  sweep_max(so.points, [&](const Point& p) { return max_abs_at(residuals, p); }),
                  tol_for(scn, opts, "dd_zero"), "20 scalars + one 1-form");
  }

  {  // Neijenhuis tensor against direct coordinate-field commutators
    TensorField nj = neijenhuis(out.J, ncon);
    TensorField Jc = to_coordinate(out.J, ncon);
    ExprMatrix A = frame_matrix(ncon);
    // frame fields and their J-images as coordinate vector fields
    auto field = [&](int al) {
      std::vector<Expr> X(static_cast<std::size_t>(d));
      for (int mu = 0; mu < d; ++mu) X[static_cast<std::size_t>(mu)] = A.at(al, mu);
      return X;
    };
    auto apply_j = [&](const std::vector<Expr>& X) {
      std::vector<Expr> out_v(static_cast<std::size_t>(d), Expr::number(0.0));
      for (int mu = 0; mu < d; ++mu) {
        std::vector<Expr> terms;
        for (int nu = 0; nu < d; ++nu) terms.push_back(Jc.at({mu, nu}) * X[static_cast<std::size_t>(nu)]);
        out_v[static_cast<std::size_t>(mu)] = simplify(Expr::sum(std::move(terms)));
      }
      return out_v;
    };
    std::vector<Expr> residuals;
    for (int al = 0; al < d; ++al)
      for (int be = al + 1; be < d; ++be) {
        std::vector<Expr> X = field(al), Y = field(be);
        std::vector<Expr> JX = apply_j(X), JY = apply_j(Y);
        std::vector<Expr> t1 = vf_bracket(X, Y, chart);
        std::vector<Expr> t2 = vf_bracket(JX, JY, chart);
        std::vector<Expr> t3 = apply_j(vf_bracket(JX, Y, chart));
        std::vector<Expr> t4 = apply_j(vf_bracket(X, JY, chart));
        // expected coordinate components of N(e_al, e_be)
        for (int mu = 0; mu < d; ++mu) {
          std::vector<Expr> expect_terms;
          for (int g = 0; g < d; ++g) expect_terms.push_back(nj.at({g, al, be}) * A.at(g, mu));
          Expr direct = -t1[static_cast<std::size_t>(mu)] + t2[static_cast<std::size_t>(mu)] -
                        t3[static_cast<std::size_t>(mu)] - t4[static_cast<std::size_t>(mu)];
          residuals.push_back(simplify(direct - Expr::sum(std::move(expect_terms))));
        }
      }
    rep.add_sweep("neijenhuis_commutator",
                  sweep_max(so.points, [&](const Point& p) { return max_abs_at(residuals, p); }),
                  tol_for(scn, opts, "neijenhuis_commutator"),
                  "direct vector-field commutators");
  }

  return out;
}

// --- connection / curvature checks ------------------------------------------

void connection_checks(const ScenarioObjects& so, const RunOptions& opts,
                       const ThetaObjects& th, CheckReport& rep) {
  const Scenario& scn = so.scenario;
  const Chart& chart = scn.chart;
  const NConnection& ncon = so.dm.ncon;
  int n = chart.n(), m = chart.m(), d = chart.dim();

  NormalDc ndc;
  try {
    ndc = normal_dconnection(so.dm, so.points);
  } catch (const IdentificationViolatedError& err) {
    rep.add_info("normal_dconnection", 0.0, std::string("not available: ") + err.what());
    return;
  }
  rep.provenance.emplace_back("normal_dc_mode", ndc.mode == NormalDcMode::Identified
                                                    ? "identified"
                                                    : "block-diagonal-n0");

  DConnection dc = ndc.dc;
  if (is_control(opts, "dg_compat") || is_control(opts, "dtheta_compat") ||
      is_control(opts, "deflc") || is_control(opts, "lc_scalar_consistency"))
    dc.lh(0, 0, 0) = dc.lh(0, 0, 0) + Expr::number(0.1);
  if (is_control(opts, "torsion_pattern") || is_control(opts, "cart1"))
    dc.lh(0, 0, n > 1 ? 1 : 0) = dc.lh(0, 0, n > 1 ? 1 : 0) + Expr::number(0.1);

  {  // metric compatibility (and symplectic compatibility when theta exists)
    TensorField theta_t(chart,
                        {{SlotSpace::Full, Variance::Down}, {SlotSpace::Full, Variance::Down}},
                        FrameTag::NAdapted);
    if (th.have_theta)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) theta_t.at({a, b}) = th.theta.at({a, b});
    CompatibilityResiduals comp = compatibility_residuals(so.dm, dc, theta_t, so.points);
    rep.add_sweep("dg_compat", comp.dg, tol_for(scn, opts, "dg_compat"), "");
    if (th.have_theta)
      rep.add_sweep("dtheta_compat", comp.dtheta, tol_for(scn, opts, "dtheta_compat"), "");
  }

  {  // torsion table vs the connection/anholonomy expansion, plus the zeros
    TensorField T = torsion(dc, ncon);
    AnholonomyCoefficients w = anholonomy(ncon);
    std::vector<Expr> gamma = full_gamma(dc);
    auto gm = [&](int up, int row, int dir) -> const Expr& {
      return gamma[static_cast<std::size_t>((up * d + row) * d + dir)];
    };
    std::vector<Expr> residuals;
    for (int g = 0; g < d; ++g)
      for (int a = 0; a < d; ++a)
        for (int b = 0; b < d; ++b) {
          Expr independent = simplify(gm(g, a, b) - gm(g, b, a) + w.at(g, a, b));
          residuals.push_back(simplify(T.at({g, a, b}) - independent));
        }
    // structural zero blocks
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        for (int k = 0; k < n; ++k) residuals.push_back(T.at({i, j, k}));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int c = 0; c < m; ++c) residuals.push_back(T.at({n + a, n + b, n + c}));
    // T^a_{ij} carries exactly the N-curvature
    TensorField omega = ncurvature(ncon);
    for (int a = 0; a < m; ++a)
      for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
          residuals.push_back(simplify(T.at({n + a, i, j}) - omega.at({a, i, j})));
    rep.add_sweep("torsion_pattern",
                  sweep_max(so.points, [&](const Point& p) { return max_abs_at(residuals, p); }),
                  tol_for(scn, opts, "torsion_pattern"),
                  "component table vs direct expansion");
  }

  rep.add_sweep("cart1", cart1_residual(dc, ncon, so.points), tol_for(scn, opts, "cart1"),
                "first structure equation");

  CurvatureBundle cb = dcurvature(dc, ncon);
  if (is_control(opts, "cart2")) cb.rhhh(0, 0, 0, n > 1 ? 1 : 0) =
      cb.rhhh(0, 0, 0, n > 1 ? 1 : 0) + Expr::number(0.1);
  rep.add_sweep("cart2", cart2_residual(dc, ncon, cb, so.points), tol_for(scn, opts, "cart2"),
                "second structure equation");

  ExprMatrix G = assemble_coordinate_metric(so.dm);
  LcCurvature lc = lc_riemann(G, chart);

  {  // Levi-Civita oracle sanity: pair symmetries and the first Bianchi identity
    std::vector<Expr> residuals;
    ExprMatrix Gm = G;
    auto lower = [&](int r, int s, int mu, int nu) {
      std::vector<Expr> terms;
      for (int l = 0; l < d; ++l)
        terms.push_back(Gm.at(r, l) *
                        lc.riemann[static_cast<std::size_t>(((l * d + s) * d + mu) * d + nu)]);
      return simplify(Expr::sum(std::move(terms)));
    };
    for (int r = 0; r < d; ++r)
      for (int s = 0; s < d; ++s)
        for (int mu = 0; mu < d; ++mu)
          for (int nu = mu; nu < d; ++nu) {
            Expr rl = lower(r, s, mu, nu);
            residuals.push_back(simplify(rl + lower(s, r, mu, nu)));
            residuals.push_back(simplify(rl - lower(mu, nu, r, s)));
          }
    rep.add_sweep("lc_symmetry",
                  sweep_max(so.points, [&](const Point& p) { return max_abs_at(residuals, p); }),
                  tol_for(scn, opts, "lc_symmetry"), "lowered Riemann symmetries");

    std::vector<Expr> bianchi;
    for (int r = 0; r < d; ++r)
      for (int s = 0; s < d; ++s)
        for (int mu = 0; mu < d; ++mu)
          for (int nu = 0; nu < d; ++nu) {
            auto rm = [&](int a, int b, int c, int e) -> const Expr& {
              return lc.riemann[static_cast<std::size_t>(((a * d + b) * d + c) * d + e)];
            };
            bianchi.push_back(simplify(rm(r, s, mu, nu) + rm(r, mu, nu, s) + rm(r, nu, s, mu)));
          }
    rep.add_sweep("lc_bianchi",
                  sweep_max(so.points, [&](const Point& p) { return max_abs_at(bianchi, p); }),
                  tol_for(scn, opts, "lc_bianchi"), "cyclic sum");
  }

  {  // connection deformation: LC = normal + distortion in the adapted frame
    DeflcResult res = reconcile_deflc(lc.christoffel, dc, so.dm, so.points,
                                      tol_for(scn, opts, "deflc"));
    rep.add_sweep("deflc", res.sweep, tol_for(scn, opts, "deflc"),
                  res.fell_back ? "printed-slot reading selected" : "");
    rep.provenance.emplace_back("deft_reading",
                                res.reading == DeftSlotReading::TransposedMixed
                                    ? "transposed-mixed"
                                    : "printed-mixed");
  }

  {  // LC scalar: coordinate route vs adapted route through the deformation
    Distortion dist = distortion(so.dm, dc);
    std::vector<Expr> gammaZ = full_gamma(dc);
    for (std::size_t i = 0; i < gammaZ.size(); ++i)
      gammaZ[i] = simplify(gammaZ[i] + dist.Z.components()[i]);
    std::vector<Expr> R = frame_curvature(gammaZ, ncon);
    ExprMatrix ginv = sym_inverse(so.dm.g);
    ExprMatrix hinv = sym_inverse(so.dm.h);
    std::vector<Expr> ric_terms;
    auto ric_at = [&](int b, int g) {
      std::vector<Expr> terms;
      for (int a = 0; a < d; ++a)
        terms.push_back(R[static_cast<std::size_t>(((a * d + b) * d + a) * d + g)]);
      return Expr::sum(std::move(terms));
    };
    std::vector<Expr> scalar_terms;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) scalar_terms.push_back(ginv.at(i, j) * ric_at(i, j));
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        scalar_terms.push_back(hinv.at(a, b) * ric_at(n + a, n + b));
    Expr adapted_scalar = simplify(Expr::sum(std::move(scalar_terms)));
    Expr residual = simplify(adapted_scalar - lc.scalar);
    rep.add_sweep("lc_scalar_consistency",
                  sweep_max(so.points, [&](const Point& p) {
                    EvalCache c(p);
                    return std::abs(eval(residual, c));
                  }),
                  tol_for(scn, opts, "lc_scalar_consistency"),
                  "coordinate vs adapted route");

    if (scn.expect_vacuum_lc) {
      rep.add_sweep("ricci_vacuum",
                    sweep_max(so.points, [&](const Point& p) {
                      EvalCache c(p);
                      double mx = 0.0;
                      for (int s = 0; s < d; ++s)
                        for (int nu = 0; nu < d; ++nu)
                          mx = std::max(mx, std::abs(eval(lc.ricci.at(s, nu), c)));
                      return mx;
                    }),
                    tol_for(scn, opts, "ricci_vacuum"), "Levi-Civita route");
      std::vector<Expr> ric_frame;
      for (int b = 0; b < d; ++b)
        for (int g = 0; g < d; ++g) ric_frame.push_back(simplify(ric_at(b, g)));
      rep.add_sweep("ricci_vacuum_nadapted",
                    sweep_max(so.points, [&](const Point& p) { return max_abs_at(ric_frame, p); }),
                    tol_for(scn, opts, "ricci_vacuum_nadapted"),
                    "normal connection + distortion route");
    }

    if (scn.expect_lc_scalar) {
      Expr dev = simplify(lc.scalar - Expr::number(*scn.expect_lc_scalar));
      rep.add_sweep("lc_scalar_value",
                    sweep_max(so.points, [&](const Point& p) {
                      EvalCache c(p);
                      return std::abs(eval(dev, c));
                    }),
                    tol_for(scn, opts, "lc_scalar_value"),
                    "known closed-form scalar curvature");
    }
  }

  {  // Einstein residuals, informative unless a vacuum verdict is expected
    EinsteinInputs inputs;
    inputs.lambda = scn.lambda;
    inputs.newton_g = scn.newton_g;
    if (scn.stress) {
      TensorField t(chart,
                    {{SlotSpace::Full, Variance::Down}, {SlotSpace::Full, Variance::Down}},
                    FrameTag::Coordinate);
      for (int i = 0; i < d; ++i)
        for (int j = 0; j < d; ++j) t.at({i, j}) = scn.stress->at(i, j);
      inputs.stress = t;
      inputs.has_stress = true;
    }
    EinsteinBlockResiduals elc = einstein_residual(so.dm, inputs,
                                                   ConnectionChoice::LeviCivita, so.points);
    rep.add_info("einstein_lc", elc.max_residual(), "field-equation residual, LC connection");
    EinsteinBlockResiduals end = einstein_residual(so.dm, inputs,
                                                   ConnectionChoice::NormalD, so.points);
    rep.add_info("einstein_normal_d", end.max_residual(),
                 "informative: normal-connection residual without distortion sources");
  }
}

// --- constant-coefficient suite ---------------------------------------------

void constcoeff_checks(const ScenarioObjects& so, const RunOptions& opts, CheckReport& rep) {
  const Scenario& scn = so.scenario;
  const Chart& chart = scn.chart;
  int n = chart.n(), m = chart.m(), d = chart.dim();

  Mat g0 = eval_matrix(so.dm.g, so.points.front());
  Mat h0 = eval_matrix(so.dm.h, so.points.front());

  ConstDConnection L0;
  try {
    L0 = solve_auxf1_from_n(h0, so.dm.ncon, so.points);
  } catch (const NonConstantRhsError& err) {
    rep.add_info("auxf1", 0.0, std::string("not applicable: ") + err.what());
    return;
  }
  if (is_control(opts, "auxf1")) L0.at(0, 0, 0) += 0.1;

  rep.add_sweep("auxf1", verify_auxf1(so.dm.ncon, h0, L0, so.points),
                tol_for(scn, opts, "auxf1"), "constant-coefficient condition");

  DConnection dcc = as_dconnection(L0, chart);
  if (is_control(opts, "dcurv_constancy") || is_control(opts, "dscalar_constancy"))
    dcc.lv(0, 0, 0) = dcc.lv(0, 0, 0) + Expr::number(0.1) * Expr::variable(n);
  CurvatureBundle cb = dcurvature(dcc, so.dm.ncon);

  {  // commutator formula reproduces the curvature path exactly
    std::vector<double> R0 = const_curvature(L0);
    std::vector<Expr> residuals;
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b)
        for (int j = 0; j < n; ++j)
          for (int k = 0; k < n; ++k) {
            double expect = R0[static_cast<std::size_t>(((a * m + b) * n + j) * n + k)];
            residuals.push_back(
                simplify(cb.full_at(n + a, n + b, k, j) - Expr::number(expect)));
          }
    rep.add_sweep("const_curv_match",
                  sweep_max(so.points, [&](const Point& p) { return max_abs_at(residuals, p); }),
                  tol_for(scn, opts, "const_curv_match"), "brute-force commutator oracle");
  }

  {  // constancy of every curvature component across the sweep
    std::vector<double> first(cb.full.size(), 0.0);
    {
      EvalCache c(so.points.front());
      for (std::size_t i = 0; i < cb.full.size(); ++i) first[i] = eval(cb.full[i], c);
    }
    SweepResult sweep = sweep_max(so.points, [&](const Point& p) {
      EvalCache c(p);
      double mx = 0.0;
      for (std::size_t i = 0; i < cb.full.size(); ++i)
        mx = std::max(mx, std::abs(eval(cb.full[i], c) - first[i]));
      return mx;
    });
    rep.add_sweep("dcurv_constancy", sweep, tol_for(scn, opts, "dcurv_constancy"),
                  "variance across sample points");
  }

  {  // d-scalar constancy and the LC scalar variance (reported, not judged)
    ConstDMetric cdm{g0, h0};
    ConstDConnection L0_for_scalar = L0;
    ConstScalarResult cs = const_scalar(cdm, L0_for_scalar, so.dm.ncon, so.points);
    SweepResult sweep = cs.sweep;
    sweep.max_residual = cs.variance;
    if (is_control(opts, "dscalar_constancy")) sweep.max_residual += 0.1;
    rep.add_sweep("dscalar_constancy", sweep, tol_for(scn, opts, "dscalar_constancy"),
                  "d-scalar value " + format_number(cs.value));

    ExprMatrix G = assemble_coordinate_metric(so.dm);
    LcCurvature lc = lc_riemann(G, chart);
    std::vector<double> vals;
    for (const Point& p : so.points) {
      EvalCache c(p);
      vals.push_back(eval(lc.scalar, c));
    }
    double mean = 0.0;
    for (double v : vals) mean += v;
    if (!vals.empty()) mean /= static_cast<double>(vals.size());
    double var = 0.0;
    for (double v : vals) var = std::max(var, std::abs(v - mean));
    rep.add_info("lc_scalar_variance", var,
                 "LC scalar varies across points while the d-scalar stays constant");
  }
  (void)d;
}

}  // namespace

// ---------------------------------------------------------------------------

CheckReport run_check(const Scenario& scenario, const RunOptions& opts) {
  Scenario scn = scenario;
  if (opts.points) scn.num_points = *opts.points;
  if (opts.seed) scn.seed = *opts.seed;

  ScenarioObjects so = realize(scn);

  CheckReport rep;
  rep.scenario = scn.name;
  rep.seed = scn.seed;
  rep.points = static_cast<int>(so.points.size());
  rep.provenance.emplace_back("theta_convention", "theta(X,Y) = g(JX,Y), J in the first slot");
  rep.provenance.emplace_back("anholonomy_order", "[e_alpha, e_beta] = w^gamma_{alpha beta} e_gamma");
  rep.provenance.emplace_back("frame_match_gauge",
                              "block-diagonal symmetric vierbein, Newton from identity");
  if (!opts.negative_control.empty())
    rep.provenance.emplace_back("negative_control", opts.negative_control);

  expression_checks(scn, opts, rep);
  frame_checks(so, opts, rep);
  metric_checks(so, opts, rep);
  ThetaObjects th = almost_kahler_checks(so, opts, rep);
  connection_checks(so, opts, th, rep);
  if (scn.constant_blocks_linear_n) constcoeff_checks(so, opts, rep);
  return rep;
}

// ---------------------------------------------------------------------------

namespace {

std::string dump_matrix(const ExprMatrix& m, const Chart& chart, const std::string& name,
                        const Point& p) {
  std::ostringstream os;
  for (int r = 0; r < m.rows(); ++r)
    for (int c = 0; c < m.cols(); ++c) {
      Expr e = simplify(m.at(r, c));
      if (e.is_number(0.0)) continue;
      os << "  " << name << "[" << r + 1 << "][" << c + 1 << "] = " << to_string(e, chart);
      try {
        os << "    @p0 = " << format_number(eval(e, p));
      } catch (const DomainError&) {
        os << "    @p0 = <domain error>";
      }
      os << "\n";
    }
  return os.str();
}

std::string dump_tensor(const TensorField& t, const std::string& name, const Point& p) {
  std::ostringstream os;
  const Chart& chart = t.chart();
  int rank = t.rank();
  std::vector<int> idx(static_cast<std::size_t>(rank), 0);
  const std::vector<Expr>& comp = t.components();
  for (std::size_t off = 0; off < comp.size(); ++off) {
    Expr e = simplify(comp[off]);
    if (!e.is_number(0.0)) {
      os << "  " << name << "[";
      for (int s = 0; s < rank; ++s) os << (s ? "][" : "") << idx[static_cast<std::size_t>(s)] + 1;
      os << "] = " << to_string(e, chart);
      try {
        os << "    @p0 = " << format_number(eval(e, p));
      } catch (const DomainError&) {
        os << "    @p0 = <domain error>";
      }
      os << "\n";
    }
    for (int s = rank - 1; s >= 0; --s) {
      if (++idx[static_cast<std::size_t>(s)] < t.dim(s)) break;
      idx[static_cast<std::size_t>(s)] = 0;
    }
  }
  return os.str();
}

}  // namespace

std::string run_derive(const Scenario& scenario, const RunOptions& opts) {
  Scenario scn = scenario;
  if (opts.points) scn.num_points = *opts.points;
  if (opts.seed) scn.seed = *opts.seed;
  ScenarioObjects so = realize(scn);
  const Chart& chart = scn.chart;
  const Point& p0 = so.points.front();

  std::ostringstream os;
  os << "akgrav derive: " << scn.name << "\n";
  os << "chart:";
  for (int i = 0; i < chart.dim(); ++i) os << " " << chart.name(i);
  os << "  (n=" << chart.n() << ", m=" << chart.m() << ")\n";
  os << "p0 = (";
  for (std::size_t i = 0; i < p0.size(); ++i) os << (i ? ", " : "") << format_number(p0[i]);
  os << ")\n\n";

  os << "[n-connection]\n" << dump_matrix(so.dm.ncon.N, chart, "N", p0);
  os << "\n[d-metric]\n";
  os << dump_matrix(so.dm.g, chart, "g", p0);
  os << dump_matrix(so.dm.h, chart, "h", p0);

  bool paired = chart.n() == chart.m();
  if (paired) {
    TensorField J = almost_complex(so.dm.ncon);
    TensorField Jc = to_coordinate(J, so.dm.ncon);
    os << "\n[almost-complex structure, coordinate basis]\n" << dump_tensor(Jc, "J", p0);
    TensorField theta = symplectic_candidate(so.dm, J);
    os << "\n[almost-symplectic form, adapted frame]\n" << dump_tensor(theta, "theta", p0);
  }

  try {
    NormalDc ndc = normal_dconnection(so.dm, so.points);
    os << "\n[normal d-connection ("
       << (ndc.mode == NormalDcMode::Identified ? "identified" : "block-diagonal, N = 0")
       << ")]\n";
    std::vector<Expr> gamma = full_gamma(ndc.dc);
    TensorField gt(chart,
                   {{SlotSpace::Full, Variance::Up},
                    {SlotSpace::Full, Variance::Down},
                    {SlotSpace::Full, Variance::Down}},
                   FrameTag::NAdapted);
    gt.components() = gamma;
    os << dump_tensor(gt, "Gamma", p0);

    TensorField T = torsion(ndc.dc, so.dm.ncon);
    os << "\n[torsion]\n" << dump_tensor(T, "T", p0);

    CurvatureBundle cb = dcurvature(ndc.dc, so.dm.ncon);
    TensorField rt(chart,
                   {{SlotSpace::Full, Variance::Up},
                    {SlotSpace::Full, Variance::Down},
                    {SlotSpace::Full, Variance::Down},
                    {SlotSpace::Full, Variance::Down}},
                   FrameTag::NAdapted);
    rt.components() = cb.full;
    os << "\n[curvature of the normal d-connection]\n" << dump_tensor(rt, "R", p0);

    TensorField ric = dricci(cb);
    os << "\n[Ricci d-tensor]\n" << dump_tensor(ric, "Ric", p0);
    Expr scal = dscalar(so.dm, ric);
    os << "\n[scalar curvature]\n  R = " << to_string(simplify(scal), chart);
    try {
      os << "    @p0 = " << format_number(eval(scal, p0));
    } catch (const DomainError&) {
      os << "    @p0 = <domain error>";
    }
    os << "\n";

    Distortion dist = distortion(so.dm, ndc.dc);
    os << "\n[distortion from the Levi-Civita connection]\n" << dump_tensor(dist.Z, "Z", p0);
  } catch (const IdentificationViolatedError& err) {
    os << "\n[normal d-connection]\n  not available: " << err.what() << "\n";
  }
  return os.str();
}

// ---------------------------------------------------------------------------

std::string run_compare(const Scenario& scenario, const RunOptions& opts) {
  Scenario scn = scenario;
  if (opts.points) scn.num_points = *opts.points;
  if (opts.seed) scn.seed = *opts.seed;
  ScenarioObjects so = realize(scn);
  const Chart& chart = scn.chart;
  int d = chart.dim();

  auto sweep_abs = [&](const std::vector<Expr>& comps) {
    return sweep_max(so.points, [&](const Point& p) { return max_abs_at(comps, p); }).max_residual;
  };

  std::ostringstream os;
  os << "akgrav compare: " << scn.name << "\n";
  os << "connection comparison over " << so.points.size() << " sample points\n\n";

  ExprMatrix G = assemble_coordinate_metric(so.dm);
  LcCurvature lc = lc_riemann(G, chart);
  {
    os << "[levi-civita]\n";
    os << "  coframe: coordinate differentials\n";
    os << "  max |Gamma| = " << format_number(sweep_abs(lc.christoffel.gamma)) << "\n";
    // nabla g in coordinates
    std::vector<Expr> nabla_g;
    for (int l = 0; l < d; ++l)
      for (int mu = 0; mu < d; ++mu)
        for (int nu = 0; nu < d; ++nu) {
          std::vector<Expr> terms{deriv(G.at(mu, nu), l)};
          for (int s = 0; s < d; ++s) {
            terms.push_back(-(lc.christoffel.at(s, mu, l) * G.at(s, nu)));
            terms.push_back(-(lc.christoffel.at(s, nu, l) * G.at(mu, s)));
          }
          nabla_g.push_back(simplify(Expr::sum(std::move(terms))));
        }
    os << "  max |nabla g| = " << format_number(sweep_abs(nabla_g)) << "  (torsion-free)\n";
    os << "  max |Riemann| = " << format_number(sweep_abs(lc.riemann)) << "\n";
  }

  try {
    NormalDc ndc = normal_dconnection(so.dm, so.points);
    os << "\n[normal d-connection]\n";
    os << "  coframe: dx^i, e^a = dy^a + N^a_i dx^i\n";
    std::vector<Expr> gamma = full_gamma(ndc.dc);
    os << "  max |Gamma| = " << format_number(sweep_abs(gamma)) << "\n";
    TensorField gmetric(chart,
                        {{SlotSpace::Full, Variance::Down}, {SlotSpace::Full, Variance::Down}},
                        FrameTag::NAdapted);
    CompatibilityResiduals comp =
        compatibility_residuals(so.dm, ndc.dc, gmetric, so.points);
    os << "  max |D g| = " << format_number(comp.dg.max_residual) << "\n";
    TensorField T = torsion(ndc.dc, so.dm.ncon);
    os << "  max |torsion| = " << format_number(sweep_abs(T.components())) << "\n";
    CurvatureBundle cb = dcurvature(ndc.dc, so.dm.ncon);
    os << "  max |curvature| = " << format_number(sweep_abs(cb.full)) << "\n";
    Distortion dist = distortion(so.dm, ndc.dc);
    os << "  max |distortion Z| = " << format_number(sweep_abs(dist.Z.components())) << "\n";
  } catch (const IdentificationViolatedError& err) {
    os << "\n[normal d-connection]\n  not applicable: " << err.what() << "\n";
  }

  os << "\n[constant-coefficient d-connection]\n";
  if (!scn.constant_blocks_linear_n) {
    os << "  not applicable: needs constant d-metric blocks with N linear in y\n";
    return os.str();
  }
  try {
    Mat g0 = eval_matrix(so.dm.g, so.points.front());
    Mat h0 = eval_matrix(so.dm.h, so.points.front());
    ConstDConnection L0 = solve_auxf1_from_n(h0, so.dm.ncon, so.points);
    double lmax = 0.0;
    for (double v : L0.L0) lmax = std::max(lmax, std::abs(v));
    os << "  coframe: adapted, constant coefficients\n";
    os << "  max |L0| = " << format_number(lmax) << "\n";
    os << "  auxf1 residual = "
       << format_number(verify_auxf1(so.dm.ncon, h0, L0, so.points).max_residual) << "\n";
    std::vector<double> R0 = const_curvature(L0);
    double rmax = 0.0;
    for (double v : R0) rmax = std::max(rmax, std::abs(v));
    os << "  max |curvature| = " << format_number(rmax)
       << "  (constant; LC curvature above is generically nonzero)\n";
    ConstDMetric cdm{g0, h0};
    ConstScalarResult cs = const_scalar(cdm, L0, so.dm.ncon, so.points);
    os << "  d-scalar = " << format_number(cs.value)
       << "  constancy variance = " << format_number(cs.variance) << "\n";
  } catch (const NonConstantRhsError& err) {
    os << "  not applicable: " << err.what() << "\n";
  }
  return os.str();
}

}  // namespace akgrav
