#pragma once

#include <random>

#include "akgrav/constcoeff.hpp"
#include "akgrav/report.hpp"
#include "akgrav/scenario.hpp"

namespace akgrav {

struct RunOptions {
  std::optional<int> points;
  std::optional<unsigned> seed;
  std::map<std::string, double> tolerances;
  std::string negative_control;  // check id to corrupt, empty for none
};

// Full invariant suite for one scenario. Every applicable check lands in the
// report; exit-code policy belongs to the CLI.
CheckReport run_check(const Scenario& scenario, const RunOptions& opts = {});

// Pretty-printed derived objects (N, J, theta, connection, torsion,
// curvature, Ricci, scalar, distortion) with values at the first sample point.
std::string run_derive(const Scenario& scenario, const RunOptions& opts = {});

// Three-connection comparison table (Levi-Civita / normal / constant
// coefficients) with coefficient norms and compatibility residuals.
std::string run_compare(const Scenario& scenario, const RunOptions& opts = {});

double default_tolerance(const std::string& check_id);

// Deterministic random expression generator for the derivative and
// simplification probes; compositions keep arguments inside safe domains.
class ExprGen {
public:
  ExprGen(const Chart& chart, unsigned seed) : chart_(chart), rng_(seed) {}
  Expr next(int depth = 3);
  Point next_point(double lo = -1.4, double hi = 1.4);

private:
  Chart chart_;
  std::mt19937 rng_;
};

}  // namespace akgrav
