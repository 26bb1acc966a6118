#pragma once

#include <map>
#include <optional>
#include <string>

#include "akgrav/metrics.hpp"
#include "akgrav/sampling.hpp"

namespace akgrav {

enum class SourceKind { GeneratingFunction, MetricBlocks, FullMetric };

// Declarative inputs for one pipeline run: coordinate chart, exactly one
// metric source, sample box, seeds and tolerance overrides. Parsed from the
// line-oriented scenario format (see README) or built from the catalog.
struct Scenario {
  std::string name;
  Chart chart = Chart::standard();
  SourceKind kind = SourceKind::GeneratingFunction;

  Expr generating_function;      // GeneratingFunction
  ExprMatrix g, h, N;            // MetricBlocks
  ExprMatrix full_metric;        // FullMetric

  double lambda = 0.0;
  double newton_g = 1.0;
  std::optional<ExprMatrix> stress;  // coordinate-frame (0,2), symmetric

  SampleDomain domain;
  int num_points = 50;
  unsigned seed = 1;
  std::map<std::string, double> tolerances;

  // optional oracle expectations (set by the catalog or an [expect] section)
  bool expect_vacuum_lc = false;              // LC Ricci should vanish
  std::optional<double> expect_lc_scalar;     // known constant LC scalar
  bool constant_blocks_linear_n = false;      // run the constant-coefficient suite
};

Scenario parse_scenario_text(std::string_view text, const std::string& origin);
Scenario load_scenario(const std::string& path_or_catalog);  // "catalog:NAME" or file

std::vector<std::string> catalog_names();
Scenario catalog_scenario(const std::string& name);
bool is_catalog_ref(const std::string& s);

// Scenario resolved into a d-metric and sample points.
struct ScenarioObjects {
  Scenario scenario;
  DMetric dm;
  std::vector<Point> points;
};

ScenarioObjects realize(const Scenario& scn);

}  // namespace akgrav
