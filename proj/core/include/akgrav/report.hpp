#pragma once

#include <string>
#include <vector>

#include "akgrav/sampling.hpp"

namespace akgrav {

enum class Verdict { Pass, Fail, Info };

struct CheckRecord {
  std::string id;
  double max_residual = 0.0;
  double tolerance = 0.0;   // ignored for Info records
  int evaluated = 0;
  int skipped = 0;
  Verdict verdict = Verdict::Info;
  std::string note;
};

struct CheckReport {
  std::string scenario;
  unsigned seed = 0;
  int points = 0;
  std::vector<CheckRecord> records;
  std::vector<std::pair<std::string, std::string>> provenance;

  bool all_pass() const;
  void add_sweep(const std::string& id, const SweepResult& sweep, double tol,
                 const std::string& note = "");
  void add_value(const std::string& id, double residual, double tol, int evaluated,
                 int skipped, const std::string& note = "");
  void add_info(const std::string& id, double value, const std::string& note = "");
};

// Verdict rule: PASS iff max residual < tolerance and skipped/evaluated < 10%.
Verdict judge(double max_residual, double tol, int evaluated, int skipped);

std::string format_number(double v);

// Two-part document: a human summary table and a byte-stable [machine]
// section; the timestamp goes to [meta] only.
std::string render_report(const CheckReport& report, bool with_timestamp = true);

}  // namespace akgrav
