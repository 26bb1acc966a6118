#include "akgrav/report.hpp"

#include <charconv>
#include <chrono>
#include <sstream>

namespace akgrav {

Verdict judge(double max_residual, double tol, int evaluated, int skipped) {
  if (evaluated == 0) return Verdict::Fail;
  double skip_ratio = static_cast<double>(skipped) /
                      static_cast<double>(evaluated + skipped);
  if (skip_ratio >= 0.1) return Verdict::Fail;
  return max_residual < tol ? Verdict::Pass : Verdict::Fail;
}

bool CheckReport::all_pass() const {
  for (const CheckRecord& r : records)
    if (r.verdict == Verdict::Fail) return false;
  return true;
}

void CheckReport::add_sweep(const std::string& id, const SweepResult& sweep, double tol,
                            const std::string& note) {
  CheckRecord r;
  r.id = id;
  r.max_residual = sweep.max_residual;
  r.tolerance = tol;
  r.evaluated = sweep.evaluated;
  r.skipped = sweep.skipped;
  r.verdict = judge(sweep.max_residual, tol, sweep.evaluated, sweep.skipped);
  r.note = note;
  records.push_back(std::move(r));
}

void CheckReport::add_value(const std::string& id, double residual, double tol,
                            int evaluated, int skipped, const std::string& note) {
  CheckRecord r;
  r.id = id;
  r.max_residual = residual;
  r.tolerance = tol;
  r.evaluated = evaluated;
  r.skipped = skipped;
  r.verdict = judge(residual, tol, evaluated, skipped);
  r.note = note;
  records.push_back(std::move(r));
}

void CheckReport::add_info(const std::string& id, double value, const std::string& note) {
  CheckRecord r;
  r.id = id;
  r.max_residual = value;
  r.verdict = Verdict::Info;
  r.note = note;
  records.push_back(std::move(r));
}

std::string format_number(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

std::string render_report(const CheckReport& report, bool with_timestamp) {
  std::ostringstream os;
  os << "akgrav check report\n";
  os << "scenario: " << report.scenario << "\n";
  os << "seed: " << report.seed << "  points: " << report.points << "\n\n";

  std::size_t idw = 4;
  for (const CheckRecord& r : report.records) idw = std::max(idw, r.id.size());
  for (const CheckRecord& r : report.records) {
    const char* v = r.verdict == Verdict::Pass ? "PASS"
                    : r.verdict == Verdict::Fail ? "FAIL" : "info";
    os << "  " << v << "  " << r.id;
    for (std::size_t i = r.id.size(); i < idw + 2; ++i) os << ' ';
    os << "max " << format_number(r.max_residual);
    if (r.verdict != Verdict::Info) os << "  tol " << format_number(r.tolerance);
    if (r.skipped > 0) os << "  skipped " << r.skipped << "/" << (r.evaluated + r.skipped);
    if (!r.note.empty()) os << "  (" << r.note << ")";
    os << "\n";
  }
  os << "\nresult: " << (report.all_pass() ? "ALL PASS" : "FAILURES PRESENT") << "\n";

  os << "\n[machine]\n";
  os << "scenario = " << report.scenario << "\n";
  os << "seed = " << report.seed << "\n";
  os << "points = " << report.points << "\n";
  for (const CheckRecord& r : report.records) {
    os << "check." << r.id << ".max_residual = " << format_number(r.max_residual) << "\n";
    if (r.verdict != Verdict::Info)
      os << "check." << r.id << ".tolerance = " << format_number(r.tolerance) << "\n";
    os << "check." << r.id << ".points_evaluated = " << r.evaluated << "\n";
    os << "check." << r.id << ".points_skipped = " << r.skipped << "\n";
    os << "check." << r.id << ".verdict = "
       << (r.verdict == Verdict::Pass ? "PASS"
           : r.verdict == Verdict::Fail ? "FAIL" : "INFO")
       << "\n";
    if (!r.note.empty()) os << "check." << r.id << ".note = " << r.note << "\n";
  }
  for (const auto& [k, v] : report.provenance) os << "provenance." << k << " = " << v << "\n";

  if (with_timestamp) {
    os << "\n[meta]\n";
    auto now = std::chrono::system_clock::now().time_since_epoch();
    os << "generated_unix_ms = "
       << std::chrono::duration_cast<std::chrono::milliseconds>(now).count() << "\n";
  }
  return os.str();
}

}  // namespace akgrav
