#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "akgrav/pipeline.hpp"
#include "akgrav/report.hpp"

namespace {

// exit codes: 0 all pass, 1 check failure, 2 input error, 3 internal error
constexpr int kOk = 0;
constexpr int kCheckFailure = 1;
constexpr int kInputError = 2;
constexpr int kInternalError = 3;

struct CommonArgs {
  std::string scenario;
  int points = -1;
  long long seed = -1;
  std::vector<std::string> tols;
  std::string out;
  std::string negative_control;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("scenario", args.scenario, "scenario file or catalog:NAME")->required();
  cmd->add_option("--points", args.points, "override sample point count");
  cmd->add_option("--seed", args.seed, "override sample seed");
  cmd->add_option("--tol", args.tols, "override a tolerance, CHECK=VALUE (repeatable)");
  cmd->add_option("--out", args.out, "write the report to FILE instead of stdout");
  cmd->add_option("--negative-control", args.negative_control,
                  "corrupt the inputs of the named check; it must then fail");
}

akgrav::RunOptions to_options(const CommonArgs& args) {
  akgrav::RunOptions opts;
  if (args.points >= 0) opts.points = args.points;
  if (args.seed >= 0) opts.seed = static_cast<unsigned>(args.seed);
  for (const std::string& t : args.tols) {
    auto eq = t.find('=');
    if (eq == std::string::npos)
      throw akgrav::Error("--tol needs CHECK=VALUE, got '" + t + "'");
    std::string id = t.substr(0, eq);
    opts.tolerances[id] = std::stod(t.substr(eq + 1));
    akgrav::default_tolerance(id);  // reject unknown check ids early
  }
  opts.negative_control = args.negative_control;
  return opts;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path);
  if (!out) throw akgrav::Error("cannot write to '" + out_path + "'");
  out << text;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"almost-Kahler variables for 2+2 metrics: derive, verify, compare"};
  app.require_subcommand(1);

  CommonArgs derive_args, check_args, compare_args;
  CLI::App* derive = app.add_subcommand("derive", "derive and print every geometric object");
  add_common(derive, derive_args);
  CLI::App* check = app.add_subcommand("check", "run the structural identity suite");
  add_common(check, check_args);
  CLI::App* compare = app.add_subcommand("compare", "three-connection comparison table");
  add_common(compare, compare_args);

  CLI::App* catalog = app.add_subcommand("catalog", "catalog operations");
  CLI::App* catalog_list = catalog->add_subcommand("list", "list built-in scenarios");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (catalog_list->parsed()) {
      for (const std::string& name : akgrav::catalog_names())
        std::cout << "catalog:" << name << "\n";
      return kOk;
    }
    if (derive->parsed()) {
      akgrav::Scenario scn = akgrav::load_scenario(derive_args.scenario);
      emit(akgrav::run_derive(scn, to_options(derive_args)), derive_args.out);
      return kOk;
    }
    if (check->parsed()) {
      akgrav::Scenario scn = akgrav::load_scenario(check_args.scenario);
      akgrav::CheckReport rep = akgrav::run_check(scn, to_options(check_args));
      emit(akgrav::render_report(rep), check_args.out);
      return rep.all_pass() ? kOk : kCheckFailure;
    }
    if (compare->parsed()) {
      akgrav::Scenario scn = akgrav::load_scenario(compare_args.scenario);
      emit(akgrav::run_compare(scn, to_options(compare_args)), compare_args.out);
      return kOk;
    }
  } catch (const akgrav::SyntaxError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const akgrav::DegenerateMetricError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const akgrav::Error& e) {
    std::string msg = e.what();
    bool input = msg.find("scenario") != std::string::npos ||
                 msg.find("cannot open") != std::string::npos ||
                 msg.find("--tol") != std::string::npos ||
                 msg.find("catalog") != std::string::npos ||
                 msg.find("tolerance") != std::string::npos;
    std::cerr << (input ? "input error: " : "internal error: ") << msg << "\n";
    return input ? kInputError : kInternalError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInternalError;
  }
  return kInternalError;
}
