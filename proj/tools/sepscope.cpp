// sepscope command line: analyze / scan / verify.
// Exit codes: 0 ok, 1 property suite failed, 2 bad input.

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>

#include "sepscope/sepscope.hpp"

namespace {

using namespace sepscope;

int analyze(const std::string& input, bool relax, bool as_json) {
  json out;
  std::string text;
  if (std::filesystem::is_regular_file(input)) {
    StateFile sf = read_state_file(input);
    std::optional<DensityMatrix> rho;
    try {
      rho.emplace(sf.matrix, sf.dims);
    } catch (const InvariantError& e) {
      if (!relax) throw InvariantError(input + ": " + e.what());
    }
    if (rho) {
      const auto rep = full_report(*rho);
      out = {{"input", input}, {"kind", "state"}, {"report", report_json(rep)}};
      text = report_text(rep);
    } else {
      const auto rep = operator_report(TraceClassOperator(sf.matrix, sf.dims));
      out = {{"input", input}, {"kind", "operator"}, {"report", report_json(rep)}};
      text = "kind                operator (relaxed input)\n" + report_text(rep);
    }
  } else if (input.find(':') != std::string::npos) {
    const FamilySpec spec = parse_family(input);
    const auto rep = full_report(make_state(spec));
    const auto checks = family_checks(spec, rep);
    out = {{"input", format_family(spec)},
           {"kind", "state"},
           {"report", report_json(rep)},
           {"checks", checks_json(checks)}};
    text = "family              " + format_family(spec) + "\n" + report_text(rep) + checks_text(checks);
  } else {
    throw ArgumentError("'" + input + "' is neither a readable state file nor a family spec (name:key=value,...)");
  }
  if (as_json)
    std::cout << out.dump(2) << '\n';
  else
    std::cout << text;
  return 0;
}

int scan(const std::string& family, const std::string& param, const std::string& range, const std::string& out_path,
         int jobs) {
  if (jobs < 1) throw ArgumentError("--jobs must be >= 1");
  const SweepResult res = run_scan(family, param, parse_range(range), jobs);
  const std::string csv = sweep_csv(res);
  if (out_path.empty()) {
    std::cout << csv;
  } else {
    std::ofstream f(out_path);
    if (!f) throw ArgumentError("cannot write '" + out_path + "'");
    f << csv;
  }
  for (double x : res.crossings)
    std::cerr << "crossing tau=1 at " << param << "=" << std::setprecision(12) << x << '\n';
  return 0;
}

int verify(const std::string& suite, std::uint64_t seed, int n) {
  const auto results = run_suite(suite, seed, n);
  bool ok = true;
  std::cout << std::setprecision(12);
  for (const auto& s : results)
    for (const auto& c : s.checks) {
      ok = ok && c.passed();
      std::cout << (c.passed() ? "PASS " : "FAIL ") << s.suite << ": " << c.name << "  n=" << c.instances
                << " worst=" << c.worst << " tol=" << c.tolerance;
      if (!c.passed()) std::cout << " at " << c.worst_case;
      std::cout << '\n';
    }
  std::cout << (ok ? "all properties hold" : "property failures") << '\n';
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Realignment / CCN separability diagnostics"};
  app.require_subcommand(1);

  std::string input;
  bool relax = false, as_json = false;
  auto* a = app.add_subcommand("analyze", "Report criteria for a state file or family member");
  a->add_option("input", input, "State file (JSON) or family spec")->required();
  a->add_flag("--relax", relax, "Accept non-state operators (fidelity and tau only)");
  a->add_flag("--json", as_json, "JSON output");

  std::string family, param, range, out_path;
  int jobs = 1;
  auto* s = app.add_subcommand("scan", "Sweep one family parameter, CSV output");
  s->add_option("family", family, "Family spec template")->required();
  s->add_option("--param", param, "Parameter to sweep")->required();
  s->add_option("--range", range, "lo:hi:steps")->required();
  s->add_option("--out", out_path, "CSV file (default stdout)");
  s->add_option("--jobs", jobs, "Worker threads");

  std::string suite;
  std::uint64_t seed = 1;
  int n = 100;
  auto* v = app.add_subcommand("verify", "Seeded property suites");
  v->add_option("suite", suite, "norms, sandwich, monotonicity, spectra or all")->required();
  v->add_option("--seed", seed, "RNG seed");
  v->add_option("-n", n, "Instances per property");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (a->parsed()) return analyze(input, relax, as_json);
    if (s->parsed()) return scan(family, param, range, out_path, jobs);
    return verify(suite, seed, n);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
