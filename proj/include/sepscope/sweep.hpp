#pragma once

// One-parameter sweeps over a state family.

#include <atomic>
#include <exception>
#include <thread>

#include "sepscope/criteria.hpp"
#include "sepscope/states.hpp"

namespace sepscope {

struct SweepRow {
  double param = 0.0;
  CriterionReport report;
};

struct SweepResult {
  std::string family;
  std::string param;
  std::vector<SweepRow> rows;        // ascending in param
  std::vector<double> crossings;     // tau = 1 locations where ccn_flag flips between rows
};

struct SweepRange {
  double lo = 0.0;
  double hi = 1.0;
  int steps = 2;  // number of points, endpoints included
};

/// Parses "lo:hi:steps".
inline SweepRange parse_range(const std::string& text) {
  const auto c1 = text.find(':');
  const auto c2 = text.find(':', c1 == std::string::npos ? c1 : c1 + 1);
  if (c1 == std::string::npos || c2 == std::string::npos)
    throw ArgumentError("range must look like lo:hi:steps (got '" + text + "')");
  SweepRange r;
  r.lo = detail::parse_number(text.substr(0, c1));
  r.hi = detail::parse_number(text.substr(c1 + 1, c2 - c1 - 1));
  const double steps = detail::parse_number(text.substr(c2 + 1));
  if (steps != std::floor(steps)) throw ArgumentError("range: steps must be an integer");
  r.steps = static_cast<int>(steps);
  return r;
}

/// Builds the family member with `param` set to `value`.
inline DensityMatrix family_member(const FamilyText& tmpl, const std::string& param, double value) {
  FamilyText ft = tmpl;
  auto* slot = ft.find(param);
  if (!slot) throw ArgumentError("scan: family '" + ft.name + "' has no parameter '" + param + "'");
  *slot = {value};
  return make_state(family_from_text(ft));
}

inline SweepResult run_scan(const std::string& family_text, const std::string& param, const SweepRange& range,
                            int jobs = 1, const ReportOptions& opt = {}) {
  if (range.steps < 1) throw ArgumentError("scan: empty range (steps must be >= 1)");
  if (!(range.lo <= range.hi)) throw ArgumentError("scan: empty range (lo must not exceed hi)");
  const FamilyText tmpl = parse_family_text(family_text);
  const auto* slot = tmpl.find(param);
  if (!slot) throw ArgumentError("scan: family '" + tmpl.name + "' has no parameter '" + param + "'");
  if (slot->size() != 1) throw ArgumentError("scan: parameter '" + param + "' is not a scalar");

  SweepResult out{family_text, param, std::vector<SweepRow>(range.steps), {}};
  for (int k = 0; k < range.steps; ++k)
    out.rows[k].param = range.steps == 1 ? range.lo
                                         : range.lo + (range.hi - range.lo) * k / static_cast<double>(range.steps - 1);

  std::vector<std::exception_ptr> errors(range.steps);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (int k = next++; k < range.steps; k = next++) {
      try {
        out.rows[k].report = full_report(family_member(tmpl, param, out.rows[k].param), opt);
      } catch (...) {
        errors[k] = std::current_exception();
      }
    }
  };
  const int n_threads = std::clamp(jobs, 1, range.steps);
  std::vector<std::thread> pool;
  for (int t = 1; t < n_threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);

  for (int k = 1; k < range.steps; ++k)
    if (out.rows[k - 1].report.ccn_flag != out.rows[k].report.ccn_flag)
      out.crossings.push_back(bisect_ccn_crossing(
          [&](double x) { return family_member(tmpl, param, x); }, out.rows[k - 1].param, out.rows[k].param));
  return out;
}

inline std::string sweep_csv(const SweepResult& res) {
  std::string s = "param,tau,ppt_min_eig,fid_lower,fid_best,fid_upper,ccn_flag,ppt_flag,distill_flag\n";
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  for (const auto& row : res.rows) {
    const auto& r = row.report;
    s += format_double(row.param) + ',' + format_double(r.tau) + ',' + format_double(r.ppt_min_eig) + ',' +
         opt(r.fidelity_lower) + ',' + opt(r.fidelity_best) + ',' + opt(r.fidelity_upper) + ',' +
         (r.ccn_flag ? '1' : '0') + ',' + (r.ppt_flag ? '1' : '0') + ',' + (r.distillable_flag ? '1' : '0') + '\n';
  }
  return s;
}

}  // namespace sepscope
