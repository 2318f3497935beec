#pragma once

// State files and report rendering.
//
// State file (UTF-8 JSON):
//   { "dims": [d_A, d_B],
//     "matrix": [[[re, im], [re, im], ...], ...] }   row-major, (d_A d_B)^2 entries

#include <json.hpp>

#include <fstream>
#include <iomanip>

#include "sepscope/criteria.hpp"

namespace sepscope {

using json = nlohmann::json;

struct StateFile {
  Dims dims;
  Matrix matrix;
};

inline StateFile parse_state_file(const json& j) {
  auto fail = [](const std::string& what) -> StateFile { throw ArgumentError("state file: " + what); };
  if (!j.is_object()) return fail("top level must be an object");
  if (!j.contains("dims") || !j.contains("matrix")) return fail("missing 'dims' or 'matrix'");
  const json& jd = j.at("dims");
  if (!jd.is_array() || jd.size() != 2 || !jd[0].is_number_integer() || !jd[1].is_number_integer())
    return fail("'dims' must be a two-element integer array");
  const Dims dims{jd[0].get<Index>(), jd[1].get<Index>()};
  if (dims.a < 1 || dims.b < 1) return fail("'dims' entries must be positive");
  const Index n = dims.total();
  const json& jm = j.at("matrix");
  if (!jm.is_array() || static_cast<Index>(jm.size()) != n)
    return fail("'matrix' must have " + std::to_string(n) + " rows");
  Matrix m(n, n);
  for (Index r = 0; r < n; ++r) {
    const json& row = jm[r];
    if (!row.is_array() || static_cast<Index>(row.size()) != n)
      return fail("row " + std::to_string(r) + " must have " + std::to_string(n) + " entries");
    for (Index c = 0; c < n; ++c) {
      const json& z = row[c];
      if (!z.is_array() || z.size() != 2 || !z[0].is_number() || !z[1].is_number())
        return fail("entry (" + std::to_string(r) + "," + std::to_string(c) + ") must be a [re, im] pair");
      m(r, c) = cplx(z[0].get<double>(), z[1].get<double>());
    }
  }
  return {dims, std::move(m)};
}

inline StateFile read_state_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ArgumentError("cannot open state file '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ArgumentError("state file '" + path + "': " + e.what());
  }
  return parse_state_file(j);
}

inline json state_file_json(const TraceClassOperator& op) {
  json rows = json::array();
  const Matrix& m = op.matrix();
  for (Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return {{"dims", {op.dim_a(), op.dim_b()}}, {"matrix", std::move(rows)}};
}

// ---------------------------------------------------------------------------
// Reports

inline json report_json(const CriterionReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  json j = {
      {"dims", {r.dims.a, r.dims.b}},
      {"tau", r.tau},
      {"ccn_margin", r.tau - 1.0},
      {"ppt_min_eig", r.ppt_min_eig},
      {"ppt_trace_norm", r.ppt_trace_norm},
      {"trace_realigned", opt(r.trace_realigned)},
      {"fidelity_lower", opt(r.fidelity_lower)},
      {"fidelity_best", opt(r.fidelity_best)},
      {"fidelity_upper", opt(r.fidelity_upper)},
      {"fidelity_converged", r.fidelity_converged},
      {"ccn_flag", r.ccn_flag},
      {"ppt_flag", r.ppt_flag},
      {"distillable_flag", r.distillable_flag},
      {"max_disordered", r.max_disordered},
      {"t_trace_norm", opt(r.t_trace_norm)},
      {"t_psd", r.t_psd ? json(*r.t_psd) : json(nullptr)},
      {"closed_form_tau", opt(r.closed_form_tau)},
      {"notes", r.notes},
  };
  return j;
}

inline std::string report_text(const CriterionReport& r) {
  std::ostringstream os;
  os << std::setprecision(12);
  auto line = [&](const char* key, const auto& value) { os << std::left << std::setw(20) << key << value << '\n'; };
  auto opt = [&](const char* key, const std::optional<double>& v) {
    if (v) line(key, *v);
    else line(key, "n/a");
  };
  auto flag = [](bool b) { return b ? "true" : "false"; };
  line("dims", std::to_string(r.dims.a) + "x" + std::to_string(r.dims.b));
  line("tau", r.tau);
  line("ccn_margin", r.tau - 1.0);
  line("ppt_min_eig", r.ppt_min_eig);
  line("ppt_trace_norm", r.ppt_trace_norm);
  opt("trace_realigned", r.trace_realigned);
  opt("fidelity_lower", r.fidelity_lower);
  opt("fidelity_best", r.fidelity_best);
  opt("fidelity_upper", r.fidelity_upper);
  if (r.fidelity_best) line("fidelity_converged", flag(r.fidelity_converged));
  opt("t_trace_norm", r.t_trace_norm);
  opt("closed_form_tau", r.closed_form_tau);
  if (r.closed_form_tau) line("closed_form_error", std::abs(*r.closed_form_tau - r.tau));
  line("max_disordered", flag(r.max_disordered));
  line("ccn_flag", flag(r.ccn_flag));
  line("ppt_flag", flag(r.ppt_flag));
  line("distillable_flag", flag(r.distillable_flag));
  for (const auto& n : r.notes) line("note", n);
  return os.str();
}

// ---------------------------------------------------------------------------
// Family-specific cross-checks

struct ClosedFormCheck {
  std::string name;
  double expected = 0.0;
  double actual = 0.0;
  double error() const { return std::abs(expected - actual); }
};

/// Closed forms that apply to a named family member, paired with the
/// numerically computed value.
inline std::vector<ClosedFormCheck> family_checks(const FamilySpec& spec, const CriterionReport& rep) {
  std::vector<ClosedFormCheck> out;
  if (const auto* ce = std::get_if<family::Counterexample>(&spec)) {
    const auto sp = counterexample_spectra(ce->params);
    out.push_back({"tau = g(s,r) + |t|", sp.g + std::abs(ce->params.t), rep.tau});
    out.push_back({"min eig(rho^T_B)", std::min(sp.pt_eigs[2], sp.pt_eigs[3]), rep.ppt_min_eig});
  } else if (const auto* ps = std::get_if<family::PureSchmidt>(&spec)) {
    const auto a = detail::normalized_schmidt(ps->coeffs, "pure");
    double root_sum = 0.0;
    for (double x : a) root_sum += std::sqrt(x);
    out.push_back({"tau = (sum sqrt(a))^2", root_sum * root_sum, rep.tau});
  } else if (const auto* rp = std::get_if<family::RhoP>(&spec)) {
    if (rp->coeffs.size() == 2) {
      const auto a = detail::normalized_schmidt(rp->coeffs, "rhop");
      const double p0 = rho_p_threshold(a[0], a[1]);
      out.push_back({"ccn_flag = (p > 1/(4 sqrt(a1 a2) + 1))", rp->p > p0 ? 1.0 : 0.0, rep.ccn_flag ? 1.0 : 0.0});
    }
  }
  return out;
}

inline json checks_json(const std::vector<ClosedFormCheck>& checks) {
  json arr = json::array();
  for (const auto& c : checks)
    arr.push_back({{"name", c.name}, {"expected", c.expected}, {"actual", c.actual}, {"error", c.error()}});
  return arr;
}

inline std::string checks_text(const std::vector<ClosedFormCheck>& checks) {
  std::ostringstream os;
  os << std::setprecision(12);
  for (const auto& c : checks)
    os << "check " << c.name << ": expected " << c.expected << ", got " << c.actual << " (error " << c.error()
       << ")\n";
  return os.str();
}

/// Quantities defined for arbitrary square operators (relaxed inputs).
struct OperatorReport {
  Dims dims;
  double tau = 0.0;
  std::optional<double> trace_realigned;
  std::optional<double> fidelity_best;   // max_U |<Psi+|(1 (x) U) op (1 (x) U^dagger)|Psi+>|
  std::optional<double> fidelity_upper;  // tau / d
};

inline OperatorReport operator_report(const TraceClassOperator& op, const FidelityOptions& fo = {}) {
  OperatorReport r;
  r.dims = op.dims();
  const auto ra = realign(op);
  r.tau = ra.trace_norm();
  if (r.dims.square()) {
    const double d = static_cast<double>(r.dims.a);
    r.trace_realigned = std::abs(ra.mat.trace());
    r.fidelity_best = fidelity_optimize(op, fo).value;
    r.fidelity_upper = r.tau / d;
  }
  return r;
}

inline json report_json(const OperatorReport& r) {
  auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
  return {{"dims", {r.dims.a, r.dims.b}},
          {"tau", r.tau},
          {"abs_trace_realigned", opt(r.trace_realigned)},
          {"fidelity_best", opt(r.fidelity_best)},
          {"fidelity_upper", opt(r.fidelity_upper)}};
}

inline std::string report_text(const OperatorReport& r) {
  std::ostringstream os;
  os << std::setprecision(12);
  auto line = [&](const char* key, const auto& value) { os << std::left << std::setw(20) << key << value << '\n'; };
  line("dims", std::to_string(r.dims.a) + "x" + std::to_string(r.dims.b));
  line("tau", r.tau);
  if (r.trace_realigned) line("abs_trace_realigned", *r.trace_realigned);
  if (r.fidelity_best) line("fidelity_best", *r.fidelity_best);
  if (r.fidelity_upper) line("fidelity_upper", *r.fidelity_upper);
  return os.str();
}

}  // namespace sepscope
