#pragma once

// Entanglement and distillability decisions built on the realigned matrix,
// the partial transpose and the fidelity bounds.

#include <functional>
#include <optional>

#include "sepscope/fidelity.hpp"
#include "sepscope/hs_basis.hpp"
#include "sepscope/realign.hpp"

namespace sepscope {

struct PptResult {
  double min_eig = 0.0;     // smallest eigenvalue of rho^{T_2}
  double trace_norm = 0.0;  // ||rho^{T_2}||_1
  bool entangled = false;   // trace_norm > 1 + kDetectTol
};

inline PptResult ppt_criterion(const DensityMatrix& rho) {
  const Matrix pt = partial_transpose(rho, Side::second);
  const RealVector eig = hermitian_eigenvalues(pt);
  PptResult out;
  out.min_eig = eig(0);
  out.trace_norm = trace_norm(pt);
  out.entangled = out.trace_norm > 1.0 + kDetectTol;
  return out;
}

inline bool is_max_disordered(const DensityMatrix& rho, double tol = 1e-10) {
  const Dims dm = rho.dims();
  const Matrix ra = partial_trace(rho, Side::second);
  const Matrix rb = partial_trace(rho, Side::first);
  const double ea = (ra - Matrix::Identity(dm.a, dm.a) / static_cast<double>(dm.a)).cwiseAbs().maxCoeff();
  const double eb = (rb - Matrix::Identity(dm.b, dm.b) / static_cast<double>(dm.b)).cwiseAbs().maxCoeff();
  return std::max(ea, eb) <= tol;
}

/// (1 + ||T||_1) / d for r = s = 0.
inline double ccn_max_disordered(const HSDecomposition& dec) {
  check_shape(dec);
  const double rs = std::max(dec.r.size() ? dec.r.cwiseAbs().maxCoeff() : 0.0,
                             dec.s.size() ? dec.s.cwiseAbs().maxCoeff() : 0.0);
  if (rs > 1e-10)
    throw ArgumentError("ccn_max_disordered: subsystems are not maximally disordered (max |r|,|s| = " +
                        std::to_string(rs) + ")");
  return (1.0 + t_trace_norm(dec)) / static_cast<double>(dec.dim);
}

/// Locates tau(state(x)) = 1 in [lo, hi] by bisection; tau - 1 must change
/// sign across the interval.
inline double bisect_ccn_crossing(const std::function<DensityMatrix(double)>& state, double lo, double hi,
                                  double tol = 1e-12) {
  auto excess = [&](double x) { return ccn_value(state(x)) - 1.0; };
  double flo = excess(lo);
  const double fhi = excess(hi);
  if ((flo > 0.0) == (fhi > 0.0))
    throw ArgumentError("bisect_ccn_crossing: tau - 1 does not change sign on the interval");
  while (hi - lo > tol) {
    const double mid = 0.5 * (lo + hi);
    const double fm = excess(mid);
    if ((fm > 0.0) == (flo > 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

// ---------------------------------------------------------------------------
// Factorized states and the extended criterion

/// A state on (A_1 ... A_n)(B_1 ... B_m) with its local factors declared.
class FactorizedState {
 public:
  FactorizedState(DensityMatrix state, std::vector<Index> alice, std::vector<Index> bob)
      : state_(std::move(state)), alice_(std::move(alice)), bob_(std::move(bob)) {
    if (alice_.empty() || bob_.empty()) throw DimensionError("FactorizedState: each side needs a factor");
    for (Index f : alice_)
      if (f < 1) throw DimensionError("FactorizedState: factor dimensions must be positive");
    for (Index f : bob_)
      if (f < 1) throw DimensionError("FactorizedState: factor dimensions must be positive");
    if (product_of(alice_) != state_.dim_a() || product_of(bob_) != state_.dim_b())
      throw DimensionError("FactorizedState: factor products do not match the declared sides " +
                           std::to_string(state_.dim_a()) + "x" + std::to_string(state_.dim_b()));
  }

  /// Single factor on each side.
  explicit FactorizedState(DensityMatrix state)
      : FactorizedState(state, {state.dim_a()}, {state.dim_b()}) {}

  const DensityMatrix& state() const { return state_; }
  const std::vector<Index>& alice_factors() const { return alice_; }
  const std::vector<Index>& bob_factors() const { return bob_; }

  std::vector<Index> all_factors() const {
    std::vector<Index> f(alice_);
    f.insert(f.end(), bob_.begin(), bob_.end());
    return f;
  }

  /// Traces out the flagged factors on each side; remaining factors keep order.
  FactorizedState trace_out(const std::vector<bool>& alice_traced, const std::vector<bool>& bob_traced) const {
    if (alice_traced.size() != alice_.size() || bob_traced.size() != bob_.size())
      throw DimensionError("trace_out: mask length mismatch");
    std::vector<bool> keep;
    std::vector<Index> ka, kb;
    for (std::size_t k = 0; k < alice_.size(); ++k) {
      keep.push_back(!alice_traced[k]);
      if (!alice_traced[k]) ka.push_back(alice_[k]);
    }
    for (std::size_t k = 0; k < bob_.size(); ++k) {
      keep.push_back(!bob_traced[k]);
      if (!bob_traced[k]) kb.push_back(bob_[k]);
    }
    const auto dims = all_factors();
    Matrix reduced = partial_trace_factors(state_.matrix(), dims, keep);
    const Index da = product_of(ka), db = product_of(kb);
    if (ka.empty()) ka.push_back(1);
    if (kb.empty()) kb.push_back(1);
    return FactorizedState(DensityMatrix::from_hermitized(reduced, {da, db}), ka, kb);
  }

 private:
  DensityMatrix state_;
  std::vector<Index> alice_;
  std::vector<Index> bob_;
};

/// rho1 on A1 B1 and rho2 on A2 B2, regrouped to (A1 A2)(B1 B2).
inline FactorizedState regroup_product(const DensityMatrix& rho1, const DensityMatrix& rho2) {
  const Matrix joint = tensor(rho1.matrix(), rho2.matrix());
  const std::array<Index, 4> dims{rho1.dim_a(), rho1.dim_b(), rho2.dim_a(), rho2.dim_b()};
  const std::array<Index, 4> perm{0, 2, 1, 3};
  Matrix regrouped = permute_subsystems(joint, dims, perm);
  return FactorizedState(DensityMatrix::from_hermitized(regrouped, {dims[0] * dims[2], dims[1] * dims[3]}),
                         {dims[0], dims[2]}, {dims[1], dims[3]});
}

struct ExtendedCcnResult {
  double value = 0.0;
  std::vector<Index> alice_traced;  // factor indices traced out at the maximum
  std::vector<Index> bob_traced;
  std::size_t evaluated = 0;
};

/// Maximum of tau over all local trace-outs of declared factors, including
/// tracing nothing and excluding tracing everything on both sides.
inline ExtendedCcnResult extended_ccn(const FactorizedState& fs) {
  const std::size_t na = fs.alice_factors().size(), nb = fs.bob_factors().size();
  if (na > 16 || nb > 16) throw DimensionError("extended_ccn: too many declared factors");
  const std::uint32_t full_a = (1u << na) - 1, full_b = (1u << nb) - 1;
  ExtendedCcnResult best;
  best.value = -INFINITY;
  for (std::uint32_t ma = 0; ma <= full_a; ++ma)
    for (std::uint32_t mb = 0; mb <= full_b; ++mb) {
      if (ma == full_a && mb == full_b) continue;
      std::vector<bool> ta(na), tb(nb);
      for (std::size_t k = 0; k < na; ++k) ta[k] = (ma >> k) & 1u;
      for (std::size_t k = 0; k < nb; ++k) tb[k] = (mb >> k) & 1u;
      const double v = (ma == 0 && mb == 0) ? ccn_value(fs.state()) : ccn_value(fs.trace_out(ta, tb).state());
      ++best.evaluated;
      if (v > best.value) {
        best.value = v;
        best.alice_traced.clear();
        best.bob_traced.clear();
        for (std::size_t k = 0; k < na; ++k)
          if (ta[k]) best.alice_traced.push_back(static_cast<Index>(k));
        for (std::size_t k = 0; k < nb; ++k)
          if (tb[k]) best.bob_traced.push_back(static_cast<Index>(k));
      }
    }
  return best;
}

// ---------------------------------------------------------------------------
// Full report

struct CriterionReport {
  Dims dims;
  double tau = 0.0;
  double ppt_min_eig = 0.0;
  double ppt_trace_norm = 0.0;
  // Present only for d_A == d_B.
  std::optional<double> trace_realigned;  // tr A(rho)
  std::optional<double> fidelity_lower;   // tr A(rho) / d
  std::optional<double> fidelity_best;    // optimizer, attained
  std::optional<double> fidelity_upper;   // tau / d
  bool fidelity_converged = false;
  bool ccn_flag = false;
  bool ppt_flag = false;
  bool distillable_flag = false;
  bool max_disordered = false;
  std::optional<double> t_trace_norm;     // ||T||_1, square states only
  std::optional<bool> t_psd;              // T >= 0 (spin basis), max-disordered only
  std::optional<double> closed_form_tau;  // special-case identity for tau, when one applies
  std::vector<std::string> notes;
};

/// Certified only in the positive direction; false means "not certified".
inline bool distillable_by_fidelity(const CriterionReport& rep) {
  if (!rep.dims.square()) return false;
  const double d = static_cast<double>(rep.dims.a);
  if (rep.trace_realigned && *rep.trace_realigned > 1.0 + kDetectTol) return true;
  if (rep.max_disordered && rep.t_psd.value_or(false) && rep.tau > 1.0 + kDetectTol) return true;
  if (rep.fidelity_best && d * *rep.fidelity_best > 1.0 + kDetectTol) return true;
  return false;
}

struct ReportOptions {
  FidelityOptions fidelity;
};

namespace detail {

template <class F>
auto with_context(const char* stage, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const UnsupportedDimensionError& e) {
    throw UnsupportedDimensionError(std::string(stage) + ": " + e.what());
  } catch (const DimensionError& e) {
    throw DimensionError(std::string(stage) + ": " + e.what());
  } catch (const InvariantError& e) {
    throw InvariantError(std::string(stage) + ": " + e.what());
  } catch (const ArgumentError& e) {
    throw ArgumentError(std::string(stage) + ": " + e.what());
  } catch (const NumericError& e) {
    throw NumericError(std::string(stage) + ": " + e.what());
  }
}

inline std::string fmt12(double v) {
  std::ostringstream os;
  os.precision(12);
  os << v;
  return os.str();
}

/// F |Psi+><Psi+| + (1-F)(1 - |Psi+><Psi+|)/(d^2-1) with F = <Psi+|rho|Psi+>?
inline bool is_isotropic(const DensityMatrix& rho, double tol = 1e-10) {
  if (!rho.dims().square() || rho.dim_a() < 2) return false;
  const Index d = rho.dim_a(), n = d * d;
  const Matrix p = max_entangled_projector(d);
  const double f = fidelity_lower(rho);
  const Matrix iso = f * p + (1.0 - f) * (Matrix::Identity(n, n) - p) / static_cast<double>(n - 1);
  return (rho.matrix() - iso).cwiseAbs().maxCoeff() <= tol;
}

}  // namespace detail

inline CriterionReport full_report(const DensityMatrix& rho, const ReportOptions& opt = {}) {
  CriterionReport rep;
  rep.dims = rho.dims();
  const auto ra = detail::with_context("realign", [&] { return realign(rho); });
  rep.tau = ra.trace_norm();
  rep.ccn_flag = rep.tau > 1.0 + kDetectTol;

  const auto ppt = detail::with_context("ppt", [&] { return ppt_criterion(rho); });
  rep.ppt_min_eig = ppt.min_eig;
  rep.ppt_trace_norm = ppt.trace_norm;
  rep.ppt_flag = ppt.entangled;
  rep.max_disordered = is_max_disordered(rho);

  // pure: tau = (sum_i sqrt(alpha_i))^2 over Schmidt coefficients
  const double purity = rho.matrix().cwiseAbs2().sum();
  const bool pure = std::abs(purity - 1.0) < 1e-10;
  if (pure) {
    const RealVector alpha = hermitian_eigenvalues(partial_trace(rho, Side::second));
    double root_sum = 0.0;
    for (Index k = 0; k < alpha.size(); ++k) root_sum += std::sqrt(std::max(0.0, alpha(k)));
    rep.closed_form_tau = root_sum * root_sum;
    rep.notes.push_back("pure state: tau = (sum sqrt(schmidt))^2 = " + detail::fmt12(root_sum * root_sum) +
                        "; CCN is necessary and sufficient for pure states");
  }

  if (rep.dims.square()) {
    const Index d = rep.dims.a;
    const double dd = static_cast<double>(d);
    rep.trace_realigned = ra.mat.trace().real();
    rep.fidelity_lower = detail::with_context("fidelity_lower", [&] { return fidelity_lower(rho); });
    rep.fidelity_upper = rep.tau / dd;
    const auto fr = detail::with_context("fidelity_optimize", [&] { return fidelity_optimize(rho, opt.fidelity); });
    rep.fidelity_best = fr.value;
    rep.fidelity_converged = fr.converged;

    const HSDecomposition spin = detail::with_context("decompose", [&] { return decompose(rho, HsBasis::spin); });
    rep.t_trace_norm = t_trace_norm(spin);
    if (rep.max_disordered) {
      const bool herm = hermiticity_defect(spin.t) <= 1e-10;
      rep.t_psd = herm && hermitian_eigenvalues(spin.t)(0) >= -1e-10;
      const double cf = ccn_max_disordered(spin);
      if (!rep.closed_form_tau) rep.closed_form_tau = cf;
      rep.notes.push_back("maximally disordered subsystems: tau = (1 + ||T||_1)/d = " + detail::fmt12(cf));
      if (*rep.t_psd) rep.notes.push_back("T >= 0: d f = tau, distillable iff tau > 1");
    }
    if (detail::is_isotropic(rho)) rep.notes.push_back("isotropic state: d f = tau");
    if (pure) rep.notes.push_back("pure state: d f = tau");
    if (d == 2) {
      rep.notes.push_back(rep.ppt_flag ? "2x2: PPT violated, state is entangled"
                                       : "2x2: PPT holds, state is separable");
      if (rep.ppt_flag && !rep.ccn_flag) rep.notes.push_back("entangled state not detected by CCN");
    }
  }
  rep.distillable_flag = distillable_by_fidelity(rep);
  return rep;
}

}  // namespace sepscope
