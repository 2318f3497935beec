#pragma once

// Seeded property suites behind `sepscope verify`. Each property records the
// worst signed excess over its instances: the amount by which the inequality
// (or equality) is missed, negative when it holds with room to spare. A
// property passes when that excess stays within its tolerance.

#include <functional>

#include "sepscope/locc.hpp"

namespace sepscope {

struct PropertyCheck {
  PropertyCheck(std::string n, double tol) : name(std::move(n)), tolerance(tol) {}

  std::string name;
  double tolerance = 0.0;
  std::size_t instances = 0;
  double worst = -INFINITY;
  std::string worst_case;  // description of the instance attaining `worst`

  void record(double excess, const std::string& where) {
    ++instances;
    if (excess > worst || std::isnan(excess)) {
      worst = excess;
      worst_case = where;
    }
  }
  bool passed() const { return instances > 0 && !std::isnan(worst) && worst <= tolerance; }
};

struct SuiteResult {
  std::string suite;
  std::vector<PropertyCheck> checks;

  bool passed() const {
    return std::all_of(checks.begin(), checks.end(), [](const PropertyCheck& c) { return c.passed(); });
  }
};

namespace detail {

inline std::string dims_label(Dims d) { return std::to_string(d.a) + "x" + std::to_string(d.b); }

inline Dims pick_dims(Rng& rng, bool square_only) {
  static constexpr std::array<Dims, 3> square{{{2, 2}, {3, 3}, {4, 4}}};
  static constexpr std::array<Dims, 5> any{{{2, 2}, {3, 3}, {4, 4}, {2, 3}, {3, 2}}};
  return square_only ? square[rng() % square.size()] : any[rng() % any.size()];
}

inline DensityMatrix random_state(Dims dims, Rng& rng) {
  const Index rank = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(dims.total()));
  return random_density(dims, rank, rng);
}

/// Convex mixture of `terms` random product states.
inline DensityMatrix random_separable(Dims dims, Index terms, Rng& rng) {
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  Matrix m = Matrix::Zero(dims.total(), dims.total());
  double total = 0.0;
  for (Index k = 0; k < terms; ++k) {
    const double w = unif(rng) + 1e-3;
    total += w;
    const Index ra = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(dims.a));
    const Index rb = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(dims.b));
    m += w * tensor(random_density({dims.a, 1}, ra, rng).matrix(), random_density({dims.b, 1}, rb, rng).matrix());
  }
  return DensityMatrix::from_hermitized(m / total, dims);
}

}  // namespace detail

/// tau, tr A and PT norm relations on random states.
inline SuiteResult verify_norms(std::uint64_t seed, int n) {
  Rng rng(seed);
  PropertyCheck trace_nonneg{"tr A(rho) >= 0", 1e-10};
  PropertyCheck trace_below_tau{"tr A(rho) <= tau", 1e-10};
  PropertyCheck pt_norm{"||rho^T_B||_1 >= 1", 1e-10};
  PropertyCheck product_tau{"tau(rho_A (x) rho_B) = ||rho_A||_2 ||rho_B||_2", 1e-10};
  PropertyCheck pure_product_tau{"tau(pure product) = 1", 1e-10};
  PropertyCheck separable_tau{"tau(separable) <= 1", 1e-10};
  PropertyCheck multiplicative{"tau(rho1 (x) rho2) = tau1 tau2", 1e-10};
  PropertyCheck dual_route{"realign(reconstruct(decompose)) = realign", 1e-10};

  for (int k = 0; k < n; ++k) {
    const std::string tag = "#" + std::to_string(k);
    const Dims dims = detail::pick_dims(rng, false);
    const DensityMatrix rho = detail::random_state(dims, rng);
    const auto ra = realign(rho);
    const double tau = ra.trace_norm();
    if (dims.square()) {
      const double tr = ra.mat.trace().real();
      trace_nonneg.record(-tr, tag + " " + detail::dims_label(dims));
      trace_below_tau.record(tr - tau, tag + " " + detail::dims_label(dims));
      const auto dec = decompose(rho, HsBasis::spin);
      const Matrix via = realigned_from_decomposition(dec).mat;
      dual_route.record((via - ra.mat).cwiseAbs().maxCoeff(), tag);
    }
    pt_norm.record(1.0 - trace_norm(partial_transpose(rho, Side::second)), tag);

    const DensityMatrix pa = random_density({dims.a, 1}, 1 + rng() % dims.a, rng);
    const DensityMatrix pb = random_density({dims.b, 1}, 1 + rng() % dims.b, rng);
    const DensityMatrix prod(tensor(pa.matrix(), pb.matrix()), dims);
    product_tau.record(std::abs(ccn_value(prod) - frobenius_norm(pa.matrix()) * frobenius_norm(pb.matrix())), tag);
    const Vector xa = random_unit_vector(dims.a, rng), xb = random_unit_vector(dims.b, rng);
    pure_product_tau.record(std::abs(ccn_value(pure_state(tensor(xa, xb), dims)) - 1.0), tag);

    separable_tau.record(ccn_value(detail::random_separable(dims, 1 + k % 6, rng)) - 1.0, tag);

    const Dims d2 = detail::pick_dims(rng, false);
    if (dims.total() * d2.total() <= 36) {
      const DensityMatrix rho2 = detail::random_state(d2, rng);
      const double joint = ccn_value(regroup_product(rho, rho2).state());
      multiplicative.record(std::abs(joint - tau * ccn_value(rho2)), tag);
    }
  }
  return {"norms", {trace_nonneg, trace_below_tau, pt_norm, product_tau, pure_product_tau, separable_tau, multiplicative, dual_route}};
}

/// tr A/d <= f_best <= tau/d on random square states.
inline SuiteResult verify_sandwich(std::uint64_t seed, int n, const FidelityOptions& fo = {}) {
  Rng rng(seed);
  PropertyCheck lower{"tr A/d <= f_best", 1e-8};
  PropertyCheck upper{"f_best <= tau/d", 1e-10};
  PropertyCheck overlap{"tr A/d = <Psi+|rho|Psi+>", 1e-12};
  PropertyCheck closed{"2 f = tau (entangled Bell-diagonal)", 1e-8};

  for (int k = 0; k < n; ++k) {
    const std::string tag = "#" + std::to_string(k);
    const Index d = 2 + static_cast<Index>(rng() % 2);
    const DensityMatrix rho = detail::random_state({d, d}, rng);
    const auto ra = realign(rho);
    const double dd = static_cast<double>(d);
    const double lo = ra.mat.trace().real() / dd;
    const double hi = ra.trace_norm() / dd;
    const Vector psi = max_entangled_vector(d);
    overlap.record(std::abs(lo - psi.dot(rho.matrix() * psi).real()), tag);
    const double best = fidelity_optimize(rho, fo).value;
    lower.record(lo - best, tag);
    upper.record(best - hi, tag);

    const auto bd = make_state(random_bell_diagonal(rng, true));
    const auto cf = fidelity_two_qubit_max_disordered(decompose(bd, HsBasis::pauli), true);
    closed.record(std::abs(2.0 * cf.value - ccn_value(bd)), tag);
  }
  return {"sandwich", {lower, upper, overlap, closed}};
}

/// Behaviour of tau under the elementary local operations.
inline SuiteResult verify_monotonicity(std::uint64_t seed, int n) {
  Rng rng(seed);
  PropertyCheck unitary{"O3: tau invariant under local unitaries", 1e-10};
  PropertyCheck measurement{"O4: tau never increases under LvN measurement", 1e-10};
  PropertyCheck ancilla{"O1: tau scales by tau(ancilla) <= 1", 1e-10};

  for (int k = 0; k < n; ++k) {
    const std::string tag = "#" + std::to_string(k);
    const Dims dims = detail::pick_dims(rng, false);
    const FactorizedState fs(detail::random_state(dims, rng));

    const auto pu = monotonicity_probe(op::LocalUnitary{random_unitary(dims.a, rng), random_unitary(dims.b, rng)}, fs);
    unitary.record(std::abs(pu.tau_after - pu.tau_before), tag);

    const Side side = (rng() % 2) ? Side::first : Side::second;
    const Index sd = side == Side::first ? dims.a : dims.b;
    const Index parts = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(sd));
    const auto pm = monotonicity_probe(op::LvnMeasurement{side, random_projector_family(sd, parts, rng)}, fs);
    measurement.record(pm.tau_after - pm.tau_before, tag);

    if (dims.total() <= 6) {
      const DensityMatrix anc(tensor(random_density({2, 1}, 1 + rng() % 2, rng).matrix(),
                                     random_density({2, 1}, 1 + rng() % 2, rng).matrix()),
                              {2, 2});
      const auto pa = monotonicity_probe(op::AddAncilla{anc}, fs);
      const double scale = ccn_value(anc);
      ancilla.record(std::max(std::abs(pa.tau_after - scale * pa.tau_before), pa.tau_after - pa.tau_before), tag);
    }
  }
  return {"monotonicity", {unitary, measurement, ancilla}};
}

/// Closed-form spectra and tau of the 2x2 counterexample family.
inline SuiteResult verify_spectra(std::uint64_t seed, int n) {
  Rng rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  PropertyCheck tau{"tau = g(s,r) + |t|", 1e-10};
  PropertyCheck rho_eigs{"eig(rho) closed form", 1e-12};
  PropertyCheck pt_eigs{"eig(rho^T_B) closed form", 1e-12};
  PropertyCheck ppt{"PPT violated iff t != 0", 0.0};

  int drawn = 0;
  for (int attempts = 0; drawn < n && attempts < 1000 * std::max(n, 1); ++attempts) {
    // nonzero t kept away from 0 so the sign of the PT eigenvalue is resolvable
    const double u = unif(rng);
    CounterexampleParams p{unif(rng), unif(rng), (drawn % 5 == 0) ? 0.0 : std::copysign(0.01 + 0.49 * std::abs(u), u)};
    if (counterexample_violation(p)) continue;
    const std::string tag = "(s,r,t)=(" + format_double(p.s) + "," + format_double(p.r) + "," + format_double(p.t) + ")";
    ++drawn;
    const DensityMatrix rho = make_state(family::Counterexample{p});
    const auto sp = counterexample_spectra(p);
    tau.record(std::abs(ccn_value(rho) - (sp.g + std::abs(p.t))), tag);

    auto sorted_gap = [](RealVector got, std::array<double, 4> want) {
      std::sort(want.begin(), want.end());
      double gap = 0.0;
      for (Index k = 0; k < 4; ++k) gap = std::max(gap, std::abs(got(k) - want[static_cast<std::size_t>(k)]));
      return gap;
    };
    rho_eigs.record(sorted_gap(hermitian_eigenvalues(rho.matrix()), sp.rho_eigs), tag);
    const RealVector pt = hermitian_eigenvalues(partial_transpose(rho, Side::second));
    pt_eigs.record(sorted_gap(pt, sp.pt_eigs), tag);
    const bool violated = ppt_criterion(rho).entangled;
    ppt.record(violated == (p.t != 0.0) ? -1.0 : 1.0, tag);
  }
  return {"spectra", {tau, rho_eigs, pt_eigs, ppt}};
}

inline std::vector<SuiteResult> run_suite(const std::string& name, std::uint64_t seed, int n) {
  if (n < 1) throw ArgumentError("verify: -n must be >= 1");
  const std::vector<std::pair<std::string, std::function<SuiteResult()>>> suites{
      {"norms", [&] { return verify_norms(seed, n); }},
      {"sandwich", [&] { return verify_sandwich(seed, n); }},
      {"monotonicity", [&] { return verify_monotonicity(seed, n); }},
      {"spectra", [&] { return verify_spectra(seed, n); }},
  };
  std::vector<SuiteResult> out;
  for (const auto& [key, run] : suites)
    if (name == "all" || name == key) out.push_back(run());
  if (out.empty())
    throw ArgumentError("verify: unknown suite '" + name + "' (norms, sandwich, monotonicity, spectra, all)");
  return out;
}

}  // namespace sepscope
