#pragma once

// State families with closed-form reference quantities.
//
// Conventions:
//   Werner(d, p)      p * P_anti / (d(d-1)/2) + (1-p) * 1/d^2, P_anti = (1 - SWAP)/2.
//                     At d = 2 this is p |Psi-><Psi-| + (1-p) 1/4.
//                     Valid for p in [-(d-1)/(d+1), 1].
//   Isotropic(d, F)   F |Psi+><Psi+| + (1-F) (1 - |Psi+><Psi+|)/(d^2-1), F in [0, 1].
//   BellDiagonal(p)   sum_k p_k |B_k><B_k| with B = (Phi+, Phi-, Psi+, Psi-).
//   PureSchmidt(a)    |psi> = sum_i sqrt(a_i) |ii>.
//   RhoP(a, p)        p |psi><psi| + (1-p) 1/d^2 with |psi> from PureSchmidt(a),
//                     p in [-1/(d^2-1), 1].
//   Counterexample    1/4 (1(x)1 + s 1(x)s3 + r s3(x)1 + t s1(x)s1 - t s2(x)s2
//                          + (1+r-s) s3(x)s3).
//   MaxDisordered(t)  1/4 (1(x)1 + sum_m t_m s_m (x) s_m).
//   RandomState       normalized G G^dagger, G Gaussian (d_A d_B) x rank.

#include <array>
#include <charconv>
#include <optional>
#include <variant>

#include "sepscope/hs_basis.hpp"
#include "sepscope/random.hpp"

namespace sepscope {

struct CounterexampleParams {
  double s = 0.5;
  double r = 0.25;
  double t = 0.0625;
};

namespace family {

struct Werner { Index d = 2; double p = 0.0; };
struct Isotropic { Index d = 2; double fidelity = 0.0; };
struct BellDiagonal { std::array<double, 4> p{0.25, 0.25, 0.25, 0.25}; };
struct PureSchmidt { std::vector<double> coeffs; };
struct RhoP { std::vector<double> coeffs; double p = 0.0; };
struct Counterexample { CounterexampleParams params; };
struct MaxDisordered { std::array<double, 3> t{0.0, 0.0, 0.0}; };
struct RandomState { Index da = 2; Index db = 2; Index rank = 4; std::uint64_t seed = 0; };

}  // namespace family

using FamilySpec = std::variant<family::Werner, family::Isotropic, family::BellDiagonal,
                                family::PureSchmidt, family::RhoP, family::Counterexample,
                                family::MaxDisordered, family::RandomState>;

// ---------------------------------------------------------------------------
// Building blocks

/// |Psi+> = 1/sqrt(d) sum_i |ii>
inline Vector max_entangled_vector(Index d) {
  Vector v = Vector::Zero(d * d);
  for (Index i = 0; i < d; ++i) v(i * d + i) = 1.0 / std::sqrt(static_cast<double>(d));
  return v;
}

inline Matrix max_entangled_projector(Index d) {
  const Vector v = max_entangled_vector(d);
  return v * v.adjoint();
}

inline Matrix swap_operator(Index d) {
  Matrix f = Matrix::Zero(d * d, d * d);
  for (Index i = 0; i < d; ++i)
    for (Index k = 0; k < d; ++k) f(k * d + i, i * d + k) = 1.0;
  return f;
}

/// Phi+, Phi-, Psi+, Psi- in that order.
inline std::array<Vector, 4> bell_vectors() {
  const double h = 1.0 / std::sqrt(2.0);
  std::array<Vector, 4> b;
  for (auto& v : b) v = Vector::Zero(4);
  b[0](0) = h, b[0](3) = h;
  b[1](0) = h, b[1](3) = -h;
  b[2](1) = h, b[2](2) = h;
  b[3](1) = h, b[3](2) = -h;
  return b;
}

inline DensityMatrix pure_state(const Vector& psi, Dims dims) {
  const Vector v = psi / psi.norm();
  return DensityMatrix::from_hermitized(v * v.adjoint(), dims);
}

// ---------------------------------------------------------------------------
// Closed forms for the counterexample family

struct CounterexampleSpectra {
  std::array<double, 4> rho_eigs;  // 0, (s-r)/2, 1/2 + (r-s)/4 +- 1/2 sqrt(t^2 + (s+r)^2/4)
  std::array<double, 4> pt_eigs;   // (1+r)/2, (1-s)/2, (s-r)/4 +- 1/2 sqrt((s-r)^2/4 + t^2)
  double psi = 0.0;                // (1+r)^2 + (s-r)^2 + (1-s)^2
  double g = 0.0;                  // sqrt(l1) + sqrt(l4)
};

inline CounterexampleSpectra counterexample_spectra(const CounterexampleParams& p) {
  const double s = p.s, r = p.r, t = p.t;
  CounterexampleSpectra out{};
  const double root = 0.5 * std::sqrt(t * t + (s + r) * (s + r) / 4.0);
  out.rho_eigs = {0.0, (s - r) / 2.0, 0.5 + (r - s) / 4.0 + root, 0.5 + (r - s) / 4.0 - root};
  const double pt_root = 0.5 * std::sqrt((s - r) * (s - r) / 4.0 + t * t);
  out.pt_eigs = {(1.0 + r) / 2.0, (1.0 - s) / 2.0, (s - r) / 4.0 + pt_root, (s - r) / 4.0 - pt_root};
  out.psi = (1.0 + r) * (1.0 + r) + (s - r) * (s - r) + (1.0 - s) * (1.0 - s);
  const double disc =
      std::max(0.0, out.psi * out.psi - 4.0 * (1.0 + r) * (1.0 + r) * (1.0 - s) * (1.0 - s));
  const double l1 = (out.psi + std::sqrt(disc)) / 8.0;
  const double l4 = std::max(0.0, (out.psi - std::sqrt(disc)) / 8.0);
  out.g = std::sqrt(l1) + std::sqrt(l4);
  return out;
}

/// tau of the counterexample state: g(s, r) + |t|.
inline double counterexample_tau(const CounterexampleParams& p) {
  return counterexample_spectra(p).g + std::abs(p.t);
}

/// Empty when the parameters describe a valid state, otherwise the violated bound.
inline std::optional<std::string> counterexample_violation(const CounterexampleParams& p) {
  if (!(p.s > p.r)) return "counterexample requires s > r";
  if (std::abs(p.s) > 1.0) return "counterexample requires |s| <= 1";
  if (std::abs(p.r) > 1.0) return "counterexample requires |r| <= 1";
  const auto sp = counterexample_spectra(p);
  for (double l : sp.rho_eigs)
    if (l < -1e-12) return "counterexample eigenvalue " + std::to_string(l) + " < 0";
  return std::nullopt;
}

/// CCN detects rho_p iff p exceeds 1 / (4 sqrt(a1 a2) + 1).
inline double rho_p_threshold(double a1, double a2) {
  if (a1 < 0.0 || a2 < 0.0 || std::abs(a1 + a2 - 1.0) > 1e-12)
    throw ArgumentError("rho_p_threshold: Schmidt coefficients must be nonnegative and sum to 1");
  return 1.0 / (4.0 * std::sqrt(a1 * a2) + 1.0);
}

// ---------------------------------------------------------------------------
// make_state

namespace detail {

inline std::vector<double> normalized_schmidt(const std::vector<double>& a, const char* who) {
  if (a.size() < 2) throw ArgumentError(std::string(who) + ": need at least 2 Schmidt coefficients");
  double sum = 0.0;
  for (double x : a) {
    if (!(x >= 0.0)) throw ArgumentError(std::string(who) + ": Schmidt coefficients must be >= 0");
    sum += x;
  }
  if (std::abs(sum - 1.0) > 1e-9)
    throw ArgumentError(std::string(who) + ": Schmidt coefficients must sum to 1 (got " +
                        std::to_string(sum) + ")");
  std::vector<double> out(a);
  for (double& x : out) x /= sum;
  return out;
}

inline Vector schmidt_vector(const std::vector<double>& a) {
  const Index d = static_cast<Index>(a.size());
  Vector v = Vector::Zero(d * d);
  for (Index i = 0; i < d; ++i) v(i * d + i) = std::sqrt(a[i]);
  return v;
}

inline void require(bool ok, const std::string& what) {
  if (!ok) throw ArgumentError(what);
}

}  // namespace detail

inline DensityMatrix make_state(const family::Werner& w) {
  detail::require(w.d >= 2, "werner: d must be >= 2");
  const double dd = static_cast<double>(w.d);
  const double lo = -(dd - 1.0) / (dd + 1.0);
  detail::require(w.p >= lo && w.p <= 1.0,
                  "werner: p must lie in [" + std::to_string(lo) + ", 1]");
  const Index n = w.d * w.d;
  const Matrix anti = 0.5 * (Matrix::Identity(n, n) - swap_operator(w.d));
  const Matrix rho = w.p * anti / (dd * (dd - 1.0) / 2.0) + (1.0 - w.p) * Matrix::Identity(n, n) / (dd * dd);
  return DensityMatrix::from_hermitized(rho, {w.d, w.d});
}

inline DensityMatrix make_state(const family::Isotropic& iso) {
  detail::require(iso.d >= 2, "isotropic: d must be >= 2");
  detail::require(iso.fidelity >= 0.0 && iso.fidelity <= 1.0, "isotropic: F must lie in [0, 1]");
  const Index n = iso.d * iso.d;
  const Matrix p = max_entangled_projector(iso.d);
  const Matrix rho = iso.fidelity * p +
                     (1.0 - iso.fidelity) * (Matrix::Identity(n, n) - p) / static_cast<double>(n - 1);
  return DensityMatrix::from_hermitized(rho, {iso.d, iso.d});
}

inline DensityMatrix make_state(const family::BellDiagonal& bd) {
  double sum = 0.0;
  for (double x : bd.p) {
    detail::require(x >= 0.0, "bell: weights must be >= 0");
    sum += x;
  }
  detail::require(std::abs(sum - 1.0) <= 1e-12, "bell: weights must sum to 1");
  const auto b = bell_vectors();
  Matrix rho = Matrix::Zero(4, 4);
  for (int k = 0; k < 4; ++k) rho += bd.p[k] * b[k] * b[k].adjoint();
  return DensityMatrix::from_hermitized(rho, {2, 2});
}

inline DensityMatrix make_state(const family::PureSchmidt& ps) {
  const auto a = detail::normalized_schmidt(ps.coeffs, "pure");
  const Index d = static_cast<Index>(a.size());
  return pure_state(detail::schmidt_vector(a), {d, d});
}

inline DensityMatrix make_state(const family::RhoP& rp) {
  const auto a = detail::normalized_schmidt(rp.coeffs, "rhop");
  const Index d = static_cast<Index>(a.size()), n = d * d;
  const double lo = -1.0 / static_cast<double>(n - 1);
  detail::require(rp.p >= lo && rp.p <= 1.0, "rhop: p must lie in [" + std::to_string(lo) + ", 1]");
  const Vector v = detail::schmidt_vector(a);
  const Matrix rho = rp.p * v * v.adjoint() + (1.0 - rp.p) * Matrix::Identity(n, n) / static_cast<double>(n);
  return DensityMatrix::from_hermitized(rho, {d, d});
}

inline DensityMatrix make_state(const family::Counterexample& ce) {
  if (auto bad = counterexample_violation(ce.params)) throw ArgumentError(*bad);
  const auto [s, r, t] = ce.params;
  Matrix rho = Matrix::Zero(4, 4);
  rho(0, 0) = (1.0 + r) / 2.0;
  rho(0, 3) = t / 2.0;
  rho(3, 0) = t / 2.0;
  rho(2, 2) = (s - r) / 2.0;
  rho(3, 3) = (1.0 - s) / 2.0;
  return DensityMatrix(rho, {2, 2});
}

inline DensityMatrix make_state(const family::MaxDisordered& md) {
  const auto [t1, t2, t3] = md.t;
  // Bell-basis eigenvalues (Phi+, Phi-, Psi+, Psi-)
  const std::array<double, 4> eig{(1 + t1 - t2 + t3) / 4, (1 - t1 + t2 + t3) / 4,
                                  (1 + t1 + t2 - t3) / 4, (1 - t1 - t2 - t3) / 4};
  const char* names[] = {"1 + t1 - t2 + t3", "1 - t1 + t2 + t3", "1 + t1 + t2 - t3", "1 - t1 - t2 - t3"};
  for (int k = 0; k < 4; ++k)
    detail::require(eig[k] >= -1e-12, std::string("maxdis: requires ") + names[k] + " >= 0");
  const auto s = pauli_matrices();
  Matrix rho = Matrix::Identity(4, 4);
  for (int m = 0; m < 3; ++m) rho += md.t[m] * tensor(s[m], s[m]);
  return DensityMatrix::from_hermitized(rho / 4.0, {2, 2});
}

inline DensityMatrix make_state(const family::RandomState& rs) {
  detail::require(rs.da >= 1 && rs.db >= 1, "random: dimensions must be positive");
  Rng rng(rs.seed);
  return random_density({rs.da, rs.db}, rs.rank, rng);
}

inline DensityMatrix make_state(const FamilySpec& spec) {
  return std::visit([](const auto& f) { return make_state(f); }, spec);
}

// ---------------------------------------------------------------------------
// Random families used by the property suites

/// Random state with both reductions maximally mixed, obtained by
/// alternately rescaling a full-rank random state with local filters
/// (A (x) 1) and (1 (x) B) until both marginals equal 1/d.
inline DensityMatrix random_max_disordered(Index d, Rng& rng, Index rank = 0) {
  if (rank == 0) rank = d * d;
  Matrix rho = random_density({d, d}, rank, rng).matrix();
  const Dims dims{d, d};
  const Matrix id = Matrix::Identity(d, d);
  auto inv_sqrt = [&](const Matrix& m) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(hermitize(m));
    return Matrix(es.eigenvectors() * es.eigenvalues().cwiseInverse().cwiseSqrt().asDiagonal() *
                  es.eigenvectors().adjoint());
  };
  for (int it = 0; it < 10000; ++it) {
    const Matrix a = inv_sqrt(static_cast<double>(d) * partial_trace(rho, dims, Side::second));
    Matrix fa = tensor(a, id);
    rho = fa * rho * fa.adjoint();
    rho /= rho.trace().real();
    const Matrix b = inv_sqrt(static_cast<double>(d) * partial_trace(rho, dims, Side::first));
    Matrix fb = tensor(id, b);
    rho = fb * rho * fb.adjoint();
    rho = hermitize(rho / rho.trace().real());
    const double err_a = (partial_trace(rho, dims, Side::second) - id / static_cast<double>(d)).cwiseAbs().maxCoeff();
    const double err_b = (partial_trace(rho, dims, Side::first) - id / static_cast<double>(d)).cwiseAbs().maxCoeff();
    if (std::max(err_a, err_b) < 1e-15) break;
  }
  return DensityMatrix(rho, dims);
}

/// Random Bell-diagonal weights; with `entangled` the largest weight exceeds 1/2.
inline family::BellDiagonal random_bell_diagonal(Rng& rng, bool entangled) {
  std::exponential_distribution<double> expo(1.0);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  family::BellDiagonal bd;
  double sum = 0.0;
  for (double& x : bd.p) sum += (x = expo(rng));
  for (double& x : bd.p) x /= sum;
  if (entangled) {
    // dominant component in (0.52, 1)
    const int k = static_cast<int>(rng() % 4);
    const double top = 0.52 + 0.48 * unif(rng);
    double rest = 0.0;
    for (int j = 0; j < 4; ++j)
      if (j != k) rest += bd.p[j];
    for (int j = 0; j < 4; ++j) bd.p[j] = (j == k) ? top : bd.p[j] * (1.0 - top) / rest;
  }
  // exact unit sum
  const double total = bd.p[0] + bd.p[1] + bd.p[2] + bd.p[3];
  for (double& x : bd.p) x /= total;
  return bd;
}

/// (U (x) V) rho (U (x) V)^dagger
inline DensityMatrix local_unitary_conjugate(const DensityMatrix& rho, const Matrix& u, const Matrix& v) {
  const Matrix w = tensor(u, v);
  return DensityMatrix::from_hermitized(w * rho.matrix() * w.adjoint(), rho.dims());
}

// ---------------------------------------------------------------------------
// Textual form: name:key=value,...  Tokens without '=' extend the previous
// key's value list; ';' separates groups and is otherwise equivalent to ','.

struct FamilyText {
  std::string name;
  std::vector<std::pair<std::string, std::vector<double>>> params;

  const std::vector<double>* find(const std::string& key) const {
    for (const auto& [k, v] : params)
      if (k == key) return &v;
    return nullptr;
  }
  std::vector<double>* find(const std::string& key) {
    for (auto& [k, v] : params)
      if (k == key) return &v;
    return nullptr;
  }
};

namespace detail {

inline std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t");
  return std::string(s.substr(b, e - b + 1));
}

inline double parse_number(const std::string& tok) {
  auto one = [&](std::string_view sv) {
    double v = 0.0;
    if (!sv.empty() && sv.front() == '+') sv.remove_prefix(1);
    const auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (res.ec != std::errc() || res.ptr != sv.data() + sv.size())
      throw ArgumentError("family spec: cannot parse number '" + tok + "'");
    return v;
  };
  const auto slash = tok.find('/');
  if (slash == std::string::npos) return one(tok);
  const double den = one(std::string_view(tok).substr(slash + 1));
  if (den == 0.0) throw ArgumentError("family spec: zero denominator in '" + tok + "'");
  return one(std::string_view(tok).substr(0, slash)) / den;
}

}  // namespace detail

inline FamilyText parse_family_text(const std::string& text) {
  const auto colon = text.find(':');
  FamilyText ft;
  ft.name = detail::trim(text.substr(0, colon));
  if (ft.name.empty()) throw ArgumentError("family spec: missing family name in '" + text + "'");
  if (colon == std::string::npos) return ft;
  std::string body = text.substr(colon + 1);
  std::replace(body.begin(), body.end(), ';', ',');
  std::size_t pos = 0;
  while (pos <= body.size()) {
    const auto next = body.find(',', pos);
    const std::string tok = detail::trim(body.substr(pos, next == std::string::npos ? std::string::npos : next - pos));
    pos = (next == std::string::npos) ? body.size() + 1 : next + 1;
    if (tok.empty()) continue;
    const auto eq = tok.find('=');
    if (eq != std::string::npos) {
      const std::string key = detail::trim(tok.substr(0, eq));
      if (key.empty()) throw ArgumentError("family spec: empty key in '" + tok + "'");
      if (ft.find(key)) throw ArgumentError("family spec: duplicate key '" + key + "'");
      ft.params.push_back({key, {detail::parse_number(detail::trim(tok.substr(eq + 1)))}});
    } else {
      if (ft.params.empty()) throw ArgumentError("family spec: value '" + tok + "' has no key");
      ft.params.back().second.push_back(detail::parse_number(tok));
    }
  }
  return ft;
}

namespace detail {

class ParamReader {
 public:
  explicit ParamReader(const FamilyText& ft) : ft_(ft) {}

  const std::vector<double>& list(const std::string& key) {
    used_.push_back(key);
    const auto* v = ft_.find(key);
    if (!v) throw ArgumentError(ft_.name + ": missing parameter '" + key + "'");
    return *v;
  }
  double scalar(const std::string& key) {
    const auto& v = list(key);
    if (v.size() != 1) throw ArgumentError(ft_.name + ": parameter '" + key + "' must be a single value");
    return v[0];
  }
  Index integer(const std::string& key) {
    const double v = scalar(key);
    if (v != std::floor(v) || v < 0 || v > 1e15)
      throw ArgumentError(ft_.name + ": parameter '" + key + "' must be a nonnegative integer");
    return static_cast<Index>(v);
  }
  Index integer_or(const std::string& key, Index fallback) {
    return ft_.find(key) ? integer(key) : fallback;
  }
  template <std::size_t N>
  std::array<double, N> fixed(const std::string& key) {
    const auto& v = list(key);
    if (v.size() != N)
      throw ArgumentError(ft_.name + ": parameter '" + key + "' needs " + std::to_string(N) + " values");
    std::array<double, N> out{};
    std::copy(v.begin(), v.end(), out.begin());
    return out;
  }
  void finish() const {
    for (const auto& [k, v] : ft_.params)
      if (std::find(used_.begin(), used_.end(), k) == used_.end())
        throw ArgumentError(ft_.name + ": unknown parameter '" + k + "'");
  }

 private:
  const FamilyText& ft_;
  std::vector<std::string> used_;
};

}  // namespace detail

inline FamilySpec family_from_text(const FamilyText& ft) {
  detail::ParamReader in(ft);
  FamilySpec spec;
  if (ft.name == "werner") {
    spec = family::Werner{in.integer("d"), in.scalar("p")};
  } else if (ft.name == "isotropic") {
    spec = family::Isotropic{in.integer("d"), in.scalar("F")};
  } else if (ft.name == "bell") {
    spec = family::BellDiagonal{in.fixed<4>("p")};
  } else if (ft.name == "pure") {
    spec = family::PureSchmidt{in.list("a")};
  } else if (ft.name == "rhop") {
    auto a = in.list("a");
    spec = family::RhoP{a, in.scalar("p")};
  } else if (ft.name == "counterexample") {
    const double s = in.scalar("s"), r = in.scalar("r"), t = in.scalar("t");
    spec = family::Counterexample{{s, r, t}};
  } else if (ft.name == "maxdis") {
    spec = family::MaxDisordered{in.fixed<3>("t")};
  } else if (ft.name == "random") {
    const Index da = in.integer("da"), db = in.integer("db");
    const Index rank = in.integer_or("rank", da * db);
    const auto seed = static_cast<std::uint64_t>(in.integer_or("seed", 0));
    spec = family::RandomState{da, db, rank, seed};
  } else {
    throw ArgumentError("unknown family '" + ft.name +
                        "' (expected werner, isotropic, bell, pure, rhop, counterexample, maxdis, random)");
  }
  in.finish();
  return spec;
}

inline FamilySpec parse_family(const std::string& text) { return family_from_text(parse_family_text(text)); }

/// Shortest round-trip decimal form.
inline std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

inline std::string format_family(const FamilySpec& spec) {
  auto join = [](const auto& values) {
    std::string s;
    for (std::size_t i = 0; i < values.size(); ++i) s += (i ? "," : "") + format_double(values[i]);
    return s;
  };
  return std::visit(
      [&](const auto& f) -> std::string {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, family::Werner>)
          return "werner:d=" + std::to_string(f.d) + ",p=" + format_double(f.p);
        else if constexpr (std::is_same_v<T, family::Isotropic>)
          return "isotropic:d=" + std::to_string(f.d) + ",F=" + format_double(f.fidelity);
        else if constexpr (std::is_same_v<T, family::BellDiagonal>)
          return "bell:p=" + join(f.p);
        else if constexpr (std::is_same_v<T, family::PureSchmidt>)
          return "pure:a=" + join(f.coeffs);
        else if constexpr (std::is_same_v<T, family::RhoP>)
          return "rhop:a=" + join(f.coeffs) + ";p=" + format_double(f.p);
        else if constexpr (std::is_same_v<T, family::Counterexample>)
          return "counterexample:s=" + format_double(f.params.s) + ",r=" + format_double(f.params.r) +
                 ",t=" + format_double(f.params.t);
        else if constexpr (std::is_same_v<T, family::MaxDisordered>)
          return "maxdis:t=" + join(f.t);
        else
          return "random:da=" + std::to_string(f.da) + ",db=" + std::to_string(f.db) +
                 ",rank=" + std::to_string(f.rank) + ",seed=" + std::to_string(f.seed);
      },
      spec);
}

}  // namespace sepscope
