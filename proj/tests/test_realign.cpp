#include <gtest/gtest.h>

#include "oracles.hpp"
#include "sepscope/hs_basis.hpp"
#include "sepscope/random.hpp"
#include "sepscope/states.hpp"

using namespace sepscope;

TEST(Realign, MatchesMatrixUnitOracle) {
  Rng rng(21);
  for (Dims d : {Dims{2, 2}, Dims{2, 3}, Dims{3, 2}, Dims{3, 3}, Dims{2, 4}}) {
    const DensityMatrix rho = random_density(d, d.total(), rng);
    const auto ra = realign(rho);
    ASSERT_EQ(ra.mat.rows(), d.a * d.a);
    ASSERT_EQ(ra.mat.cols(), d.b * d.b);
    EXPECT_LT((ra.mat - oracle::realign(rho.matrix(), d.a, d.b)).cwiseAbs().maxCoeff(), 1e-15);
    EXPECT_NEAR(ra.trace_norm(), oracle::trace_norm(ra.mat), 1e-11);
  }
}

TEST(Realign, TwoQubitIndexTable) {
  Matrix rho(4, 4);
  for (Index r = 0; r < 4; ++r)
    for (Index c = 0; c < 4; ++c) rho(r, c) = static_cast<double>(10 * r + c);
  Matrix want(4, 4);
  want << 0, 1, 10, 11,
          2, 3, 12, 13,
          20, 21, 30, 31,
          22, 23, 32, 33;
  EXPECT_EQ(realign_entries(rho, {2, 2}), want);
}

TEST(Realign, ProductMapsToOuterProductOfVecs) {
  Rng rng(22);
  const Matrix a = ginibre(2, 2, rng), b = ginibre(3, 3, rng);
  const Matrix got = realign_entries(tensor(a, b), {2, 3});
  const Matrix want = oracle::vec_col(a) * oracle::vec_col(b).transpose();
  EXPECT_LT((got - want).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Realign, MaximallyEntangledHasTauD) {
  for (Index d : {2, 3, 4}) {
    const DensityMatrix rho(max_entangled_projector(d), {d, d});
    EXPECT_NEAR(ccn_value(rho), static_cast<double>(d), 1e-12);
    EXPECT_TRUE(ccn_entangled(rho).entangled);
  }
}

TEST(Realign, PureProductHasTauOne) {
  Rng rng(23);
  const Vector x = random_unit_vector(3, rng), y = random_unit_vector(2, rng);
  EXPECT_NEAR(ccn_value(pure_state(tensor(x, y), {3, 2})), 1.0, 1e-12);
}

TEST(Realign, MixedProductIsBelowOne) {
  const DensityMatrix rho(Matrix::Identity(4, 4) / 4.0, {2, 2});
  EXPECT_NEAR(ccn_value(rho), 0.5, 1e-14);
  EXPECT_FALSE(ccn_entangled(rho).entangled);
}

TEST(Realign, PureStateTauIsSquaredSchmidtRootSum) {
  const DensityMatrix rho = make_state(family::PureSchmidt{{0.7, 0.2, 0.1}});
  const double want = std::pow(std::sqrt(0.7) + std::sqrt(0.2) + std::sqrt(0.1), 2);
  EXPECT_NEAR(ccn_value(rho), want, 1e-12);
}

TEST(Realign, CounterexampleCanonicalForm) {
  const double s = 0.5, r = 0.25, t = 0.0625;
  const auto ra = realign(make_state(family::Counterexample{{s, r, t}}));
  Matrix want = Matrix::Zero(4, 4);
  want(0, 0) = 1 + r;
  want(1, 1) = want(2, 2) = t;
  want(3, 0) = s - r;
  want(3, 3) = 1 - s;
  EXPECT_LT((ra.mat - want / 2.0).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(Realign, RejectsShapeMismatch) {
  EXPECT_THROW(realign_entries(Matrix::Identity(4, 4), {2, 3}), DimensionError);
}

// ---------------------------------------------------------------------------

TEST(HsBasis, SpinBasisIsOrthogonal) {
  for (Index d : {2, 3, 4}) {
    const auto& b = spin_basis(d);
    ASSERT_EQ(b.matrices.size(), static_cast<std::size_t>(d * d));
    for (std::size_t i = 0; i < b.matrices.size(); ++i)
      for (std::size_t j = 0; j < b.matrices.size(); ++j) {
        const cplx ip = (b.matrices[i].adjoint() * b.matrices[j]).trace();
        EXPECT_NEAR(std::abs(ip - cplx(i == j ? static_cast<double>(d) : 0.0)), 0.0, 1e-12);
      }
    for (const auto& m : b.traceless()) EXPECT_NEAR(std::abs(m.trace()), 0.0, 1e-12);
  }
}

TEST(HsBasis, QubitSpinBasisIsPauliUpToPhase) {
  const auto p = oracle::paulis();
  const auto& b = spin_basis(2);
  EXPECT_LT((b.matrices[1] - p[0]).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((b.matrices[2] - p[2]).cwiseAbs().maxCoeff(), 1e-15);
  EXPECT_LT((b.matrices[3] - cplx(0, 1) * p[1]).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(HsBasis, SpinMatrixRejectsOutOfRange) {
  EXPECT_THROW(spin_matrix(3, 3, 0), ArgumentError);
  EXPECT_THROW(spin_matrix(3, 0, -1), ArgumentError);
}

TEST(HsBasis, RoundTrip) {
  Rng rng(31);
  for (Index d : {2, 3, 4})
    for (HsBasis kind : {HsBasis::spin, HsBasis::pauli}) {
      if (kind == HsBasis::pauli && d != 2) continue;
      const DensityMatrix rho = random_density({d, d}, d, rng);
      const auto dec = decompose(rho, kind);
      EXPECT_LT((reconstruct(dec) - rho.matrix()).cwiseAbs().maxCoeff(), 1e-13) << to_string(kind) << " d=" << d;
    }
}

TEST(HsBasis, PauliCoefficientsAreRealExpectations) {
  Rng rng(32);
  const DensityMatrix rho = random_density({2, 2}, 4, rng);
  const auto dec = decompose(rho, HsBasis::pauli);
  const auto p = oracle::paulis();
  const Matrix id = Matrix::Identity(2, 2);
  for (int m = 0; m < 3; ++m) {
    EXPECT_NEAR(std::abs(dec.r(m) - (oracle::kron(p[m], id) * rho.matrix()).trace()), 0.0, 1e-14);
    EXPECT_NEAR(std::abs(dec.s(m) - (oracle::kron(id, p[m]) * rho.matrix()).trace()), 0.0, 1e-14);
    for (int n = 0; n < 3; ++n) {
      EXPECT_NEAR(dec.t(m, n).imag(), 0.0, 1e-14);
      // t_mn pairs sigma_n on A with sigma_m on B
      EXPECT_NEAR(std::abs(dec.t(m, n) - (oracle::kron(p[n], p[m]) * rho.matrix()).trace()), 0.0, 1e-14);
    }
  }
}

TEST(HsBasis, SpinToPauliAgreesWithDirectPauli) {
  Rng rng(33);
  const DensityMatrix rho = random_density({2, 2}, 3, rng);
  const auto via = spin_to_pauli(decompose(rho, HsBasis::spin));
  const auto direct = decompose(rho, HsBasis::pauli);
  EXPECT_LT((via.r - direct.r).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((via.s - direct.s).cwiseAbs().maxCoeff(), 1e-14);
  EXPECT_LT((via.t - direct.t).cwiseAbs().maxCoeff(), 1e-14);
}

TEST(HsBasis, RealignedFromExpansionMatchesEntryShuffle) {
  Rng rng(34);
  for (Index d : {2, 3}) {
    const DensityMatrix rho = random_density({d, d}, d * d, rng);
    for (HsBasis kind : {HsBasis::spin, HsBasis::pauli}) {
      if (kind == HsBasis::pauli && d != 2) continue;
      const auto a = realigned_from_decomposition(decompose(rho, kind));
      EXPECT_LT((a.mat - realign(rho).mat).cwiseAbs().maxCoeff(), 1e-14);
    }
  }
}

TEST(HsBasis, CounterexamplePauliCoordinates) {
  const double s = 0.5, r = 0.25, t = 0.0625;
  const Matrix got = hs_coordinates(realign(make_state(family::Counterexample{{s, r, t}})), HsBasis::pauli);
  Matrix want = Matrix::Zero(4, 4);
  want(0, 0) = 1;
  want(0, 3) = s;
  want(1, 1) = want(2, 2) = t;
  want(3, 0) = r;
  want(3, 3) = 1 + r - s;
  EXPECT_LT((got - want / 2.0).cwiseAbs().maxCoeff(), 1e-15);
}

TEST(HsBasis, MaxDisorderedTauFromT) {
  Rng rng(35);
  for (Index d : {2, 3}) {
    const DensityMatrix rho = random_max_disordered(d, rng);
    const auto dec = decompose(rho, HsBasis::spin);
    EXPECT_LT(dec.r.cwiseAbs().maxCoeff(), 1e-12);
    EXPECT_NEAR(ccn_value(rho), (1.0 + t_trace_norm(dec)) / static_cast<double>(d), 1e-10);
  }
}

TEST(HsBasis, DecomposeRejectsWrongTrace) {
  EXPECT_THROW(decompose(TraceClassOperator(Matrix::Identity(4, 4), {2, 2}), HsBasis::spin), InvariantError);
  EXPECT_THROW(decompose(TraceClassOperator(Matrix::Identity(6, 6) / 6.0, {2, 3}), HsBasis::spin),
               UnsupportedDimensionError);
  EXPECT_THROW(decompose(TraceClassOperator(Matrix::Identity(9, 9) / 9.0, {3, 3}), HsBasis::pauli),
               UnsupportedDimensionError);
}
