#include <doctest.h>

#include "dpskit/patterns.hpp"
#include "test_util.hpp"

using namespace dpskit;
using testutil::product_state;
using testutil::random_complex_vector;
using testutil::random_hermitian;
using testutil::random_psd;

namespace {

TripleXYZ random_triple(Rng& rng, int n) {
  MatrixXd x(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) x(i, j) = rng.uniform();
  MatrixXcd y(n, n), z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      y(i, j) = Complex(rng.gaussian(), rng.gaussian());
      y(j, i) = std::conj(y(i, j));
      z(i, j) = Complex(rng.gaussian(), rng.gaussian());
      z(j, i) = std::conj(z(i, j));
    }
  for (int i = 0; i < n; ++i) y(i, i) = z(i, i) = x(i, i);
  return TripleXYZ(std::move(x), std::move(y), std::move(z));
}

// Group average over the diagonal-phase conjugations generated by the n-1
// fourth-root matrices; exact projection oracle for the masking path.
HermitianMatrix projection_by_averaging(const HermitianMatrix& rho, Regime regime) {
  const int n = rho.registers.at(0);
  MatrixXcd sum = MatrixXcd::Zero(rho.dim, rho.dim);
  long count = 0;
  std::vector<int> powers(n, 0);  // last phase fixed to 1
  const Complex im(0, 1);
  auto phase = [&](int p) { return std::pow(im, p); };
  for (;;) {
    VectorXcd u(n);
    for (int q = 0; q < n; ++q) u(q) = phase(powers[q]);
    VectorXcd row(n * n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        const Complex uj = regime == Regime::CLDUI ? std::conj(u(j)) : u(j);
        row(i * n + j) = u(i) * uj;
      }
    sum += row.asDiagonal() * rho.entries * row.conjugate().asDiagonal();
    ++count;
    int pos = 0;
    for (; pos < n - 1; ++pos) {
      if (++powers[pos] < 4) break;
      powers[pos] = 0;
    }
    if (pos == n - 1) break;
  }
  return HermitianMatrix(sum / static_cast<double>(count), rho.registers);
}

}  // namespace

TEST_CASE("triple encoding round trip and block structure") {
  Rng rng(101);
  for (int rep = 0; rep < 50; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform() * 4);  // up to 5
    const TripleXYZ t = random_triple(rng, n);
    const auto rho = rho_from_triple(t);
    const TripleXYZ back = triple_from_rho(rho);
    CHECK((back.X - t.X).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back.Y - t.Y).cwiseAbs().maxCoeff() < 1e-12);
    CHECK((back.Z - t.Z).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("diagonal triple gives the classical correlation state") {
  const int n = 3;
  const TripleXYZ t(MatrixXd::Identity(n, n), MatrixXcd::Identity(n, n),
                    MatrixXcd::Identity(n, n));
  const auto rho = rho_from_triple(t);
  MatrixXcd expected = MatrixXcd::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) expected(i * n + i, i * n + i) = 1.0;
  CHECK((rho.entries - expected).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("the 9x9 family matrix for a = 2, a' = 1/2") {
  const auto rho = family_rho_aap(2.0, 0.5);
  MatrixXd expected = MatrixXd::Zero(9, 9);
  const double a = 2.0, ap = 0.5;
  // upper-left index (i,j) runs over 11..33 row-major
  const double xs[3][3] = {{1, a, ap}, {ap, 1, a}, {a, ap, 1}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      expected(i * 3 + j, i * 3 + j) = xs[i][j];
      expected(i * 3 + i, j * 3 + j) = 1.0;
    }
  CHECK((rho.entries.real() - expected).cwiseAbs().maxCoeff() == 0.0);
  CHECK(rho.entries.imag().cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("the symmetric family is a direct sum of an off-diagonal core and pair blocks") {
  const double a = 0.7, b = -0.2;
  const auto rho = family_rho_ab(a, b);
  const int n = 3;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      CHECK(rho.entries(i * n + j, i * n + j).real() == doctest::Approx(i == j ? 1.0 : a));
      if (i != j) {
        CHECK(rho.entries(i * n + i, j * n + j).real() == doctest::Approx(b));
        CHECK(rho.entries(i * n + j, j * n + i).real() == doctest::Approx(a));
      }
    }
  // Bose symmetry
  for (int r = 0; r < 9; ++r)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(rho.entries(r, i * n + j) == rho.entries(r, j * n + i));
}

TEST_CASE("extraction of the symmetrized basis state") {
  const auto d12 = dicke(2, 1, 2);
  const TripleXYZ t = triple_from_rho(d12);
  MatrixXd swap(2, 2);
  swap << 0, 0.5, 0.5, 0;
  CHECK((t.X - swap).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((t.Z.real() - swap).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(t.Y.cwiseAbs().maxCoeff() < 1e-12);  // no (ii,jj) weight
}

TEST_CASE("dense input is rejected as off-pattern") {
  Rng rng(7);
  const auto dense = random_hermitian(rng, 9, {3, 3});
  CHECK_THROWS_AS(triple_from_rho(dense), NotLDOI);
}

TEST_CASE("projection masks are idempotent, trace preserving, psd preserving") {
  Rng rng(13);
  for (Regime regime : {Regime::CLDUI, Regime::LDUI, Regime::LDOI}) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto rho = random_psd(rng, 9, {3, 3});
      const auto p = project(rho, regime);
      const auto pp = project(p, regime);
      CHECK((p.entries - pp.entries).cwiseAbs().maxCoeff() == 0.0);
      CHECK(p.trace() == doctest::Approx(rho.trace()));
      CHECK(is_psd(p));
      CHECK(matches_regime(p, regime));
    }
  }
}

TEST_CASE("projection of the all-ones product state") {
  const VectorXcd e = VectorXcd::Ones(3);
  const auto rho = product_state(e, e);
  const auto proj = project(rho, Regime::CLDUI);
  const auto expected = rho_from_triple(
      TripleXYZ(MatrixXd::Ones(3, 3), MatrixXcd::Ones(3, 3), MatrixXcd::Identity(3, 3)));
  CHECK((proj.entries - expected.entries).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("masking equals the finite group average") {
  Rng rng(37);
  for (int n : {3, 4}) {
    for (int rep = 0; rep < 10; ++rep) {
      const auto rho = random_hermitian(rng, n * n, {n, n});
      for (Regime regime : {Regime::CLDUI, Regime::LDUI}) {
        const auto masked = project(rho, regime);
        const auto averaged = projection_by_averaging(rho, regime);
        CHECK((masked.entries - averaged.entries).cwiseAbs().maxCoeff() < 1e-10);
      }
    }
  }
}

TEST_CASE("transpose intertwines the two one-sided projections") {
  Rng rng(41);
  for (int rep = 0; rep < 10; ++rep) {
    const auto rho = random_hermitian(rng, 9, {3, 3});
    const auto lhs = partial_transpose(project(rho, Regime::CLDUI), {1});
    const auto rhs = project(partial_transpose(rho, {1}), Regime::LDUI);
    CHECK((lhs.entries - rhs.entries).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("witness pairing identity") {
  const int n = 3;
  const auto from_identity = witness_matrix(WitnessPair(MatrixXd::Identity(n, n),
                                                        MatrixXcd::Zero(n, n)));
  MatrixXcd expected = MatrixXcd::Zero(n * n, n * n);
  for (int i = 0; i < n; ++i) expected(i * n + i, i * n + i) = 1.0;
  CHECK((from_identity.entries - expected).cwiseAbs().maxCoeff() == 0.0);

  Rng rng(43);
  for (int rep = 0; rep < 50; ++rep) {
    const int m = 2 + static_cast<int>(rng.uniform() * 3);
    MatrixXd s(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s(i, j) = rng.gaussian();
    const auto th = random_hermitian(rng, m);
    const TripleXYZ t = random_triple(rng, m);
    // pair against the one-sided state (Z diagonal)
    MatrixXcd zdiag = MatrixXcd::Zero(m, m);
    zdiag.diagonal() = t.X.diagonal().cast<Complex>();
    const auto rho = rho_from_triple(TripleXYZ(t.X, t.Y, zdiag));
    const auto wit = witness_matrix(WitnessPair(s, th.entries));
    const Complex pairing = (wit.entries.adjoint() * rho.entries).trace();
    const double expected_pairing =
        (s.array() * t.X.array()).sum() + (th.entries.adjoint() * t.Y).trace().real();
    CHECK(pairing.real() == doctest::Approx(expected_pairing).epsilon(1e-10));
    CHECK(std::abs(pairing.imag()) < 1e-10);
  }
}

TEST_CASE("witness with a negative entry separates the symmetrized state") {
  MatrixXd a = MatrixXd::Identity(2, 2);
  a(0, 1) = a(1, 0) = -1.0;
  const auto wit = witness_matrix(WitnessPair(a, MatrixXcd::Zero(2, 2)));
  const auto d12 = dicke(2, 1, 2);
  const double pairing = (wit.entries.adjoint() * d12.entries).trace().real();
  CHECK(pairing == doctest::Approx(a(0, 1)));
}

TEST_CASE("necessary-condition flags") {
  const TripleXYZ all_ones(MatrixXd::Ones(4, 4), MatrixXcd::Ones(4, 4), MatrixXcd::Ones(4, 4));
  CHECK(pcp_necessary_checks(all_ones).all());

  CHECK(pcp_necessary_checks(triple_rho_aap(2.0, 0.5)).all());  // |Y_12|^2 = 1 <= a a' = 1

  const PcpReport bad = pcp_necessary_checks(triple_rho_ab(0.3, 0.5));
  CHECK_FALSE(bad.y_bounded);  // 0.25 > 0.09
}

TEST_CASE("family normalization flag divides by the trace") {
  const auto unnorm = family_rho_aap(2.0, 2.0);
  const auto norm = family_rho_aap(2.0, 2.0, true);
  CHECK(norm.trace() == doctest::Approx(1.0));
  CHECK((unnorm.entries / unnorm.trace() - norm.entries).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("all-ones symmetric family matches the masked product state") {
  const VectorXcd e = VectorXcd::Ones(3);
  const auto masked = project(product_state(e, e), Regime::LDOI);
  const auto family = family_rho_ab(1.0, 1.0);
  CHECK((masked.entries - family.entries).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("psd of an encoded triple matches the blockwise criterion") {
  Rng rng(47);
  for (int rep = 0; rep < 100; ++rep) {
    const int n = 2 + static_cast<int>(rng.uniform() * 3);
    const TripleXYZ t = random_triple(rng, n);
    const bool full = is_psd(rho_from_triple(t));
    bool blockwise = is_psd(t.Y);
    for (int i = 0; i < n && blockwise; ++i)
      for (int j = i + 1; j < n && blockwise; ++j) {
        MatrixXcd block(2, 2);
        block << t.X(i, j), t.Z(i, j), t.Z(j, i), t.X(j, i);
        if (!is_psd(block)) blockwise = false;
      }
    CHECK(full == blockwise);
  }
}

TEST_CASE("regime detection prefers the finest pattern") {
  CHECK(detect_regime(family_rho_aap(2.0, 0.5)) == Regime::CLDUI);
  CHECK(detect_regime(dicke(3, 1, 2)) == Regime::LDUI);
  CHECK(detect_regime(family_rho_ab(0.5, 0.25)) == Regime::LDOI);
  Rng rng(53);
  CHECK(detect_regime(random_hermitian(rng, 9, {3, 3})) == Regime::Generic);
}

TEST_CASE("triple json round trip") {
  Rng rng(59);
  const TripleXYZ t = random_triple(rng, 3);
  const TripleXYZ back = triple_from_json(to_json(t));
  CHECK((back.X - t.X).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((back.Y - t.Y).cwiseAbs().maxCoeff() < 1e-15);
  CHECK((back.Z - t.Z).cwiseAbs().maxCoeff() < 1e-15);
}
