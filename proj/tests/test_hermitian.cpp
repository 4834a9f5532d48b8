#include <doctest.h>

#include "dpskit/states.hpp"
#include "test_util.hpp"

using namespace dpskit;
using testutil::product_state;
using testutil::random_complex_vector;
using testutil::random_hermitian;

TEST_CASE("kron identities") {
  const auto i2 = HermitianMatrix::identity(2, {2});
  const auto i4 = kron(i2, i2);
  CHECK(i4.dim == 4);
  CHECK(i4.registers == std::vector<int>{2, 2});
  CHECK((i4.entries - MatrixXcd::Identity(4, 4)).norm() == doctest::Approx(0.0));

  MatrixXcd e1 = MatrixXcd::Zero(2, 2), e2 = MatrixXcd::Zero(2, 2);
  e1(0, 0) = 1;
  e2(1, 1) = 1;
  const auto rank_one = kron(HermitianMatrix(e1, {2}), HermitianMatrix(e2, {2}));
  MatrixXcd expected = MatrixXcd::Zero(4, 4);
  expected(1, 1) = 1;  // position (12,12)
  CHECK((rank_one.entries - expected).norm() == doctest::Approx(0.0));
}

TEST_CASE("kron diagonal matches the product of moduli") {
  Rng rng(11);
  for (int rep = 0; rep < 10; ++rep) {
    const int n = 3;
    const VectorXcd x = random_complex_vector(rng, n), y = random_complex_vector(rng, n);
    const HermitianMatrix m = product_state(x, y);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        CHECK(m.entries(i * n + j, i * n + j).real() ==
              doctest::Approx(std::norm(x(i)) * std::norm(y(j))).epsilon(1e-12));
  }
}

TEST_CASE("partial trace of a product extension rescales by the norm") {
  Rng rng(5);
  const int n = 3, t = 2, s = 1;
  const VectorXcd x = random_complex_vector(rng, n), y = random_complex_vector(rng, n);
  const HermitianMatrix yy(MatrixXcd(y * y.adjoint()), {n});
  HermitianMatrix ext = product_state(x, y);
  for (int k = 1; k < t; ++k) ext = kron(ext, yy);
  std::vector<int> last_s;
  for (int r = t - s + 1; r <= t; ++r) last_s.push_back(r);
  const auto traced = partial_trace(ext, last_s);
  const HermitianMatrix small = product_state(x, y);
  const double scale = std::pow(y.squaredNorm(), s);
  CHECK((traced.entries - scale * small.entries).cwiseAbs().maxCoeff() <
        1e-10 * (1 + scale));
}

TEST_CASE("symmetrized basis state: trace out one register") {
  const auto d12 = dicke(2, 1, 2);
  const auto tr = partial_trace(d12, {1});
  CHECK((tr.entries - 0.5 * MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);

  const auto id = HermitianMatrix::identity(4, {2, 2});
  const auto tr_id = partial_trace(id, {1});
  CHECK((tr_id.entries - 2.0 * MatrixXcd::Identity(2, 2)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(partial_trace(id, {0, 1}).entries(0, 0).real() == doctest::Approx(4.0));
}

TEST_CASE("partial trace preserves the full trace") {
  Rng rng(17);
  const auto m = random_hermitian(rng, 12, {2, 3, 2});
  for (const auto& subset : std::vector<std::vector<int>>{{0}, {1}, {2}, {0, 2}, {0, 1, 2}})
    CHECK(partial_trace(m, subset).trace() == doctest::Approx(m.trace()).epsilon(1e-12));
}

TEST_CASE("partial transpose of the symmetrized state has the corner form") {
  const auto d12 = dicke(2, 1, 2);
  const auto pt = partial_transpose(d12, {1});
  MatrixXcd expected = MatrixXcd::Zero(4, 4);
  expected(0, 3) = expected(3, 0) = 0.5;
  expected(1, 1) = expected(2, 2) = 0.5;
  CHECK((pt.entries - expected).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(min_eigenvalue(pt) == doctest::Approx(-0.5).epsilon(1e-10));
}

TEST_CASE("partial transpose basics") {
  const auto id = HermitianMatrix::identity(8, {2, 2, 2});
  for (const auto& subset : std::vector<std::vector<int>>{{0}, {1, 2}, {0, 1, 2}})
    CHECK((partial_transpose(id, subset).entries - id.entries).cwiseAbs().maxCoeff() == 0.0);

  Rng rng(3);
  const auto m = random_hermitian(rng, 12, {3, 4});
  const auto pt = partial_transpose(m, {1});
  CHECK((pt.entries - pt.entries.adjoint()).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(pt.trace() == doctest::Approx(m.trace()));
  const auto back = partial_transpose(pt, {1});
  CHECK((back.entries - m.entries).cwiseAbs().maxCoeff() < 1e-12);
  CHECK_THROWS(partial_transpose(m, {2}));
}

TEST_CASE("triple encoding swaps its last two parts under partial transpose") {
  Rng rng(23);
  for (int rep = 0; rep < 5; ++rep) {
    const int n = 4;
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
    const TripleXYZ triple(x, y, z);
    const auto lhs = partial_transpose(rho_from_triple(triple), {1});
    const auto rhs = rho_from_triple(TripleXYZ(x, z, y));
    CHECK((lhs.entries - rhs.entries).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("smallest eigenvalue") {
  CHECK(min_eigenvalue(HermitianMatrix::identity(3)) == doctest::Approx(1.0));
  CHECK(min_eigenvalue(HermitianMatrix::zero(4)) == doctest::Approx(0.0));
}

TEST_CASE("real embedding") {
  Rng rng(29);
  MatrixXcd real_input = MatrixXd::Random(3, 3).cast<Complex>();
  real_input = 0.5 * (real_input + real_input.adjoint().eval());
  const auto emb = real_embedding(HermitianMatrix(real_input));
  CHECK((emb.entries.topLeftCorner(3, 3) - real_input.real()).norm() < 1e-14);
  CHECK(emb.entries.topRightCorner(3, 3).norm() == doctest::Approx(0.0));

  const auto one = real_embedding(HermitianMatrix(MatrixXcd::Ones(1, 1)));
  CHECK((one.entries - MatrixXd::Identity(2, 2)).norm() == doctest::Approx(0.0));

  MatrixXcd pauli(2, 2);
  pauli << Complex(0, 0), Complex(0, 1), Complex(0, -1), Complex(0, 0);
  const auto emb2 = real_embedding(HermitianMatrix(pauli));
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(emb2.entries);
  const VectorXd vals = eig.eigenvalues();
  CHECK(vals(0) == doctest::Approx(-1.0));
  CHECK(vals(1) == doctest::Approx(-1.0));
  CHECK(vals(2) == doctest::Approx(1.0));
  CHECK(vals(3) == doctest::Approx(1.0));

  for (int rep = 0; rep < 100; ++rep) {
    const int dim = 1 + static_cast<int>(rng.uniform() * 16);
    const auto m = random_hermitian(rng, dim);
    Eigen::SelfAdjointEigenSolver<MatrixXd> es(real_embedding(m).entries, Eigen::EigenvaluesOnly);
    CHECK(std::abs(es.eigenvalues().minCoeff() - min_eigenvalue(m)) <
          1e-9 * (1 + m.frobenius_norm()));
  }
}

TEST_CASE("constructor symmetrizes and rejects") {
  MatrixXcd m = MatrixXcd::Identity(2, 2);
  m(0, 1) = Complex(0.0, 1e-10);  // small defect is absorbed
  const HermitianMatrix h(m);
  CHECK(std::abs(h.entries(0, 1) - std::conj(h.entries(1, 0))) == 0.0);

  MatrixXcd bad = MatrixXcd::Zero(2, 2);
  bad(0, 1) = 1.0;  // defect 1 >> 1e-8
  CHECK_THROWS(HermitianMatrix(bad));
  CHECK_THROWS(HermitianMatrix(MatrixXcd::Identity(4, 4), {3, 2}));
}

TEST_CASE("json round trip") {
  Rng rng(31);
  const auto m = random_hermitian(rng, 6, {2, 3});
  const auto back = hermitian_from_json(to_json(m));
  CHECK(back.registers == m.registers);
  CHECK((back.entries - m.entries).cwiseAbs().maxCoeff() < 1e-15);

  const auto real = HermitianMatrix(MatrixXcd::Identity(3, 3));
  CHECK(to_json(real).find("\"im\"") == std::string::npos);
}
