#pragma once

#include "dpskit/hermitian.hpp"
#include "dpskit/ppt2.hpp"

namespace dpskit::testutil {

inline HermitianMatrix random_hermitian(Rng& rng, int dim, std::vector<int> regs = {}) {
  MatrixXcd m(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) m(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return HermitianMatrix(0.5 * (m + m.adjoint().eval()), std::move(regs));
}

inline HermitianMatrix random_psd(Rng& rng, int dim, std::vector<int> regs = {}) {
  MatrixXcd g(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) g(i, j) = Complex(rng.gaussian(), rng.gaussian());
  return HermitianMatrix(g * g.adjoint(), std::move(regs));
}

inline VectorXcd random_complex_vector(Rng& rng, int dim) {
  VectorXcd v(dim);
  for (int i = 0; i < dim; ++i) v(i) = Complex(rng.gaussian(), rng.gaussian());
  return v;
}

inline HermitianMatrix product_state(const VectorXcd& x, const VectorXcd& y) {
  const HermitianMatrix a(MatrixXcd(x * x.adjoint()), {static_cast<int>(x.size())});
  const HermitianMatrix b(MatrixXcd(y * y.adjoint()), {static_cast<int>(y.size())});
  return kron(a, b);
}

}  // namespace dpskit::testutil
