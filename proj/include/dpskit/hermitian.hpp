#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace dpskit {

using Complex = std::complex<double>;
using MatrixXcd = Eigen::MatrixXcd;
using MatrixXd = Eigen::MatrixXd;
using VectorXcd = Eigen::VectorXcd;
using VectorXd = Eigen::VectorXd;

/// Dense real symmetric matrix.
struct RealSymmetric {
  int dim = 0;
  MatrixXd entries;

  RealSymmetric() = default;
  explicit RealSymmetric(MatrixXd m);

  static RealSymmetric identity(int n);
};

/// Dense complex Hermitian matrix with tensor-register metadata.
///
/// `registers` lists the factor dimensions of the underlying tensor product
/// space (empty for unstructured matrices); their product must equal `dim`.
/// Indexing is row-major over the registers, so for registers [n, n] the
/// flattened index of (i, j) is i*n + j.
struct HermitianMatrix {
  int dim = 0;
  std::vector<int> registers;
  MatrixXcd entries;

  HermitianMatrix() = default;
  // Symmetrizes M <- (M + M*)/2; throws if the defect exceeds 1e-8.
  explicit HermitianMatrix(MatrixXcd m, std::vector<int> regs = {});

  static HermitianMatrix identity(int n, std::vector<int> regs = {});
  static HermitianMatrix zero(int n, std::vector<int> regs = {});

  double trace() const { return entries.trace().real(); }
  double frobenius_norm() const { return entries.norm(); }
  double max_abs() const { return entries.cwiseAbs().maxCoeff(); }
  bool is_real(double tol = 1e-13) const;

  // Multi-index helpers over the register structure.
  int register_count() const { return static_cast<int>(registers.size()); }
  std::vector<int> unflatten(int index) const;
  int flatten(const std::vector<int>& multi) const;
};

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b);

// Traces out the registers listed in `traced_registers` (0-based indices).
HermitianMatrix partial_trace(const HermitianMatrix& m,
                              const std::vector<int>& traced_registers);

// Transposes the registers listed in `transposed_registers` (0-based).
HermitianMatrix partial_transpose(const HermitianMatrix& m,
                                  const std::vector<int>& transposed_registers);

// Smallest eigenvalue via a symmetric eigensolver on the real embedding.
double min_eigenvalue(const HermitianMatrix& m);
double min_eigenvalue(const MatrixXcd& m);

// 2d x 2d block matrix [[Re M, -Im M], [Im M, Re M]]; PSD iff M is, with
// eigenvalues of M doubled in multiplicity.
RealSymmetric real_embedding(const HermitianMatrix& m);
MatrixXd real_embedding(const MatrixXcd& m);

// Repo-wide PSD convention: accepted when min eig >= -1e-8 * (1 + ||M||_F).
bool is_psd(const HermitianMatrix& m, double scale = 1e-8);
bool is_psd(const MatrixXcd& m, double scale = 1e-8);

// JSON schema {"dim": d, "registers": [...], "re": [[...]], "im": [[...]]};
// "im" may be omitted for real matrices.
std::string to_json(const HermitianMatrix& m);
HermitianMatrix hermitian_from_json(const std::string& text);

std::string to_json(const RealSymmetric& m);
RealSymmetric real_symmetric_from_json(const std::string& text);

}  // namespace dpskit
