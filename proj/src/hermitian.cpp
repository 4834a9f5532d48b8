#include "dpskit/hermitian.hpp"

#include <nlohmann/json.hpp>

namespace dpskit {

using json = nlohmann::json;

RealSymmetric::RealSymmetric(MatrixXd m) {
  if (m.rows() != m.cols()) throw std::invalid_argument("RealSymmetric: not square");
  if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-8 * (1.0 + m.norm()))
    throw std::invalid_argument("RealSymmetric: not symmetric");
  dim = static_cast<int>(m.rows());
  entries = 0.5 * (m + m.transpose().eval());
}

RealSymmetric RealSymmetric::identity(int n) {
  RealSymmetric r;
  r.dim = n;
  r.entries = MatrixXd::Identity(n, n);
  return r;
}

HermitianMatrix::HermitianMatrix(MatrixXcd m, std::vector<int> regs) {
  if (m.rows() != m.cols()) throw std::invalid_argument("HermitianMatrix: not square");
  const double defect = (m - m.adjoint()).cwiseAbs().maxCoeff();
  if (defect > 1e-8) throw std::invalid_argument("HermitianMatrix: Hermitian defect " + std::to_string(defect));
  dim = static_cast<int>(m.rows());
  entries = 0.5 * (m + m.adjoint().eval());
  registers = std::move(regs);
  if (!registers.empty()) {
    long prod = 1;
    for (int r : registers) {
      if (r <= 0) throw std::invalid_argument("HermitianMatrix: register size must be positive");
      prod *= r;
    }
    if (prod != dim) throw std::invalid_argument("HermitianMatrix: register product mismatch");
  }
}

HermitianMatrix HermitianMatrix::identity(int n, std::vector<int> regs) {
  return HermitianMatrix(MatrixXcd::Identity(n, n), std::move(regs));
}

HermitianMatrix HermitianMatrix::zero(int n, std::vector<int> regs) {
  return HermitianMatrix(MatrixXcd::Zero(n, n), std::move(regs));
}

bool HermitianMatrix::is_real(double tol) const {
  return entries.imag().cwiseAbs().maxCoeff() <= tol * (1.0 + entries.norm());
}

std::vector<int> HermitianMatrix::unflatten(int index) const {
  std::vector<int> multi(registers.size());
  for (int k = register_count() - 1; k >= 0; --k) {
    multi[k] = index % registers[k];
    index /= registers[k];
  }
  return multi;
}

int HermitianMatrix::flatten(const std::vector<int>& multi) const {
  int index = 0;
  for (int k = 0; k < register_count(); ++k) index = index * registers[k] + multi[k];
  return index;
}

HermitianMatrix kron(const HermitianMatrix& a, const HermitianMatrix& b) {
  MatrixXcd out(a.dim * b.dim, a.dim * b.dim);
  for (int i = 0; i < a.dim; ++i)
    for (int j = 0; j < a.dim; ++j)
      out.block(i * b.dim, j * b.dim, b.dim, b.dim) = a.entries(i, j) * b.entries;
  std::vector<int> regs = a.registers;
  regs.insert(regs.end(), b.registers.begin(), b.registers.end());
  if (a.registers.empty() || b.registers.empty()) regs.clear();
  return HermitianMatrix(std::move(out), std::move(regs));
}

namespace {

void check_register_subset(const HermitianMatrix& m, const std::vector<int>& subset) {
  if (m.registers.empty())
    throw std::invalid_argument("register metadata required");
  for (int r : subset)
    if (r < 0 || r >= m.register_count())
      throw std::invalid_argument("invalid register index " + std::to_string(r));
}

}  // namespace

HermitianMatrix partial_trace(const HermitianMatrix& m, const std::vector<int>& traced_registers) {
  check_register_subset(m, traced_registers);
  std::vector<bool> traced(m.registers.size(), false);
  for (int r : traced_registers) traced[r] = true;

  std::vector<int> kept_regs, traced_dims;
  for (int k = 0; k < m.register_count(); ++k)
    (traced[k] ? traced_dims : kept_regs).push_back(m.registers[k]);
  long kept_dim = 1, traced_dim = 1;
  for (int r : kept_regs) kept_dim *= r;
  for (int r : traced_dims) traced_dim *= r;

  MatrixXcd out = MatrixXcd::Zero(kept_dim, kept_dim);
  std::vector<int> row(m.registers.size()), col(m.registers.size());
  for (int a = 0; a < kept_dim; ++a) {
    for (int b = 0; b < kept_dim; ++b) {
      // Decode kept parts of the row/col multi-indices.
      Complex sum = 0.0;
      for (long s = 0; s < traced_dim; ++s) {
        long ra = a, rb = b, rs = s;
        for (int k = m.register_count() - 1; k >= 0; --k) {
          if (traced[k]) {
            row[k] = col[k] = static_cast<int>(rs % m.registers[k]);
            rs /= m.registers[k];
          } else {
            row[k] = static_cast<int>(ra % m.registers[k]);
            col[k] = static_cast<int>(rb % m.registers[k]);
            ra /= m.registers[k];
            rb /= m.registers[k];
          }
        }
        sum += m.entries(m.flatten(row), m.flatten(col));
      }
      out(a, b) = sum;
    }
  }
  return HermitianMatrix(std::move(out), kept_regs);
}

HermitianMatrix partial_transpose(const HermitianMatrix& m, const std::vector<int>& transposed_registers) {
  check_register_subset(m, transposed_registers);
  std::vector<bool> tp(m.registers.size(), false);
  for (int r : transposed_registers) tp[r] = true;

  MatrixXcd out(m.dim, m.dim);
  for (int r = 0; r < m.dim; ++r) {
    std::vector<int> row = m.unflatten(r);
    for (int c = 0; c < m.dim; ++c) {
      std::vector<int> col = m.unflatten(c);
      std::vector<int> srow = row, scol = col;
      for (int k = 0; k < m.register_count(); ++k)
        if (tp[k]) std::swap(srow[k], scol[k]);
      out(r, c) = m.entries(m.flatten(srow), m.flatten(scol));
    }
  }
  return HermitianMatrix(std::move(out), m.registers);
}

double min_eigenvalue(const MatrixXcd& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> solver(real_embedding(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double min_eigenvalue(const HermitianMatrix& m) { return min_eigenvalue(m.entries); }

MatrixXd real_embedding(const MatrixXcd& m) {
  const long d = m.rows();
  MatrixXd out(2 * d, 2 * d);
  out.topLeftCorner(d, d) = m.real();
  out.bottomRightCorner(d, d) = m.real();
  out.topRightCorner(d, d) = -m.imag();
  out.bottomLeftCorner(d, d) = m.imag();
  return out;
}

RealSymmetric real_embedding(const HermitianMatrix& m) {
  return RealSymmetric(real_embedding(m.entries));
}

bool is_psd(const MatrixXcd& m, double scale) {
  return min_eigenvalue(m) >= -scale * (1.0 + m.norm());
}

bool is_psd(const HermitianMatrix& m, double scale) { return is_psd(m.entries, scale); }

namespace {

json matrix_to_json(const Eigen::Ref<const MatrixXd>& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd matrix_from_json(const json& rows) {
  const long n = static_cast<long>(rows.size());
  const long c = n == 0 ? 0 : static_cast<long>(rows.at(0).size());
  MatrixXd m(n, c);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < c; ++j) m(i, j) = rows.at(i).at(j).get<double>();
  return m;
}

}  // namespace

std::string to_json(const HermitianMatrix& m) {
  json j;
  j["dim"] = m.dim;
  j["registers"] = m.registers;
  j["re"] = matrix_to_json(m.entries.real());
  if (!m.is_real()) j["im"] = matrix_to_json(m.entries.imag());
  return j.dump();
}

HermitianMatrix hermitian_from_json(const std::string& text) {
  const json j = json::parse(text);
  const int dim = j.at("dim").get<int>();
  MatrixXcd m = MatrixXcd::Zero(dim, dim);
  m.real() = matrix_from_json(j.at("re"));
  if (j.contains("im")) m.imag() = matrix_from_json(j.at("im"));
  std::vector<int> regs;
  if (j.contains("registers")) regs = j.at("registers").get<std::vector<int>>();
  if (m.rows() != dim) throw std::invalid_argument("hermitian_from_json: dim mismatch");
  return HermitianMatrix(std::move(m), std::move(regs));
}

std::string to_json(const RealSymmetric& m) {
  json j;
  j["n"] = m.dim;
  j["entries"] = matrix_to_json(m.entries);
  return j.dump();
}

RealSymmetric real_symmetric_from_json(const std::string& text) {
  const json j = json::parse(text);
  MatrixXd m = matrix_from_json(j.at("entries"));
  if (j.contains("n") && j.at("n").get<int>() != m.rows())
    throw std::invalid_argument("real_symmetric_from_json: dim mismatch");
  return RealSymmetric(std::move(m));
}

}  // namespace dpskit
