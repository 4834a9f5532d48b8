#include <map>

#include "dpskit/relax.hpp"

namespace dpskit {

namespace {

MomentKey entry_key(const DpsModel& model, const std::vector<int>& row,
                    const std::vector<int>& col) {
  const int n = model.n;
  MomentKey k;
  if (model.hierarchy == Hierarchy::Dps) {
    k.g.assign(n, 0);
    k.gp.assign(n, 0);
    k.g[row[0]] = 1;
    k.gp[col[0]] = 1;
    k.d = alpha({row.begin() + 1, row.end()}, n);
    k.dp = alpha({col.begin() + 1, col.end()}, n);
  } else {
    k.g.assign(n, 0);
    k.gp.assign(n, 0);
    k.d = alpha(row, n);
    k.dp = alpha(col, n);
  }
  return k;
}

}  // namespace

HermitianMatrix reconstruct_certificate(const DpsModel& model, const AssembledModel& assembled,
                                        const VectorXd& y) {
  const int n = model.n, t = model.t;
  std::map<MomentKey, int> dict;
  for (std::size_t v = 0; v < model.vars.size(); ++v) dict.emplace(model.vars[v].key, v);

  long dim = 1;
  for (int p = 0; p <= t; ++p) dim *= n;
  MatrixXcd cert = MatrixXcd::Zero(dim, dim);
  std::vector<int> row(t + 1), col(t + 1);
  for (long r = 0; r < dim; ++r) {
    long rr = r;
    for (int p = t; p >= 0; --p) {
      row[p] = static_cast<int>(rr % n);
      rr /= n;
    }
    for (long c = r; c < dim; ++c) {
      long cc = c;
      for (int p = t; p >= 0; --p) {
        col[p] = static_cast<int>(cc % n);
        cc /= n;
      }
      MomentKey key = entry_key(model, row, col);
      const bool flip = !key.is_canonical();
      if (flip) key = key.conjugated();
      const auto it = dict.find(key);
      Complex value = 0.0;
      if (it != dict.end()) {
        const int v = it->second;
        value = Complex(assembled.re_expr[v].eval(y), assembled.im_expr[v].eval(y));
        if (flip) value = std::conj(value);
      }
      cert(r, c) = value * model.scale;
      cert(c, r) = std::conj(cert(r, c));
    }
  }
  std::vector<int> regs(t + 1, n);
  return HermitianMatrix(std::move(cert), std::move(regs));
}

CertificateReport verify_certificate(const HermitianMatrix& rho, const DpsModel& model,
                                     const HermitianMatrix& certificate, double trace_tol) {
  CertificateReport rep;
  const int n = model.n, t = model.t;
  const double cscale = 1.0 + certificate.max_abs();

  // invariance under permuting the extension registers (adjacent swaps
  // generate the group); the fully symmetric hierarchy includes register 0
  const int first_swappable = model.hierarchy == Hierarchy::Dps ? 1 : 0;
  double sym_err = 0.0;
  for (int p = first_swappable; p < t; ++p) {
    for (int r = 0; r < certificate.dim; ++r) {
      std::vector<int> rm = certificate.unflatten(r);
      std::swap(rm[p], rm[p + 1]);
      const int r2 = certificate.flatten(rm);
      for (int c = 0; c < certificate.dim; ++c)
        sym_err = std::max(sym_err,
                           std::abs(certificate.entries(r, c) - certificate.entries(r2, c)));
    }
  }
  rep.symmetry_error = sym_err;
  rep.symmetric = sym_err <= 1e-8 * cscale;

  const int smax = model.hierarchy == Hierarchy::Dps ? t : (t + 1) / 2;
  rep.psd_all = true;
  for (int s = 0; s <= smax; ++s) {
    std::vector<int> regs;
    for (int p = 1; p <= s; ++p) regs.push_back(p);
    const HermitianMatrix pt = s == 0 ? certificate : partial_transpose(certificate, regs);
    const double eig = min_eigenvalue(pt);
    rep.transpose_min_eigs.push_back(eig);
    if (eig < -1e-8 * (1.0 + pt.frobenius_norm())) rep.psd_all = false;
  }

  std::vector<int> traced;
  for (int p = 2; p <= t; ++p) traced.push_back(p);
  const HermitianMatrix recovered =
      traced.empty() ? certificate : partial_trace(certificate, traced);
  rep.trace_recovery_error = (recovered.entries - rho.entries).cwiseAbs().maxCoeff();
  rep.trace_ok = rep.trace_recovery_error <= trace_tol * (1.0 + rho.max_abs());

  // kernel propagation: w in ker(rho) forces w (x) e_k2 ... e_kt into the
  // kernel of the extension
  Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(rho.entries);
  rep.kernel_error = 0.0;
  const double kernel_cut = 1e-8 * (1.0 + rho.frobenius_norm());
  long tails = 1;
  for (int p = 2; p <= t; ++p) tails *= n;
  for (int q = 0; q < rho.dim; ++q) {
    if (std::abs(eig.eigenvalues()(q)) > kernel_cut) continue;
    const VectorXcd w = eig.eigenvectors().col(q);
    for (long code = 0; code < tails; ++code) {
      VectorXcd v = VectorXcd::Zero(certificate.dim);
      long cc = code;
      std::vector<int> tail(t - 1);
      for (int p = t - 2; p >= 0; --p) {
        tail[p] = static_cast<int>(cc % n);
        cc /= n;
      }
      for (int b = 0; b < rho.dim; ++b) {
        long idx = b;
        for (int p = 0; p < t - 1; ++p) idx = idx * n + tail[p];
        v(idx) = w(b);
      }
      rep.kernel_error =
          std::max(rep.kernel_error, (certificate.entries * v).cwiseAbs().maxCoeff());
    }
  }
  rep.kernel_ok = rep.kernel_error <= 1e-6 * cscale;
  return rep;
}

CertificateReport verify_certificate(const HermitianMatrix& rho, const DpsModel& model,
                                     const AssembledModel& assembled, const VectorXd& y,
                                     double trace_tol) {
  return verify_certificate(rho, model, reconstruct_certificate(model, assembled, y), trace_tol);
}

}  // namespace dpskit
