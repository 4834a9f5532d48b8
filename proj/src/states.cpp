#include "dpskit/states.hpp"

#include <nlohmann/json.hpp>

namespace dpskit {

using json = nlohmann::json;

const char* regime_name(Regime r) {
  switch (r) {
    case Regime::Generic: return "generic";
    case Regime::CLDUI: return "cldui";
    case Regime::LDUI: return "ldui";
    case Regime::LDOI: return "ldoi";
  }
  return "?";
}

Regime regime_from_name(const std::string& name) {
  if (name == "generic") return Regime::Generic;
  if (name == "cldui") return Regime::CLDUI;
  if (name == "ldui") return Regime::LDUI;
  if (name == "ldoi") return Regime::LDOI;
  throw std::invalid_argument("unknown regime: " + name);
}

TripleXYZ::TripleXYZ(MatrixXd x, MatrixXcd y, MatrixXcd z, double diag_tol) {
  if (x.rows() != x.cols() || y.rows() != x.rows() || y.rows() != y.cols() ||
      z.rows() != x.rows() || z.rows() != z.cols())
    throw std::invalid_argument("TripleXYZ: shape mismatch");
  n = static_cast<int>(x.rows());
  for (int i = 0; i < n; ++i) {
    if (std::abs(x(i, i) - y(i, i).real()) > diag_tol || std::abs(y(i, i).imag()) > diag_tol ||
        std::abs(x(i, i) - z(i, i).real()) > diag_tol || std::abs(z(i, i).imag()) > diag_tol)
      throw std::invalid_argument("TripleXYZ: diagonal mismatch");
  }
  X = std::move(x);
  Y = std::move(y);
  Z = std::move(z);
}

bool TripleXYZ::is_real(double tol) const {
  return Y.imag().cwiseAbs().maxCoeff() <= tol && Z.imag().cwiseAbs().maxCoeff() <= tol;
}

WitnessPair::WitnessPair(MatrixXd s, MatrixXcd t) {
  if (s.rows() != s.cols() || t.rows() != s.rows() || t.rows() != t.cols())
    throw std::invalid_argument("WitnessPair: shape mismatch");
  n = static_cast<int>(s.rows());
  S = std::move(s);
  T = std::move(t);
}

HermitianMatrix rho_from_triple(const TripleXYZ& t) {
  const int n = t.n;
  MatrixXcd m = MatrixXcd::Zero(n * n, n * n);
  auto idx = [n](int i, int j) { return i * n + j; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m(idx(i, j), idx(i, j)) = t.X(i, j);
      if (i != j) {
        m(idx(i, i), idx(j, j)) = t.Y(i, j);
        m(idx(i, j), idx(j, i)) = t.Z(i, j);
      }
    }
  return HermitianMatrix(std::move(m), {n, n});
}

namespace {

// Support membership for the three invariance patterns, on index pairs
// ((i,j),(k,l)): CLDUI keeps (ij,ij) and (ii,jj); LDUI keeps (ij,ij) and
// (ij,ji); LDOI keeps the union.
bool on_pattern(Regime r, int i, int j, int k, int l) {
  const bool diag = (i == k && j == l);
  const bool y_pos = (i == j && k == l);
  const bool z_pos = (i == l && j == k);
  switch (r) {
    case Regime::Generic: return true;
    case Regime::CLDUI: return diag || y_pos;
    case Regime::LDUI: return diag || z_pos;
    case Regime::LDOI: return diag || y_pos || z_pos;
  }
  return true;
}

int bipartite_side(const HermitianMatrix& rho) {
  if (rho.registers.size() != 2 || rho.registers[0] != rho.registers[1])
    throw std::invalid_argument("expected registers [n, n]");
  return rho.registers[0];
}

}  // namespace

TripleXYZ triple_from_rho(const HermitianMatrix& rho, double tol) {
  const int n = bipartite_side(rho);
  if (!matches_regime(rho, Regime::LDOI, tol))
    throw NotLDOI("off-pattern entry exceeds tolerance");
  auto idx = [n](int i, int j) { return i * n + j; };
  MatrixXd X(n, n);
  MatrixXcd Y(n, n), Z(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      X(i, j) = rho.entries(idx(i, j), idx(i, j)).real();
      Y(i, j) = i == j ? Complex(X(i, i)) : rho.entries(idx(i, i), idx(j, j));
      Z(i, j) = i == j ? Complex(X(i, i)) : rho.entries(idx(i, j), idx(j, i));
    }
  return TripleXYZ(std::move(X), std::move(Y), std::move(Z));
}

HermitianMatrix project(const HermitianMatrix& rho, Regime regime) {
  if (regime == Regime::Generic) return rho;
  const int n = bipartite_side(rho);
  MatrixXcd m = MatrixXcd::Zero(rho.dim, rho.dim);
  auto idx = [n](int i, int j) { return i * n + j; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          if (on_pattern(regime, i, j, k, l))
            m(idx(i, j), idx(k, l)) = rho.entries(idx(i, j), idx(k, l));
  return HermitianMatrix(std::move(m), rho.registers);
}

bool matches_regime(const HermitianMatrix& rho, Regime regime, double tol) {
  if (regime == Regime::Generic) return true;
  const int n = bipartite_side(rho);
  auto idx = [n](int i, int j) { return i * n + j; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          if (!on_pattern(regime, i, j, k, l) &&
              std::abs(rho.entries(idx(i, j), idx(k, l))) > tol)
            return false;
  return true;
}

Regime detect_regime(const HermitianMatrix& rho, double tol) {
  if (matches_regime(rho, Regime::CLDUI, tol)) return Regime::CLDUI;
  if (matches_regime(rho, Regime::LDUI, tol)) return Regime::LDUI;
  if (matches_regime(rho, Regime::LDOI, tol)) return Regime::LDOI;
  return Regime::Generic;
}

HermitianMatrix witness_matrix(const WitnessPair& w) {
  const int n = w.n;
  MatrixXcd m = MatrixXcd::Zero(n * n, n * n);
  auto idx = [n](int i, int j) { return i * n + j; };
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      m(idx(i, j), idx(i, j)) += w.S(i, j);
      // T sits on the (ii,jj) positions so that the pairing against an
      // encoded (X, Y) state is exactly <S,X> + <T,Y>
      m(idx(i, i), idx(j, j)) += w.T(i, j);
    }
  return HermitianMatrix(std::move(m), {n, n});
}

PcpReport pcp_necessary_checks(const TripleXYZ& t, double tol) {
  PcpReport r;
  r.x_nonnegative = (t.X.array() >= -tol).all();
  r.y_psd = is_psd(t.Y);
  r.z_psd = is_psd(t.Z);
  r.y_bounded = r.z_bounded = true;
  for (int i = 0; i < t.n; ++i)
    for (int j = 0; j < t.n; ++j) {
      if (i == j) continue;
      const double cap = t.X(i, j) * t.X(j, i) + tol;
      if (std::norm(t.Y(i, j)) > cap) r.y_bounded = false;
      if (std::norm(t.Z(i, j)) > cap) r.z_bounded = false;
    }
  return r;
}

TripleXYZ triple_rho_aap(double a, double ap) {
  MatrixXd X(3, 3);
  X << 1, a, ap,
       ap, 1, a,
       a, ap, 1;
  MatrixXcd Y = MatrixXcd::Ones(3, 3);
  MatrixXcd Z = MatrixXcd::Identity(3, 3);
  return TripleXYZ(std::move(X), std::move(Y), std::move(Z));
}

TripleXYZ triple_rho_ab(double a, double b) {
  MatrixXd X = MatrixXd::Constant(3, 3, a);
  MatrixXcd Y = MatrixXcd::Constant(3, 3, b);
  X.diagonal().setOnes();
  Y.diagonal().setOnes();
  return TripleXYZ(X, Y, X.cast<Complex>());
}

namespace {

HermitianMatrix maybe_normalize(HermitianMatrix m, bool normalize) {
  if (normalize) m.entries /= m.trace();
  return m;
}

}  // namespace

HermitianMatrix family_rho_aap(double a, double ap, bool normalize) {
  if (a < 0 || ap < 0) throw std::invalid_argument("family_rho_aap: parameters must be >= 0");
  return maybe_normalize(rho_from_triple(triple_rho_aap(a, ap)), normalize);
}

HermitianMatrix family_rho_ab(double a, double b, bool normalize) {
  return maybe_normalize(rho_from_triple(triple_rho_ab(a, b)), normalize);
}

HermitianMatrix dicke(int n, int i, int j) {
  if (n <= 0 || i < 1 || j < 1 || i > n || j > n)
    throw std::invalid_argument("dicke: index out of range");
  VectorXcd v = VectorXcd::Zero(n * n);
  const int a = i - 1, b = j - 1;
  if (a == b) {
    v(a * n + a) = 1.0;
  } else {
    v(a * n + b) = v(b * n + a) = 1.0 / std::sqrt(2.0);
  }
  return HermitianMatrix(v * v.adjoint(), {n, n});
}

namespace {

json real_matrix_json(const Eigen::Ref<const MatrixXd>& m) {
  json rows = json::array();
  for (long i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (long j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

MatrixXd real_matrix_from_json(const json& rows) {
  const long n = static_cast<long>(rows.size());
  MatrixXd m(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) m(i, j) = rows.at(i).at(j).get<double>();
  return m;
}

}  // namespace

std::string to_json(const TripleXYZ& t) {
  json j;
  j["n"] = t.n;
  j["X"] = real_matrix_json(t.X);
  j["Y_re"] = real_matrix_json(t.Y.real());
  j["Z_re"] = real_matrix_json(t.Z.real());
  if (!t.is_real()) {
    j["Y_im"] = real_matrix_json(t.Y.imag());
    j["Z_im"] = real_matrix_json(t.Z.imag());
  }
  return j.dump();
}

TripleXYZ triple_from_json(const std::string& text) {
  const json j = json::parse(text);
  MatrixXd X = real_matrix_from_json(j.at("X"));
  MatrixXcd Y = real_matrix_from_json(j.at("Y_re")).cast<Complex>();
  MatrixXcd Z = real_matrix_from_json(j.at("Z_re")).cast<Complex>();
  if (j.contains("Y_im")) Y.imag() = real_matrix_from_json(j.at("Y_im"));
  if (j.contains("Z_im")) Z.imag() = real_matrix_from_json(j.at("Z_im"));
  if (j.contains("n") && j.at("n").get<int>() != X.rows())
    throw std::invalid_argument("triple_from_json: dim mismatch");
  return TripleXYZ(std::move(X), std::move(Y), std::move(Z));
}

}  // namespace dpskit
