#pragma once

#include "dpskit/hermitian.hpp"

namespace dpskit {

enum class Regime { Generic, CLDUI, LDUI, LDOI };

const char* regime_name(Regime r);
Regime regime_from_name(const std::string& name);

/// Compact encoding of a local-diagonal-orthogonal-invariant bipartite state:
/// X holds the (ij,ij) entries, Y the (ii,jj) entries, Z the (ij,ji) entries.
/// The three diagonals must agree.
struct TripleXYZ {
  int n = 0;
  MatrixXd X;
  MatrixXcd Y;
  MatrixXcd Z;

  TripleXYZ() = default;
  TripleXYZ(MatrixXd x, MatrixXcd y, MatrixXcd z, double diag_tol = 1e-10);

  bool is_real(double tol = 1e-13) const;
};

/// Witness data (S, T); see witness_matrix.
struct WitnessPair {
  int n = 0;
  MatrixXd S;
  MatrixXcd T;

  WitnessPair() = default;
  WitnessPair(MatrixXd s, MatrixXcd t);
};

struct NotLDOI : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// The n^2 x n^2 bipartite state with registers [n, n] whose nonzero entries
// are given by the triple. Block structure: Y on the {(i,i)} labels plus a
// 2x2 block [[X_ij, Z_ij], [Z_ji, X_ji]] per pair i < j.
HermitianMatrix rho_from_triple(const TripleXYZ& t);

// Inverse of rho_from_triple; off-pattern entries above `tol` raise NotLDOI.
TripleXYZ triple_from_rho(const HermitianMatrix& rho, double tol = 1e-10);

// Support masking onto the invariance pattern of the regime (exact
// projection). Generic returns the input unchanged.
HermitianMatrix project(const HermitianMatrix& rho, Regime regime);

// True when the support of rho lies in the regime's pattern (within tol).
bool matches_regime(const HermitianMatrix& rho, Regime regime, double tol = 1e-10);
// Finest of CLDUI/LDUI/LDOI matching rho, else Generic.
Regime detect_regime(const HermitianMatrix& rho, double tol = 1e-10);

// M with S on the (ij,ij) diagonal and T spread over the (jj,ii) positions;
// pairs with CLDUI states as <M_{S,T}, rho_{(X,Y)}> = <S,X> + <T,Y>.
HermitianMatrix witness_matrix(const WitnessPair& w);

/// Necessary conditions for a triple to encode a separable state; any false
/// flag certifies non-membership.
struct PcpReport {
  bool x_nonnegative = false;
  bool y_psd = false;
  bool z_psd = false;
  bool y_bounded = false;  // |Y_ij|^2 <= X_ij X_ji
  bool z_bounded = false;  // |Z_ij|^2 <= X_ij X_ji
  bool all() const { return x_nonnegative && y_psd && z_psd && y_bounded && z_bounded; }
};

PcpReport pcp_necessary_checks(const TripleXYZ& t, double tol = 1e-10);

// Families used throughout the test harness. Unnormalized as constructed;
// pass normalize=true to divide by the trace.
HermitianMatrix family_rho_aap(double a, double ap, bool normalize = false);
HermitianMatrix family_rho_ab(double a, double b, bool normalize = false);
TripleXYZ triple_rho_aap(double a, double ap);
TripleXYZ triple_rho_ab(double a, double b);

// Symmetrized basis state |D_ij><D_ij| on C^n x C^n (1-based i, j).
HermitianMatrix dicke(int n, int i, int j);

// Triple JSON schema {"n":, "X":, "Y_re":, "Y_im"?, "Z_re":, "Z_im"?}.
std::string to_json(const TripleXYZ& t);
TripleXYZ triple_from_json(const std::string& text);

}  // namespace dpskit
