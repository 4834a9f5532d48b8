#pragma once

#include "dpskit/relax.hpp"

namespace dpskit {

// The classical 5x5 copositive matrix with alternating sign pattern.
RealSymmetric horn_matrix();

// Feasibility of A = P + N with P psd and N entrywise nonnegative.
SolveReport k0_membership(const RealSymmetric& a, const SolveOptions& opts = {});

// Sum-of-squares test for |x|^{2t} * (x.^2)^T A (x.^2) via a Gram LMI on the
// degree-(t+2) monomial basis, block-diagonalized by exponent parity class.
SolveReport kt_membership(const RealSymmetric& a, int t, const SolveOptions& opts = {});

// Exact minimum of x^T A x over the rational simplex grid with denominators
// up to grid_depth. Lower-bound oracle for tests.
double copositive_brute_oracle(const RealSymmetric& a, int grid_depth);

/// Comparison of the symmetric-hierarchy verdict on the induced pairing state
/// against the matrix-cone test (doubly nonnegative at level 1).
struct BridgeReport {
  Verdict solver_verdict = Verdict::Marginal;
  double solver_margin = 0.0;
  bool matrix_side = false;       // level 1: X doubly nonnegative
  bool agree = false;             // level 1 only
  int witnesses_checked = 0;      // level >= 2
  int witness_violations = 0;     // witness says infeasible but solver disagrees
};

BridgeReport dps_cp_bridge_check(const RealSymmetric& x, int t,
                                 const std::vector<RealSymmetric>& witnesses = {},
                                 const SolveOptions& opts = {});

/// min <C, X> over symmetric X whose induced symmetric pairing state admits a
/// level-t certificate; the level-(t) membership model is solved in the LDUI
/// regime with X entering the trace-recovery constraints linearly.
struct SearchResult {
  double value = 0.0;
  SolveStatus status = SolveStatus::Ok;
  Verdict feasibility = Verdict::Feasible;
  MatrixXd minimizer;
  int iterations = 0;
};

SearchResult search_objective(const RealSymmetric& c, int t = 2, const SolveOptions& opts = {});

}  // namespace dpskit
