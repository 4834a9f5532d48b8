#pragma once

#include <functional>

#include "dpskit/patterns.hpp"
#include "dpskit/sdp.hpp"

namespace dpskit {

enum class Hierarchy { Dps, DpsBose };

/// Declared moment variable (canonical key; self-conjugate keys are real).
struct MomentVar {
  MomentKey key;
  bool real = false;
};

/// Entry reference into the variable table; var < 0 encodes constant zero.
struct ModelEntryRef {
  int var = -1;
  bool conj = false;
  double coeff = 0.0;
};

/// One PSD block of a model: labels, dense entry refs, s (or s') tag.
struct ModelBlock {
  int tag = 0;
  int dim = 0;
  std::vector<std::vector<int>> labels;
  std::vector<ModelEntryRef> entries;  // row-major dim x dim
  const ModelEntryRef& at(int r, int c) const { return entries[r * dim + c]; }
};

struct EqualityTerm {
  int var;
  double coeff;
  bool conj;
};

/// Linear trace-recovery constraint sum coeff * L(key) = rhs, where rhs may
/// also involve external (symbolic) variables.
struct Equality {
  std::vector<EqualityTerm> terms;
  Complex rhs_constant = 0.0;
  std::vector<std::pair<int, Complex>> rhs_external;
  int pivot = -1;  // variable solved out by elimination
};

/// Block-diagonal membership problem for one hierarchy level.
struct DpsModel {
  int n = 0, t = 0;
  Regime regime = Regime::Generic;
  Hierarchy hierarchy = Hierarchy::Dps;
  bool state_real = true;
  double scale = 1.0;  // trace normalization divisor applied to the state
  int num_external = 0;
  std::vector<MomentVar> vars;
  std::vector<ModelBlock> blocks;
  std::vector<Equality> equalities;

  std::string dump_json() const;
};

struct EqualityRhs {
  Complex constant = 0.0;
  std::vector<std::pair<int, Complex>> external;
};
using RhsFn = std::function<EqualityRhs(int i, int k, int j, int l)>;

// Moment-side model: variables are the canonical moment keys surviving the
// regime filter, PSD blocks follow moment_block_layout, equalities encode
// partial-trace recovery of the (trace-normalized) state.
DpsModel build_dps_moment(const HermitianMatrix& rho, int t, Regime regime);

// Same structure with symbolic right-hand sides; used when the recovered
// state itself carries free variables.
DpsModel build_dps_moment_general(int n, int t, Regime regime, int num_external,
                                  const RhsFn& rhs, bool state_real = true);

// Tensor-side oracle: blocks from the clique partition of [n]^(t+1) per
// transpose depth, compressed over the symmetric-group orbits of the B
// registers; equalities generated by direct sequence summation.
DpsModel build_dps_tensor(const HermitianMatrix& rho, int t, Regime regime);

// Fully symmetric hierarchy on Bose-symmetric input: one variable set over
// exponent pairs of weight t+1, transpose depths 0..floor((t+1)/2).
DpsModel build_dps_bose(const HermitianMatrix& rho, int t, bool ldui_filter = false);

/// Result of lowering a DpsModel to a real LMI. Keeps the affine expressions
/// mapping LMI solutions back to moment-variable values.
struct AffineExpr {
  double constant = 0.0;
  std::vector<std::pair<int, double>> terms;  // (lmi var, coeff)
  double eval(const VectorXd& y) const {
    double v = constant;
    for (auto [i, c] : terms) v += c * y(i);
    return v;
  }
};

struct AssembleOptions {
  bool force_complex = false;  // keep imaginary parts even for real states
};

struct AssembledModel {
  LmiProblem lmi;
  bool real_mode = false;
  std::vector<AffineExpr> re_expr, im_expr;  // per moment variable
  std::vector<int> external_var;             // LMI index per external variable
};

AssembledModel assemble(const DpsModel& model, const AssembleOptions& opts = {});

/// One-call membership check: build, assemble, margin-solve.
struct CheckReport {
  Verdict verdict = Verdict::Marginal;
  SolveStatus status = SolveStatus::Ok;
  double margin = 0.0;
  int iterations = 0;
  double solve_seconds = 0.0;
  double scale = 1.0;
  int n = 0, t = 0;
  Regime regime = Regime::Generic;
  Hierarchy hierarchy = Hierarchy::Dps;
  std::string to_json() const;
};

CheckReport check_state(const HermitianMatrix& rho, int t, Regime regime,
                        Hierarchy hierarchy = Hierarchy::Dps, const SolveOptions& opts = {},
                        const AssembleOptions& aopts = {});

// Extended state encoded by a model solution, at the original input scale.
HermitianMatrix reconstruct_certificate(const DpsModel& model, const AssembledModel& assembled,
                                        const VectorXd& y);

/// Certificate validation: symmetry, PSD partial transposes, partial-trace
/// recovery, and kernel propagation from the base state.
struct CertificateReport {
  double symmetry_error = 0.0;
  bool symmetric = false;
  std::vector<double> transpose_min_eigs;
  bool psd_all = false;
  double trace_recovery_error = 0.0;
  bool trace_ok = false;
  double kernel_error = 0.0;
  bool kernel_ok = false;
  bool all() const { return symmetric && psd_all && trace_ok && kernel_ok; }
};

CertificateReport verify_certificate(const HermitianMatrix& rho, const DpsModel& model,
                                     const HermitianMatrix& certificate,
                                     double trace_tol = 1e-6);

CertificateReport verify_certificate(const HermitianMatrix& rho, const DpsModel& model,
                                     const AssembledModel& assembled, const VectorXd& y,
                                     double trace_tol = 1e-6);

}  // namespace dpskit
