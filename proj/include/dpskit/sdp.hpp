#pragma once

#include <optional>

#include "dpskit/hermitian.hpp"

namespace dpskit {

/// One symmetric coefficient entry of an affine block map; (row, col) with
/// row <= col, implicitly mirrored below the diagonal.
struct LmiTerm {
  int var;
  int row, col;
  double value;
};

/// Affine real symmetric block B(y) = F0 + sum_i y_i F_i.
struct LmiBlock {
  int dim = 0;
  MatrixXd F0;
  std::vector<LmiTerm> terms;
};

/// Block-diagonal linear matrix inequality B_k(y) >= 0 with an optional
/// linear objective c^T y (zero vector = pure feasibility data).
struct LmiProblem {
  int num_vars = 0;
  VectorXd objective;  // size num_vars; zero when absent
  std::vector<LmiBlock> blocks;

  void validate() const;
};

enum class Verdict { Feasible, Infeasible, Marginal };
enum class SolveStatus { Ok, NumericalFailure, Unbounded, IterationLimit };

const char* verdict_name(Verdict v);

struct SolveOptions {
  double tol_feas = 1e-7;    // margin threshold for the verdict split
  double tol_gap = 1e-8;     // relative duality gap / residual target
  int max_iter = 200;
  double lambda_cap = 1.0;   // margin solve enforces lambda >= -cap
  double unbounded_floor = -1e7;
  int verbosity = 0;
};

struct SolveReport {
  Verdict verdict = Verdict::Marginal;
  SolveStatus status = SolveStatus::Ok;
  double margin = 0.0;      // lambda* of the margin solve
  double objective = 0.0;   // c^T y at the solution (objective mode)
  int iterations = 0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  double gap = 0.0;
  VectorXd solution;        // y (margin variable excluded)
  std::vector<double> block_min_eigs;
};

// Margin formulation: min lambda s.t. B_k(y) + lambda I >= 0, lambda >= -cap.
// Feasible if lambda* <= -tol_feas, Infeasible if lambda* >= +tol_feas.
SolveReport solve_feasibility(const LmiProblem& p, const SolveOptions& opts = {});

// min objective^T y s.t. B_k(y) >= 0; runs the margin solve first for a
// strictly feasible start. Reports Unbounded when the objective dives.
SolveReport solve_objective(const LmiProblem& p, const SolveOptions& opts = {});

// Appends an explicit margin variable (index num_vars) to every block plus
// the cap block, yielding a plain SDP whose optimum is the margin.
LmiProblem to_margin_form(const LmiProblem& p, double lambda_cap = 1.0);

// SDPA sparse (.dat-s) writer: m / #blocks / block sizes / objective /
// "matno blkno i j value" lines (1-based, i <= j, matno 0 = F0) in
// (matno, blkno, i, j) order, 17 significant digits.
void export_sdpa(const LmiProblem& p, const std::string& path);
std::string to_sdpa(const LmiProblem& p);
LmiProblem import_sdpa(const std::string& text);
LmiProblem import_sdpa_file(const std::string& path);

}  // namespace dpskit
