#include <algorithm>
#include <cmath>

#include "dpskit/sdp.hpp"

namespace dpskit {

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return "Feasible";
    case Verdict::Infeasible: return "Infeasible";
    case Verdict::Marginal: return "Marginal";
  }
  return "?";
}

void LmiProblem::validate() const {
  if (objective.size() != 0 && objective.size() != num_vars)
    throw std::invalid_argument("LmiProblem: objective size mismatch");
  for (const auto& b : blocks) {
    if (b.dim < 1 || b.F0.rows() != b.dim || b.F0.cols() != b.dim)
      throw std::invalid_argument("LmiProblem: bad block data");
    for (const auto& t : b.terms)
      if (t.var < 0 || t.var >= num_vars || t.row < 0 || t.col < t.row || t.col >= b.dim)
        throw std::invalid_argument("LmiProblem: bad term");
  }
}

LmiProblem to_margin_form(const LmiProblem& p, double lambda_cap) {
  LmiProblem m;
  m.num_vars = p.num_vars + 1;
  m.objective = VectorXd::Zero(m.num_vars);
  m.objective(p.num_vars) = 1.0;
  m.blocks = p.blocks;
  for (auto& b : m.blocks)
    for (int i = 0; i < b.dim; ++i) b.terms.push_back({p.num_vars, i, i, 1.0});
  LmiBlock cap;
  cap.dim = 1;
  cap.F0 = MatrixXd::Constant(1, 1, lambda_cap);
  cap.terms.push_back({p.num_vars, 0, 0, 1.0});
  m.blocks.push_back(std::move(cap));
  return m;
}

namespace {

MatrixXd assemble_block(const LmiBlock& b, const VectorXd& x) {
  MatrixXd m = b.F0;
  for (const auto& t : b.terms) {
    m(t.row, t.col) += t.value * x(t.var);
    if (t.row != t.col) m(t.col, t.row) += t.value * x(t.var);
  }
  return m;
}

double sym_dot(const std::vector<LmiTerm>& terms, std::size_t lo, std::size_t hi,
               const MatrixXd& a) {
  double s = 0.0;
  for (std::size_t i = lo; i < hi; ++i) {
    const auto& t = terms[i];
    s += (t.row == t.col ? 1.0 : 2.0) * t.value * a(t.row, t.col);
  }
  return s;
}

// Largest step alpha in (0, 1] with X + alpha*D staying positive definite,
// scaled back by tau.
double max_step(const MatrixXd& x, const MatrixXd& d, double tau) {
  Eigen::LLT<MatrixXd> llt(x);
  if (llt.info() != Eigen::Success) return 0.0;
  const MatrixXd l = llt.matrixL();
  MatrixXd s = l.triangularView<Eigen::Lower>().solve(d);
  s = l.triangularView<Eigen::Lower>().solve(s.transpose().eval());
  Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (s + s.transpose()), Eigen::EigenvaluesOnly);
  const double lam = eig.eigenvalues().minCoeff();
  if (lam >= 0) return 1.0;
  return std::min(1.0, -tau / lam);
}

struct BlockState {
  const LmiBlock* spec = nullptr;
  // terms sorted by var; var_ranges = (var, first, last) runs
  std::vector<LmiTerm> terms;
  struct Run { int var; std::size_t lo, hi; };
  std::vector<Run> runs;
  MatrixXd X, Z, Winv, Zinv;
};

struct Ipm {
  const LmiProblem& p;
  const SolveOptions& opts;
  std::vector<BlockState> blocks;
  VectorXd c, x;
  int nu = 0;

  Ipm(const LmiProblem& prob, const SolveOptions& o, const VectorXd& x0)
      : p(prob), opts(o), x(x0) {
    c = p.objective.size() ? p.objective : VectorXd::Zero(p.num_vars);
    for (const auto& b : p.blocks) {
      BlockState s;
      s.spec = &b;
      s.terms = b.terms;
      std::stable_sort(s.terms.begin(), s.terms.end(),
                       [](const LmiTerm& a, const LmiTerm& bb) { return a.var < bb.var; });
      for (std::size_t i = 0; i < s.terms.size();) {
        std::size_t j = i;
        while (j < s.terms.size() && s.terms[j].var == s.terms[i].var) ++j;
        s.runs.push_back({s.terms[i].var, i, j});
        i = j;
      }
      s.X = assemble_block(b, x);
      s.Z = MatrixXd::Identity(b.dim, b.dim);
      nu += b.dim;
      blocks.push_back(std::move(s));
    }
    const double zscale = (1.0 + c.cwiseAbs().maxCoeff()) / nu;
    for (auto& s : blocks) s.Z *= zscale;
  }

  double mu() const {
    double m = 0.0;
    for (const auto& s : blocks) m += (s.X.array() * s.Z.array()).sum();
    return m / nu;
  }

  VectorXd dual_residual() const {
    VectorXd r = c;
    for (const auto& s : blocks)
      for (const auto& run : s.runs)
        r(run.var) -= sym_dot(s.terms, run.lo, run.hi, s.Z);
    return r;
  }

  double dual_objective() const {
    double d = 0.0;
    for (const auto& s : blocks) d -= (s.spec->F0.array() * s.Z.array()).sum();
    return d;
  }

  // NT scaling inverse W^{-1} with W Z W = X, plus Z^{-1}.
  bool compute_scaling() {
    for (auto& s : blocks) {
      Eigen::LLT<MatrixXd> lltx(s.X);
      Eigen::LLT<MatrixXd> lltz(s.Z);
      if (lltx.info() != Eigen::Success || lltz.info() != Eigen::Success) return false;
      const MatrixXd lx = lltx.matrixL();
      MatrixXd m = lx.transpose() * s.Z * lx;
      Eigen::SelfAdjointEigenSolver<MatrixXd> eig(0.5 * (m + m.transpose()));
      if (eig.info() != Eigen::Success || eig.eigenvalues().minCoeff() <= 0) return false;
      const MatrixXd half =
          eig.eigenvectors() * eig.eigenvalues().cwiseSqrt().asDiagonal() * eig.eigenvectors().transpose();
      // W^{-1} = L^{-T} (L^T Z L)^{1/2} L^{-1}
      MatrixXd li = MatrixXd::Identity(s.spec->dim, s.spec->dim);
      lx.triangularView<Eigen::Lower>().solveInPlace(li);
      s.Winv = li.transpose() * half * li;
      s.Winv = 0.5 * (s.Winv + s.Winv.transpose().eval());
      s.Zinv = lltz.solve(MatrixXd::Identity(s.spec->dim, s.spec->dim));
      s.Zinv = 0.5 * (s.Zinv + s.Zinv.transpose().eval());
    }
    return true;
  }

  // Solve the Newton system for targets R_k: M dx = sum_k <F_ki, Winv R_k Winv> - rd.
  // Returns dx and fills dZ_k = Winv (R_k - A_k(dx)) Winv.
  bool newton(const std::vector<MatrixXd>& R, const VectorXd& rd, VectorXd& dx,
              std::vector<MatrixXd>& dZ) {
    const int m = p.num_vars;
    MatrixXd M = MatrixXd::Zero(m, m);
    VectorXd rhs = -rd;
    for (auto& s : blocks) {
      const int d = s.spec->dim;
      // A_j = Winv F_j Winv via outer products of Winv columns.
      MatrixXd Aj(d, d);
      for (const auto& runj : s.runs) {
        Aj.setZero();
        for (std::size_t i = runj.lo; i < runj.hi; ++i) {
          const auto& t = s.terms[i];
          const auto wr = s.Winv.col(t.row);
          const auto wc = s.Winv.col(t.col);
          if (t.row == t.col)
            Aj += t.value * (wr * wr.transpose());
          else
            Aj += t.value * (wr * wc.transpose() + wc * wr.transpose());
        }
        for (const auto& runi : s.runs) {
          if (runi.var > runj.var) break;
          M(runi.var, runj.var) += sym_dot(s.terms, runi.lo, runi.hi, Aj);
        }
      }
      const MatrixXd B = s.Winv * R[&s - blocks.data()] * s.Winv;
      for (const auto& run : s.runs) rhs(run.var) += sym_dot(s.terms, run.lo, run.hi, B);
    }
    M = M.selfadjointView<Eigen::Upper>();
    Eigen::LDLT<MatrixXd> ldlt(M);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive()) {
      M.diagonal().array() += 1e-12 * (1.0 + M.diagonal().cwiseAbs().maxCoeff());
      ldlt.compute(M);
      if (ldlt.info() != Eigen::Success) return false;
    }
    dx = ldlt.solve(rhs);
    dZ.resize(blocks.size());
    for (auto& s : blocks) {
      const int d = s.spec->dim;
      MatrixXd ax = MatrixXd::Zero(d, d);
      for (const auto& t : s.terms) {
        ax(t.row, t.col) += t.value * dx(t.var);
        if (t.row != t.col) ax(t.col, t.row) += t.value * dx(t.var);
      }
      const std::size_t k = &s - blocks.data();
      dZ[k] = s.Winv * (R[k] - ax) * s.Winv;
      dZ[k] = 0.5 * (dZ[k] + dZ[k].transpose().eval());
    }
    return true;
  }

  std::pair<double, double> step_lengths(const VectorXd& dx, const std::vector<MatrixXd>& dZ,
                                         double tau) const {
    double ap = 1.0, ad = 1.0;
    for (const auto& s : blocks) {
      const int d = s.spec->dim;
      MatrixXd ax = MatrixXd::Zero(d, d);
      for (const auto& t : s.terms) {
        ax(t.row, t.col) += t.value * dx(t.var);
        if (t.row != t.col) ax(t.col, t.row) += t.value * dx(t.var);
      }
      ap = std::min(ap, max_step(s.X, ax, tau));
      ad = std::min(ad, max_step(s.Z, dZ[&s - blocks.data()], tau));
    }
    return {ap, ad};
  }

  SolveReport run() {
    SolveReport rep;
    double best_merit = std::numeric_limits<double>::infinity();
    VectorXd best_x = x;
    const double cscale = 1.0 + c.cwiseAbs().maxCoeff();
    int stall = 0;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
      rep.iterations = iter;
      const VectorXd rd = dual_residual();
      const double rdn = rd.cwiseAbs().maxCoeff() / cscale;
      const double pobj = c.dot(x), dobj = dual_objective();
      const double gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj) + std::abs(dobj));
      const double merit = gap + rdn;
      if (merit < best_merit) {
        best_merit = merit;
        best_x = x;
      }
      if (opts.verbosity > 0)
        std::fprintf(stderr, "iter %3d  pobj % .6e  dobj % .6e  gap %.2e  rd %.2e\n", iter, pobj,
                     dobj, gap, rdn);
      rep.gap = gap;
      rep.dual_residual = rdn;
      if (gap <= opts.tol_gap && rdn <= opts.tol_gap) {
        rep.status = SolveStatus::Ok;
        rep.objective = pobj;
        rep.solution = x;
        return rep;
      }
      if (pobj < opts.unbounded_floor) {
        rep.status = SolveStatus::Unbounded;
        rep.objective = pobj;
        rep.solution = x;
        return rep;
      }
      if (!compute_scaling()) {
        rep.status = SolveStatus::NumericalFailure;
        break;
      }

      const double mu0 = mu();
      std::vector<MatrixXd> R(blocks.size());
      for (std::size_t k = 0; k < blocks.size(); ++k) R[k] = -blocks[k].X;
      VectorXd dxa;
      std::vector<MatrixXd> dZa;
      if (!newton(R, rd, dxa, dZa)) {
        rep.status = SolveStatus::NumericalFailure;
        break;
      }
      auto [apa, ada] = step_lengths(dxa, dZa, 0.99);

      double mu_aff = 0.0;
      for (std::size_t k = 0; k < blocks.size(); ++k) {
        const auto& s = blocks[k];
        MatrixXd ax = MatrixXd::Zero(s.spec->dim, s.spec->dim);
        for (const auto& t : s.terms) {
          ax(t.row, t.col) += t.value * dxa(t.var);
          if (t.row != t.col) ax(t.col, t.row) += t.value * dxa(t.var);
        }
        mu_aff += ((s.X + apa * ax).array() * (s.Z + ada * dZa[k].array().matrix()).array()).sum();
      }
      mu_aff /= nu;
      double sigma = std::pow(std::clamp(mu_aff / mu0, 0.0, 1.0), 3.0);
      sigma = std::clamp(sigma, 1e-8, 1.0);

      for (std::size_t k = 0; k < blocks.size(); ++k) {
        const auto& s = blocks[k];
        MatrixXd ax = MatrixXd::Zero(s.spec->dim, s.spec->dim);
        for (const auto& t : s.terms) {
          ax(t.row, t.col) += t.value * dxa(t.var);
          if (t.row != t.col) ax(t.col, t.row) += t.value * dxa(t.var);
        }
        const MatrixXd corr = ax * dZa[k] * s.Zinv;
        R[k] = sigma * mu0 * s.Zinv - s.X - 0.5 * (corr + corr.transpose());
      }
      VectorXd dx;
      std::vector<MatrixXd> dZ;
      bool ok = newton(R, rd, dx, dZ);
      if (ok) {
        auto [ap, ad] = step_lengths(dx, dZ, 0.98);
        if (opts.verbosity > 1)
          std::fprintf(stderr, "   mu %.2e sigma %.2e apa %.2e ada %.2e ap %.2e ad %.2e\n", mu0,
                       sigma, apa, ada, ap, ad);
        if (std::min(ap, ad) < 1e-10) ok = false;
        if (ok) {
          x += ap * dx;
          for (std::size_t k = 0; k < blocks.size(); ++k) {
            blocks[k].Z += ad * dZ[k];
            blocks[k].X = assemble_block(*blocks[k].spec, x);
          }
          stall = (std::min(ap, ad) < 1e-5) ? stall + 1 : 0;
        }
      }
      if (!ok) {
        // centering fallback
        for (std::size_t k = 0; k < blocks.size(); ++k)
          R[k] = mu0 * blocks[k].Zinv - blocks[k].X;
        if (!newton(R, rd, dx, dZ)) {
          rep.status = SolveStatus::NumericalFailure;
          break;
        }
        auto [ap, ad] = step_lengths(dx, dZ, 0.90);
        if (std::min(ap, ad) < 1e-12) {
          rep.status = SolveStatus::NumericalFailure;
          break;
        }
        x += ap * dx;
        for (std::size_t k = 0; k < blocks.size(); ++k) {
          blocks[k].Z += ad * dZ[k];
          blocks[k].X = assemble_block(*blocks[k].spec, x);
        }
        ++stall;
      }
      if (stall > 12) {
        rep.status = SolveStatus::NumericalFailure;
        break;
      }
    }
    if (rep.status == SolveStatus::Ok) rep.status = SolveStatus::IterationLimit;
    x = best_x;
    rep.objective = c.dot(x);
    rep.solution = x;
    return rep;
  }
};

}  // namespace

SolveReport solve_feasibility(const LmiProblem& p, const SolveOptions& opts) {
  p.validate();
  LmiProblem m = to_margin_form(p, opts.lambda_cap);
  VectorXd x0 = VectorXd::Zero(m.num_vars);
  double lam0 = 0.0;
  for (const auto& b : p.blocks) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(b.F0, Eigen::EigenvaluesOnly);
    lam0 = std::max(lam0, -eig.eigenvalues().minCoeff());
  }
  x0(p.num_vars) = lam0 + 1.0;

  Ipm ipm(m, opts, x0);
  SolveReport rep = ipm.run();
  rep.margin = rep.solution.size() ? rep.solution(p.num_vars) : 0.0;
  VectorXd y = rep.solution.head(p.num_vars);
  rep.solution = y;
  rep.objective = rep.margin;
  if (rep.margin <= -opts.tol_feas)
    rep.verdict = Verdict::Feasible;
  else if (rep.margin >= opts.tol_feas)
    rep.verdict = Verdict::Infeasible;
  else
    rep.verdict = Verdict::Marginal;
  rep.block_min_eigs.clear();
  for (const auto& b : p.blocks) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(assemble_block(b, y), Eigen::EigenvaluesOnly);
    rep.block_min_eigs.push_back(eig.eigenvalues().minCoeff());
  }
  return rep;
}

SolveReport solve_objective(const LmiProblem& p, const SolveOptions& opts) {
  p.validate();
  SolveReport margin_rep = solve_feasibility(p, opts);
  if (margin_rep.verdict != Verdict::Feasible || margin_rep.margin > -1e-10) {
    margin_rep.verdict = Verdict::Infeasible;
    return margin_rep;
  }
  Ipm ipm(p, opts, margin_rep.solution);
  SolveReport rep = ipm.run();
  rep.margin = margin_rep.margin;
  rep.verdict = Verdict::Feasible;
  rep.block_min_eigs.clear();
  for (const auto& b : p.blocks) {
    Eigen::SelfAdjointEigenSolver<MatrixXd> eig(assemble_block(b, rep.solution),
                                                Eigen::EigenvaluesOnly);
    rep.block_min_eigs.push_back(eig.eigenvalues().minCoeff());
  }
  return rep;
}

}  // namespace dpskit
