#include <map>

#include "dpskit/cop.hpp"

namespace dpskit {

RealSymmetric horn_matrix() {
  MatrixXd h(5, 5);
  h << 1, -1, 1, 1, -1,
      -1, 1, -1, 1, 1,
      1, -1, 1, -1, 1,
      1, 1, -1, 1, -1,
      -1, 1, 1, -1, 1;
  return RealSymmetric(h);
}

SolveReport k0_membership(const RealSymmetric& a, const SolveOptions& opts) {
  const int n = a.dim;
  LmiProblem p;
  auto var = [n](int i, int j) { return i * n + j - i * (i + 1) / 2; };  // i <= j
  p.num_vars = n * (n + 1) / 2;

  LmiBlock psd;
  psd.dim = n;
  psd.F0 = MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) psd.terms.push_back({var(i, j), i, j, 1.0});
  p.blocks.push_back(std::move(psd));

  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      LmiBlock nn;  // (A - P)_ij >= 0
      nn.dim = 1;
      nn.F0 = MatrixXd::Constant(1, 1, a.entries(i, j));
      nn.terms.push_back({var(i, j), 0, 0, -1.0});
      p.blocks.push_back(std::move(nn));
    }
  return solve_feasibility(p, opts);
}

namespace {

// Real-variable pivot elimination shared by the Gram models.
struct RealEliminator {
  std::vector<char> resolved;
  std::vector<AffineExpr> expr;
  std::vector<int> when;
  int clock = 0;

  explicit RealEliminator(int slots) : resolved(slots, 0), expr(slots), when(slots, -1) {}

  void process(std::map<int, double> lhs, double rhs, int pivot_hint) {
    std::map<int, double> acc;
    for (auto [s, c] : lhs) {
      if (resolved[s]) {
        rhs -= c * expr[s].constant;
        for (auto [s2, c2] : expr[s].terms) acc[s2] += c * c2;
      } else {
        acc[s] += c;
      }
    }
    for (auto it = acc.begin(); it != acc.end();)
      it = std::abs(it->second) < 1e-12 ? acc.erase(it) : std::next(it);
    if (acc.empty()) {
      if (std::abs(rhs) > 1e-9) throw std::runtime_error("inconsistent coefficient constraint");
      return;
    }
    int pivot = -1;
    if (pivot_hint >= 0 && acc.count(pivot_hint) && std::abs(acc[pivot_hint]) > 1e-9)
      pivot = pivot_hint;
    if (pivot < 0) {
      double best = 0.0;
      for (auto [s, c] : acc)
        if (std::abs(c) > best) {
          best = std::abs(c);
          pivot = s;
        }
    }
    const double pc = acc[pivot];
    AffineExpr e;
    e.constant = rhs / pc;
    for (auto [s, c] : acc)
      if (s != pivot) e.terms.push_back({s, -c / pc});
    resolved[pivot] = 1;
    expr[pivot] = std::move(e);
    when[pivot] = clock++;
  }

  void close() {
    std::vector<int> order;
    for (std::size_t s = 0; s < resolved.size(); ++s)
      if (resolved[s]) order.push_back(static_cast<int>(s));
    std::sort(order.begin(), order.end(), [&](int a, int b) { return when[a] > when[b]; });
    for (int s : order) {
      AffineExpr out;
      out.constant = expr[s].constant;
      std::map<int, double> acc;
      for (auto [s2, c] : expr[s].terms) {
        if (resolved[s2]) {
          out.constant += c * expr[s2].constant;
          for (auto [s3, c3] : expr[s2].terms) acc[s3] += c * c3;
        } else {
          acc[s2] += c;
        }
      }
      for (auto [s2, c] : acc)
        if (std::abs(c) > 1e-15) out.terms.push_back({s2, c});
      expr[s] = std::move(out);
    }
  }
};

}  // namespace

SolveReport kt_membership(const RealSymmetric& a, int t, const SolveOptions& opts) {
  if (t < 0) throw std::invalid_argument("kt_membership: t must be >= 0");
  const int n = a.dim;

  // Coefficients of |x|^{2t} * sum A_ij x_i^2 x_j^2 on half exponents
  // (monomial x^{2m'} stored under m').
  std::map<ExponentVec, double> coeff;
  for (const auto& mu : exponents_of_weight(n, t)) {
    const double w = sequence_multiplicity(mu);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        ExponentVec m = mu;
        ++m[i];
        ++m[j];
        coeff[m] += w * a.entries(i, j);
      }
  }

  // Gram basis: monomials of degree t+2 grouped by exponent parity.
  const auto monos = exponents_of_weight(n, t + 2);
  std::map<ExponentVec, std::vector<int>> classes;
  for (std::size_t q = 0; q < monos.size(); ++q) {
    ExponentVec parity = monos[q];
    for (int& x : parity) x &= 1;
    classes[parity].push_back(static_cast<int>(q));
  }

  // Gram slot per unordered same-class pair.
  std::map<std::pair<int, int>, int> slot_of;
  std::vector<std::pair<int, int>> pair_of;
  for (const auto& [parity, members] : classes)
    for (std::size_t r = 0; r < members.size(); ++r)
      for (std::size_t c = r; c < members.size(); ++c) {
        slot_of[{members[r], members[c]}] = static_cast<int>(pair_of.size());
        pair_of.push_back({members[r], members[c]});
      }

  // Coefficient matching per half-exponent m' of weight t+2... note gamma +
  // gamma' has weight 2t+4 and all-even entries, so m = (gamma+gamma')/2.
  RealEliminator elim(static_cast<int>(pair_of.size()));
  std::map<ExponentVec, std::vector<int>> by_monomial;
  for (std::size_t s = 0; s < pair_of.size(); ++s) {
    const auto& [r, c] = pair_of[s];
    ExponentVec m = monos[r];
    for (int q = 0; q < n; ++q) m[q] = (m[q] + monos[c][q]) / 2;
    by_monomial[m].push_back(static_cast<int>(s));
  }
  for (const auto& [m, slots] : by_monomial) {
    std::map<int, double> lhs;
    for (int s : slots) {
      const auto& [r, c] = pair_of[s];
      lhs[s] += (r == c) ? 1.0 : 2.0;
    }
    const auto it = coeff.find(m);
    // lexicographically first pair with gamma = gamma' = m is always present
    ExponentVec half = m;  // m has the doubled exponents halved already
    int diag_slot = -1;
    for (int s : slots) {
      const auto& [r, c] = pair_of[s];
      if (r == c) {
        diag_slot = s;
        break;
      }
    }
    elim.process(std::move(lhs), it == coeff.end() ? 0.0 : it->second, diag_slot);
  }
  elim.close();

  std::vector<int> free_var(pair_of.size(), -1);
  int nfree = 0;
  for (std::size_t s = 0; s < pair_of.size(); ++s)
    if (!elim.resolved[s]) free_var[s] = nfree++;
  auto slot_expr = [&](int s) {
    if (!elim.resolved[s]) return AffineExpr{0.0, {{free_var[s], 1.0}}};
    AffineExpr e = elim.expr[s];
    for (auto& [s2, c] : e.terms) s2 = free_var[s2];
    return e;
  };

  LmiProblem p;
  p.num_vars = nfree;
  for (const auto& [parity, members] : classes) {
    LmiBlock b;
    b.dim = static_cast<int>(members.size());
    b.F0 = MatrixXd::Zero(b.dim, b.dim);
    std::map<std::tuple<int, int, int>, double> terms;
    for (int r = 0; r < b.dim; ++r)
      for (int c = r; c < b.dim; ++c) {
        const AffineExpr e = slot_expr(slot_of.at({members[r], members[c]}));
        b.F0(r, c) = b.F0(c, r) = e.constant;
        for (auto [v, cc] : e.terms) terms[{v, r, c}] += cc;
      }
    for (const auto& [key, cc] : terms) {
      auto [v, r, c] = key;
      if (cc != 0.0) b.terms.push_back({v, r, c, cc});
    }
    p.blocks.push_back(std::move(b));
  }
  return solve_feasibility(p, opts);
}

double copositive_brute_oracle(const RealSymmetric& a, int grid_depth) {
  if (a.dim > 6) throw std::invalid_argument("brute oracle limited to n <= 6");
  const int n = a.dim;
  double best = std::numeric_limits<double>::infinity();
  std::vector<int> k(n, 0);
  for (int d = 1; d <= grid_depth; ++d) {
    auto rec = [&](auto&& self, int pos, int rem) -> void {
      if (pos == n - 1) {
        k[pos] = rem;
        double v = 0.0;
        for (int i = 0; i < n; ++i) {
          if (k[i] == 0) continue;
          for (int j = 0; j < n; ++j)
            if (k[j] != 0) v += a.entries(i, j) * k[i] * k[j];
        }
        best = std::min(best, v / (double(d) * d));
        return;
      }
      for (int q = 0; q <= rem; ++q) {
        k[pos] = q;
        self(self, pos + 1, rem - q);
      }
    };
    rec(rec, 0, d);
  }
  return best;
}

BridgeReport dps_cp_bridge_check(const RealSymmetric& x, int t,
                                 const std::vector<RealSymmetric>& witnesses,
                                 const SolveOptions& opts) {
  const int n = x.dim;
  MatrixXcd y = MatrixXcd::Zero(n, n);
  y.diagonal() = x.entries.diagonal().cast<Complex>();
  const TripleXYZ triple(x.entries, y, x.entries.cast<Complex>());
  const HermitianMatrix state = rho_from_triple(triple);

  BridgeReport rep;
  const CheckReport chk = check_state(state, t, Regime::LDUI, Hierarchy::DpsBose, opts);
  rep.solver_verdict = chk.verdict;
  rep.solver_margin = chk.margin;
  if (t == 1) {
    const bool psd = min_eigenvalue(x.entries.cast<Complex>()) >= -1e-8 * (1.0 + x.entries.norm());
    const bool nonneg = (x.entries.array() >= -1e-10).all();
    rep.matrix_side = psd && nonneg;
    rep.agree = rep.matrix_side == (rep.solver_verdict != Verdict::Infeasible);
  } else {
    for (const auto& c : witnesses) {
      const double pairing = (c.entries.array() * x.entries.array()).sum();
      const SolveReport kc = kt_membership(c, t - 1, opts);
      if (kc.verdict != Verdict::Feasible || pairing >= 0) continue;
      ++rep.witnesses_checked;
      if (rep.solver_verdict != Verdict::Infeasible) ++rep.witness_violations;
    }
    rep.agree = rep.witness_violations == 0;
  }
  return rep;
}

SearchResult search_objective(const RealSymmetric& c, int t, const SolveOptions& opts) {
  const int n = c.dim;
  auto ext = [n](int u, int v) {
    if (u > v) std::swap(u, v);
    return u * n + v - u * (u + 1) / 2;
  };
  const int num_ext = n * (n + 1) / 2;

  // Pairing state of a symmetric X: entries X_ik at (ik,ik), (ik,ki), (ii,ii).
  auto rhs = [&](int i, int k, int j, int l) {
    EqualityRhs r;
    double w = 0.0;
    if (i == j && k == l) w += 1.0;
    if (i == l && k == j && i != k) w += 1.0;
    if (w != 0.0) r.external.push_back({ext(i, k), Complex(w, 0.0)});
    return r;
  };
  DpsModel model = build_dps_moment_general(n, t, Regime::LDUI, num_ext, rhs, true);
  AssembledModel assembled = assemble(model);

  assembled.lmi.objective = VectorXd::Zero(assembled.lmi.num_vars);
  for (int u = 0; u < n; ++u)
    for (int v = u; v < n; ++v)
      assembled.lmi.objective(assembled.external_var[ext(u, v)]) +=
          (u == v ? 1.0 : 2.0) * c.entries(u, v);

  const SolveReport rep = solve_objective(assembled.lmi, opts);
  SearchResult out;
  out.value = rep.objective;
  out.status = rep.status;
  out.feasibility = rep.verdict;
  out.iterations = rep.iterations;
  out.minimizer = MatrixXd::Zero(n, n);
  if (rep.solution.size() == assembled.lmi.num_vars)
    for (int u = 0; u < n; ++u)
      for (int v = u; v < n; ++v) {
        const double val = rep.solution(assembled.external_var[ext(u, v)]);
        out.minimizer(u, v) = out.minimizer(v, u) = val;
      }
  return out;
}

}  // namespace dpskit
