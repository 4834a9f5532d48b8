#include <chrono>
#include <map>
#include <nlohmann/json.hpp>

#include "dpskit/relax.hpp"

namespace dpskit {

namespace {

// Slot space: 2v = Re(var v), 2v+1 = Im(var v), externals appended after.
struct LinearEq {
  std::map<int, double> lhs;
  double rhs = 0.0;
  int pivot_slot = -1;
};

struct Eliminator {
  int num_slots;
  std::vector<char> resolved;
  std::vector<AffineExpr> expr;       // valid where resolved
  std::vector<int> resolve_time;
  int clock = 0;

  explicit Eliminator(int slots) : num_slots(slots), resolved(slots, 0), expr(slots),
                                   resolve_time(slots, -1) {}

  void pin_zero(int slot) {
    resolved[slot] = 1;
    expr[slot] = {};
    resolve_time[slot] = clock++;
  }

  void process(LinearEq eq) {
    // substitute already-resolved slots
    std::map<int, double> lhs;
    double rhs = eq.rhs;
    for (auto [slot, c] : eq.lhs) {
      if (std::abs(c) < 1e-15) continue;
      if (resolved[slot]) {
        rhs -= c * expr[slot].constant;
        for (auto [s2, c2] : expr[slot].terms) lhs[s2] += c * c2;
      } else {
        lhs[slot] += c;
      }
    }
    for (auto it = lhs.begin(); it != lhs.end();)
      it = std::abs(it->second) < 1e-12 ? lhs.erase(it) : std::next(it);
    if (lhs.empty()) {
      if (std::abs(rhs) > 1e-7)
        throw std::runtime_error("inconsistent trace-recovery constraint");
      return;
    }
    int pivot = -1;
    if (eq.pivot_slot >= 0 && lhs.count(eq.pivot_slot) &&
        std::abs(lhs[eq.pivot_slot]) > 1e-9)
      pivot = eq.pivot_slot;
    if (pivot < 0) {
      double best = 0.0;
      for (auto [slot, c] : lhs)
        if (std::abs(c) > best) {
          best = std::abs(c);
          pivot = slot;
        }
    }
    const double p = lhs[pivot];
    AffineExpr e;
    e.constant = rhs / p;
    for (auto [slot, c] : lhs)
      if (slot != pivot) e.terms.push_back({slot, -c / p});
    resolved[pivot] = 1;
    expr[pivot] = std::move(e);
    resolve_time[pivot] = clock++;
  }

  // Expand resolved expressions so they reference free slots only. References
  // always point at strictly later resolution times, so this terminates.
  void close() {
    std::vector<int> order;
    for (int s = 0; s < num_slots; ++s)
      if (resolved[s]) order.push_back(s);
    std::sort(order.begin(), order.end(),
              [&](int a, int b) { return resolve_time[a] > resolve_time[b]; });
    for (int s : order) {
      AffineExpr out;
      out.constant = expr[s].constant;
      std::map<int, double> acc;
      for (auto [slot, c] : expr[s].terms) {
        if (resolved[slot]) {
          out.constant += c * expr[slot].constant;
          for (auto [s2, c2] : expr[slot].terms) acc[s2] += c * c2;
        } else {
          acc[slot] += c;
        }
      }
      for (auto [slot, c] : acc)
        if (std::abs(c) > 1e-15) out.terms.push_back({slot, c});
      expr[s] = std::move(out);
    }
  }
};

struct ComplexAffine {
  Complex constant = 0.0;
  std::map<int, Complex> terms;  // slot -> complex coefficient
};

}  // namespace

AssembledModel assemble(const DpsModel& model, const AssembleOptions& opts) {
  const int nvars = static_cast<int>(model.vars.size());
  const int num_slots = 2 * nvars + model.num_external;
  const bool real_mode = model.state_real && !opts.force_complex;

  Eliminator elim(num_slots);
  for (int v = 0; v < nvars; ++v)
    if (model.vars[v].real || real_mode) elim.pin_zero(2 * v + 1);

  for (const auto& eq : model.equalities) {
    LinearEq re, im;
    bool has_im = false;
    for (const auto& term : eq.terms) {
      re.lhs[2 * term.var] += term.coeff;
      if (!(model.vars[term.var].real || real_mode)) {
        im.lhs[2 * term.var + 1] += term.conj ? -term.coeff : term.coeff;
        has_im = true;
      }
    }
    re.rhs = eq.rhs_constant.real();
    im.rhs = eq.rhs_constant.imag();
    for (const auto& [ext, c] : eq.rhs_external) {
      // externals sit on the right-hand side: move to lhs with flipped sign
      re.lhs[2 * nvars + ext] -= c.real();
      if (c.imag() != 0.0) {
        im.lhs[2 * nvars + ext] -= c.imag();
        has_im = true;
      }
    }
    if (eq.pivot >= 0) {
      re.pivot_slot = 2 * eq.pivot;
      im.pivot_slot = 2 * eq.pivot + 1;
    }
    elim.process(std::move(re));
    if (has_im || std::abs(im.rhs) > 1e-12) elim.process(std::move(im));
  }
  elim.close();

  // Free-slot numbering.
  std::vector<int> slot_var(num_slots, -1);
  int nfree = 0;
  for (int s = 0; s < num_slots; ++s)
    if (!elim.resolved[s]) slot_var[s] = nfree++;

  AssembledModel out;
  out.real_mode = real_mode;
  out.lmi.num_vars = nfree;
  out.lmi.objective = VectorXd::Zero(nfree);
  auto slot_expr = [&](int slot) -> AffineExpr {
    if (!elim.resolved[slot]) return AffineExpr{0.0, {{slot_var[slot], 1.0}}};
    AffineExpr e;
    e.constant = elim.expr[slot].constant;
    for (auto [s2, c] : elim.expr[slot].terms) e.terms.push_back({slot_var[s2], c});
    return e;
  };
  out.re_expr.resize(nvars);
  out.im_expr.resize(nvars);
  for (int v = 0; v < nvars; ++v) {
    out.re_expr[v] = slot_expr(2 * v);
    out.im_expr[v] = slot_expr(2 * v + 1);
  }
  out.external_var.resize(model.num_external);
  for (int e = 0; e < model.num_external; ++e) {
    const int slot = 2 * nvars + e;
    if (elim.resolved[slot])
      throw std::runtime_error("external variable was eliminated");
    out.external_var[e] = slot_var[slot];
  }

  for (const auto& mb : model.blocks) {
    const int d = mb.dim;
    // complex affine entries for the upper triangle
    auto entry_affine = [&](int r, int c) {
      ComplexAffine a;
      const auto& ref = mb.at(r, c);
      if (ref.var < 0) return a;
      const double sgn = ref.conj ? -1.0 : 1.0;
      const AffineExpr& re = out.re_expr[ref.var];
      const AffineExpr& im = out.im_expr[ref.var];
      a.constant = ref.coeff * Complex(re.constant, sgn * im.constant);
      for (auto [slot, cc] : re.terms) a.terms[slot] += ref.coeff * cc;
      for (auto [slot, cc] : im.terms) a.terms[slot] += Complex(0.0, sgn * ref.coeff * cc);
      return a;
    };

    LmiBlock lb;
    std::map<std::tuple<int, int, int>, double> terms;  // (var,row,col) -> coeff
    if (real_mode) {
      lb.dim = d;
      lb.F0 = MatrixXd::Zero(d, d);
      for (int r = 0; r < d; ++r)
        for (int c = r; c < d; ++c) {
          ComplexAffine a = entry_affine(r, c);
          lb.F0(r, c) = a.constant.real();
          lb.F0(c, r) = a.constant.real();
          for (auto [slot, cc] : a.terms)
            if (cc.real() != 0.0) terms[{slot, r, c}] += cc.real();
        }
    } else {
      // real embedding [[Re, -Im], [Im, Re]], upper triangle
      lb.dim = 2 * d;
      lb.F0 = MatrixXd::Zero(2 * d, 2 * d);
      for (int r = 0; r < d; ++r)
        for (int c = r; c < d; ++c) {
          ComplexAffine a = entry_affine(r, c);
          lb.F0(r, c) = lb.F0(c, r) = a.constant.real();
          lb.F0(d + r, d + c) = lb.F0(d + c, d + r) = a.constant.real();
          lb.F0(r, d + c) = lb.F0(d + c, r) = -a.constant.imag();
          if (r != c) lb.F0(c, d + r) = lb.F0(d + r, c) = a.constant.imag();
          for (auto [slot, cc] : a.terms) {
            if (cc.real() != 0.0) {
              terms[{slot, r, c}] += cc.real();
              terms[{slot, d + r, d + c}] += cc.real();
            }
            if (cc.imag() != 0.0) {
              terms[{slot, r, d + c}] += -cc.imag();
              if (r != c) terms[{slot, c, d + r}] += cc.imag();
            }
          }
        }
    }
    for (const auto& [key, coeff] : terms) {
      if (coeff == 0.0) continue;
      auto [var, r, c] = key;
      lb.terms.push_back({var, r, c, coeff});
    }
    out.lmi.blocks.push_back(std::move(lb));
  }
  out.lmi.validate();
  return out;
}

CheckReport check_state(const HermitianMatrix& rho, int t, Regime regime, Hierarchy hierarchy,
                        const SolveOptions& opts, const AssembleOptions& aopts) {
  DpsModel model = hierarchy == Hierarchy::Dps ? build_dps_moment(rho, t, regime)
                                               : build_dps_bose(rho, t, regime == Regime::LDUI);
  AssembledModel assembled = assemble(model, aopts);
  const auto start = std::chrono::steady_clock::now();
  SolveReport rep = solve_feasibility(assembled.lmi, opts);
  const auto stop = std::chrono::steady_clock::now();

  CheckReport out;
  out.verdict = rep.verdict;
  out.status = rep.status;
  out.margin = rep.margin;
  out.iterations = rep.iterations;
  out.solve_seconds = std::chrono::duration<double>(stop - start).count();
  out.scale = model.scale;
  out.n = model.n;
  out.t = t;
  out.regime = regime;
  out.hierarchy = hierarchy;
  return out;
}

std::string CheckReport::to_json() const {
  nlohmann::json j;
  j["verdict"] = verdict_name(verdict);
  j["status"] = status == SolveStatus::Ok            ? "ok"
                : status == SolveStatus::Unbounded   ? "unbounded"
                : status == SolveStatus::IterationLimit ? "iteration_limit"
                                                     : "numerical_failure";
  j["margin"] = margin;
  j["iterations"] = iterations;
  j["solve_seconds"] = solve_seconds;
  j["scale"] = scale;
  j["n"] = n;
  j["t"] = t;
  j["regime"] = regime_name(regime);
  j["hierarchy"] = hierarchy == Hierarchy::Dps ? "dps" : "bose";
  return j.dump();
}

}  // namespace dpskit
