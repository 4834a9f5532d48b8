#include <map>
#include <nlohmann/json.hpp>
#include <sstream>

#include "dpskit/relax.hpp"

namespace dpskit {

namespace {

int bipartite_side(const HermitianMatrix& rho) {
  if (rho.registers.size() != 2 || rho.registers[0] != rho.registers[1])
    throw std::invalid_argument("expected a bipartite state with registers [n, n]");
  return rho.registers[0];
}

ExponentVec unit_vec(int n, int i) {
  ExponentVec v(n, 0);
  v[i] = 1;
  return v;
}

ExponentVec add(const ExponentVec& a, const ExponentVec& b) {
  ExponentVec v = a;
  for (std::size_t i = 0; i < v.size(); ++i) v[i] += b[i];
  return v;
}

// Variable dictionary keyed by canonical moment key.
struct VarDict {
  std::map<MomentKey, int> index;
  std::vector<MomentVar> vars;

  int lookup(const MomentKey& canonical) {
    auto it = index.find(canonical);
    if (it != index.end()) return it->second;
    const int id = static_cast<int>(vars.size());
    index.emplace(canonical, id);
    vars.push_back({canonical, canonical.is_real()});
    return id;
  }
};

struct KeyRef {
  MomentKey key;
  bool conj = false;
};

KeyRef canonicalize(MomentKey k) {
  if (k.is_canonical()) return {std::move(k), false};
  return {k.conjugated(), true};
}

// Equality accumulator grouping repeated keys.
struct EqualityBuilder {
  std::map<MomentKey, std::pair<double, bool>> acc;  // canonical -> (coeff, conj)

  void add(const MomentKey& raw, double coeff) {
    KeyRef ref = canonicalize(raw);
    auto [it, inserted] = acc.emplace(ref.key, std::make_pair(coeff, ref.conj));
    if (!inserted) it->second.first += coeff;
  }

  Equality finish(VarDict& dict, const MomentKey* pivot_key) const {
    Equality eq;
    for (const auto& [key, cc] : acc) {
      const int var = dict.lookup(key);
      eq.terms.push_back({var, cc.first, cc.second});
      if (pivot_key && key == *pivot_key) eq.pivot = var;
    }
    return eq;
  }
};

double trace_normalizer(const HermitianMatrix& rho) {
  const double tr = rho.trace();
  if (!(tr > 1e-12)) throw std::invalid_argument("state must have positive trace");
  return tr;
}

}  // namespace

DpsModel build_dps_moment_general(int n, int t, Regime regime, int num_external,
                                  const RhsFn& rhs, bool state_real) {
  if (t < 1) throw std::invalid_argument("hierarchy level must be >= 1");
  DpsModel model;
  model.n = n;
  model.t = t;
  model.regime = regime;
  model.hierarchy = Hierarchy::Dps;
  model.state_real = state_real;
  model.num_external = num_external;

  VarDict dict;
  const auto layouts = moment_block_layout(n, t, regime);
  for (const auto& layout : layouts) {
    for (const auto& block : layout.blocks) {
      ModelBlock mb;
      mb.tag = layout.s;
      mb.dim = block.size();
      mb.labels = block.labels;
      mb.entries.resize(static_cast<std::size_t>(mb.dim) * mb.dim);
      for (int r = 0; r < mb.dim; ++r) {
        // labels encode (i0, b, bp); orbit multiplicity scales the entry
        const auto& lr = block.labels[r];
        const ExponentVec br(lr.begin() + 1, lr.begin() + 1 + n);
        const ExponentVec brp(lr.begin() + 1 + n, lr.end());
        const double wr = sequence_multiplicity(br) * sequence_multiplicity(brp);
        for (int c = 0; c < mb.dim; ++c) {
          const auto& ref = block.at(r, c);
          ModelEntryRef out;
          if (!ref.zero) {
            const auto& lc = block.labels[c];
            const ExponentVec bc(lc.begin() + 1, lc.begin() + 1 + n);
            const ExponentVec bcp(lc.begin() + 1 + n, lc.end());
            const double wc = sequence_multiplicity(bc) * sequence_multiplicity(bcp);
            out.var = dict.lookup(ref.key);
            out.conj = ref.conj;
            out.coeff = std::sqrt(wr * wc);
          }
          mb.entries[static_cast<std::size_t>(r) * mb.dim + c] = out;
        }
      }
      model.blocks.push_back(std::move(mb));
    }
  }

  // Partial-trace recovery: one equality per Hermitian-independent entry.
  const auto mus = exponents_of_weight(n, t - 1);
  ExponentVec pivot_mu(n, 0);
  pivot_mu[n - 1] = t - 1;  // lexicographically first weight-(t-1) exponent
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          if (i * n + k > j * n + l) continue;  // Hermitian upper triangle
          EqualityBuilder builder;
          for (const auto& mu : mus) {
            MomentKey key{unit_vec(n, i), unit_vec(n, j), add(unit_vec(n, k), mu),
                          add(unit_vec(n, l), mu)};
            if (moment_key_filtered(key, regime)) continue;
            builder.add(key, sequence_multiplicity(mu));
          }
          MomentKey pivot{unit_vec(n, i), unit_vec(n, j), add(unit_vec(n, k), pivot_mu),
                          add(unit_vec(n, l), pivot_mu)};
          const KeyRef pref = canonicalize(pivot);
          const EqualityRhs r = rhs(i, k, j, l);
          Equality eq = builder.finish(dict, moment_key_filtered(pivot, regime) ? nullptr
                                                                                : &pref.key);
          eq.rhs_constant = r.constant;
          eq.rhs_external = r.external;
          if (eq.terms.empty() && r.external.empty()) {
            if (std::abs(r.constant) > 1e-9)
              throw std::invalid_argument("state support does not match the regime");
            continue;
          }
          model.equalities.push_back(std::move(eq));
        }

  model.vars = dict.vars;
  return model;
}

DpsModel build_dps_moment(const HermitianMatrix& rho, int t, Regime regime) {
  const int n = bipartite_side(rho);
  if (!matches_regime(rho, regime))
    throw std::invalid_argument("state support does not match the regime");
  const double tr = trace_normalizer(rho);
  const MatrixXcd m = rho.entries / tr;
  auto rhs = [&](int i, int k, int j, int l) {
    return EqualityRhs{m(i * n + k, j * n + l), {}};
  };
  DpsModel model = build_dps_moment_general(n, t, regime, 0, rhs, rho.is_real());
  model.scale = tr;
  return model;
}

DpsModel build_dps_tensor(const HermitianMatrix& rho, int t, Regime regime) {
  if (t < 1) throw std::invalid_argument("hierarchy level must be >= 1");
  const int n = bipartite_side(rho);
  if (!matches_regime(rho, regime))
    throw std::invalid_argument("state support does not match the regime");
  const double tr = trace_normalizer(rho);
  const MatrixXcd norm = rho.entries / tr;

  DpsModel model;
  model.n = n;
  model.t = t;
  model.regime = regime;
  model.hierarchy = Hierarchy::Dps;
  model.state_real = rho.is_real();
  model.scale = tr;

  VarDict dict;
  // Orbit labels inside a transposed clique: (i0, alpha(prefix), alpha(suffix)).
  struct Orbit {
    std::vector<int> label;
    ExponentVec bv, bh;  // prefix / suffix exponents
    int i0 = 0;
    double mult = 0.0;
  };
  for (int s = 0; s <= t; ++s) {
    const BlockLayout layout = tensor_block_layout(n, t, s, regime);
    for (const auto& clique : layout.blocks) {
      std::map<std::vector<int>, Orbit> orbits;
      for (const auto& seq : clique.labels) {
        const std::vector<int> prefix(seq.begin() + 1, seq.begin() + 1 + s);
        const std::vector<int> suffix(seq.begin() + 1 + s, seq.end());
        Orbit o;
        o.i0 = seq[0];
        o.bv = alpha(prefix, n);
        o.bh = alpha(suffix, n);
        o.label.push_back(o.i0);
        o.label.insert(o.label.end(), o.bv.begin(), o.bv.end());
        o.label.insert(o.label.end(), o.bh.begin(), o.bh.end());
        auto [it, inserted] = orbits.emplace(o.label, std::move(o));
        it->second.mult += 1.0;
      }
      ModelBlock mb;
      mb.tag = s;
      mb.dim = static_cast<int>(orbits.size());
      std::vector<const Orbit*> basis;
      for (auto& [label, orbit] : orbits) {
        mb.labels.push_back(label);
        basis.push_back(&orbit);
      }
      mb.entries.resize(static_cast<std::size_t>(mb.dim) * mb.dim);
      for (int r = 0; r < mb.dim; ++r)
        for (int c = 0; c < mb.dim; ++c) {
          // entry of the s-transposed extension: the transposed parts swap
          // between row and column before reading the certificate
          MomentKey key{unit_vec(n, basis[r]->i0), unit_vec(n, basis[c]->i0),
                        add(basis[c]->bv, basis[r]->bh), add(basis[r]->bv, basis[c]->bh)};
          KeyRef ref = canonicalize(std::move(key));
          ModelEntryRef out;
          out.var = dict.lookup(ref.key);
          out.conj = ref.conj;
          out.coeff = std::sqrt(basis[r]->mult * basis[c]->mult);
          mb.entries[static_cast<std::size_t>(r) * mb.dim + c] = out;
        }
      model.blocks.push_back(std::move(mb));
    }
  }

  // Trace out B registers 2..t by direct sequence summation.
  std::vector<std::vector<int>> tails;
  {
    std::vector<int> tail(t - 1, 0);
    const long count = static_cast<long>(std::llround(std::pow(double(n), t - 1)));
    for (long code = 0; code < count; ++code) {
      long cc = code;
      for (int p = t - 2; p >= 0; --p) {
        tail[p] = static_cast<int>(cc % n);
        cc /= n;
      }
      tails.push_back(tail);
    }
  }
  ExponentVec pivot_mu(n, 0);
  pivot_mu[n - 1] = t - 1;
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = 0; l < n; ++l) {
          if (i * n + k > j * n + l) continue;
          EqualityBuilder builder;
          for (const auto& tail : tails) {
            const ExponentVec mu = alpha(tail, n);
            MomentKey key{unit_vec(n, i), unit_vec(n, j), add(unit_vec(n, k), mu),
                          add(unit_vec(n, l), mu)};
            if (moment_key_filtered(key, regime)) continue;
            builder.add(key, 1.0);
          }
          MomentKey pivot{unit_vec(n, i), unit_vec(n, j), add(unit_vec(n, k), pivot_mu),
                          add(unit_vec(n, l), pivot_mu)};
          const KeyRef pref = canonicalize(pivot);
          Equality eq = builder.finish(dict, moment_key_filtered(pivot, regime) ? nullptr
                                                                                : &pref.key);
          eq.rhs_constant = norm(i * n + k, j * n + l);
          if (eq.terms.empty()) {
            if (std::abs(eq.rhs_constant) > 1e-9)
              throw std::invalid_argument("state support does not match the regime");
            continue;
          }
          model.equalities.push_back(std::move(eq));
        }

  model.vars = dict.vars;
  return model;
}

DpsModel build_dps_bose(const HermitianMatrix& rho, int t, bool ldui_filter) {
  if (t < 1) throw std::invalid_argument("hierarchy level must be >= 1");
  const int n = bipartite_side(rho);
  // Bose symmetry of the input.
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      for (int k = 0; k < n; ++k)
        for (int l = 0; l < n; ++l)
          if (std::abs(rho.entries(i * n + j, k * n + l) - rho.entries(j * n + i, k * n + l)) >
              1e-10 * (1.0 + rho.max_abs()))
            throw std::invalid_argument("state is not Bose symmetric");
  if (ldui_filter && !matches_regime(rho, Regime::LDUI))
    throw std::invalid_argument("state support does not match the LDUI filter");
  const double tr = trace_normalizer(rho);
  const MatrixXcd norm = rho.entries / tr;

  DpsModel model;
  model.n = n;
  model.t = t;
  model.regime = ldui_filter ? Regime::LDUI : Regime::Generic;
  model.hierarchy = Hierarchy::DpsBose;
  model.state_real = rho.is_real();
  model.scale = tr;

  ExponentVec zero(n, 0);
  auto filtered = [&](const MomentKey& k) { return ldui_filter && k.d != k.dp; };

  VarDict dict;
  const int smax = (t + 1) / 2;
  for (int s = 0; s <= smax; ++s) {
    // basis: exponent pairs (b, bp) with |b| = t+1-s, |bp| = s
    struct Elem {
      ExponentVec b, bp, subkey;
    };
    std::vector<Elem> basis;
    for (const auto& b : exponents_of_weight(n, t + 1 - s))
      for (const auto& bp : exponents_of_weight(n, s)) {
        Elem e{b, bp, {}};
        if (ldui_filter) {
          e.subkey.resize(n);
          for (int q = 0; q < n; ++q) e.subkey[q] = b[q] - bp[q];
        }
        basis.push_back(std::move(e));
      }
    std::stable_sort(basis.begin(), basis.end(),
                     [](const Elem& a, const Elem& b) { return a.subkey < b.subkey; });
    std::size_t start = 0;
    while (start < basis.size()) {
      std::size_t stop = start + 1;
      while (stop < basis.size() && basis[stop].subkey == basis[start].subkey) ++stop;
      if (!ldui_filter) stop = basis.size();
      ModelBlock mb;
      mb.tag = s;
      mb.dim = static_cast<int>(stop - start);
      mb.entries.resize(static_cast<std::size_t>(mb.dim) * mb.dim);
      for (std::size_t r = start; r < stop; ++r) {
        std::vector<int> label = basis[r].b;
        label.insert(label.end(), basis[r].bp.begin(), basis[r].bp.end());
        mb.labels.push_back(std::move(label));
        const double wr =
            sequence_multiplicity(basis[r].b) * sequence_multiplicity(basis[r].bp);
        for (std::size_t c = start; c < stop; ++c) {
          MomentKey key{zero, zero, add(basis[r].b, basis[c].bp), add(basis[r].bp, basis[c].b)};
          ModelEntryRef out;
          if (!filtered(key)) {
            const double wc =
                sequence_multiplicity(basis[c].b) * sequence_multiplicity(basis[c].bp);
            KeyRef ref = canonicalize(std::move(key));
            out.var = dict.lookup(ref.key);
            out.conj = ref.conj;
            out.coeff = std::sqrt(wr * wc);
          }
          mb.entries[(r - start) * mb.dim + (c - start)] = out;
        }
      }
      model.blocks.push_back(std::move(mb));
      start = stop;
    }
  }

  const auto mus = exponents_of_weight(n, t - 1);
  ExponentVec pivot_mu(n, 0);
  pivot_mu[n - 1] = t - 1;
  for (int i = 0; i < n; ++i)
    for (int k = i; k < n; ++k)
      for (int j = 0; j < n; ++j)
        for (int l = j; l < n; ++l) {
          // one equality per multiset pair, upper triangle
          const ExponentVec row = add(unit_vec(n, i), unit_vec(n, k));
          const ExponentVec col = add(unit_vec(n, j), unit_vec(n, l));
          if (col < row) continue;
          EqualityBuilder builder;
          for (const auto& mu : mus) {
            MomentKey key{zero, zero, add(row, mu), add(col, mu)};
            if (filtered(key)) continue;
            builder.add(key, sequence_multiplicity(mu));
          }
          MomentKey pivot{zero, zero, add(row, pivot_mu), add(col, pivot_mu)};
          const KeyRef pref = canonicalize(pivot);
          Equality eq = builder.finish(dict, filtered(pivot) ? nullptr : &pref.key);
          eq.rhs_constant = norm(i * n + k, j * n + l);
          if (eq.terms.empty()) {
            if (std::abs(eq.rhs_constant) > 1e-9)
              throw std::invalid_argument("state support does not match the LDUI filter");
            continue;
          }
          model.equalities.push_back(std::move(eq));
        }

  model.vars = dict.vars;
  return model;
}

namespace {

nlohmann::json exp_json(const ExponentVec& v) { return nlohmann::json(v); }

}  // namespace

std::string DpsModel::dump_json() const {
  nlohmann::json j;
  j["n"] = n;
  j["t"] = t;
  j["regime"] = regime_name(regime);
  j["hierarchy"] = hierarchy == Hierarchy::Dps ? "dps" : "bose";
  j["scale"] = scale;
  j["num_external"] = num_external;
  nlohmann::json vs = nlohmann::json::array();
  for (const auto& v : vars)
    vs.push_back({{"g", exp_json(v.key.g)},
                  {"gp", exp_json(v.key.gp)},
                  {"d", exp_json(v.key.d)},
                  {"dp", exp_json(v.key.dp)},
                  {"real", v.real}});
  j["variables"] = std::move(vs);
  nlohmann::json bs = nlohmann::json::array();
  for (const auto& b : blocks) {
    nlohmann::json jb;
    jb["tag"] = b.tag;
    jb["dim"] = b.dim;
    jb["labels"] = b.labels;
    nlohmann::json es = nlohmann::json::array();
    for (const auto& e : b.entries)
      es.push_back({{"var", e.var}, {"conj", e.conj}, {"coeff", e.coeff}});
    jb["entries"] = std::move(es);
    bs.push_back(std::move(jb));
  }
  j["blocks"] = std::move(bs);
  nlohmann::json eqs = nlohmann::json::array();
  for (const auto& e : equalities) {
    nlohmann::json je;
    nlohmann::json ts = nlohmann::json::array();
    for (const auto& t_ : e.terms)
      ts.push_back({{"var", t_.var}, {"coeff", t_.coeff}, {"conj", t_.conj}});
    je["terms"] = std::move(ts);
    je["rhs_re"] = e.rhs_constant.real();
    je["rhs_im"] = e.rhs_constant.imag();
    je["pivot"] = e.pivot;
    eqs.push_back(std::move(je));
  }
  j["equalities"] = std::move(eqs);
  return j.dump();
}

}  // namespace dpskit
