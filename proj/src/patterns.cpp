#include "dpskit/patterns.hpp"

#include <algorithm>
#include <sstream>

namespace dpskit {

int weight(const ExponentVec& v) {
  int w = 0;
  for (int x : v) w += x;
  return w;
}

ExponentVec alpha(const std::vector<int>& seq, int n) {
  ExponentVec v(n, 0);
  for (int s : seq) {
    if (s < 0 || s >= n) throw std::invalid_argument("alpha: symbol out of range");
    ++v[s];
  }
  return v;
}

double sequence_multiplicity(const ExponentVec& v) {
  double m = 1.0;
  int total = 0;
  for (int x : v)
    for (int k = 1; k <= x; ++k) m *= static_cast<double>(++total) / k;
  return m;
}

long binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  long r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

std::vector<ExponentVec> exponents_of_weight(int n, int w) {
  std::vector<ExponentVec> out;
  ExponentVec cur(n, 0);
  // Lexicographic enumeration of compositions of w into n parts.
  auto rec = [&](auto&& self, int pos, int rem) -> void {
    if (pos == n - 1) {
      cur[pos] = rem;
      out.push_back(cur);
      return;
    }
    for (int k = 0; k <= rem; ++k) {
      cur[pos] = k;
      self(self, pos + 1, rem - k);
    }
  };
  if (n == 0) {
    if (w == 0) out.push_back({});
    return out;
  }
  rec(rec, 0, w);
  return out;
}

OrbitKey clique_key(int i0, const std::vector<int>& seq, int s, int n, Regime regime) {
  const int t = static_cast<int>(seq.size());
  if (s < 0 || s > t) throw std::invalid_argument("clique_key: bad transpose depth");
  OrbitKey k;
  k.regime = regime;
  k.transpose_depth = s;
  k.key.assign(n, 0);
  switch (regime) {
    case Regime::Generic:
      break;  // single class
    case Regime::CLDUI:
      k.key[i0] += 1;
      for (int p = 0; p < t; ++p) k.key[seq[p]] += (p < s) ? 1 : -1;
      break;
    case Regime::LDUI:
      k.key[i0] += 1;
      for (int p = 0; p < t; ++p) k.key[seq[p]] += (p < s) ? -1 : 1;
      break;
    case Regime::LDOI:
      k.key[i0] += 1;
      for (int p = 0; p < t; ++p) k.key[seq[p]] += 1;
      for (int& x : k.key) x &= 1;
      k.transpose_depth = 0;  // parity key is independent of s
      break;
  }
  return k;
}

BlockLayout tensor_block_layout(int n, int t, int s, Regime regime) {
  BlockLayout layout;
  layout.n = n;
  layout.t = t;
  layout.s = s;
  layout.regime = regime;

  std::map<OrbitKey, std::vector<std::vector<int>>> classes;
  std::vector<int> seq(t + 1, 0);
  const long total = static_cast<long>(std::pow(n, t + 1) + 0.5);
  for (long code = 0; code < total; ++code) {
    long c = code;
    for (int p = t; p >= 0; --p) {
      seq[p] = static_cast<int>(c % n);
      c /= n;
    }
    std::vector<int> tail(seq.begin() + 1, seq.end());
    classes[clique_key(seq[0], tail, s, n, regime)].push_back(seq);
  }
  for (auto& [key, members] : classes) {
    MatrixBlock b;
    b.labels = std::move(members);  // already lexicographic by enumeration
    layout.blocks.push_back(std::move(b));
  }
  return layout;
}

MomentKey moment_entry_key(const MomentBasisElem& row, const MomentBasisElem& col) {
  const int n = static_cast<int>(row.b.size());
  MomentKey k;
  k.g.assign(n, 0);
  k.gp.assign(n, 0);
  k.g[row.i0] = 1;
  k.gp[col.i0] = 1;
  k.d = row.b;
  k.dp = row.bp;
  for (int i = 0; i < n; ++i) {
    k.d[i] += col.bp[i];
    k.dp[i] += col.b[i];
  }
  return k;
}

bool moment_key_filtered(const MomentKey& k, Regime regime) {
  const int n = static_cast<int>(k.g.size());
  switch (regime) {
    case Regime::Generic:
      return false;
    case Regime::CLDUI:
      for (int i = 0; i < n; ++i)
        if (k.g[i] + k.dp[i] != k.gp[i] + k.d[i]) return true;
      return false;
    case Regime::LDUI:
      for (int i = 0; i < n; ++i)
        if (k.g[i] + k.d[i] != k.gp[i] + k.dp[i]) return true;
      return false;
    case Regime::LDOI:
      for (int i = 0; i < n; ++i)
        if ((k.g[i] + k.gp[i] + k.d[i] + k.dp[i]) & 1) return true;
      return false;
  }
  return false;
}

namespace {

// Sub-block key of a basis element under the regime filter: two elements can
// share a nonzero entry only if their keys agree.
ExponentVec sub_block_key(const MomentBasisElem& e, Regime regime) {
  const int n = static_cast<int>(e.b.size());
  ExponentVec key(n, 0);
  switch (regime) {
    case Regime::Generic:
      break;
    case Regime::CLDUI:
      key[e.i0] += 1;
      for (int i = 0; i < n; ++i) key[i] += e.bp[i] - e.b[i];
      break;
    case Regime::LDUI:
      key[e.i0] += 1;
      for (int i = 0; i < n; ++i) key[i] += e.b[i] - e.bp[i];
      break;
    case Regime::LDOI:
      key[e.i0] += 1;
      for (int i = 0; i < n; ++i) key[i] += e.b[i] + e.bp[i];
      for (int& x : key) x &= 1;
      break;
  }
  return key;
}

std::vector<int> encode_elem(const MomentBasisElem& e) {
  std::vector<int> lab;
  lab.push_back(e.i0);
  lab.insert(lab.end(), e.b.begin(), e.b.end());
  lab.insert(lab.end(), e.bp.begin(), e.bp.end());
  return lab;
}

}  // namespace

std::vector<MomentBasisElem> moment_basis(int n, int t, int sp, Regime regime) {
  if ((t - sp) % 2 != 0 || sp < -t || sp > t)
    throw std::invalid_argument("moment_basis: parity mismatch between t and s'");
  const int wb = (t + sp) / 2, wbp = (t - sp) / 2;
  std::vector<MomentBasisElem> basis;
  for (int i0 = 0; i0 < n; ++i0)
    for (const auto& b : exponents_of_weight(n, wb))
      for (const auto& bp : exponents_of_weight(n, wbp))
        basis.push_back({i0, b, bp});
  if (regime != Regime::Generic) {
    std::stable_sort(basis.begin(), basis.end(),
                     [&](const MomentBasisElem& x, const MomentBasisElem& y) {
                       return sub_block_key(x, regime) < sub_block_key(y, regime);
                     });
  }
  return basis;
}

std::vector<BlockLayout> moment_block_layout(int n, int t, Regime regime) {
  std::vector<BlockLayout> out;
  for (int sp = -t; sp <= t; sp += 2) {
    BlockLayout layout;
    layout.n = n;
    layout.t = t;
    layout.s = sp;
    layout.regime = regime;
    const auto basis = moment_basis(n, t, sp, regime);
    // Group contiguous runs with equal sub-block key.
    std::size_t start = 0;
    while (start < basis.size()) {
      std::size_t stop = start + 1;
      if (regime != Regime::Generic) {
        const auto key = sub_block_key(basis[start], regime);
        while (stop < basis.size() && sub_block_key(basis[stop], regime) == key) ++stop;
      } else {
        stop = basis.size();
      }
      MatrixBlock block;
      const int d = static_cast<int>(stop - start);
      block.entries.resize(static_cast<std::size_t>(d) * d);
      for (std::size_t r = start; r < stop; ++r) {
        block.labels.push_back(encode_elem(basis[r]));
        for (std::size_t c = start; c < stop; ++c) {
          MomentKey key = moment_entry_key(basis[r], basis[c]);
          VarRef ref;
          ref.zero = moment_key_filtered(key, regime);
          if (!ref.zero) {
            ref.conj = !key.is_canonical();
            ref.key = ref.conj ? key.conjugated() : std::move(key);
          }
          block.entries[(r - start) * d + (c - start)] = std::move(ref);
        }
      }
      layout.blocks.push_back(std::move(block));
      start = stop;
    }
    out.push_back(std::move(layout));
  }
  return out;
}

std::vector<BlockSizeRow> block_size_table(const std::vector<int>& n_range,
                                           const std::vector<int>& t_range,
                                           Regime regime) {
  std::vector<BlockSizeRow> rows;
  for (int n : n_range)
    for (int t : t_range) {
      std::map<int, long> sizes;
      for (const auto& layout : moment_block_layout(n, t, regime))
        for (const auto& block : layout.blocks) ++sizes[block.size()];
      for (auto it = sizes.rbegin(); it != sizes.rend(); ++it)
        rows.push_back({regime, n, t, it->first, it->second});
    }
  return rows;
}

std::string block_size_table_csv(const std::vector<BlockSizeRow>& rows) {
  std::ostringstream os;
  os << "regime,n,t,block_size,multiplicity\n";
  for (const auto& r : rows)
    os << regime_name(r.regime) << ',' << r.n << ',' << r.t << ',' << r.block_size << ','
       << r.multiplicity << '\n';
  return os.str();
}

}  // namespace dpskit
