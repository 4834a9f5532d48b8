#pragma once

#include <cstdint>
#include <map>
#include <vector>

#include "dpskit/states.hpp"

namespace dpskit {

/// Exponent vector over [n]; weight = sum of entries.
using ExponentVec = std::vector<int>;

int weight(const ExponentVec& v);
// Occurrence counts of each symbol of `seq` (values in [0, n)).
ExponentVec alpha(const std::vector<int>& seq, int n);
// Number of distinct sequences with exponent vector v: |v|! / prod v_i!.
double sequence_multiplicity(const ExponentVec& v);
// All exponent vectors of length n with the given weight, lexicographic.
std::vector<ExponentVec> exponents_of_weight(int n, int w);
long binomial(int n, int k);

/// Equivalence-class key of a tensor index (i0, seq) in the pattern graph for
/// the given regime after transposing the first `s` B-registers. Two indices
/// are adjacent iff their keys are equal.
struct OrbitKey {
  ExponentVec key;
  Regime regime = Regime::Generic;
  int transpose_depth = 0;
  auto operator<=>(const OrbitKey&) const = default;
};

OrbitKey clique_key(int i0, const std::vector<int>& seq, int s, int n, Regime regime);

/// Canonical moment-variable key L(x^g conj(x)^gp y^d conj(y)^dp).
/// Conjugation swaps (g, gp) and (d, dp); the lexicographically smaller form
/// is canonical, and self-conjugate keys are real-valued.
struct MomentKey {
  ExponentVec g, gp, d, dp;
  auto operator<=>(const MomentKey&) const = default;
  MomentKey conjugated() const { return {gp, g, dp, d}; }
  bool is_canonical() const { return !(conjugated() < *this); }
  bool is_real() const { return g == gp && d == dp; }
};

/// Reference from a matrix entry to a moment variable. `zero` marks entries
/// pinned to 0 by the regime filter; `conj` marks conjugated references.
struct VarRef {
  MomentKey key;
  bool conj = false;
  bool zero = false;
};

/// One PSD block: ordered basis labels plus the dense entry->variable map
/// (row-major, entries.size() == labels.size()^2).
struct MatrixBlock {
  std::vector<std::vector<int>> labels;  // label = encoded basis element
  std::vector<VarRef> entries;
  int size() const { return static_cast<int>(labels.size()); }
  const VarRef& at(int r, int c) const { return entries[r * labels.size() + c]; }
};

/// Block-diagonal skeleton of one PSD constraint.
struct BlockLayout {
  int n = 0, t = 0;
  int s = 0;        // tensor form: transpose depth; moment form: s'
  Regime regime = Regime::Generic;
  std::vector<MatrixBlock> blocks;
};

// Partition of [n]^(t+1) into the maximal cliques of the regime's pattern
// graph with transpose depth s. Labels are (i0, i_1..i_t) sequences; blocks
// are sorted by clique key, members lexicographically. Entries are left
// empty (pure index combinatorics).
BlockLayout tensor_block_layout(int n, int t, int s, Regime regime);

/// One element (i0, b, bp) of a moment basis.
struct MomentBasisElem {
  int i0 = 0;
  ExponentVec b, bp;   // |b| = (t+sp)/2, |bp| = (t-sp)/2
};

// Ordered basis of the moment slice with bidegree difference sp. For
// structured regimes the order groups elements by their sub-block key.
std::vector<MomentBasisElem> moment_basis(int n, int t, int sp, Regime regime);

// Moment-side block layouts, one per sp in {-t, -t+2, ..., t}, with regime
// sub-block partitions and per-entry canonical variable references.
std::vector<BlockLayout> moment_block_layout(int n, int t, Regime regime);

// Moment key of the entry at (row, col) of a moment block.
MomentKey moment_entry_key(const MomentBasisElem& row, const MomentBasisElem& col);
// Regime zero-filter on moment keys (true = forced zero).
bool moment_key_filtered(const MomentKey& k, Regime regime);

/// Aggregated block sizes, for table generation and golden tests.
struct BlockSizeRow {
  Regime regime;
  int n, t, block_size;
  long multiplicity;
};

std::vector<BlockSizeRow> block_size_table(const std::vector<int>& n_range,
                                           const std::vector<int>& t_range,
                                           Regime regime);
// CSV with header regime,n,t,block_size,multiplicity.
std::string block_size_table_csv(const std::vector<BlockSizeRow>& rows);

}  // namespace dpskit
