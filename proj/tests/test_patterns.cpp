#include <doctest.h>

#include <set>

#include "dpskit/patterns.hpp"

using namespace dpskit;

namespace {

using Clique = std::set<std::string>;
using CliqueSet = std::set<Clique>;

std::string seq_str(const std::vector<int>& seq) {
  std::string s;
  for (int v : seq) s += static_cast<char>('1' + v);
  return s;
}

CliqueSet layout_cliques(const BlockLayout& layout) {
  CliqueSet out;
  for (const auto& block : layout.blocks) {
    Clique c;
    for (const auto& seq : block.labels) c.insert(seq_str(seq));
    out.insert(std::move(c));
  }
  return out;
}

CliqueSet from_lists(const std::vector<std::vector<std::string>>& lists) {
  CliqueSet out;
  for (const auto& l : lists) out.insert(Clique(l.begin(), l.end()));
  return out;
}

// Direct adjacency definitions of the pattern graphs, as a reference
// independent from the key computation.
bool adjacent(int n, const std::vector<int>& a, const std::vector<int>& b, int s,
              Regime regime) {
  const int t = static_cast<int>(a.size()) - 1;
  // swap the s-prefixes of the two tails
  std::vector<int> ta(a.begin() + 1, a.end()), tb(b.begin() + 1, b.end());
  std::vector<int> ua = ta, ub = tb;
  for (int p = 0; p < s; ++p) std::swap(ua[p], ub[p]);
  std::vector<int> left = {a[0]};
  left.insert(left.end(), ua.begin(), ua.end());
  std::vector<int> right = {b[0]};
  right.insert(right.end(), ub.begin(), ub.end());
  switch (regime) {
    case Regime::Generic:
      return true;
    case Regime::CLDUI: {
      // multiset equality of (i0, swapped-col-tail) vs (j0, swapped-row-tail)
      std::vector<int> x = {a[0]};
      x.insert(x.end(), ub.begin(), ub.end());
      std::vector<int> y = {b[0]};
      y.insert(y.end(), ua.begin(), ua.end());
      return alpha(x, n) == alpha(y, n);
    }
    case Regime::LDUI:
      return alpha(left, n) == alpha(right, n);
    case Regime::LDOI: {
      std::vector<int> all = left;
      all.insert(all.end(), right.begin(), right.end());
      ExponentVec par = alpha(all, n);
      for (int& v : par) v &= 1;
      return weight(par) == 0;
    }
  }
  return false;
}

}  // namespace

TEST_CASE("occurrence vectors") {
  CHECK(alpha({0, 0, 1}, 3) == ExponentVec{2, 1, 0});
  CHECK(alpha({}, 4) == ExponentVec{0, 0, 0, 0});
  CHECK_THROWS(alpha({3}, 3));
  // prefixing a symbol adds its unit vector
  ExponentVec lifted = alpha({2, 1, 1}, 3);
  ExponentVec tail = alpha({1, 1}, 3);
  tail[2] += 1;
  CHECK(lifted == tail);
  CHECK(sequence_multiplicity({2, 1, 0}) == doctest::Approx(3.0));
  CHECK(sequence_multiplicity({0, 0, 0}) == doctest::Approx(1.0));
}

TEST_CASE("clique partition reproduces the printed n=3, t=2 tables") {
  const CliqueSet s0 = layout_cliques(tensor_block_layout(3, 2, 0, Regime::CLDUI));
  CHECK(s0 == from_lists({{"111", "212", "221", "313", "331"},
                          {"222", "121", "112", "323", "332"},
                          {"333", "131", "113", "232", "223"},
                          {"123", "132"},
                          {"213", "231"},
                          {"312", "321"},
                          {"122"},
                          {"133"},
                          {"211"},
                          {"233"},
                          {"311"},
                          {"322"}}));

  const CliqueSet s1 = layout_cliques(tensor_block_layout(3, 2, 1, Regime::CLDUI));
  CHECK(s1 == from_lists({{"111", "122", "133", "212", "313"},
                          {"222", "211", "233", "121", "323"},
                          {"333", "311", "322", "131", "232"},
                          {"123", "213"},
                          {"231", "321"},
                          {"312", "132"},
                          {"112"},
                          {"113"},
                          {"221"},
                          {"223"},
                          {"331"},
                          {"332"}}));

  const CliqueSet s2 = layout_cliques(tensor_block_layout(3, 2, 2, Regime::CLDUI));
  CHECK(s2 == from_lists({{"123", "132", "213", "231", "312", "321"},
                          {"122", "212", "221"},
                          {"133", "313", "331"},
                          {"211", "121", "112"},
                          {"233", "323", "332"},
                          {"311", "131", "113"},
                          {"322", "232", "223"},
                          {"111"},
                          {"222"},
                          {"333"}}));
}

TEST_CASE("key equality matches the adjacency definition exhaustively") {
  for (int n = 2; n <= 3; ++n)
    for (int t = 1; t <= 3; ++t) {
      long total = 1;
      for (int p = 0; p <= t; ++p) total *= n;
      std::vector<std::vector<int>> seqs;
      for (long code = 0; code < total; ++code) {
        std::vector<int> seq(t + 1);
        long c = code;
        for (int p = t; p >= 0; --p) {
          seq[p] = static_cast<int>(c % n);
          c /= n;
        }
        seqs.push_back(seq);
      }
      for (Regime regime : {Regime::CLDUI, Regime::LDUI, Regime::LDOI})
        for (int s = 0; s <= t; ++s)
          for (const auto& a : seqs)
            for (const auto& b : seqs) {
              const std::vector<int> ta(a.begin() + 1, a.end()), tb(b.begin() + 1, b.end());
              const bool keys_equal = clique_key(a[0], ta, s, n, regime) ==
                                      clique_key(b[0], tb, s, n, regime);
              CHECK(keys_equal == adjacent(n, a, b, s, regime));
            }
    }
}

TEST_CASE("partition covers every sequence, trivial cases") {
  for (int s : {0, 1, 2}) {
    const auto layout = tensor_block_layout(2, 2, s, Regime::LDOI);
    std::size_t covered = 0;
    for (const auto& b : layout.blocks) covered += b.labels.size();
    CHECK(covered == 8);
  }
  const auto generic = tensor_block_layout(3, 2, 1, Regime::Generic);
  CHECK(generic.blocks.size() == 1);
  CHECK(generic.blocks[0].size() == 27);
  const auto tiny = tensor_block_layout(1, 3, 0, Regime::CLDUI);
  CHECK(tiny.blocks.size() == 1);
  CHECK(tiny.blocks[0].size() == 1);
}

TEST_CASE("parity-pattern block sizes obey the factorial bound") {
  // The classes are counted by sequences of length t+1 whose symbol parities
  // are fixed, which is bounded by (t+1)! times the number of admissible
  // multisets, at most n^ceil((t+1)/2). The sharper t!-style constant fails
  // already at n = 3, t = 2, where the class of 111 has the seven members
  // {111, 122, 212, 221, 133, 313, 331}.
  for (int n = 2; n <= 5; ++n)
    for (int t = 1; t <= 4; ++t) {
      double fact = 1;
      for (int q = 2; q <= t + 1; ++q) fact *= q;
      const double bound = fact * std::pow(double(n), std::ceil((t + 1) / 2.0));
      for (int s = 0; s <= t; ++s)
        for (const auto& b : tensor_block_layout(n, t, s, Regime::LDOI).blocks)
          CHECK(b.size() <= bound + 1e-9);
    }
  // exact small-case maxima
  auto max_block = [](int n, int t) {
    int best = 0;
    for (const auto& b : tensor_block_layout(n, t, 0, Regime::LDOI).blocks)
      best = std::max(best, b.size());
    return best;
  };
  CHECK(max_block(3, 1) == 3);
  CHECK(max_block(3, 2) == 7);   // 3n - 2
  CHECK(max_block(5, 2) == 13);  // 3n - 2
  CHECK(max_block(3, 3) == 21);
}

TEST_CASE("moment basis cardinalities") {
  CHECK(moment_basis(3, 2, 0, Regime::Generic).size() == 27);
  CHECK(moment_basis(3, 2, 2, Regime::Generic).size() == 18);
  CHECK(moment_basis(3, 2, -2, Regime::Generic).size() == 18);
  CHECK(moment_basis(4, 3, 1, Regime::Generic).size() == 160);
  CHECK_THROWS(moment_basis(3, 2, 1, Regime::Generic));
  // closed form n C(n-1+(t-s')/2, n-1) C(n-1+(t+s')/2, n-1)
  for (int n = 2; n <= 4; ++n)
    for (int t = 1; t <= 4; ++t)
      for (int sp = -t; sp <= t; sp += 2) {
        const long expected =
            n * binomial(n - 1 + (t - sp) / 2, n - 1) * binomial(n - 1 + (t + sp) / 2, n - 1);
        CHECK(static_cast<long>(moment_basis(n, t, sp, Regime::Generic).size()) == expected);
      }
}

namespace {

std::multiset<int> layout_sizes(int n, int t, Regime regime) {
  std::multiset<int> sizes;
  for (const auto& layout : moment_block_layout(n, t, regime))
    for (const auto& block : layout.blocks) sizes.insert(block.size());
  return sizes;
}

std::multiset<int> expand(const std::vector<std::pair<int, int>>& compact) {
  std::multiset<int> out;
  for (auto [size, mult] : compact)
    for (int k = 0; k < mult; ++k) out.insert(size);
  return out;
}

}  // namespace

TEST_CASE("moment block sizes match the printed tables (spot checks)") {
  CHECK(layout_sizes(3, 2, Regime::Generic) == expand({{27, 1}, {18, 2}}));
  CHECK(layout_sizes(3, 3, Regime::Generic) == expand({{54, 2}, {30, 2}}));
  CHECK(layout_sizes(3, 2, Regime::LDOI) == expand({{7, 3}, {6, 1}, {5, 6}, {3, 2}}));
  CHECK(layout_sizes(3, 3, Regime::LDOI) == expand({{15, 2}, {13, 6}, {9, 2}, {7, 6}}));
  CHECK(layout_sizes(3, 2, Regime::CLDUI) == expand({{5, 3}, {3, 4}, {2, 9}, {1, 18}}));
  CHECK(layout_sizes(4, 3, Regime::CLDUI) ==
        expand({{16, 1}, {10, 6}, {7, 16}, {4, 11}, {3, 16}, {2, 60}, {1, 80}}));
}

TEST_CASE("one-sided tables agree under the transpose correspondence") {
  for (int n : {3, 4})
    for (int t : {2, 3}) CHECK(layout_sizes(n, t, Regime::LDUI) == layout_sizes(n, t, Regime::CLDUI));
}

TEST_CASE("sub-partitions exhaust each basis slice") {
  for (Regime regime : {Regime::Generic, Regime::CLDUI, Regime::LDUI, Regime::LDOI})
    for (int n : {2, 3})
      for (int t : {1, 2, 3})
        for (const auto& layout : moment_block_layout(n, t, regime)) {
          std::size_t covered = 0;
          for (const auto& b : layout.blocks) covered += b.labels.size();
          CHECK(covered == moment_basis(n, t, layout.s, regime).size());
        }
}

TEST_CASE("parity-pattern moment block ratio bound") {
  for (int n = 2; n <= 5; ++n)
    for (int t = 1; t <= 5; ++t) {
      const auto layouts = moment_block_layout(n, t, Regime::LDOI);
      for (const auto& layout : layouts) {
        const int sp = layout.s;
        const long slice = n * binomial(n - 1 + (t - sp) / 2, n - 1) *
                           binomial(n - 1 + (t + sp) / 2, n - 1);
        int biggest = 0;
        for (const auto& b : layout.blocks) biggest = std::max(biggest, b.size());
        double half_fact = 1.0;
        for (int q = 2; q <= (t + std::abs(sp)) / 2; ++q) half_fact *= q;
        const double bound = half_fact / std::pow(double(n), std::ceil((t + std::abs(sp)) / 4.0));
        CHECK(static_cast<double>(biggest) / slice <= bound + 1e-12);
      }
    }
}

TEST_CASE("moment entries reference canonical variables") {
  for (const auto& layout : moment_block_layout(3, 2, Regime::LDOI))
    for (const auto& block : layout.blocks)
      for (int r = 0; r < block.size(); ++r)
        for (int c = 0; c < block.size(); ++c) {
          const VarRef& ref = block.at(r, c);
          if (ref.zero) continue;
          CHECK(ref.key.is_canonical());
          const VarRef& mirror = block.at(c, r);
          CHECK(mirror.key == ref.key);
          if (!ref.key.is_real()) CHECK(mirror.conj != ref.conj);
        }
}

TEST_CASE("table csv shape") {
  const auto rows = block_size_table({3}, {2}, Regime::Generic);
  const std::string csv = block_size_table_csv(rows);
  CHECK(csv.find("regime,n,t,block_size,multiplicity\n") == 0);
  CHECK(csv.find("generic,3,2,27,1") != std::string::npos);
  CHECK(csv.find("generic,3,2,18,2") != std::string::npos);
}
