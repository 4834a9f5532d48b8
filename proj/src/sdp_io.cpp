#include <cstdio>
#include <fstream>
#include <sstream>

#include "dpskit/sdp.hpp"

namespace dpskit {

namespace {

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct SparseEntry {
  int matno, blkno, i, j;  // 1-based, i <= j
  double value;
  bool operator<(const SparseEntry& o) const {
    return std::tie(matno, blkno, i, j) < std::tie(o.matno, o.blkno, o.i, o.j);
  }
};

}  // namespace

// SDPA semantics: min c^T x s.t. sum_i x_i F_i - F_0 >= 0, so the file's F_0
// is the negation of our constant block.
std::string to_sdpa(const LmiProblem& p) {
  p.validate();
  std::vector<SparseEntry> entries;
  for (std::size_t k = 0; k < p.blocks.size(); ++k) {
    const auto& b = p.blocks[k];
    for (int i = 0; i < b.dim; ++i)
      for (int j = i; j < b.dim; ++j)
        if (b.F0(i, j) != 0.0)
          entries.push_back({0, static_cast<int>(k) + 1, i + 1, j + 1, -b.F0(i, j)});
    for (const auto& t : b.terms)
      if (t.value != 0.0)
        entries.push_back({t.var + 1, static_cast<int>(k) + 1, t.row + 1, t.col + 1, t.value});
  }
  std::sort(entries.begin(), entries.end());

  std::ostringstream os;
  os << p.num_vars << '\n';
  os << p.blocks.size() << '\n';
  for (std::size_t k = 0; k < p.blocks.size(); ++k)
    os << p.blocks[k].dim << (k + 1 == p.blocks.size() ? '\n' : ' ');
  for (int i = 0; i < p.num_vars; ++i) {
    const double ci = p.objective.size() ? p.objective(i) : 0.0;
    os << fmt17(ci) << (i + 1 == p.num_vars ? '\n' : ' ');
  }
  for (const auto& e : entries)
    os << e.matno << ' ' << e.blkno << ' ' << e.i << ' ' << e.j << ' ' << fmt17(e.value) << '\n';
  return os.str();
}

void export_sdpa(const LmiProblem& p, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("export_sdpa: cannot open " + path);
  out << to_sdpa(p);
  if (!out) throw std::runtime_error("export_sdpa: write failed");
}

LmiProblem import_sdpa(const std::string& text) {
  std::istringstream is(text);
  std::string line;
  auto next_data_line = [&]() -> std::string {
    while (std::getline(is, line)) {
      if (line.empty()) continue;
      const char c = line[0];
      if (c == '"' || c == '*') continue;  // comment
      return line;
    }
    throw std::runtime_error("import_sdpa: truncated input");
  };

  LmiProblem p;
  p.num_vars = std::stoi(next_data_line());
  const int nblocks = std::stoi(next_data_line());
  {
    std::istringstream ls(next_data_line());
    for (int k = 0; k < nblocks; ++k) {
      int d;
      ls >> d;
      LmiBlock b;
      b.dim = std::abs(d);  // diagonal blocks (negative sizes) read as dense
      b.F0 = MatrixXd::Zero(b.dim, b.dim);
      p.blocks.push_back(std::move(b));
    }
  }
  p.objective = VectorXd::Zero(p.num_vars);
  {
    std::istringstream ls(next_data_line());
    for (int i = 0; i < p.num_vars; ++i) ls >> p.objective(i);
  }
  int matno, blkno, i, j;
  double value;
  while (is >> matno >> blkno >> i >> j >> value) {
    if (blkno < 1 || blkno > nblocks) throw std::runtime_error("import_sdpa: bad block number");
    auto& b = p.blocks[blkno - 1];
    if (i > j) std::swap(i, j);
    if (matno == 0) {
      b.F0(i - 1, j - 1) = -value;
      b.F0(j - 1, i - 1) = -value;
    } else {
      b.terms.push_back({matno - 1, i - 1, j - 1, value});
    }
  }
  p.validate();
  return p;
}

LmiProblem import_sdpa_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("import_sdpa: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return import_sdpa(ss.str());
}

}  // namespace dpskit
