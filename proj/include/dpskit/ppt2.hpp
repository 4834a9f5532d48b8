#pragma once

#include <cstdint>

#include "dpskit/relax.hpp"

namespace dpskit {

/// Splittable 64-bit generator (splitmix64 core) used for all randomized
/// constructions; deterministic for a fixed seed across platforms.
struct Rng {
  std::uint64_t state = 0;

  explicit Rng(std::uint64_t seed = 0) : state(seed) {}
  std::uint64_t next_u64();
  double uniform();   // [0, 1)
  double gaussian();  // standard normal (Box-Muller, no cached spare)
  Rng split();        // derive an independent child stream
};

// Composition of map triples: the triple whose induced map is the
// composition of the two arguments' induced maps. Diagonal corrections keep
// the three diagonals equal exactly.
TripleXYZ compose(const TripleXYZ& t1, const TripleXYZ& t2);

// The linear map encoded by a triple, applied to M:
// Diag(X diag(M)) + off(Y) o M + off(Z) o M^T.
MatrixXcd apply_choi_map(const TripleXYZ& t, const MatrixXcd& m);

struct ExperimentConfig {
  std::vector<double> a_values = {2.0, 3.0, 4.0};
  int num_z = 5;
  std::uint64_t seed = 7;
  int max_t = 0;  // 0 = regime default (generic 2, ldoi 3, cldui 4)
  Regime regime = Regime::LDOI;
  double tol_feas = 1e-7;
};

int default_max_t(Regime regime);

struct FactorSet {
  std::vector<TripleXYZ> factors;  // a-major, then z index
  std::vector<double> factor_a;
  int resampled = 0;
};

// Level-1-feasible test factors: cyclic X_a extended to n=4, all-ones Y, and
// Gram matrices of random unit vectors as Z. Factors failing the level-1
// check outright are resampled (and counted); marginal ones are kept.
FactorSet gen_test_states(const ExperimentConfig& cfg);

struct ExperimentRow {
  double a;
  int i, j, t;
  Regime regime;
  Verdict verdict;
  SolveStatus status;
  double margin;
  double seconds;
};

struct ExperimentResult {
  FactorSet factors;
  std::vector<ExperimentRow> rows;
  std::string csv() const;  // header a,i,j,t,regime,verdict,margin,seconds
};

// Composed pairs (same a, i <= j) checked at levels 1..max_t in the chosen
// regime; rows in deterministic key order regardless of scheduling.
ExperimentResult run_experiment(const ExperimentConfig& cfg);

}  // namespace dpskit
