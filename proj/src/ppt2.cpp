#include <atomic>
#include <cmath>
#include <sstream>
#include <thread>

#include "dpskit/ppt2.hpp"

namespace dpskit {

std::uint64_t Rng::next_u64() {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

double Rng::uniform() {
  return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
}

double Rng::gaussian() {
  double u1 = uniform(), u2 = uniform();
  if (u1 <= 0.0) u1 = 0x1.0p-53;
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

Rng Rng::split() { return Rng(next_u64()); }

namespace {

MatrixXcd off_diagonal(const MatrixXcd& m) {
  MatrixXcd out = m;
  out.diagonal().setZero();
  return out;
}

}  // namespace

TripleXYZ compose(const TripleXYZ& t1, const TripleXYZ& t2) {
  if (t1.n != t2.n) throw std::invalid_argument("compose: dimension mismatch");
  const MatrixXd x3 = t1.X * t2.X;
  MatrixXcd y3 = t1.Y.cwiseProduct(t2.Y) + t1.Z.cwiseProduct(t2.Z.transpose());
  MatrixXcd z3 = t1.Y.cwiseProduct(t2.Z) + t1.Z.cwiseProduct(t2.Y.transpose());
  // diagonal corrections tie all three diagonals to diag(X1 X2)
  for (int i = 0; i < t1.n; ++i) {
    y3(i, i) = x3(i, i);
    z3(i, i) = x3(i, i);
  }
  return TripleXYZ(x3, std::move(y3), std::move(z3), 1e-8);
}

MatrixXcd apply_choi_map(const TripleXYZ& t, const MatrixXcd& m) {
  if (m.rows() != t.n || m.cols() != t.n)
    throw std::invalid_argument("apply_choi_map: shape mismatch");
  MatrixXcd out = off_diagonal(t.Y).cwiseProduct(m) +
                  off_diagonal(t.Z).cwiseProduct(m.transpose());
  out.diagonal() += (t.X * m.diagonal().real().matrix()).cast<Complex>();
  // complex diagonals of M are handled entrywise
  if (m.diagonal().imag().cwiseAbs().maxCoeff() > 0.0)
    out.diagonal() += Complex(0, 1) * (t.X * m.diagonal().imag().matrix()).cast<Complex>();
  return out;
}

int default_max_t(Regime regime) {
  switch (regime) {
    case Regime::Generic: return 2;
    case Regime::CLDUI: return 4;
    default: return 3;
  }
}

FactorSet gen_test_states(const ExperimentConfig& cfg) {
  FactorSet out;
  Rng rng(cfg.seed);
  const int n = 4;
  const MatrixXcd y = MatrixXcd::Ones(n, n);
  for (double a : cfg.a_values) {
    MatrixXd x(n, n);
    x << 1, a, 1 / a, 1,
        1 / a, 1, a, 1,
        a, 1 / a, 1, 1,
        1, 1, 1, 1;
    Rng stream = rng.split();
    for (int zi = 0; zi < cfg.num_z; ++zi) {
      for (;;) {
        MatrixXd v(n, n);  // columns = random unit vectors
        for (int c = 0; c < n; ++c) {
          VectorXd g(n);
          for (int r = 0; r < n; ++r) g(r) = stream.gaussian();
          v.col(c) = g / g.norm();
        }
        const MatrixXd z = v.transpose() * v;
        TripleXYZ factor(x, y, z.cast<Complex>(), 1e-8);
        const HermitianMatrix rho = rho_from_triple(factor);
        const HermitianMatrix pt = partial_transpose(rho, {1});
        const double floor = -1e-6 * (1.0 + rho.frobenius_norm());
        if (min_eigenvalue(rho) >= floor && min_eigenvalue(pt) >= floor) {
          out.factors.push_back(std::move(factor));
          out.factor_a.push_back(a);
          break;
        }
        ++out.resampled;
      }
    }
  }
  return out;
}

std::string ExperimentResult::csv() const {
  std::ostringstream os;
  os << "a,i,j,t,regime,verdict,margin,seconds\n";
  for (const auto& r : rows) {
    char margin[64];
    std::snprintf(margin, sizeof(margin), "%.17g", r.margin);
    os << r.a << ',' << r.i << ',' << r.j << ',' << r.t << ',' << regime_name(r.regime) << ','
       << (r.status == SolveStatus::Ok || r.status == SolveStatus::IterationLimit
               ? verdict_name(r.verdict)
               : "NumericalFailure")
       << ',' << margin << ',' << r.seconds << '\n';
  }
  return os.str();
}

ExperimentResult run_experiment(const ExperimentConfig& cfg) {
  ExperimentResult result;
  result.factors = gen_test_states(cfg);
  const int max_t = cfg.max_t > 0 ? cfg.max_t : default_max_t(cfg.regime);
  const int per_a = cfg.num_z;

  struct Job {
    double a;
    int i, j, t;
    HermitianMatrix state;
  };
  std::vector<Job> jobs;
  for (std::size_t fa = 0; fa < result.factors.factors.size(); fa += per_a) {
    for (int i = 0; i < per_a; ++i)
      for (int j = i; j < per_a; ++j) {
        const TripleXYZ composed =
            compose(result.factors.factors[fa + i], result.factors.factors[fa + j]);
        HermitianMatrix state = rho_from_triple(composed);
        if (cfg.regime == Regime::CLDUI) state = project(state, Regime::CLDUI);
        for (int t = 1; t <= max_t; ++t)
          jobs.push_back({result.factors.factor_a[fa], i + 1, j + 1, t, state});
      }
  }

  result.rows.resize(jobs.size());
  SolveOptions opts;
  opts.tol_feas = cfg.tol_feas;
  std::atomic<std::size_t> cursor{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t k = cursor.fetch_add(1);
      if (k >= jobs.size()) return;
      const Job& job = jobs[k];
      ExperimentRow row{job.a, job.i, job.j, job.t, cfg.regime,
                        Verdict::Marginal, SolveStatus::Ok, 0.0, 0.0};
      try {
        const CheckReport rep = check_state(job.state, job.t, cfg.regime, Hierarchy::Dps, opts);
        row.verdict = rep.verdict;
        row.status = rep.status;
        row.margin = rep.margin;
        row.seconds = rep.solve_seconds;
      } catch (const std::exception&) {
        row.status = SolveStatus::NumericalFailure;
      }
      result.rows[k] = row;
    }
  };
  const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
  const std::size_t nthreads = std::min<std::size_t>(hw, jobs.size());
  if (nthreads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t q = 0; q < nthreads; ++q) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return result;
}

}  // namespace dpskit
