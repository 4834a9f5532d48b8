// Command-line front end: separability checks, block tables, copositivity
// tests, the composed-pair experiment, and SDPA export.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <nlohmann/json.hpp>
#include <sstream>

#include "dpskit/cop.hpp"
#include "dpskit/ppt2.hpp"

using namespace dpskit;
using json = nlohmann::json;

namespace {

int verdict_exit_code(Verdict v) {
  switch (v) {
    case Verdict::Feasible: return 0;
    case Verdict::Infeasible: return 1;
    case Verdict::Marginal: return 2;
  }
  return 3;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

HermitianMatrix load_state(const std::string& state_path, const std::string& family) {
  if (!state_path.empty()) return hermitian_from_json(read_file(state_path));
  // family spec: name:param,param,...
  const auto colon = family.find(':');
  if (colon == std::string::npos) throw std::runtime_error("malformed --family");
  const std::string name = family.substr(0, colon);
  std::vector<double> params;
  std::stringstream ss(family.substr(colon + 1));
  std::string tok;
  while (std::getline(ss, tok, ',')) params.push_back(std::stod(tok));
  if (name == "rho_aap" && params.size() == 2) return family_rho_aap(params[0], params[1]);
  if (name == "rho_ab" && params.size() == 2) return family_rho_ab(params[0], params[1]);
  if (name == "dicke" && params.size() == 3)
    return dicke(static_cast<int>(params[0]), static_cast<int>(params[1]),
                 static_cast<int>(params[2]));
  throw std::runtime_error("unknown family: " + family);
}

SolveOptions options_from_env() {
  SolveOptions opts;
  if (const char* tol = std::getenv("DPSKIT_TOL")) opts.tol_feas = std::stod(tol);
  return opts;
}

std::vector<int> parse_range(const std::string& text) {
  const auto colon = text.find(':');
  std::vector<int> out;
  if (colon == std::string::npos) {
    out.push_back(std::stoi(text));
    return out;
  }
  const int lo = std::stoi(text.substr(0, colon));
  const int hi = std::stoi(text.substr(colon + 1));
  for (int v = lo; v <= hi; ++v) out.push_back(v);
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dpskit: separability relaxations with block-diagonal reductions"};
  app.require_subcommand(1);

  // --- check ---
  auto* check = app.add_subcommand("check", "test membership at one hierarchy level");
  std::string state_path, family, regime_str = "auto", hierarchy_str = "dps";
  int level = 1;
  double tol_flag = 0.0;
  int max_iter = 200;
  check->add_option("--state", state_path, "state JSON file");
  check->add_option("--family", family, "rho_aap:a,a' | rho_ab:a,b | dicke:n,i,j");
  check->add_option("--t", level, "hierarchy level")->required();
  check->add_option("--regime", regime_str, "generic|cldui|ldui|ldoi|auto");
  check->add_option("--hierarchy", hierarchy_str, "dps|bose");
  check->add_option("--tol", tol_flag, "feasibility tolerance override");
  check->add_option("--max-iter", max_iter, "solver iteration limit");

  // --- blocks ---
  auto* blocks = app.add_subcommand("blocks", "print the block partition for (n, t)");
  int bn = 3, bt = 2, bs = 0;
  std::string bregime = "cldui", bform = "tensor";
  blocks->add_option("--n", bn)->required();
  blocks->add_option("--t", bt)->required();
  blocks->add_option("--s", bs, "transpose depth (tensor form)");
  blocks->add_option("--regime", bregime);
  blocks->add_option("--form", bform, "tensor|moment");

  // --- tables ---
  auto* tables = app.add_subcommand("tables", "block-size tables as CSV");
  std::string n_range = "3:5", t_range = "2:7", tregime = "generic";
  tables->add_option("--n-range", n_range, "e.g. 3:5");
  tables->add_option("--t-range", t_range, "e.g. 2:7");
  tables->add_option("--regime", tregime, "generic|cldui|ldui|ldoi|all");

  // --- cop ---
  auto* cop = app.add_subcommand("cop", "copositive-side tests");
  auto* cop_horn = cop->add_subcommand("horn", "bracket the Horn matrix");
  auto* cop_k = cop->add_subcommand("k", "level-t membership of a matrix");
  std::string cop_matrix;
  int cop_t = 0;
  cop_k->add_option("--matrix", cop_matrix, "real matrix JSON file")->required();
  cop_k->add_option("--t", cop_t, "level");

  // --- ppt2 ---
  auto* ppt2 = app.add_subcommand("ppt2", "composed-pair experiment");
  auto* ppt2_run = ppt2->add_subcommand("run", "run the experiment, CSV to stdout");
  ExperimentConfig cfg;
  std::string ppt2_regime = "ldoi", ppt2_config, ppt2_out;
  ppt2_run->add_option("--seed", cfg.seed);
  ppt2_run->add_option("--max-t", cfg.max_t, "0 = regime default");
  ppt2_run->add_option("--regime", ppt2_regime);
  ppt2_run->add_option("--a", cfg.a_values, "a values");
  ppt2_run->add_option("--num-z", cfg.num_z);
  ppt2_run->add_option("--config", ppt2_config, "JSON config file");
  ppt2_run->add_option("--out", ppt2_out, "also write CSV here");

  // --- export ---
  auto* exp = app.add_subcommand("export", "write the level-t model as SDPA sparse");
  std::string e_state, e_family, e_regime = "auto", e_out;
  int e_t = 1;
  exp->add_option("--state", e_state);
  exp->add_option("--family", e_family);
  exp->add_option("--t", e_t)->required();
  exp->add_option("--regime", e_regime);
  exp->add_option("--out", e_out, "output .dat-s path")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*check) {
      const HermitianMatrix rho = load_state(state_path, family);
      const Regime regime =
          regime_str == "auto" ? detect_regime(rho) : regime_from_name(regime_str);
      const Hierarchy hierarchy = hierarchy_str == "bose" ? Hierarchy::DpsBose : Hierarchy::Dps;
      SolveOptions opts = options_from_env();
      if (tol_flag > 0) opts.tol_feas = tol_flag;
      opts.max_iter = max_iter;
      const CheckReport rep = check_state(rho, level, regime, hierarchy, opts);
      std::cout << rep.to_json() << "\n";
      std::cerr << verdict_name(rep.verdict) << " (margin " << rep.margin << ", "
                << rep.solve_seconds << " s, regime " << regime_name(regime) << ")\n";
      if (rep.status != SolveStatus::Ok && rep.status != SolveStatus::IterationLimit) return 3;
      return verdict_exit_code(rep.verdict);
    }

    if (*blocks) {
      const Regime regime = regime_from_name(bregime);
      json out;
      out["n"] = bn;
      out["t"] = bt;
      out["regime"] = bregime;
      out["form"] = bform;
      json blocks_json = json::array();
      if (bform == "tensor") {
        out["s"] = bs;
        for (const auto& block : tensor_block_layout(bn, bt, bs, regime).blocks) {
          json labels = json::array();
          for (const auto& seq : block.labels) {
            std::string s;
            for (int v : seq) s += std::to_string(v + 1);
            labels.push_back(s);
          }
          blocks_json.push_back(std::move(labels));
        }
      } else {
        for (const auto& layout : moment_block_layout(bn, bt, regime)) {
          json sizes = json::array();
          for (const auto& block : layout.blocks) sizes.push_back(block.size());
          blocks_json.push_back({{"sp", layout.s}, {"sizes", std::move(sizes)}});
        }
      }
      out["blocks"] = std::move(blocks_json);
      std::cout << out.dump(2) << "\n";
      return 0;
    }

    if (*tables) {
      const auto ns = parse_range(n_range), ts = parse_range(t_range);
      std::vector<BlockSizeRow> rows;
      const std::vector<Regime> regimes =
          tregime == "all"
              ? std::vector<Regime>{Regime::Generic, Regime::CLDUI, Regime::LDUI, Regime::LDOI}
              : std::vector<Regime>{regime_from_name(tregime)};
      for (Regime r : regimes) {
        auto part = block_size_table(ns, ts, r);
        rows.insert(rows.end(), part.begin(), part.end());
      }
      std::cout << block_size_table_csv(rows);
      return 0;
    }

    if (*cop) {
      const SolveOptions opts = options_from_env();
      if (*cop_horn) {
        const RealSymmetric h = horn_matrix();
        const SolveReport k0 = k0_membership(h, opts);
        const SolveReport k1 = kt_membership(h, 1, opts);
        std::cout << "K0: " << verdict_name(k0.verdict) << ", K1: " << verdict_name(k1.verdict)
                  << "\n";
        return (k0.verdict == Verdict::Infeasible && k1.verdict == Verdict::Feasible) ? 0 : 1;
      }
      if (*cop_k) {
        const RealSymmetric a = real_symmetric_from_json(read_file(cop_matrix));
        const SolveReport rep = kt_membership(a, cop_t, opts);
        json out;
        out["t"] = cop_t;
        out["verdict"] = verdict_name(rep.verdict);
        out["margin"] = rep.margin;
        std::cout << out.dump() << "\n";
        return verdict_exit_code(rep.verdict);
      }
      throw std::runtime_error("cop requires a subcommand (horn | k)");
    }

    if (*ppt2) {
      if (*ppt2_run) {
        if (!ppt2_config.empty()) {
          const json j = json::parse(read_file(ppt2_config));
          if (j.contains("a_values")) cfg.a_values = j["a_values"].get<std::vector<double>>();
          if (j.contains("num_z")) cfg.num_z = j["num_z"].get<int>();
          if (j.contains("seed")) cfg.seed = j["seed"].get<std::uint64_t>();
          if (j.contains("max_t")) cfg.max_t = j["max_t"].get<int>();
          if (j.contains("regime")) ppt2_regime = j["regime"].get<std::string>();
          if (j.contains("tol")) cfg.tol_feas = j["tol"].get<double>();
        }
        cfg.regime = regime_from_name(ppt2_regime);
        if (const char* tol = std::getenv("DPSKIT_TOL")) cfg.tol_feas = std::stod(tol);
        const ExperimentResult result = run_experiment(cfg);
        const std::string csv = result.csv();
        std::cout << csv;
        if (!ppt2_out.empty()) {
          std::ofstream out(ppt2_out);
          out << csv;
        }
        std::cerr << "factors: " << result.factors.factors.size()
                  << ", resampled: " << result.factors.resampled
                  << ", rows: " << result.rows.size() << "\n";
        return 0;
      }
      throw std::runtime_error("ppt2 requires the run subcommand");
    }

    if (*exp) {
      const HermitianMatrix rho = load_state(e_state, e_family);
      const Regime regime = e_regime == "auto" ? detect_regime(rho) : regime_from_name(e_regime);
      const DpsModel model = build_dps_moment(rho, e_t, regime);
      const AssembledModel assembled = assemble(model);
      export_sdpa(to_margin_form(assembled.lmi), e_out);
      std::cerr << "wrote " << e_out << " (" << assembled.lmi.num_vars
                << " variables + margin, " << assembled.lmi.blocks.size() << " blocks)\n";
      return 0;
    }
  } catch (const std::exception& err) {
    std::cerr << "error: " << err.what() << "\n";
    return 3;
  }
  return 3;
}
