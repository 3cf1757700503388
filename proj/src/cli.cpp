#include "cshmm/cli.hpp"

#include <iostream>
#include <memory>

#include <CLI11.hpp>
#include <json.hpp>

#include "cshmm/claims.hpp"
#include "cshmm/io.hpp"
#include "cshmm/machines/even.hpp"
#include "cshmm/sampling.hpp"
#include "cshmm/series.hpp"

namespace cshmm {

namespace {

struct MachineBundle {
  std::shared_ptr<const MachineSpec> analysis;  // drives tables and curves
  std::shared_ptr<const MachineSpec> sampler;   // drives trajectories
};

MachineBundle make_machines(const RunConfig& cfg) {
  if (cfg.machine == "even") {
    auto m = even_machine(cfg.p);
    return {m, m};
  }
  if (cfg.machine == "hpm") {
    auto m = hpm_machine();
    return {m, m};
  }
  if (cfg.machine == "bc") {
    return {bc_machine(cfg.q0), bc_machine_true(cfg.q0)};
  }
  throw ParamError("unknown machine '" + cfg.machine + "'");
}

void validate_config(const RunConfig& cfg) {
  if (cfg.machine.empty()) throw ParamError("--machine is required");
  if (cfg.t_max < 1) throw ParamError("--t-max must be >= 1");
  if (cfg.machine == "even" && !(cfg.p > 0.0 && cfg.p < 1.0))
    throw ParamError("--p must lie in (0,1)");
  if (cfg.machine == "bc") bc_root_entropy_check(cfg.q0);
  if (cfg.format != "csv" && cfg.format != "jsonl")
    throw ParamError("--format must be csv or jsonl");
  double tol = cfg.effective_mass_tol();
  if (!(tol > 0.0 && tol < 1.0)) throw ParamError("--mass-tol out of range");
}

void emit(const RunConfig& cfg, const std::string& content) {
  if (cfg.out.empty())
    std::cout << content;
  else
    atomic_write_file(cfg.out, content);
}

std::string rows_to_jsonl(const std::vector<std::string>& header,
                          const std::vector<std::vector<std::string>>& rows) {
  std::ostringstream os;
  for (const auto& row : rows) {
    nlohmann::json obj;
    for (std::size_t i = 0; i < header.size(); ++i) {
      const std::string& cell = row[i];
      char* end = nullptr;
      double v = std::strtod(cell.c_str(), &end);
      if (end && *end == '\0' && !cell.empty())
        obj[header[i]] = v;
      else
        obj[header[i]] = cell;
    }
    os << obj.dump() << '\n';
  }
  return os.str();
}

std::string render(const RunConfig& cfg, const std::vector<std::string>& header,
                   const std::vector<std::vector<std::string>>& rows) {
  if (cfg.format == "jsonl") return rows_to_jsonl(header, rows);
  CsvBuilder csv(header);
  for (const auto& r : rows) csv.append_row(r);
  return csv.str();
}

}  // namespace

double RunConfig::effective_mass_tol() const {
  if (mass_tol > 0.0) return mass_tol;
  if (machine == "hpm") return 0.08;
  if (machine == "bc") return 1e-6;
  return 1e-9;
}

int cmd_curves(const RunConfig& cfg) {
  try {
    validate_config(cfg);
    MachineBundle m = make_machines(cfg);
    EntropyCurve curve =
        hmu_curve(*m.analysis, cfg.t_max, cfg.effective_mass_tol());
    std::vector<std::string> header = {
        "t",           "H_lower",         "H_upper",
        "hmu_t_lower", "hmu_t_upper",     "E_partial_lower",
        "E_partial_upper", "gap_sum_lower"};
    std::vector<std::vector<std::string>> rows;
    for (const CurveRow& r : curve.rows) {
      rows.push_back({std::to_string(r.t), format_g12(r.block.lo),
                      format_g12(r.block.hi), format_g12(r.hmu_t.lo),
                      format_g12(r.hmu_t.hi), format_g12(r.excess_partial.lo),
                      format_g12(r.excess_partial.hi),
                      format_g12(r.gap_sum_lower)});
    }
    emit(cfg, render(cfg, header, rows));
    return kExitOk;
  } catch (const BudgetError& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_verify(const RunConfig& cfg) {
  try {
    validate_config(cfg);
    ClaimReport rep;
    if (cfg.machine == "even")
      rep = verify_even(cfg.p, cfg.t_max);
    else if (cfg.machine == "hpm")
      rep = verify_hpm(cfg.t_max, cfg.effective_mass_tol());
    else
      rep = verify_bc(cfg.q0, cfg.t_max, cfg.effective_mass_tol());

    std::vector<std::string> header = {"claim", "t", "value", "bound", "pass",
                                       "note"};
    std::vector<std::vector<std::string>> rows;
    for (const ClaimCheck& c : rep.checks)
      rows.push_back({c.claim_id, std::to_string(c.t), format_g12(c.value),
                      format_g12(c.bound), c.pass ? "1" : "0", c.note});
    std::string content = render(cfg, header, rows);
    std::cout << content;
    if (!cfg.out.empty()) atomic_write_file(cfg.out, content);
    return rep.all_pass ? kExitOk : kExitVerifyFailed;
  } catch (const BudgetError& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int cmd_sample(const RunConfig& cfg) {
  try {
    validate_config(cfg);
    MachineBundle m = make_machines(cfg);
    const MachineSpec& spec = *m.sampler;
    Rng rng(cfg.seed);
    double eps = std::min(cfg.effective_mass_tol(), 1e-6);
    StateKey start = sample_stationary_state(spec, rng, eps);
    Trajectory traj = sample_path(spec, rng, start, cfg.length);
    traj.seed = cfg.seed;

    std::string record = word_str(spec.alphabet(), traj.symbols);
    record.push_back('\n');
    std::string path = cfg.out.empty() ? "trajectory.txt" : cfg.out;
    atomic_write_file(path, record);

    std::int64_t t = std::min<std::int64_t>(3, cfg.t_max);
    Enclosure exact =
        block_entropy(word_table(*m.analysis, t, cfg.effective_mass_tol()),
                      m.analysis->lg_alphabet());
    std::ostringstream summary;
    summary << "wrote " << cfg.length << " symbols to " << path << "\n";
    try {
      EstimateReport est = empirical_block_entropy({traj}, t, exact);
      summary << "empirical H[X^" << t << "] = " << format_g12(est.estimate)
              << " bits, exact in [" << format_g12(exact.lo) << ", "
              << format_g12(exact.hi) << "]\n";
    } catch (const InsufficientDataError&) {
      summary << "trajectory too short for an empirical H[X^" << t
              << "] estimate\n";
    }
    std::cout << summary.str();
    return kExitOk;
  } catch (const BudgetError& e) {
    std::cerr << "budget exhausted: " << e.what() << "\n";
    return kExitBudget;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitConfig;
  }
}

int run_cli(int argc, const char* const* argv) {
  CLI::App app{"countable-state HMM analysis: certified word probabilities, "
               "entropy curves, claim verification and sampling"};
  app.require_subcommand(1);

  RunConfig cfg;
  auto add_common = [&cfg](CLI::App* sub) {
    sub->add_option("--machine", cfg.machine, "even | hpm | bc")
        ->envname("EM_MACHINE");
    sub->add_option("--p", cfg.p, "even process parameter")->envname("EM_P");
    sub->add_option("--q0", cfg.q0, "bc root descent probability")
        ->envname("EM_Q0");
    sub->add_option("--mass-tol", cfg.mass_tol,
                    "enumeration mass tolerance (per-machine default)")
        ->envname("EM_MASS_TOL");
    sub->add_option("--t-max", cfg.t_max, "largest block length")
        ->envname("EM_T_MAX");
    sub->add_option("--seed", cfg.seed, "rng seed")->envname("EM_SEED");
    sub->add_option("--out", cfg.out, "output path (default stdout)")
        ->envname("EM_OUT");
    sub->add_option("--format", cfg.format, "csv | jsonl")
        ->envname("EM_FORMAT");
  };

  CLI::App* curves = app.add_subcommand(
      "curves", "block entropies, entropy-rate approximations, excess sums");
  add_common(curves);
  CLI::App* verify = app.add_subcommand(
      "verify", "run the claim suite for a machine; exit 3 on any failure");
  add_common(verify);
  CLI::App* sample =
      app.add_subcommand("sample", "write a stationary trajectory");
  add_common(sample);
  sample->add_option("--length", cfg.length, "trajectory length")
      ->envname("EM_LENGTH");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  if (curves->parsed()) return cmd_curves(cfg);
  if (verify->parsed()) return cmd_verify(cfg);
  return cmd_sample(cfg);
}

}  // namespace cshmm
