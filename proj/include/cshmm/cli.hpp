#pragma once

#include <cstdint>
#include <string>

namespace cshmm {

// Exit codes shared by all subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitBudget = 2;
inline constexpr int kExitVerifyFailed = 3;

struct RunConfig {
  std::string machine;       // even | hpm | bc
  double p = 0.5;            // even parameter
  double q0 = 1e-4;          // bc parameter
  double mass_tol = -1.0;    // <0 means per-machine default
  std::int64_t t_max = 10;
  std::uint64_t seed = 1;
  std::uint64_t length = 10000;  // sample only
  std::string out;               // empty means stdout (curves/verify)
  std::string format = "csv";    // csv | jsonl

  double effective_mass_tol() const;
};

int cmd_curves(const RunConfig& config);
int cmd_verify(const RunConfig& config);
int cmd_sample(const RunConfig& config);

// Full argv entry point (CLI11 surface; env prefix EM_).
int run_cli(int argc, const char* const* argv);

}  // namespace cshmm
