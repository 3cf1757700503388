#pragma once

#include <string>

#include "cshmm/analysis.hpp"
#include "cshmm/machines/bc.hpp"
#include "cshmm/machines/hpm.hpp"

namespace cshmm {

// One verified inequality or cross-check. `value` is the certified enclosure
// side that was compared against `bound`; pass flags derive only from
// certified sides, never point estimates.
struct ClaimCheck {
  std::string claim_id;
  std::int64_t t = 0;
  double value = 0.0;
  double bound = 0.0;
  bool pass = false;
  std::string note;
};

struct ClaimReport {
  std::string claim_id;
  std::vector<ClaimCheck> checks;
  bool all_pass = true;

  void add(ClaimCheck c) {
    all_pass = all_pass && c.pass;
    checks.push_back(std::move(c));
  }
  void merge(const ClaimReport& other) {
    for (const auto& c : other.checks) add(c);
  }
};

// --- independent dense oracle for the Even Process -----------------------

// ||pi T^(w)||_1 by dense 2x2 matrix products; shares no code with the
// sparse forward path.
double even_dense_word_probability(double p, const Word& w);

// --- HPM: proof devices of the infinite-excess-entropy argument ----------

// sum_{i=2}^{floor(t/2)} (C/(i lg^2 i)) lg(i^2 lg^2 i / C), evaluated at the
// lower end of the normalizer bracket; a certified lower bound for H[X^t].
double hpm_block_entropy_lower(const HpmMachine& hpm, std::int64_t t);

// Enclosure of sum_{i > t/2} mu_i, the upper bound for h_mu(t+1).
Enclosure hpm_hmu_upper(const HpmMachine& hpm, std::int64_t t);

// --- BC: numbered-claim evaluators ----------------------------------------

struct ProbWtResult {
  Enclosure probability;  // P(W_t) = C * S_t
  Enclosure series;       // S_t
  bool lower_ok = false;  // S_t >= 1/(12t)
  bool upper_ok = false;  // S_t <= 6/t
};
ProbWtResult bc_prob_Wt(const BcMachine& bc, std::int64_t t);

// Sum of enumerated word-table mass over W_t, with its tail allowance.
Enclosure bc_wt_enumerated(const BcMachine& bc, std::int64_t t,
                           double mass_tol, const EnumerationOptions& opts = {});

// P(X_t in {2,3} | Future^t = w) for two representative words of W_t, plus the
// P(W_{t+1}) / P(W_t) ratio route; bound 1/150.
ClaimReport bc_claim4(const BcMachine& bc, std::int64_t t);

// For every word of W_t (up to sample_cap): upper(h~_w) <= 1/300 and
// lower(h_w) >= 1/150.
ClaimReport bc_claim5(const BcMachine& bc, std::int64_t t,
                      std::uint64_t sample_cap = 1u << 16);

// Certified lower bound of the entropy-gap sum >= C/(3600 t) for t = 1..t_max,
// with the restricted-to-W_t cross-check at each t.
ClaimReport bc_claim6(const BcMachine& bc, std::int64_t t_max,
                      double mass_tol = 1e-6,
                      const EnumerationOptions& opts = {});

// Partial sum sum_{t<=T} C_lo/(3600 t) of the divergent lower-bound series.
double bc_claim6_partial_lower(const BcMachine& bc, std::int64_t T);

// Per-state balance residual max_{sigma: depth <= max_depth} |pi - inflow|
// under the analytic stationary rule, plus the root balance residual
// (telescoped series).
struct BalanceResult {
  double max_state_residual;
  double root_residual;
  std::uint64_t states_checked;
};
BalanceResult bc_balance(double q0, std::int64_t max_depth);

// P(Future^t in W_t | S_0 in R_ij) = p_i (i - t + 1) / (1 + (i-1) p_i),
// the analytic per-block conditional used in the P(W_t) lower bound.
double bc_block_conditional(std::int64_t i, std::int64_t t);

// --- Kac check -------------------------------------------------------------

// Enclosure of 1/pi_state, the expected return time to `state`.
Enclosure kac_consistency(const MachineSpec& spec, const StateKey& state,
                          double eps);

// --- machine-level suites (cmd_verify backends) ---------------------------

ClaimReport verify_even(double p, std::int64_t t_max);
ClaimReport verify_hpm(std::int64_t t_max, double mass_tol);
ClaimReport verify_bc(double q0, std::int64_t t_max, double mass_tol);

}  // namespace cshmm
