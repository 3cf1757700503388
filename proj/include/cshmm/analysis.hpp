#pragma once

#include <functional>
#include <map>
#include <optional>

#include "cshmm/machine.hpp"

namespace cshmm {

// Length-t marginal of the process: enumerated words with certified-lower
// probabilities, plus the mass of unenumerated words.
struct WordTable {
  std::int64_t length = 0;
  std::map<Word, double> entries;
  double tail = 0.0;
};

struct EnumerationOptions {
  double mass_tol = 1e-9;
  std::uint64_t word_cap = 5'000'000;
  std::uint64_t support_budget = 700'000;
};

// Breadth-first forward expansion from the eps-truncated stationary vector.
// Branches may be pruned once accumulated pruned mass stays under the
// tolerance budget; throws BudgetError if the word count exceeds word_cap
// before the table reaches 1 - mass_tol coverage.
WordTable word_table(const MachineSpec& spec, std::int64_t t,
                     double mass_tol,
                     const EnumerationOptions& opts = {});

// Enclosure of the block entropy H[X^t] of a word table, in bits.
Enclosure block_entropy(const WordTable& table, double lg_alphabet);

struct MixedState {
  Word word;
  SparseDistribution phi;        // normalized; phi.tail completes to 1
  Enclosure word_probability;
};

// Conditional state distribution induced by w from the stationary start.
MixedState mixed_state(const MachineSpec& spec, const Word& w, double eps);

struct EntropyGap {
  Enclosure h_word;        // H[X_t | Future^t = w]
  Enclosure h_word_tilde;  // sum_s phi(w)_s H[X|S=s]
};

// Next-symbol entropy of the phi(w)-averaged distribution and its
// state-conditional counterpart; h_word >= h_word_tilde by concavity.
EntropyGap entropy_gap(const MachineSpec& spec, const Word& w, double eps);

// Same, from an explicit forward distribution with a surviving-tail bound.
// last_symbol picks the machine's entropy bound for tail states.
EntropyGap entropy_gap_from(const MachineSpec& spec,
                            const SparseDistribution& dist, double tail,
                            std::optional<std::uint8_t> last_symbol);

// Enclosure of sum_{w in L_t} P(w) (h_w - tilde h_w). The lower bound is the
// computed sum over enumerated words (terms are nonnegative, so truncation is
// one-sided safe); the upper bound adds tail * lg|X|.
Enclosure entropy_gap_sum(const MachineSpec& spec, std::int64_t t,
                          double mass_tol,
                          const EnumerationOptions& opts = {});

struct CurveRow {
  std::int64_t t = 0;
  Enclosure block;          // H[X^t]
  Enclosure hmu_t;          // h_mu(t) = H[X^t] - H[X^(t-1)]
  Enclosure excess_partial; // partial excess-entropy sum at t
  double gap_sum_lower = 0.0;  // certified lower bound of gap sum at level t
};

struct EntropyCurve {
  std::vector<CurveRow> rows;
  std::optional<Enclosure> entropy_rate;
};

// Block entropies, entropy-rate approximations and excess-entropy partial
// sums for t = 1..t_max. When the machine is exact and unifilar the h_mu(t)
// enclosure is intersected with (h_mu + gap sum) and the partial sums are
// computed by both the H - t*h_mu and the sum-of-gaps routes.
EntropyCurve hmu_curve(const MachineSpec& spec, std::int64_t t_max,
                       double mass_tol, const EnumerationOptions& opts = {});

// sum_s pi_s H[X|S=s] for an exact unifilar machine, as a bracketed series
// over the analytic stationary weights. Validates unifilarity on a sample of
// the support and throws UnifilarityError on a violation.
Enclosure unifilar_entropy_rate(const MachineSpec& spec, double tol);

// Same series without the unifilarity requirement: a lower bound on the
// entropy rate of any countable-state machine.
Enclosure generic_rate_lower_bound(const MachineSpec& spec, double tol);

// Enclosure of P(NS_t), the combined probability of length-t words whose
// mixed state is not a point mass (decided at 1e-9 of residual mass).
Enclosure sync_probability(const MachineSpec& spec, std::int64_t t,
                           double mass_tol,
                           const EnumerationOptions& opts = {});

// P(NS_t) enclosures for every t = 0..t_max from one expansion. All upper
// bounds share the final unenumerated mass, so the certified monotone decay
// of nonsynchronizing mass is visible in the uppers themselves.
std::vector<Enclosure> sync_probability_levels(
    const MachineSpec& spec, std::int64_t t_max, double mass_tol,
    const EnumerationOptions& opts = {});

// --- shared enumeration core --------------------------------------------

struct WordState {
  Word word;
  SparseDistribution dist;  // named forward mass; start tail tracked globally
};

struct LevelInfo {
  std::int64_t t;
  const std::vector<WordState>& states;
  double start_tail;   // unenumerated stationary mass
  double pruned_mass;  // forward mass dropped by branch pruning so far
};

// Runs the level-synchronous forward expansion and calls visit after each
// level (including level 0). The visitor may stop the walk early by
// returning false.
void forward_levels(const MachineSpec& spec, std::int64_t t_max,
                    double mass_tol, const EnumerationOptions& opts,
                    const std::function<bool(const LevelInfo&)>& visit);

}  // namespace cshmm
