#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cshmm/bitpath.hpp"
#include "cshmm/enclosure.hpp"
#include "cshmm/errors.hpp"

namespace cshmm {

struct Symbol {
  std::uint8_t code;
  char glyph;
};

using Alphabet = std::vector<Symbol>;

// A word is a sequence of symbol codes.
using Word = std::vector<std::uint8_t>;

std::string word_str(const Alphabet& alpha, const Word& w);

// Node identity in a lazily expanded, possibly infinite state graph.
// Machines assign their own meaning to tag/idx/path; keys are canonical
// within one machine (value equality means same state).
struct StateKey {
  std::int32_t tag = 0;
  std::array<std::int64_t, 2> idx{0, 0};
  BitPath path;

  friend auto operator<=>(const StateKey&, const StateKey&) = default;
};

std::string key_str(const StateKey& k);

struct Edge {
  std::uint8_t symbol;
  double prob;
  StateKey to;
};

// Finite slice of a stationary distribution: named entries plus an upper
// bound on the mass left outside them.
struct Support {
  std::vector<std::pair<StateKey, double>> entries;
  double tail = 0.0;
  double named_mass() const;
};

// Finite mapping state -> mass plus untracked tail mass (states unknown).
// Tail only ever widens upper bounds; it never converts to named mass.
struct SparseDistribution {
  std::map<StateKey, double> mass;
  double tail = 0.0;

  double named_mass() const;
  void add(const StateKey& k, double m) {
    auto [it, fresh] = mass.emplace(k, m);
    if (!fresh) it->second += m;
  }
};

// An invariant edge-emitting HMM (S, X, {T^(x)}, pi) over a countable state
// set, given by lazy expansion rules. Instances are immutable after
// construction and safe to share across concurrent analyses.
class MachineSpec {
 public:
  virtual ~MachineSpec() = default;

  virtual std::string name() const = 0;
  const Alphabet& alphabet() const { return alphabet_; }
  std::size_t alphabet_size() const { return alphabet_.size(); }
  double lg_alphabet() const;

  // Out-edges of `key`, sorted by symbol code; probabilities sum to 1.
  virtual std::vector<Edge> expand(const StateKey& key) const = 0;

  // Stationary mass of `key` (normalized over the full support).
  virtual double stationary_weight(const StateKey& key) const = 0;

  // Streams (key, weight) pairs covering stationary mass >= 1 - eps when
  // that is reachable within `max_states`; returns an upper bound on the
  // uncovered mass (which may exceed eps when the budget binds).
  virtual double enumerate_support(
      double eps, std::uint64_t max_states,
      const std::function<void(const StateKey&, double)>& sink) const = 0;

  // --- structural hints -----------------------------------------------

  virtual bool unifilar_hint() const { return true; }
  // Whether a.e. infinite future synchronizes the observer.
  virtual bool exact_hint() const { return true; }

  // H[X_0 | S_0 = state-of-key] in bits, when the key denotes a class of
  // ground states sharing that value and it differs from the entropy of the
  // key's own edge distribution (aggregate presentations). nullopt means
  // "compute from edges".
  virtual std::optional<double> state_entropy_override(const StateKey&) const {
    return std::nullopt;
  }

  // sup of H[X_0|S_0 = s] over states outside any support truncation.
  virtual double tail_state_entropy_bound() const { return lg_alphabet(); }

  // sup of H[X_0|S_0 = s] over states reachable by an edge emitting x.
  virtual double post_symbol_entropy_bound(std::uint8_t) const {
    return lg_alphabet();
  }

  // Upper bound on the fraction of unenumerated-support mass that can emit
  // word w (1 = no information). Certified per machine.
  virtual double tail_survival_factor(const Word&) const { return 1.0; }

  // Whether the key denotes a single ground state (as opposed to an
  // aggregate of several).
  virtual bool synchronized_key(const StateKey&) const { return true; }

  // Machine-specific exact stationary draw, when plain inverse-CDF over
  // enumerate_support would be intractable.
  virtual bool has_native_sampler() const { return false; }

  // Bracket of the stationary mass when the analytic rule carries a
  // normalization constant known only as an enclosure.
  virtual Enclosure stationary_weight_bracket(const StateKey& key) const {
    return Enclosure(stationary_weight(key));
  }

  double state_entropy(const StateKey& key) const;

 protected:
  explicit MachineSpec(Alphabet a) : alphabet_(std::move(a)) {}
  Alphabet alphabet_;
};

Support support_enumerator(const MachineSpec& spec, double eps,
                           std::uint64_t max_states = 1'000'000);

// --- hmm-core operations -----------------------------------------------

struct StateValidation {
  StateKey key;
  double probability_sum;
  bool unifilar;
};

struct ValidationReport {
  std::vector<StateValidation> states;
  bool all_unifilar = true;
};

// Checks edge normalization (throws NormalizationError beyond 1e-12) and
// reports per-state and overall unifilarity. With require_unifilar, a
// duplicate (symbol) out-edge raises DuplicateEdgeError instead.
ValidationReport validate_machine(const MachineSpec& spec,
                                  const std::vector<StateKey>& sample_keys,
                                  bool require_unifilar = false);

// One forward step: out(s') = sum_s dist(s) T^(x)_{s s'}. Tail persists.
SparseDistribution apply_symbol(const SparseDistribution& dist,
                                std::uint8_t symbol, const MachineSpec& spec);

// Enclosure of ||pi T^(w)||_1 of width <= eps.
Enclosure word_probability(const MachineSpec& spec, const Word& w, double eps);

// ||pi_eps T - pi_eps||_1 over the eps-truncated stationary vector.
double step_stationarity_residual(const MachineSpec& spec, double eps);

}  // namespace cshmm
