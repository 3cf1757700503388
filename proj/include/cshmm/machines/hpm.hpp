#pragma once

#include <memory>

#include "cshmm/machine.hpp"

namespace cshmm {

// Normalizer C = 1 / sum_{i>=2} 1/(i lg^2 i), bracketed to width <= tol via
// the integral-test tail of the defining series. All logs base 2.
Enclosure hpm_normalizer(double tol);

// Bracket of sum_{i>=n} 1/(i lg^2 i), n >= 2 (before multiplying by C).
Enclosure hpm_weight_tail(std::int64_t n);

// Heavy-Tailed Periodic Mixture: disjoint cycles M_i (i >= 2), component i
// generating i-1 ones followed by a zero, weighted mu_i = C/(i lg^2 i);
// per-state mass pi_ij = C/(i^2 lg^2 i). States keyed (i, j), 1 <= j <= i.
class HpmMachine final : public MachineSpec {
 public:
  HpmMachine();

  static StateKey key(std::int64_t i, std::int64_t j) {
    return StateKey{0, {i, j}, {}};
  }

  std::string name() const override { return "hpm"; }
  std::vector<Edge> expand(const StateKey& k) const override;
  double stationary_weight(const StateKey& k) const override;
  Enclosure stationary_weight_bracket(const StateKey& k) const override;
  double enumerate_support(
      double eps, std::uint64_t max_states,
      const std::function<void(const StateKey&, double)>& sink) const override;

  // Every state has exactly one out-edge.
  double tail_state_entropy_bound() const override { return 0.0; }
  double post_symbol_entropy_bound(std::uint8_t) const override { return 0.0; }
  // Two zeros pin the component period, which truncation already covers.
  double tail_survival_factor(const Word& w) const override;

  const Enclosure& normalizer() const { return c_; }
  Enclosure component_mass(std::int64_t i) const;       // mu_i
  Enclosure component_mass_tail(std::int64_t n) const;  // sum_{i>=n} mu_i

 private:
  Enclosure c_;
};

std::shared_ptr<const HpmMachine> hpm_machine();

}  // namespace cshmm
