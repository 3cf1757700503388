#pragma once

#include <memory>
#include <utility>

#include "cshmm/machine.hpp"

namespace cshmm {

// Explicit finite machine from transition tables; used for small fixtures
// (i.i.d. coin, deliberately nonunifilar machines, malformed inputs).
// States are keyed by tag 0, idx[0] = state index.
class FiniteMachine final : public MachineSpec {
 public:
  FiniteMachine(std::string name, Alphabet alpha,
                std::vector<std::vector<Edge>> edges, std::vector<double> pi,
                bool unifilar, bool exact)
      : MachineSpec(std::move(alpha)),
        name_(std::move(name)),
        edges_(std::move(edges)),
        pi_(std::move(pi)),
        unifilar_(unifilar),
        exact_(exact) {}

  static StateKey key(std::int64_t s) { return StateKey{0, {s, 0}, {}}; }

  std::string name() const override { return name_; }

  std::vector<Edge> expand(const StateKey& k) const override {
    return edges_.at(static_cast<std::size_t>(k.idx[0]));
  }

  double stationary_weight(const StateKey& k) const override {
    return pi_.at(static_cast<std::size_t>(k.idx[0]));
  }

  double enumerate_support(
      double, std::uint64_t,
      const std::function<void(const StateKey&, double)>& sink) const override {
    for (std::size_t s = 0; s < pi_.size(); ++s)
      sink(key(static_cast<std::int64_t>(s)), pi_[s]);
    return 0.0;
  }

  bool unifilar_hint() const override { return unifilar_; }
  bool exact_hint() const override { return exact_; }
  double tail_state_entropy_bound() const override { return 0.0; }
  double tail_survival_factor(const Word&) const override { return 0.0; }

 private:
  std::string name_;
  std::vector<std::vector<Edge>> edges_;
  std::vector<double> pi_;
  bool unifilar_;
  bool exact_;
};

// Fair-coin process: one state, two equiprobable self-loops.
std::shared_ptr<const MachineSpec> coin_machine();

// Two-state machine with two 0-edges out of state A; stationary pi = (5/7, 2/7).
// Violates unifilarity by construction (Appendix-B style fixture).
std::shared_ptr<const MachineSpec> two_state_nonunifilar();

// Machine whose out-probabilities at state 0 sum to 0.9 (malformed on purpose).
std::shared_ptr<const MachineSpec> broken_normalization_machine();

}  // namespace cshmm
