#pragma once

#include <memory>

#include "cshmm/machine.hpp"

namespace cshmm {

// Even Process over {0,1}: blocks of uninterrupted 1s are even in length,
// bounded by 0s. Two states; from s1 emit 0 (prob p, stay) or 1 (prob 1-p,
// to s2); from s2 emit 1 (prob 1, back to s1).
// pi = (1/(2-p), (1-p)/(2-p)).
class EvenMachine final : public MachineSpec {
 public:
  explicit EvenMachine(double p);

  static StateKey s1() { return StateKey{0, {1, 0}, {}}; }
  static StateKey s2() { return StateKey{0, {2, 0}, {}}; }

  std::string name() const override { return "even"; }
  std::vector<Edge> expand(const StateKey& k) const override;
  double stationary_weight(const StateKey& k) const override;
  double enumerate_support(
      double eps, std::uint64_t max_states,
      const std::function<void(const StateKey&, double)>& sink) const override;

  double tail_state_entropy_bound() const override { return 0.0; }
  double tail_survival_factor(const Word&) const override { return 0.0; }

  double p() const { return p_; }

 private:
  double p_;
};

std::shared_ptr<const EvenMachine> even_machine(double p);

}  // namespace cshmm
