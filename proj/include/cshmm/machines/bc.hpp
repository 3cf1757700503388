#pragma once

#include <memory>

#include "cshmm/machine.hpp"

namespace cshmm {

// H[(p0, q0, q0)] with p0 = 1 - 2 q0, and whether it fits the 1/300 budget
// required of the root.
struct RootEntropyCheck {
  double value;
  bool pass;
};
RootEntropyCheck bc_root_entropy_check(double q0);

// Root mass and the constant C = pi_root (1 - p0), both bracketed to width
// <= tol by series evaluation with integral-test tails.
struct BcNormalizer {
  Enclosure root_mass;      // pi of the root state
  Enclosure copy_constant;  // C
};
BcNormalizer bc_normalizer(double q0, double tol = 1e-12);

// Branch probabilities of the tree level i >= 1: q_i = i^2/(2(i+1)^2) per
// child, p_i = (2i+1)/(i+1)^2 back toward the root.
double bc_q(std::int64_t i);
double bc_p(std::int64_t i);
// H[(p_i, q_i, q_i)] = h_b(p_i) + 1 - p_i.
double bc_branch_entropy(std::int64_t i);

// Bracket of S_t = sum_{i>=t} (2i+1)(i-t+1) / (i^2 (i+1)^2); the probability
// of the all-copy word set W_t equals C * S_t.
Enclosure bc_wt_series(std::int64_t t);

// ---------------------------------------------------------------------------
// Analysis presentation. States carry exactly what an observer of a
// stationary window can know:
//   Root                          the root node,
//   Tree(i, u; s)                 a tree node at depth i whose first u path
//                                 bits are unresolved (uniform) and whose
//                                 last |s| = i - u bits were observed,
//   Ret(u; s)                     a return path with u unresolved copies
//                                 followed by the observed bits s.
// Unresolved bits are i.i.d. uniform under the stationary law, so each key
// aggregates an exact uniform mixture of ground states and the presentation
// generates the same process. Time-0 masses live on Root, Tree(i,i;-) and
// Ret(r;-) only; supports stay polynomial where the ground tree is
// exponential. Keys with u = 0 denote single ground states.
// ---------------------------------------------------------------------------
class BcMachine final : public MachineSpec {
 public:
  explicit BcMachine(double q0);

  static constexpr std::int32_t kRoot = 0;
  static constexpr std::int32_t kTree = 1;
  static constexpr std::int32_t kRet = 2;

  static StateKey root() { return StateKey{kRoot, {0, 0}, {}}; }
  static StateKey tree(std::int64_t i, std::int64_t u, BitPath s) {
    return StateKey{kTree, {i, u}, std::move(s)};
  }
  static StateKey ret(std::int64_t u, BitPath s) {
    if (u == 0 && s.empty()) return root();
    return StateKey{kRet, {u, 0}, std::move(s)};
  }

  std::string name() const override { return "bc"; }
  std::vector<Edge> expand(const StateKey& k) const override;
  double stationary_weight(const StateKey& k) const override;
  Enclosure stationary_weight_bracket(const StateKey& k) const override;
  double enumerate_support(
      double eps, std::uint64_t max_states,
      const std::function<void(const StateKey&, double)>& sink) const override;

  std::optional<double> state_entropy_override(const StateKey& k) const override;
  double tail_state_entropy_bound() const override { return std::log2(3.0); }
  double post_symbol_entropy_bound(std::uint8_t x) const override;
  double tail_survival_factor(const Word& w) const override;
  bool synchronized_key(const StateKey& k) const override;

  double q0() const { return q0_; }
  double p0() const { return 1.0 - 2.0 * q0_; }
  double root_next_entropy() const { return h0_; }
  const Enclosure& root_mass() const { return root_mass_; }
  const Enclosure& copy_constant() const { return c_; }

  // sum_s pi_s H[X|S=s], bracketed to width <= tol.
  Enclosure entropy_rate_series(double tol) const;

 private:
  double q0_;
  double h0_;
  Enclosure root_mass_;
  Enclosure c_;
};

std::shared_ptr<const BcMachine> bc_machine(double q0 = 1e-4);

// ---------------------------------------------------------------------------
// Ground presentation: states sigma_ij^k with i >= 0, 1 <= j <= 2^i encoded
// as the i-bit root-to-node path (msb = first step, 0 = left), and return
// position k in [1, max(i,1)]. Mass-covering truncations enumerate whole
// depths and hence grow as 2^i; intended for validation, per-state balance,
// sampling and small-window cross-checks of the analysis presentation.
// ---------------------------------------------------------------------------
class BcTrueMachine final : public MachineSpec {
 public:
  explicit BcTrueMachine(double q0);

  static StateKey root() { return StateKey{0, {0, 1}, {}}; }
  static StateKey state(std::int64_t i, std::int64_t k, BitPath path) {
    return StateKey{0, {i, k}, std::move(path)};
  }

  std::string name() const override { return "bc_true"; }
  std::vector<Edge> expand(const StateKey& k) const override;
  double stationary_weight(const StateKey& k) const override;
  Enclosure stationary_weight_bracket(const StateKey& k) const override;
  double enumerate_support(
      double eps, std::uint64_t max_states,
      const std::function<void(const StateKey&, double)>& sink) const override;

  double tail_state_entropy_bound() const override { return std::log2(3.0); }
  double tail_survival_factor(const Word& w) const override;

  bool has_native_sampler() const override { return true; }
  StateKey sample_stationary_native(const std::function<double()>& unit,
                                    double eps) const;

  double q0() const { return q0_; }
  const Enclosure& root_mass() const { return root_mass_; }
  const Enclosure& copy_constant() const { return c_; }

 private:
  double q0_;
  Enclosure root_mass_;
  Enclosure c_;
};

std::shared_ptr<const BcTrueMachine> bc_machine_true(double q0 = 1e-4);

// ---------------------------------------------------------------------------
// Quotient of the ground state chain by the breadth index j. Classes (i, k)
// are exactly lumpable for the state chain, so the analytic stationary rule
// is invariant on them and mass-covering truncations are quadratic in depth.
// Outputs are symbol classes (d = down, c = copy, 4 = root loop); the copied
// bit values are not represented, so this chain serves the stationarity
// residual, not word analysis.
// ---------------------------------------------------------------------------
class BcClassChain final : public MachineSpec {
 public:
  explicit BcClassChain(double q0);

  static StateKey cls(std::int64_t i, std::int64_t k) {
    return StateKey{0, {i, k}, {}};
  }
  static StateKey root() { return cls(0, 1); }

  std::string name() const override { return "bc_classes"; }
  std::vector<Edge> expand(const StateKey& k) const override;
  double stationary_weight(const StateKey& k) const override;
  double enumerate_support(
      double eps, std::uint64_t max_states,
      const std::function<void(const StateKey&, double)>& sink) const override;

 private:
  double q0_;
  Enclosure root_mass_;
  Enclosure c_;
};

std::shared_ptr<const BcClassChain> bc_class_chain(double q0 = 1e-4);

}  // namespace cshmm
