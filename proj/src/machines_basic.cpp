#include <cmath>

#include "cshmm/machines/even.hpp"
#include "cshmm/machines/finite.hpp"
#include "cshmm/machines/hpm.hpp"
#include "cshmm/series.hpp"

namespace cshmm {

// --- Even ----------------------------------------------------------------

EvenMachine::EvenMachine(double p) : MachineSpec({{0, '0'}, {1, '1'}}), p_(p) {
  if (!(p > 0.0 && p < 1.0)) throw ParamError("even: p must lie in (0,1)");
}

std::vector<Edge> EvenMachine::expand(const StateKey& k) const {
  if (k.idx[0] == 1) return {{0, p_, s1()}, {1, 1.0 - p_, s2()}};
  return {{1, 1.0, s1()}};
}

double EvenMachine::stationary_weight(const StateKey& k) const {
  return k.idx[0] == 1 ? 1.0 / (2.0 - p_) : (1.0 - p_) / (2.0 - p_);
}

double EvenMachine::enumerate_support(
    double, std::uint64_t,
    const std::function<void(const StateKey&, double)>& sink) const {
  sink(s1(), stationary_weight(s1()));
  sink(s2(), stationary_weight(s2()));
  return 0.0;
}

std::shared_ptr<const EvenMachine> even_machine(double p) {
  return std::make_shared<const EvenMachine>(p);
}

// --- finite fixtures -------------------------------------------------------

std::shared_ptr<const MachineSpec> coin_machine() {
  auto k0 = FiniteMachine::key(0);
  return std::make_shared<const FiniteMachine>(
      "coin", Alphabet{{0, '0'}, {1, '1'}},
      std::vector<std::vector<Edge>>{{{0, 0.5, k0}, {1, 0.5, k0}}},
      std::vector<double>{1.0}, true, true);
}

std::shared_ptr<const MachineSpec> two_state_nonunifilar() {
  auto a = FiniteMachine::key(0);
  auto b = FiniteMachine::key(1);
  return std::make_shared<const FiniteMachine>(
      "nonunifilar2", Alphabet{{0, '0'}, {1, '1'}},
      std::vector<std::vector<Edge>>{{{0, 0.6, a}, {0, 0.4, b}}, {{1, 1.0, a}}},
      std::vector<double>{5.0 / 7.0, 2.0 / 7.0}, false, false);
}

std::shared_ptr<const MachineSpec> broken_normalization_machine() {
  auto k0 = FiniteMachine::key(0);
  return std::make_shared<const FiniteMachine>(
      "broken", Alphabet{{0, '0'}, {1, '1'}},
      std::vector<std::vector<Edge>>{{{0, 0.5, k0}, {1, 0.4, k0}}},
      std::vector<double>{1.0}, true, true);
}

// --- HPM -------------------------------------------------------------------

namespace {

double lg2sq(double x) {
  double l = std::log2(x);
  return l * l;
}

// f(x) = 1/(x lg^2 x), decreasing on [2, inf);
// integral_n^inf f = (ln 2)^2 / ln n.
double hpm_f(double x) { return 1.0 / (x * lg2sq(x)); }
double hpm_tail_integral(double n) {
  const double ln2 = std::log(2.0);
  return ln2 * ln2 / std::log(n);
}

Enclosure hpm_series_tail(std::int64_t n, std::int64_t explicit_terms) {
  return bracketed_series(n, n + explicit_terms, 2, hpm_f, hpm_tail_integral);
}

}  // namespace

Enclosure hpm_weight_tail(std::int64_t n) { return hpm_series_tail(n, 4096); }

Enclosure hpm_normalizer(double tol) {
  if (tol <= 0.0) throw ParamError("hpm_normalizer: tol must be positive");
  // Bracket width of the sum is f(N+1); choose N so the width of 1/sum
  // lands under tol, growing if the first guess falls short.
  std::int64_t n_terms = 1 << 16;
  for (int round = 0; round < 24; ++round) {
    Enclosure s = hpm_series_tail(2, n_terms);
    Enclosure c = Enclosure(1.0) / s;
    if (c.width() <= tol) return c;
    n_terms *= 2;
    if (n_terms > (std::int64_t{1} << 26))
      throw BudgetError("hpm_normalizer: tol unreachable within term budget");
  }
  throw BudgetError("hpm_normalizer: tol unreachable");
}

HpmMachine::HpmMachine() : MachineSpec({{0, '0'}, {1, '1'}}) {
  c_ = hpm_normalizer(1e-10);
}

std::vector<Edge> HpmMachine::expand(const StateKey& k) const {
  std::int64_t i = k.idx[0], j = k.idx[1];
  if (i < 2 || j < 1 || j > i) throw ParamError("hpm: no state (i,j) with i<2");
  if (j < i) return {{1, 1.0, key(i, j + 1)}};
  return {{0, 1.0, key(i, 1)}};
}

double HpmMachine::stationary_weight(const StateKey& k) const {
  std::int64_t i = k.idx[0], j = k.idx[1];
  if (i < 2 || j < 1 || j > i)
    throw ParamError("hpm: stationary weight defined for i >= 2, 1 <= j <= i");
  double di = static_cast<double>(i);
  return c_.mid() / (di * di * lg2sq(di));
}

Enclosure HpmMachine::stationary_weight_bracket(const StateKey& k) const {
  std::int64_t i = k.idx[0], j = k.idx[1];
  if (i < 2 || j < 1 || j > i)
    throw ParamError("hpm: stationary weight defined for i >= 2, 1 <= j <= i");
  double di = static_cast<double>(i);
  return c_ * (1.0 / (di * di * lg2sq(di)));
}

Enclosure HpmMachine::component_mass(std::int64_t i) const {
  double di = static_cast<double>(i);
  return c_ * (1.0 / (di * lg2sq(di)));
}

Enclosure HpmMachine::component_mass_tail(std::int64_t n) const {
  return c_ * hpm_weight_tail(n);
}

// Components up to kMinTruncationIndex are always enumerated, so
// tail_survival_factor may assume tail components exceed it.
static constexpr std::int64_t kMinTruncationIndex = 66;

double HpmMachine::enumerate_support(
    double eps, std::uint64_t max_states,
    const std::function<void(const StateKey&, double)>& sink) const {
  // smallest component cutoff with tail <= eps, subject to the state budget
  // (about I^2/2 states up to component I); binary search on the tail
  std::int64_t budget_cap = static_cast<std::int64_t>(
      std::sqrt(2.0 * static_cast<double>(max_states)) + 1.0);
  budget_cap = std::max(budget_cap, kMinTruncationIndex);
  std::int64_t lo = kMinTruncationIndex, hi = budget_cap;
  if (component_mass_tail(budget_cap + 1).hi > eps) {
    lo = budget_cap;
  } else {
    while (lo < hi) {
      std::int64_t mid = lo + (hi - lo) / 2;
      if (component_mass_tail(mid + 1).hi <= eps)
        hi = mid;
      else
        lo = mid + 1;
    }
  }
  std::int64_t cutoff = lo;
  for (std::int64_t i = 2; i <= cutoff; ++i) {
    double w = stationary_weight(key(i, 1));
    for (std::int64_t j = 1; j <= i; ++j) sink(key(i, j), w);
  }
  return component_mass_tail(cutoff + 1).hi;
}

double HpmMachine::tail_survival_factor(const Word& w) const {
  // Two zeros pin the component period to the zero gap, which is at most
  // |w|-1 < any tail component index.
  if (w.size() + 1 >= static_cast<std::size_t>(kMinTruncationIndex)) return 1.0;
  int zeros = 0;
  for (auto c : w)
    if (c == 0 && ++zeros >= 2) return 0.0;
  return 1.0;
}

std::shared_ptr<const HpmMachine> hpm_machine() {
  static std::shared_ptr<const HpmMachine> inst =
      std::make_shared<const HpmMachine>();
  return inst;
}

}  // namespace cshmm
