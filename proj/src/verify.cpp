#include <algorithm>
#include <cmath>

#include "cshmm/claims.hpp"
#include "cshmm/machines/even.hpp"
#include "cshmm/series.hpp"

namespace cshmm {

namespace {

ClaimCheck check(std::string id, std::int64_t t, double value, double bound,
                 bool pass, std::string note) {
  return ClaimCheck{std::move(id), t, value, bound, pass, std::move(note)};
}

}  // namespace

ClaimReport verify_even(double p, std::int64_t t_max) {
  ClaimReport rep;
  rep.claim_id = "even";
  auto even = even_machine(p);

  auto validation = validate_machine(
      *even, {EvenMachine::s1(), EvenMachine::s2()});
  rep.add(check("even.unifilar", 0, validation.all_unifilar ? 1.0 : 0.0, 1.0,
                validation.all_unifilar, "both states"));

  std::int64_t t_oracle = std::min<std::int64_t>(t_max, 10);
  double worst = 0.0;
  double mass_err = 0.0;
  bool tail_zero = true;
  for (std::int64_t t = 1; t <= t_oracle; ++t) {
    WordTable table = word_table(*even, t, 1e-9);
    tail_zero = tail_zero && table.tail <= 1e-15;
    KahanSum total;
    // exhaustive dense enumeration over all 2^t candidate words
    std::uint64_t n = std::uint64_t{1} << t;
    for (std::uint64_t bits = 0; bits < n; ++bits) {
      Word w;
      for (std::int64_t m = 0; m < t; ++m)
        w.push_back((bits >> (t - 1 - m)) & 1);
      double exact = even_dense_word_probability(p, w);
      auto it = table.entries.find(w);
      double got = it == table.entries.end() ? 0.0 : it->second;
      worst = std::max(worst, std::abs(got - exact));
    }
    for (const auto& [w, q] : table.entries) total.add(q);
    mass_err = std::max(mass_err, std::abs(total.value() - 1.0));
  }
  rep.add(check("even.oracle", t_oracle, worst, 1e-12, worst <= 1e-12,
                "max |table - dense| over all words"));
  rep.add(check("even.oracle_mass", t_oracle, mass_err, 1e-12,
                mass_err <= 1e-12 && tail_zero, "total mass and zero tail"));

  Enclosure rate = unifilar_entropy_rate(*even, 1e-9);
  double expected = binary_entropy(p) / (2.0 - p);
  rep.add(check("even.rate", 0, rate.distance(expected), 1e-9,
                rate.distance(expected) <= 1e-9,
                "h_mu vs (1/(2-p)) h_b(p)"));
  return rep;
}

ClaimReport verify_hpm(std::int64_t t_max, double mass_tol) {
  ClaimReport rep;
  rep.claim_id = "hpm";
  auto hpm = hpm_machine();

  for (double eps : {1e-4, 1e-6}) {
    double r = step_stationarity_residual(*hpm, eps);
    rep.add(check("hpm.stationarity", 0, r, 2.0 * eps, r <= 2.0 * eps,
                  "residual at eps=" + std::to_string(eps)));
  }

  EntropyCurve curve = hmu_curve(*hpm, t_max + 1, mass_tol);
  bool all_a = true;
  double worst_margin = 1e300;
  for (std::int64_t t = 1; t <= t_max; ++t) {
    Enclosure bound = hpm_hmu_upper(*hpm, t);
    double up = curve.rows[static_cast<std::size_t>(t)].hmu_t.hi;
    all_a = all_a && up <= bound.lo;
    worst_margin = std::min(worst_margin, bound.lo - up);
  }
  rep.add(check("hpm.prop2.hmu_upper", t_max, worst_margin, 0.0,
                all_a, "min over t of bound_lo - hmu_upper"));

  double b100 = hpm_block_entropy_lower(*hpm, 100);
  double b1e6 = hpm_block_entropy_lower(*hpm, 1000000);
  bool monotone = true;
  double prev = 0.0;
  for (std::int64_t t = 4; t <= 64; ++t) {
    double b = hpm_block_entropy_lower(*hpm, t);
    monotone = monotone && b >= prev - 1e-12;
    prev = b;
  }
  rep.add(check("hpm.prop2.block_series", 0, b1e6 - b100, 0.5,
                monotone && b1e6 - b100 >= 0.5,
                "growth from t=1e2 to t=1e6, monotone"));

  bool all_c = true;
  double worst_c = 1e300;
  for (std::int64_t t = 4; t <= std::min<std::int64_t>(t_max, 24); ++t) {
    double lo = curve.rows[static_cast<std::size_t>(t - 1)].block.lo;
    double b = hpm_block_entropy_lower(*hpm, t);
    all_c = all_c && lo >= b - 1e-9;
    worst_c = std::min(worst_c, lo - b);
  }
  rep.add(check("hpm.prop2.block_lower", std::min<std::int64_t>(t_max, 24),
                worst_c, -1e-9, all_c, "min of H_lo(t) - series(t)"));
  return rep;
}

ClaimReport verify_bc(double q0, std::int64_t t_max, double mass_tol) {
  ClaimReport rep;
  rep.claim_id = "bc";
  auto bc = bc_machine(q0);
  auto chain = bc_class_chain(q0);
  auto ground = bc_machine_true(q0);

  // Claim 1 surrogate: the analytic stationary rule is numerically invariant.
  double r_fine = step_stationarity_residual(*chain, 1e-6);
  rep.add(check("claim1.stationarity", 0, r_fine, 2e-6, r_fine <= 2e-6,
                "state-class chain, eps=1e-6"));
  double r_ground = step_stationarity_residual(*ground, 1e-4);
  rep.add(check("claim1.stationarity", 0, r_ground, 2e-4, r_ground <= 2e-4,
                "ground presentation, eps=1e-4"));

  BalanceResult bal = bc_balance(q0, 20);
  rep.add(check("claim2.balance", 20, bal.max_state_residual, 1e-12,
                bal.max_state_residual <= 1e-12,
                std::to_string(bal.states_checked) + " states"));
  rep.add(check("claim2.root_balance", 0, bal.root_residual, 1e-12,
                bal.root_residual <= 1e-12, "return-completion series"));

  bool bounds_ok = true;
  for (std::int64_t i = 1; i <= 30; ++i) {
    double ratio = 1.0 + (static_cast<double>(i) - 1.0) * bc_p(i);
    bounds_ok = bounds_ok && ratio >= 1.0 && ratio <= 3.0;
  }
  rep.add(check("claim2.pi_ij_bounds", 30, bounds_ok ? 1.0 : 0.0, 1.0,
                bounds_ok, "C/(2^i i^2) <= pi_ij <= 3C/(2^i i^2)"));

  for (std::int64_t t = 1; t <= std::min<std::int64_t>(t_max * 5, 50); ++t) {
    ProbWtResult wt = bc_prob_Wt(*bc, t);
    rep.add(check("claim3", t, wt.series.lo * 12.0 * static_cast<double>(t),
                  1.0, wt.lower_ok && wt.upper_ok,
                  "C/12t <= P(W_t) <= 6C/t"));
  }
  for (std::int64_t t = 1; t <= std::min<std::int64_t>(t_max, 8); ++t) {
    Enclosure series = bc->copy_constant() * bc_wt_series(t);
    Enclosure enu = bc_wt_enumerated(*bc, t, mass_tol);
    double gap = std::max(0.0, std::max(series.lo, enu.lo) -
                                   std::min(series.hi, enu.hi));
    rep.add(check("claim3.enumeration", t, gap, 1e-9, gap <= 1e-9,
                  "series vs word-table mass on {2,3}^t"));
  }

  for (std::int64_t t = 1; t <= std::min<std::int64_t>(t_max, 8); ++t)
    rep.merge(bc_claim4(*bc, t));
  for (std::int64_t t = 1; t <= std::min<std::int64_t>(t_max, 8); ++t)
    rep.merge(bc_claim5(*bc, t));
  rep.merge(bc_claim6(*bc, std::min<std::int64_t>(t_max, 10), mass_tol));

  for (auto [t, i] : std::vector<std::pair<std::int64_t, std::int64_t>>{
           {2, 4}, {3, 6}, {4, 8}}) {
    double v = bc_block_conditional(i, t);
    rep.add(check("claim3.block_conditional", t, v, 1.0 / 6.0, v >= 1.0 / 6.0,
                  "P(W_t | R_" + std::to_string(i) + "j)"));
  }

  Enclosure kac = kac_consistency(*bc, BcMachine::root(), 1e-9);
  bool kac_ok = kac.lo > 1.0 && kac.hi < 1.001;
  rep.add(check("claim1.kac_root", 0, kac.mid(), 1.0, kac_ok,
                "1/pi_root expected return time"));
  return rep;
}

}  // namespace cshmm
