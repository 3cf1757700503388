#include "cshmm/claims.hpp"

#include <array>
#include <cmath>
#include <sstream>

#include "cshmm/series.hpp"

namespace cshmm {

namespace {

double lg2sq(double x) {
  double l = std::log2(x);
  return l * l;
}

// Forward distribution of a word from the eps/2-truncated start, with the
// surviving-tail bound; shared by the per-word claim evaluators.
struct WordForward {
  SparseDistribution dist;
  double named;
  double tail;
};

WordForward forward_word(const MachineSpec& spec, const Word& w, double eps) {
  Support sup = support_enumerator(spec, std::max(eps * 0.5, 1e-7));
  WordForward f;
  for (const auto& [k, m] : sup.entries) f.dist.add(k, m);
  for (auto c : w) f.dist = apply_symbol(f.dist, c, spec);
  f.named = f.dist.named_mass();
  f.tail = sup.tail * spec.tail_survival_factor(w);
  return f;
}

Word all_copies(std::int64_t t, bool alternate) {
  Word w;
  for (std::int64_t m = 0; m < t; ++m)
    w.push_back(alternate && (m & 1) ? 3 : 2);
  return w;
}

}  // namespace

double even_dense_word_probability(double p, const Word& w) {
  // row vector v, columns = states; T0 = [[p,0],[0,0]], T1 = [[0,1-p],[1,0]]
  std::array<double, 2> v = {1.0 / (2.0 - p), (1.0 - p) / (2.0 - p)};
  for (auto c : w) {
    std::array<double, 2> n{0.0, 0.0};
    if (c == 0) {
      n[0] = v[0] * p;
    } else {
      n[0] = v[1] * 1.0;
      n[1] = v[0] * (1.0 - p);
    }
    v = n;
  }
  return v[0] + v[1];
}

double hpm_block_entropy_lower(const HpmMachine& hpm, std::int64_t t) {
  if (t < 4) throw ParamError("hpm_block_entropy_lower: t >= 4");
  double c = hpm.normalizer().lo;
  KahanSum sum;
  for (std::int64_t i = 2; i <= t / 2; ++i) {
    double di = static_cast<double>(i);
    double denom = di * di * lg2sq(di);
    // per-word mass c/denom stays below 1/e, where -x lg x is increasing,
    // so the lower normalizer end gives a lower bound termwise
    sum.add((c / (di * lg2sq(di))) * std::log2(denom / c));
  }
  return sum.value() * (1.0 - 1e-13);
}

Enclosure hpm_hmu_upper(const HpmMachine& hpm, std::int64_t t) {
  if (t < 1) throw ParamError("hpm_hmu_upper: t >= 1");
  std::int64_t n = std::max<std::int64_t>(2, t / 2 + 1);
  return hpm.component_mass_tail(n);
}

ProbWtResult bc_prob_Wt(const BcMachine& bc, std::int64_t t) {
  ProbWtResult r;
  r.series = bc_wt_series(t);
  r.probability = bc.copy_constant() * r.series;
  double td = static_cast<double>(t);
  r.lower_ok = r.series.lo >= 1.0 / (12.0 * td);
  r.upper_ok = r.series.hi <= 6.0 / td;
  return r;
}

Enclosure bc_wt_enumerated(const BcMachine& bc, std::int64_t t,
                           double mass_tol, const EnumerationOptions& opts) {
  WordTable table = word_table(bc, t, mass_tol, opts);
  KahanSum named;
  for (const auto& [w, p] : table.entries) {
    bool copies = true;
    for (auto c : w) copies = copies && (c == 2 || c == 3);
    if (copies) named.add(p);
  }
  // every unenumerated start can contribute at most its surviving share
  return Enclosure(named.value(), named.value() + table.tail);
}

ClaimReport bc_claim4(const BcMachine& bc, std::int64_t t) {
  ClaimReport report;
  report.claim_id = "claim4";
  const double bound = 1.0 / 150.0;
  Enclosure ratio = bc_wt_series(t + 1) / bc_wt_series(t);

  std::array<Word, 2> words = {all_copies(t, false), all_copies(t, true)};
  std::array<Enclosure, 2> conds;
  for (std::size_t i = 0; i < words.size(); ++i) {
    WordForward f = forward_word(bc, words[i], 1e-6);
    double into_copies = 0.0;
    for (const auto& [key, m] : f.dist.mass) {
      for (const Edge& e : bc.expand(key))
        if (e.symbol == 2 || e.symbol == 3) into_copies += m * e.prob;
    }
    // unenumerated-start survivors of an all-copy word sit on return paths
    // and emit copies with probability one
    Enclosure cond(into_copies / (f.named + f.tail),
                   std::min(1.0, (into_copies + f.tail) / f.named));
    conds[i] = cond;
    ClaimCheck c;
    c.claim_id = "claim4";
    c.t = t;
    c.value = cond.lo;
    c.bound = bound;
    c.pass = cond.lo >= bound;
    c.note = "P(X_t in {2,3} | w=" + word_str(bc.alphabet(), words[i]) + ")";
    report.add(c);
  }

  ClaimCheck sym;
  sym.claim_id = "claim4";
  sym.t = t;
  sym.value = std::abs(conds[0].mid() - conds[1].mid());
  sym.bound = 1e-10;
  sym.pass = sym.value <= 1e-10;
  sym.note = "symmetry across representative words";
  report.add(sym);

  ClaimCheck ratio_check;
  ratio_check.claim_id = "claim4";
  ratio_check.t = t;
  ratio_check.value = ratio.lo;
  ratio_check.bound = bound;
  ratio_check.pass = ratio.lo >= bound;
  ratio_check.note = "ratio P(W_{t+1})/P(W_t)";
  report.add(ratio_check);

  ClaimCheck agree;
  agree.claim_id = "claim4";
  agree.t = t;
  agree.value = std::abs(conds[0].mid() - ratio.mid());
  agree.bound = conds[0].width() + ratio.width() + 1e-10;
  agree.pass = agree.value <= agree.bound;
  agree.note = "direct conditional vs ratio route";
  report.add(agree);
  return report;
}

ClaimReport bc_claim5(const BcMachine& bc, std::int64_t t,
                      std::uint64_t sample_cap) {
  ClaimReport report;
  report.claim_id = "claim5";
  const double tilde_bound = 1.0 / 300.0;
  const double h_bound = 1.0 / 150.0;
  if (t >= 60) throw ParamError("bc_claim5: t out of enumeration reach");

  std::uint64_t total = std::uint64_t{1} << t;
  std::uint64_t n_words = std::min(total, sample_cap);
  double worst_tilde = 0.0, worst_h = bc.lg_alphabet();
  for (std::uint64_t idx = 0; idx < n_words; ++idx) {
    Word w;
    for (std::int64_t m = 0; m < t; ++m)
      w.push_back((idx >> (t - 1 - m)) & 1 ? 3 : 2);
    EntropyGap g = entropy_gap(bc, w, 1e-6 / static_cast<double>(total));
    worst_tilde = std::max(worst_tilde, g.h_word_tilde.hi);
    worst_h = std::min(worst_h, g.h_word.lo);
  }

  ClaimCheck tilde;
  tilde.claim_id = "claim5";
  tilde.t = t;
  tilde.value = worst_tilde;
  tilde.bound = tilde_bound;
  tilde.pass = worst_tilde <= tilde_bound;
  tilde.note = "max over " + std::to_string(n_words) +
               " words of upper(h~_w)";
  report.add(tilde);

  ClaimCheck hw;
  hw.claim_id = "claim5";
  hw.t = t;
  hw.value = worst_h;
  hw.bound = h_bound;
  hw.pass = worst_h >= h_bound;
  hw.note = "min over " + std::to_string(n_words) + " words of lower(h_w)";
  report.add(hw);
  return report;
}

ClaimReport bc_claim6(const BcMachine& bc, std::int64_t t_max, double mass_tol,
                      const EnumerationOptions& opts) {
  ClaimReport report;
  report.claim_id = "claim6";
  double c_hi = bc.copy_constant().hi;

  std::vector<Enclosure> gap(static_cast<std::size_t>(t_max) + 1);
  std::vector<double> wt_named(static_cast<std::size_t>(t_max) + 1, 0.0);
  std::vector<double> wt_gap_lower(static_cast<std::size_t>(t_max) + 1, 0.0);

  forward_levels(bc, t_max, mass_tol, opts, [&](const LevelInfo& info) {
    KahanSum lower, upper, wt_mass, wt_lower;
    for (const WordState& ws : info.states) {
      std::optional<std::uint8_t> last;
      if (!ws.word.empty()) last = ws.word.back();
      // named-measure evaluation: a certified lower bound per word
      EntropyGap g = entropy_gap_from(bc, ws.dist, 0.0, last);
      double named = ws.dist.named_mass();
      double lo = named * std::max(0.0, g.h_word.lo - g.h_word_tilde.hi);
      lower.add(lo);
      upper.add(named * std::max(0.0, g.h_word.hi - g.h_word_tilde.lo));
      bool copies = !ws.word.empty();
      for (auto c : ws.word) copies = copies && (c == 2 || c == 3);
      if (copies) {
        wt_mass.add(named);
        wt_lower.add(lo);
      }
    }
    double tail = info.start_tail + info.pruned_mass;
    gap[static_cast<std::size_t>(info.t)] =
        Enclosure(std::max(0.0, lower.value() * (1.0 - 1e-12)),
                  upper.value() * (1.0 + 1e-12) + tail * bc.lg_alphabet());
    wt_named[static_cast<std::size_t>(info.t)] = wt_mass.value();
    wt_gap_lower[static_cast<std::size_t>(info.t)] = wt_lower.value();
    return true;
  });

  for (std::int64_t t = 1; t <= t_max; ++t) {
    double bound = c_hi / (3600.0 * static_cast<double>(t));
    ClaimCheck c;
    c.claim_id = "claim6";
    c.t = t;
    c.value = gap[static_cast<std::size_t>(t)].lo;
    c.bound = bound;
    c.pass = c.value >= bound;
    c.note = "certified lower of gap sum";
    report.add(c);

    // proof-route cross-check: the W_t-restricted sum already clears
    // P(W_t) * (1/300) up to the enumeration tail
    ClaimCheck r;
    r.claim_id = "claim6";
    r.t = t;
    r.value = wt_gap_lower[static_cast<std::size_t>(t)];
    r.bound = wt_named[static_cast<std::size_t>(t)] / 300.0;
    r.pass = r.value >= r.bound * (1.0 - 1e-9);
    r.note = "restricted-to-W_t sum vs P^(W_t)/300";
    report.add(r);
  }
  return report;
}

double bc_claim6_partial_lower(const BcMachine& bc, std::int64_t T) {
  double c_lo = bc.copy_constant().lo;
  KahanSum h;
  for (std::int64_t t = 1; t <= T; ++t) h.add(1.0 / static_cast<double>(t));
  return c_lo / 3600.0 * h.value();
}

BalanceResult bc_balance(double q0, std::int64_t max_depth) {
  auto norm = bc_normalizer(q0, 1e-13);
  double root = norm.root_mass.mid();
  double c = norm.copy_constant.mid();
  double p0 = 1.0 - 2.0 * q0;

  BalanceResult res{0.0, 0.0, 0};
  auto pi_k1 = [&](std::int64_t i) {
    double d = static_cast<double>(i);
    return c / (d * d * std::pow(2.0, d));
  };
  for (std::int64_t i = 1; i <= max_depth; ++i) {
    double w1 = pi_k1(i);
    double wk = w1 * bc_p(i);
    double parent = i == 1 ? root * q0 : pi_k1(i - 1) * bc_q(i - 1);
    std::int64_t n_j = std::int64_t{1} << i;
    for (std::int64_t j = 0; j < n_j; ++j) {
      res.max_state_residual =
          std::max(res.max_state_residual, std::abs(w1 - parent));
      ++res.states_checked;
      for (std::int64_t k = 2; k <= i; ++k) {
        double inflow = k == 2 ? w1 * bc_p(i) : wk;
        res.max_state_residual =
            std::max(res.max_state_residual, std::abs(wk - inflow));
        ++res.states_checked;
      }
    }
  }
  // root inflow: self-loop plus every return completion
  //   sum_{i>=1} 2^i pi_i1^{last} = C sum_{i>=1} p_i / i^2, telescoping to C
  std::int64_t n = 1 << 20;
  KahanSum tele;
  for (std::int64_t i = 1; i <= n; ++i) {
    double d = static_cast<double>(i);
    tele.add(bc_p(i) / (d * d));
  }
  double dn = static_cast<double>(n) + 1.0;
  double series = tele.value() + 1.0 / (dn * dn);  // exact telescoped tail
  double inflow = root * p0 + c * series;
  res.root_residual = std::abs(inflow - root);
  ++res.states_checked;
  return res;
}

double bc_block_conditional(std::int64_t i, std::int64_t t) {
  double p = bc_p(i);
  double d = static_cast<double>(i);
  return p * (d - static_cast<double>(t) + 1.0) / (1.0 + (d - 1.0) * p);
}

Enclosure kac_consistency(const MachineSpec& spec, const StateKey& state,
                          double) {
  Enclosure w = spec.stationary_weight_bracket(state);
  if (w.lo <= 0.0)
    throw ZeroProbabilityError("kac: state has no certified positive mass");
  return Enclosure(1.0) / w;
}

}  // namespace cshmm
