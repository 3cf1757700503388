#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cshmm/analysis.hpp"
#include "cshmm/claims.hpp"
#include "cshmm/machines/bc.hpp"
#include "cshmm/machines/even.hpp"
#include "cshmm/machines/finite.hpp"
#include "cshmm/machines/hpm.hpp"
#include "cshmm/series.hpp"

using namespace cshmm;

TEST_CASE("word table basics") {
  auto even = even_machine(0.5);

  WordTable t0 = word_table(*even, 0, 1e-9);
  REQUIRE(t0.entries.size() == 1);
  CHECK(t0.entries.begin()->first.empty());
  CHECK(t0.entries.begin()->second == doctest::Approx(1.0));

  WordTable t2 = word_table(*even, 2, 1e-9);
  REQUIRE(t2.entries.size() == 4);
  CHECK(t2.entries.at({0, 0}) == doctest::Approx(1.0 / 6.0));
  CHECK(t2.entries.at({0, 1}) == doctest::Approx(1.0 / 6.0));
  CHECK(t2.entries.at({1, 0}) == doctest::Approx(1.0 / 6.0));
  CHECK(t2.entries.at({1, 1}) == doctest::Approx(1.0 / 2.0));
  CHECK(t2.tail <= 1e-15);
}

TEST_CASE("word table completeness against brute force") {
  auto even = even_machine(0.5);
  for (std::int64_t t = 1; t <= 10; ++t) {
    WordTable table = word_table(*even, t, 1e-9);
    std::uint64_t n = std::uint64_t{1} << t;
    std::size_t positive = 0;
    for (std::uint64_t bits = 0; bits < n; ++bits) {
      Word w;
      for (std::int64_t m = 0; m < t; ++m) w.push_back((bits >> (t - 1 - m)) & 1);
      double exact = even_dense_word_probability(0.5, w);
      auto it = table.entries.find(w);
      if (exact > 0.0) {
        ++positive;
        REQUIRE(it != table.entries.end());
        CHECK(std::abs(it->second - exact) <= 1e-13);
      } else {
        CHECK(it == table.entries.end());
      }
    }
    CHECK(table.entries.size() == positive);
  }
}

TEST_CASE("block entropy enclosures") {
  WordTable point;
  point.length = 3;
  point.entries[{1, 1, 0}] = 1.0;
  Enclosure h0 = block_entropy(point, 1.0);
  CHECK(h0.lo == doctest::Approx(0.0));
  CHECK(h0.hi <= 1e-12);

  WordTable uniform;
  uniform.length = 2;
  uniform.entries[{0, 0}] = 0.25;
  uniform.entries[{0, 1}] = 0.25;
  uniform.entries[{1, 0}] = 0.25;
  uniform.entries[{1, 1}] = 0.25;
  Enclosure h2 = block_entropy(uniform, 1.0);
  CHECK(h2.contains(2.0));
  CHECK(h2.width() <= 1e-12);

  auto even = even_machine(0.5);
  Enclosure h1 = block_entropy(word_table(*even, 1, 1e-9), 1.0);
  CHECK(h1.contains(binary_entropy(1.0 / 3.0)));
}

TEST_CASE("mixed states") {
  auto even = even_machine(0.5);
  MixedState phi0 = mixed_state(*even, {0}, 1e-9);
  REQUIRE(phi0.phi.mass.size() == 1);
  CHECK(phi0.phi.mass.at(EvenMachine::s1()) == doctest::Approx(1.0));

  MixedState phi1 = mixed_state(*even, {1}, 1e-9);
  REQUIRE(phi1.phi.mass.size() == 2);
  CHECK(phi1.phi.mass.at(EvenMachine::s1()) == doctest::Approx(0.5));
  CHECK(phi1.phi.mass.at(EvenMachine::s2()) == doctest::Approx(0.5));

  auto bc = bc_machine(1e-4);
  MixedState phi4 = mixed_state(*bc, {4}, 1e-9);
  REQUIRE(phi4.phi.mass.size() == 1);
  CHECK(phi4.phi.mass.begin()->first == BcMachine::root());
  CHECK(phi4.phi.tail <= 1e-12);

  CHECK_THROWS_AS(mixed_state(*even, {0, 1, 0}, 1e-9), ZeroProbabilityError);
}

TEST_CASE("entropy gaps on the even process") {
  auto even = even_machine(0.5);

  // oracle from dense word probabilities: next-symbol law after w=1
  double p1 = even_dense_word_probability(0.5, {1});
  double p10 = even_dense_word_probability(0.5, {1, 0});
  double h_w_exact = binary_entropy(p10 / p1);
  EntropyGap g = entropy_gap(*even, {1}, 1e-9);
  CHECK(g.h_word.distance(h_w_exact) <= 1e-12);
  CHECK(g.h_word_tilde.distance(0.5) <= 1e-12);

  // a synchronized word has h_w = h~_w
  EntropyGap s = entropy_gap(*even, {0}, 1e-9);
  CHECK(std::abs(s.h_word.mid() - s.h_word_tilde.mid()) <= 1e-12);
}

TEST_CASE("concavity: h_w >= h~_w on every enumerated word") {
  auto check = [](const MachineSpec& spec, std::int64_t t, double tol) {
    forward_levels(spec, t, tol, {}, [&](const LevelInfo& info) {
      if (info.t != t) return true;
      for (const WordState& ws : info.states) {
        double word_tail =
            info.start_tail * spec.tail_survival_factor(ws.word);
        std::optional<std::uint8_t> last;
        if (!ws.word.empty()) last = ws.word.back();
        EntropyGap g = entropy_gap_from(spec, ws.dist, word_tail, last);
        CHECK(g.h_word.lo >= g.h_word_tilde.hi - 1e-9 - g.h_word.width() -
                                 g.h_word_tilde.width());
      }
      return false;
    });
  };
  check(*even_machine(0.5), 6, 1e-9);
  check(*bc_machine(1e-4), 5, 1e-6);
  check(*hpm_machine(), 5, 0.08);
}

TEST_CASE("gap sums") {
  auto coin = coin_machine();
  for (std::int64_t t = 0; t <= 4; ++t) {
    Enclosure g = entropy_gap_sum(*coin, t, 1e-9);
    CHECK(g.lo == doctest::Approx(0.0));
    CHECK(g.hi <= 1e-10);
  }

  auto even = even_machine(0.5);
  Enclosure g0 = entropy_gap_sum(*even, 0, 1e-9);
  double expected = binary_entropy(1.0 / 3.0) - 2.0 / 3.0;
  CHECK(g0.contains(expected));
  CHECK(g0.width() <= 1e-9);
}

TEST_CASE("gap identity against curve differencing") {
  auto even = even_machine(0.5);
  EntropyCurve curve = hmu_curve(*even, 7, 1e-9);
  REQUIRE(curve.entropy_rate);
  for (std::int64_t t = 0; t <= 6; ++t) {
    Enclosure gap = entropy_gap_sum(*even, t, 1e-9);
    Enclosure hmu_next = curve.rows[static_cast<std::size_t>(t)].hmu_t;
    Enclosure rhs = hmu_next - *curve.entropy_rate;
    double sep = std::max(0.0, std::max(gap.lo, rhs.lo) -
                                   std::min(gap.hi, rhs.hi));
    CHECK(sep <= 1e-9);
  }

  auto bc = bc_machine(1e-4);
  EntropyCurve bcurve = hmu_curve(*bc, 5, 1e-6);
  REQUIRE(bcurve.entropy_rate);
  for (std::int64_t t = 0; t <= 4; ++t) {
    Enclosure gap = entropy_gap_sum(*bc, t, 1e-6);
    Enclosure hmu_next = bcurve.rows[static_cast<std::size_t>(t)].hmu_t;
    Enclosure rhs = hmu_next - *bcurve.entropy_rate;
    double sep = std::max(0.0, std::max(gap.lo, rhs.lo) -
                                   std::min(gap.hi, rhs.hi));
    CHECK(sep <= gap.width() + rhs.width() + 1e-9);
  }
}

TEST_CASE("hmu curve on the coin and even machines") {
  auto coin = coin_machine();
  EntropyCurve c = hmu_curve(*coin, 5, 1e-9);
  for (const CurveRow& row : c.rows) {
    CHECK(row.hmu_t.contains(1.0));
    CHECK(row.hmu_t.width() <= 1e-10);
    CHECK(std::abs(row.excess_partial.mid()) <= 1e-9);
  }

  auto even = even_machine(0.5);
  EntropyCurve e = hmu_curve(*even, 10, 1e-9);
  CHECK(e.rows[0].hmu_t.contains(binary_entropy(1.0 / 3.0)));
  for (std::size_t i = 1; i < e.rows.size(); ++i)
    CHECK(e.rows[i].hmu_t.hi <=
          e.rows[i - 1].hmu_t.lo + e.rows[i].hmu_t.width() +
              e.rows[i - 1].hmu_t.width() + 1e-10);
  CHECK(e.rows.back().hmu_t.lo >= 2.0 / 3.0 - 1e-9);
}

TEST_CASE("entropy rate errors on nonunifilar machines") {
  auto bad = two_state_nonunifilar();
  CHECK_THROWS_AS(unifilar_entropy_rate(*bad, 1e-9), UnifilarityError);
  Enclosure bound = generic_rate_lower_bound(*bad, 1e-9);
  CHECK(bound.contains(5.0 / 7.0 * binary_entropy(0.6)));
}

TEST_CASE("rate lower bound vs curve for all machines") {
  auto machines = std::vector<std::shared_ptr<const MachineSpec>>{
      even_machine(0.5), two_state_nonunifilar()};
  for (const auto& m : machines) {
    Enclosure bound = generic_rate_lower_bound(*m, 1e-9);
    EntropyCurve curve = hmu_curve(*m, 8, 1e-9);
    for (const CurveRow& row : curve.rows)
      CHECK(row.hmu_t.lo >= bound.lo - row.hmu_t.width() - bound.width() -
                                1e-10);
  }
}

TEST_CASE("synchronization probabilities") {
  auto coin = coin_machine();
  for (std::int64_t t = 0; t <= 4; ++t) {
    Enclosure ns = sync_probability(*coin, t, 1e-9);
    CHECK(ns.hi <= 1e-10);
  }

  auto even = even_machine(0.5);
  double prev = 1.0;
  for (std::int64_t t = 1; t <= 10; ++t) {
    Enclosure ns = sync_probability(*even, t, 1e-9);
    double expected = even_dense_word_probability(0.5, Word(t, 1));
    CHECK(ns.contains(expected));
    CHECK(ns.hi <= prev + 1e-12);
    prev = ns.hi;
  }

  auto bad = two_state_nonunifilar();
  CHECK_THROWS_AS(sync_probability(*bad, 3, 1e-9), UnifilarityError);
}
