#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cshmm/analysis.hpp"
#include "cshmm/claims.hpp"
#include "cshmm/analysis.hpp"
#include "cshmm/machines/even.hpp"
#include "cshmm/series.hpp"

using namespace cshmm;

TEST_CASE("stationary distribution matches the closed form") {
  auto m = even_machine(0.5);
  CHECK(m->stationary_weight(EvenMachine::s1()) == doctest::Approx(2.0 / 3.0));
  CHECK(m->stationary_weight(EvenMachine::s2()) == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("parameter range") {
  CHECK_THROWS_AS(even_machine(0.0), ParamError);
  CHECK_THROWS_AS(even_machine(1.0), ParamError);
  CHECK_THROWS_AS(even_machine(-0.3), ParamError);
}

TEST_CASE("support words") {
  auto m = even_machine(0.5);
  CHECK(word_probability(*m, {0, 1, 1, 0}, 1e-9).lo > 0.0);
  CHECK(word_probability(*m, {0, 1, 0}, 1e-9).hi == 0.0);
}

TEST_CASE("no odd 1-block bounded by zeros up to length 12") {
  auto m = even_machine(0.5);
  WordTable table = word_table(*m, 12, 1e-9);
  for (const auto& [w, p] : table.entries) {
    // scan maximal 1-blocks that are bounded by 0s on both sides
    std::size_t i = 0;
    while (i < w.size()) {
      if (w[i] == 1) {
        std::size_t j = i;
        while (j < w.size() && w[j] == 1) ++j;
        bool bounded_left = i > 0 && w[i - 1] == 0;
        bool bounded_right = j < w.size() && w[j] == 0;
        if (bounded_left && bounded_right) CHECK((j - i) % 2 == 0);
        i = j;
      } else {
        ++i;
      }
    }
  }
}

TEST_CASE("entropy rate equals h_b(p)/(2-p)") {
  for (double p : {0.2, 0.5, 0.8}) {
    Enclosure rate = unifilar_entropy_rate(*even_machine(p), 1e-10);
    CHECK(rate.distance(binary_entropy(p) / (2.0 - p)) <= 1e-10);
  }
}

TEST_CASE("dense oracle agrees with hand values") {
  CHECK(even_dense_word_probability(0.5, {0}) == doctest::Approx(1.0 / 3.0));
  CHECK(even_dense_word_probability(0.5, {1}) == doctest::Approx(2.0 / 3.0));
  CHECK(even_dense_word_probability(0.5, {0, 0}) == doctest::Approx(1.0 / 6.0));
  CHECK(even_dense_word_probability(0.5, {1, 1}) == doctest::Approx(0.5));
  CHECK(even_dense_word_probability(0.5, {0, 1, 0}) == 0.0);
}

TEST_CASE("word probability encloses the dense oracle up to length 10") {
  auto m = even_machine(0.5);
  for (std::uint64_t bits = 0; bits < 64; ++bits) {
    std::int64_t t = 6;
    Word w;
    for (std::int64_t k = 0; k < t; ++k) w.push_back((bits >> (t - 1 - k)) & 1);
    double exact = even_dense_word_probability(0.5, w);
    Enclosure p = word_probability(*m, w, 1e-9);
    CHECK(p.lo <= exact + 1e-13);
    CHECK(exact <= p.hi + 1e-13);
  }
  Word deep = {1, 1, 0, 1, 1, 1, 1, 0, 0, 1};
  Enclosure p = word_probability(*m, deep, 1e-9);
  CHECK(p.distance(even_dense_word_probability(0.5, deep)) <= 1e-13);
}

TEST_CASE("entropy-rate approximation reaches 1e-3 of the rate by t=18") {
  auto m = even_machine(0.5);
  EntropyCurve curve = hmu_curve(*m, 18, 1e-9);
  CHECK(curve.rows.back().hmu_t.distance(2.0 / 3.0) <= 1e-3);
  // and is still 1e-2-scale away at t=10
  CHECK(curve.rows[9].hmu_t.distance(2.0 / 3.0) > 1e-2);
}

TEST_CASE("verify suite passes") {
  ClaimReport rep = verify_even(0.5, 8);
  CHECK(rep.all_pass);
}
