#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cshmm/machines/bc.hpp"
#include "cshmm/machines/even.hpp"
#include "cshmm/machines/finite.hpp"
#include "cshmm/machines/hpm.hpp"
#include "cshmm/series.hpp"

using namespace cshmm;

TEST_CASE("validate_machine on the even process") {
  auto even = even_machine(0.5);
  auto rep = validate_machine(*even, {EvenMachine::s1(), EvenMachine::s2()});
  CHECK(rep.all_unifilar);
  auto edges = even->expand(EvenMachine::s1());
  REQUIRE(edges.size() == 2);
  CHECK(edges[0].symbol == 0);
  CHECK(edges[0].prob == doctest::Approx(0.5));
  CHECK(edges[1].to == EvenMachine::s2());
}

TEST_CASE("validate_machine flags bad normalization") {
  auto broken = broken_normalization_machine();
  CHECK_THROWS_AS(validate_machine(*broken, {FiniteMachine::key(0)}),
                  NormalizationError);
}

TEST_CASE("validate_machine reports nonunifilarity") {
  auto m = two_state_nonunifilar();
  auto rep = validate_machine(*m, {FiniteMachine::key(0)});
  CHECK(!rep.all_unifilar);
  CHECK_THROWS_AS(validate_machine(*m, {FiniteMachine::key(0)}, true),
                  DuplicateEdgeError);
}

TEST_CASE("apply_symbol on the even process") {
  auto even = even_machine(0.5);

  SUBCASE("deterministic edge from s2") {
    SparseDistribution d;
    d.add(EvenMachine::s2(), 1.0);
    auto out = apply_symbol(d, 1, *even);
    REQUIRE(out.mass.size() == 1);
    CHECK(out.mass.at(EvenMachine::s1()) == doctest::Approx(1.0));
  }

  SUBCASE("stationary mass through symbol 0") {
    SparseDistribution d;
    d.add(EvenMachine::s1(), 2.0 / 3.0);
    d.add(EvenMachine::s2(), 1.0 / 3.0);
    auto out = apply_symbol(d, 0, *even);
    REQUIRE(out.mass.size() == 1);
    CHECK(out.mass.at(EvenMachine::s1()) == doctest::Approx(1.0 / 3.0));
  }

  SUBCASE("unsupported symbol yields the zero distribution") {
    SparseDistribution d;
    d.add(EvenMachine::s2(), 1.0);
    auto out = apply_symbol(d, 0, *even);
    CHECK(out.mass.empty());
  }
}

TEST_CASE("mass conservation over one step") {
  auto check_machine = [](const MachineSpec& spec) {
    Support sup = support_enumerator(spec, 1e-3);
    SparseDistribution d;
    for (const auto& [k, m] : sup.entries) d.add(k, m);
    double before = d.named_mass();
    double after = 0.0;
    for (std::size_t x = 0; x < spec.alphabet_size(); ++x)
      after += apply_symbol(d, static_cast<std::uint8_t>(x), spec).named_mass();
    CHECK(std::abs(after - before) <= 1e-12);
  };
  check_machine(*even_machine(0.37));
  check_machine(*bc_machine(1e-4));
  check_machine(*two_state_nonunifilar());
}

TEST_CASE("word_probability basics") {
  auto even = even_machine(0.5);

  CHECK(word_probability(*even, {}, 1e-9).lo == 1.0);
  CHECK(word_probability(*even, {}, 1e-9).hi == 1.0);

  Enclosure p0 = word_probability(*even, {0}, 1e-9);
  CHECK(p0.contains(1.0 / 3.0));
  CHECK(p0.width() <= 1e-9);

  CHECK_THROWS_AS(word_probability(*even, {7}, 1e-9), AlphabetError);
}

TEST_CASE("word_probability on bc synchronizing word") {
  auto bc = bc_machine(1e-4);
  Enclosure p4 = word_probability(*bc, {4}, 1e-9);
  Enclosure expected = bc->root_mass() * bc->p0();
  CHECK(p4.lo <= expected.hi);
  CHECK(expected.lo <= p4.hi);
}

TEST_CASE("shrinking eps never widens an enclosure") {
  auto bc = bc_machine(1e-4);
  Word w = {2, 2, 3};
  Enclosure coarse = word_probability(*bc, w, 1e-4);
  Enclosure fine = word_probability(*bc, w, 1e-7);
  CHECK(fine.width() <= coarse.width() + 1e-15);
  CHECK(coarse.lo <= fine.lo + 1e-15);
  CHECK(fine.hi <= coarse.hi + 1e-15);
}

TEST_CASE("stationarity residuals") {
  CHECK(step_stationarity_residual(*even_machine(0.5), 1e-9) <= 1e-13);
  CHECK(step_stationarity_residual(*two_state_nonunifilar(), 1e-9) <= 1e-13);
  auto hpm = hpm_machine();
  CHECK(step_stationarity_residual(*hpm, 1e-4) <= 2e-4);
  CHECK(step_stationarity_residual(*hpm, 1e-6) <= 2e-6);
}
