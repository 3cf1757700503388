#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "cshmm/claims.hpp"
#include "cshmm/machines/bc.hpp"
#include "cshmm/machines/even.hpp"
#include "cshmm/machines/hpm.hpp"
#include "cshmm/sampling.hpp"
#include "cshmm/series.hpp"

using namespace cshmm;

TEST_CASE("rng reproducibility") {
  Rng a(42), b(42), c(43);
  for (int i = 0; i < 100; ++i) {
    CHECK(a.next() == b.next());
  }
  bool differ = false;
  Rng a2(42);
  for (int i = 0; i < 10; ++i) differ = differ || a2.next() != c.next();
  CHECK(differ);
}

TEST_CASE("deterministic trajectories under a fixed seed") {
  auto even = even_machine(0.5);
  Rng r1(7), r2(7);
  StateKey s1 = sample_stationary_state(*even, r1, 1e-9);
  StateKey s2 = sample_stationary_state(*even, r2, 1e-9);
  CHECK(s1 == s2);
  Trajectory t1 = sample_path(*even, r1, s1, 500);
  Trajectory t2 = sample_path(*even, r2, s2, 500);
  CHECK(t1.symbols == t2.symbols);
  CHECK(t1.states == t2.states);
}

TEST_CASE("every sampled transition is a real edge") {
  auto machines = std::vector<std::shared_ptr<const MachineSpec>>{
      even_machine(0.4), hpm_machine(), bc_machine_true(1e-4)};
  Rng rng(99);
  for (const auto& m : machines) {
    StateKey start = sample_stationary_state(*m, rng, 1e-4);
    Trajectory traj = sample_path(*m, rng, start, 10000);
    for (std::size_t a = 0; a < traj.symbols.size(); ++a) {
      bool found = false;
      for (const Edge& e : m->expand(traj.states[a]))
        found = found ||
                (e.symbol == traj.symbols[a] && e.to == traj.states[a + 1]);
      REQUIRE(found);
    }
  }
}

TEST_CASE("hpm path from component 3 is periodic") {
  auto hpm = hpm_machine();
  Rng rng(1);
  Trajectory traj = sample_path(*hpm, rng, HpmMachine::key(3, 1), 6);
  CHECK(word_str(hpm->alphabet(), traj.symbols) == "110110");
}

TEST_CASE("even from s2 must emit a one") {
  auto even = even_machine(0.5);
  Rng rng(5);
  Trajectory traj = sample_path(*even, rng, EvenMachine::s2(), 1);
  CHECK(traj.symbols[0] == 1);
}

TEST_CASE("bc trajectories are mostly root loops") {
  auto bc = bc_machine_true(1e-4);
  Rng rng(3);
  StateKey start = sample_stationary_state(*bc, rng, 1e-8);
  Trajectory traj = sample_path(*bc, rng, start, 20000);
  std::uint64_t fours = 0;
  for (auto s : traj.symbols) fours += s == 4;
  CHECK(double(fours) / double(traj.symbols.size()) > 0.95);
}

TEST_CASE("stationary draw frequencies match pi") {
  auto even = even_machine(0.5);
  Rng rng(11);
  std::uint64_t n = 100000, hits = 0;
  for (std::uint64_t i = 0; i < n; ++i)
    hits += sample_stationary_state(*even, rng, 1e-9) == EvenMachine::s1();
  double freq = double(hits) / double(n);
  double se = std::sqrt((2.0 / 3.0) * (1.0 / 3.0) / double(n));
  CHECK(std::abs(freq - 2.0 / 3.0) <= 4.0 * se);

  auto bc = bc_machine_true(1e-4);
  Rng rng2(12);
  std::uint64_t root_hits = 0;
  for (std::uint64_t i = 0; i < n; ++i)
    root_hits += sample_stationary_state(*bc, rng2, 1e-8) ==
                 BcTrueMachine::root();
  double rfreq = double(root_hits) / double(n);
  double pi_root = bc->root_mass().mid();
  double rse = std::sqrt(pi_root * (1.0 - pi_root) / double(n));
  CHECK(std::abs(rfreq - pi_root) <= 4.0 * rse + 1e-8);
}

TEST_CASE("empirical block entropy on the even process") {
  auto even = even_machine(0.5);
  Rng rng(21);
  std::vector<Trajectory> trajs;
  for (int j = 0; j < 50; ++j) {
    StateKey start = sample_stationary_state(*even, rng, 1e-9);
    trajs.push_back(sample_path(*even, rng, start, 2000));
  }
  Enclosure exact = block_entropy(word_table(*even, 3, 1e-9), 1.0);
  EstimateReport rep = empirical_block_entropy(trajs, 3, exact);
  CHECK(std::abs(rep.estimate - exact.mid()) <=
        3.0 * rep.standard_error + exact.width() + 2e-3);

  // a constant trajectory has zero empirical entropy
  Trajectory constant;
  constant.symbols = Word(200, 1);
  constant.states.assign(201, EvenMachine::s1());
  std::vector<Trajectory> reps(30, constant);
  EstimateReport zero = empirical_block_entropy(reps, 2, Enclosure(0.0));
  CHECK(zero.estimate == doctest::Approx(0.0));

  // short random data with long blocks: nearly every window is distinct
  Rng rng2(77);
  Trajectory shorttraj = sample_path(*even, rng2, EvenMachine::s1(), 150);
  CHECK_THROWS_AS(empirical_block_entropy({shorttraj}, 100, Enclosure(0.0)),
                  InsufficientDataError);
}

TEST_CASE("mean return times against kac") {
  auto even = even_machine(0.5);
  Rng rng(31);
  Enclosure kac = kac_consistency(*even, EvenMachine::s1(), 1e-9);
  ReturnTimeReport rep =
      mean_return_time(*even, rng, EvenMachine::s1(), 40000, kac);
  CHECK(std::abs(rep.estimate.estimate - 1.5) <=
        3.0 * rep.estimate.standard_error);

  CHECK_THROWS_AS(mean_return_time(*even, rng, EvenMachine::s1(), 0, kac),
                  ParamError);

  auto bc = bc_machine_true(1e-4);
  Rng rng2(32);
  Enclosure kac_root = kac_consistency(*bc, BcTrueMachine::root(), 1e-9);
  ReturnTimeReport root =
      mean_return_time(*bc, rng2, BcTrueMachine::root(), 30000, kac_root);
  CHECK(root.all_one_or_even);
  CHECK(std::abs(root.estimate.estimate - kac_root.mid()) <=
        3.0 * root.estimate.standard_error + kac_root.width());
}
