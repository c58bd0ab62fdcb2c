#include <cmath>
#include <set>
#include <sstream>

#include "doctest.h"
#include "qnetfid/analytic.hpp"
#include "qnetfid/error.hpp"
#include "qnetfid/rng.hpp"
#include "qnetfid/scenarios.hpp"
#include "test_support.hpp"

using namespace qnetfid;

TEST_CASE("counter generator") {
  CounterRng a(42, 7);
  CounterRng b(42, 7);
  CounterRng c(42, 8);
  for (int i = 0; i < 100; ++i) {
    const auto x = a();
    CHECK(x == b());
    CHECK(x != c());
  }
  CounterRng u(1, 0);
  double sum = 0.0;
  for (int i = 0; i < 100000; ++i) {
    const double x = u.uniform();
    REQUIRE(x >= 0.0);
    REQUIRE(x < 1.0);
    sum += x;
  }
  CHECK(sum / 100000 == doctest::Approx(0.5).epsilon(0.01));
  std::set<std::uint64_t> seen;
  for (int i = 0; i < 1000; ++i) seen.insert(u.below(5));
  CHECK(seen == std::set<std::uint64_t>{0, 1, 2, 3, 4});
}

TEST_CASE("combination unranking enumerates subsets in lexicographic order") {
  CHECK(combination_count(6, 3) == 20);
  CHECK(combination_count(3, 4) == 0);
  std::vector<std::vector<std::uint32_t>> all;
  for (std::uint64_t r = 0; r < 20; ++r) all.push_back(unrank_combination(6, 3, r));
  CHECK(all.front() == std::vector<std::uint32_t>{0, 1, 2});
  CHECK(all.back() == std::vector<std::uint32_t>{3, 4, 5});
  CHECK(std::is_sorted(all.begin(), all.end()));
  CHECK(std::set<std::vector<std::uint32_t>>(all.begin(), all.end()).size() == 20);
  CHECK(unrank_combination(5, 0, 0).empty());
  CHECK_THROWS_AS(unrank_combination(6, 3, 20), InvalidArgument);
}

TEST_CASE("Scenario A runs") {
  const auto star = run_scenario_A(TopologySpec::star(4), 0.5);
  CHECK(star.engine.avg_max_fidelity == 0.6875);
  REQUIRE(star.analytic);
  CHECK(*star.abs_diff == 0.0);
  CHECK(run_scenario_A(TopologySpec::chain(9), 1.0).engine.avg_max_fidelity == 1.0);
  const auto flower = run_scenario_A(TopologySpec::flower(10, 3), 0.5);
  REQUIRE(flower.abs_diff);
  CHECK(*flower.abs_diff < 1e-12);

  SUBCASE("even ring closed form is attached only for per-path averaging") {
    CHECK_FALSE(run_scenario_A(TopologySpec::ring(4), 0.5).analytic);
    const auto r = run_scenario_A(TopologySpec::ring(4), 0.5, {.averaging = Averaging::kPerMaxPath});
    REQUIRE(r.abs_diff);
    CHECK(*r.abs_diff < 1e-15);
    CHECK(run_scenario_A(TopologySpec::ring(5), 0.5).analytic);
  }
}

TEST_CASE("Scenario B exhaustive placements") {
  const auto r = run_scenario_B(TopologySpec::chain(4), 0.5, 1, {}, 0);
  CHECK(r.sample_count == 3);
  CHECK(r.exhaustive);
  CHECK(r.mean == doctest::Approx(109.0 / 144.0).epsilon(1e-14));
  CHECK(r.min == 0.75);
  CHECK(r.max == doctest::Approx(0.7708333333333333).epsilon(1e-14));
  CHECK(r.std_error == 0.0);
  REQUIRE(r.analytic);
  CHECK(std::fabs(*r.analytic - r.mean) < 1e-12);

  SUBCASE("star placements are all equivalent") {
    for (std::size_t m = 0; m <= 6; ++m) {
      const auto s = run_scenario_B(TopologySpec::star(7), 0.5, m, {}, 0);
      CHECK(s.min == s.max);
      CHECK(s.std_dev == 0.0);
      CHECK(std::fabs(s.mean - analytic::star_B<double>(7, m, 0.5)) < 1e-12);
    }
    const auto odd = run_scenario_B(TopologySpec::star(8), 0.3, 3, {}, 0);
    CHECK(odd.max - odd.min < 1e-15);
  }
  SUBCASE("loops are numeric only") {
    const auto ring = run_scenario_B(TopologySpec::ring(6), 0.5, 2, {}, 0);
    CHECK_FALSE(ring.analytic);
    const Network net = generate(TopologySpec::ring(6), UniformWeight{0.5});
    CHECK(std::fabs(ring.mean - testing::placement_oracle(net, 0.5, 2)) < 1e-12);
  }
  SUBCASE("cap and range errors") {
    CHECK_THROWS_AS(run_scenario_B(TopologySpec::chain(30), 0.5, 14, {}, 0), CapExceeded);
    CHECK_THROWS_AS(run_scenario_B(TopologySpec::chain(4), 0.5, 4, {}, 0), InvalidArgument);
  }
}

TEST_CASE("Scenario B sampled placements") {
  const PlacementConfig cfg{PlacementMode::kSample, 400};
  const auto a = run_scenario_B(TopologySpec::chain(10), 0.5, 4, cfg, 9);
  const auto b = run_scenario_B(TopologySpec::chain(10), 0.5, 4, cfg, 9, 4);
  CHECK(a.mean == b.mean);
  CHECK(a.std_error == b.std_error);
  CHECK_FALSE(a.exhaustive);
  CHECK(a.std_error > 0.0);
  CHECK(std::fabs(a.mean - analytic::chain_B<double>(10, 4, 0.5)) < 4.0 * a.std_error);
  CHECK(a.min <= a.mean);
  CHECK(a.mean <= a.max);
}

TEST_CASE("Scenario C estimates") {
  SUBCASE("trees match Scenario A at p = 1/2") {
    const auto r = run_scenario_C(TopologySpec::chain(4), 20000, 3);
    CHECK(std::fabs(r.mean - 65.0 / 96.0) < 3.0 * r.std_error);
  }
  SUBCASE("deterministic under seed and thread count") {
    const auto a = run_scenario_C(TopologySpec::ring(5), 5000, 123, 1);
    const auto b = run_scenario_C(TopologySpec::ring(5), 5000, 123, 3);
    const auto c = run_scenario_C(TopologySpec::ring(5), 5000, 124, 1);
    CHECK(a.mean == b.mean);
    CHECK(a.std_error == b.std_error);
    CHECK(a.min == b.min);
    CHECK(a.mean != c.mean);
    CHECK(std::fabs(a.mean - c.mean) < 4.0 * std::hypot(a.std_error, c.std_error));
  }
  SUBCASE("loops beat the uniform-weight value") {
    const auto r = run_scenario_C(TopologySpec::ring(5), 20000, 4);
    CHECK(r.mean > analytic::ring_A<double>(5, 0.5) + 3.0 * r.std_error);
  }
  SUBCASE("triangle, modest sample") {
    const auto r = run_scenario_C(TopologySpec::ring(3), 40000, 7);
    CHECK(std::fabs(r.mean - 7.0 / 9.0) < 3.0 * r.std_error + 1e-12);
  }
  SUBCASE("with forced ME links") {
    const auto r = run_scenario_C(TopologySpec::chain(6), 2000, 1, 1, 5);
    CHECK(r.mean == 1.0);
  }
  CHECK_THROWS_AS(run_scenario_C(TopologySpec::chain(4), 0, 1), InvalidArgument);
  CHECK(default_scenario_C_samples(10) == 100000);
  CHECK(default_scenario_C_samples(11) == 1000);
}

TEST_CASE("config dispatch") {
  ScenarioConfig cfg{ScenarioA{0.5}, 0, TopologySpec::star(4), 1};
  CHECK(run(cfg).mean == 0.6875);
  cfg.scenario = ScenarioB{0.5, 1, {}};
  cfg.topology = TopologySpec::chain(4);
  CHECK(run(cfg).mean == doctest::Approx(109.0 / 144.0));
  cfg.scenario = ScenarioC{100};
  CHECK(run(cfg).sample_count == 100);
}

TEST_CASE("fibre attenuation weight") {
  CHECK(std::fabs(decoherence_weight({0.46, 1.0, 30.0}) - std::exp(-1.38 * std::log(10.0))) < 1e-12);
  CHECK(decoherence_weight({0.46, 1.0, 30.0}) == doctest::Approx(0.0416869383));
  CHECK(decoherence_weight({0.0, 1.0, 120.0}) == 1.0);
  CHECK(decoherence_weight({0.46, 1.0, 0.0}) == 1.0);
  CHECK(decoherence_weight({0.2, 0.5, 10.0}) == doctest::Approx(0.5 * std::pow(10.0, -0.2)));
  double prev = 2.0;
  for (double d = 0.0; d <= 200.0; d += 5.0) {
    const double p = decoherence_weight({0.46, 0.9, d});
    CHECK(p < prev);
    prev = p;
  }
  CHECK(decoherence_weight({0.5, 0.9, 10}) < decoherence_weight({0.4, 0.9, 10}));
  CHECK_THROWS_AS(decoherence_weight({-0.1, 1.0, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(decoherence_weight({0.1, 1.1, 1.0}), InvalidArgument);
  CHECK_THROWS_AS(decoherence_weight({0.1, 1.0, -1.0}), InvalidArgument);
}

TEST_CASE("decoherence sweep") {
  const std::vector<TopologySpec> tops{TopologySpec::complete(8)};
  const double d = 10.0 / 0.46;  // p = 0.1
  const std::vector<double> ds{d};
  const SweepResult r = decoherence_sweep(tops, 0.46, 1.0, ds);
  REQUIRE(r.rows.size() == 1);
  CHECK(r.number(0, "p") == doctest::Approx(0.1));
  CHECK(r.number(0, "F_avg_max") == doctest::Approx(0.55));

  const std::vector<TopologySpec> chain{TopologySpec::chain(8)};
  const std::vector<double> far{150.0};
  const double f = decoherence_sweep(chain, 0.46, 1.0, far).number(0, "F_avg_max");
  CHECK(f > 0.5);
  CHECK(f < 0.5 + 1e-6);
}

TEST_CASE("advantage region") {
  SUBCASE("star of 100 at p = 0.9") {
    const std::vector<double> p{0.9};
    const std::vector<double> m{0.0};
    const SweepResult r = advantage_region(TopologySpec::star(100), p, m);
    const double expected = (99 * 0.95 + 4851 * 0.905) / 4950.0;
    CHECK(r.number(0, "F_avg_max") == doctest::Approx(expected));
    CHECK(std::get<bool>(r.at(0, "avg_advantage")));
    CHECK(std::get<std::string>(r.at(0, "source")) == "closed-form");
  }
  SUBCASE("chain of 100 at p = 0.5, m = 0.5") {
    const std::vector<double> p{0.5};
    const std::vector<double> m{0.5};
    const SweepResult r = advantage_region(TopologySpec::chain(100), p, m);
    CHECK(r.number(0, "M") == 50);
    CHECK_FALSE(std::get<bool>(r.at(0, "avg_advantage")));
    CHECK(std::get<bool>(r.at(0, "any_path_advantage")));
    CHECK_FALSE(std::get<bool>(r.at(0, "all_path_advantage")));
  }
  SUBCASE("p = 1 column") {
    const std::vector<double> p{1.0};
    const auto m = linear_grid(0.0, 1.0, 5);
    for (auto spec : {TopologySpec::star(12), TopologySpec::chain(12), TopologySpec::flower(12, 4),
                      TopologySpec::ring(6)}) {
      const SweepResult r = advantage_region(spec, p, m);
      for (std::size_t i = 0; i < r.rows.size(); ++i) {
        CHECK(std::get<bool>(r.at(i, "avg_advantage")));
        CHECK(std::get<bool>(r.at(i, "any_path_advantage")));
        CHECK(std::get<bool>(r.at(i, "all_path_advantage")));
      }
    }
  }
  SUBCASE("tree all-path flag matches worst placement enumeration") {
    const auto p = linear_grid(0.3, 0.95, 14);
    const auto m = linear_grid(0.0, 1.0, 7);
    const TopologySpec spec = TopologySpec::flower(7, 1);
    const SweepResult r = advantage_region(spec, p, m);
    const Network shape = generate(spec, UniformWeight{0.5});
    for (std::size_t i = 0; i < r.rows.size(); ++i) {
      const double pv = r.number(i, "p");
      const auto mv = static_cast<std::size_t>(r.number(i, "M"));
      const auto exhaustive = run_scenario_B(spec, pv, mv, {}, 0);
      CHECK(std::get<bool>(r.at(i, "all_path_advantage")) == (exhaustive.min_pair_fidelity > 2.0 / 3.0));
      CHECK(std::get<bool>(r.at(i, "any_path_advantage")) == (exhaustive.max_pair_fidelity > 2.0 / 3.0));
      CHECK(std::fabs(r.number(i, "F_avg_max") - exhaustive.mean) < 1e-12);
    }
    (void)shape;
  }
  SUBCASE("loops fall back to enumeration") {
    const std::vector<double> p{0.6};
    const std::vector<double> m{0.5};
    const SweepResult r = advantage_region(TopologySpec::ring(6), p, m);
    CHECK(std::get<std::string>(r.at(0, "source")) == "exhaustive");
  }
}

TEST_CASE("large-N behaviour") {
  const std::vector<std::size_t> ns{10, 50, 100, 500};
  const SweepResult chain = large_N_sweep(Family::kChain, 0.5, 0.6, ns);
  for (std::size_t i = 1; i < chain.rows.size(); ++i) {
    CHECK(chain.number(i, "F_avg_max") < chain.number(i - 1, "F_avg_max"));
    CHECK(chain.number(i, "distance_to_limit") > 0.0);
  }
  CHECK(chain.number(3, "F_avg_max") < 0.52);

  const std::vector<std::size_t> big{10000};
  // 1/sqrt(3) = 0.57735...
  const SweepResult below = large_N_sweep(Family::kStar, 0.57, 0.0, big);
  const SweepResult above = large_N_sweep(Family::kStar, 0.58, 0.0, big);
  CHECK_FALSE(std::get<bool>(below.at(0, "avg_advantage")));
  CHECK(std::get<bool>(above.at(0, "avg_advantage")));
  CHECK(std::fabs(above.number(0, "distance_to_limit")) < 1e-3);

  SUBCASE("star limit converges like 1/N") {
    const std::vector<std::size_t> sizes{100, 1000, 10000};
    const SweepResult s = large_N_sweep(Family::kStar, 0.7, 0.3, sizes);
    for (std::size_t i = 0; i < s.rows.size(); ++i) {
      CHECK(std::fabs(s.number(i, "distance_to_limit")) * s.number(i, "n") < 2.0);
    }
  }
  SUBCASE("numeric points") {
    const std::vector<std::size_t> small{12};
    const SweepResult r = large_N_sweep(Family::kChain, 0.5, 0.5, small, {.numeric_max_n = 20, .numeric_samples = 200});
    CHECK(std::fabs(r.number(0, "F_numeric") - r.number(0, "F_avg_max")) <
          4.0 * r.number(0, "numeric_std_error"));
  }
}

TEST_CASE("grids and CSV") {
  const auto g = linear_grid(0.0, 1.0, 101);
  CHECK(g.size() == 101);
  CHECK(g[50] == 0.5);
  CHECK(g.back() == 1.0);
  CHECK_THROWS_AS(linear_grid(0, 1, 1), InvalidArgument);

  SweepResult r;
  r.columns = {"a", "b", "c", "d"};
  r.add_row({1.0 / 3.0, static_cast<long long>(4), true, NotAvailable{}});
  r.add_row({std::string("x,y"), 0.5, false, 1e-20});
  CHECK_THROWS_AS(r.add_row({1.0}), InvalidArgument);
  std::ostringstream out;
  write_csv(r, out);
  CHECK(out.str() == "a,b,c,d\n0.333333333333,4,true,NA\n\"x,y\",0.5,false,1e-20\n");
}
