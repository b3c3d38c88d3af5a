#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "qpd/equilibrium.hpp"

using namespace qpd;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

bool params_equal(const StrategyParams& a, const StrategyParams& b, double tol = 1e-12) {
  return std::abs(a.theta - b.theta) <= tol && std::abs(a.phi - b.phi) <= tol;
}

bool contains_profile(const std::vector<EquilibriumReport>& eqs, const StrategyParams& s1,
                      const StrategyParams& s2) {
  return std::any_of(eqs.begin(), eqs.end(), [&](const EquilibriumReport& e) {
    return params_equal(e.s1, s1) && params_equal(e.s2, s2);
  });
}

}  // namespace

TEST_CASE("grid geometry") {
  const StrategyGrid g{33, 17};
  CHECK(g.theta_at(0) == 0.0);
  CHECK(g.theta_at(32) == kPi);
  CHECK(g.phi_at(0) == 0.0);
  CHECK(g.phi_at(16) == kHalfPi);
  CHECK(g.points().size() == 561);

  CHECK_THROWS_AS(validate(StrategyGrid{1, 17}), std::domain_error);
  CHECK_THROWS_AS(validate(StrategyGrid{33, 0}), std::domain_error);

  // endpoints are exact for non-power-of-two step counts too
  const StrategyGrid odd{8, 6};
  CHECK(odd.theta_at(7) == kPi);
  CHECK(odd.phi_at(5) == kHalfPi);
}

TEST_CASE("best response to the named strategies at gamma=pi/2") {
  const PayoffMatrix m = canonical_pd_matrix();
  const EngineConfig cfg{};
  const StrategyGrid grid{33, 17};

  auto [vs_q, u_q] = best_response(kQuantumParams, m, cfg, grid);
  CHECK(params_equal(vs_q, kQuantumParams));
  CHECK(u_q == doctest::Approx(3.0).epsilon(1e-9));

  auto [vs_d, u_d] = best_response(kDefectParams, m, cfg, grid);
  CHECK(params_equal(vs_d, kQuantumParams));
  CHECK(u_d == doctest::Approx(5.0).epsilon(1e-9));
}

TEST_CASE("best response at gamma=0 is classical defection") {
  const PayoffMatrix m = canonical_pd_matrix();
  const EngineConfig cfg{0.0, 0};
  const StrategyGrid grid{33, 17};

  for (const StrategyParams opp : {StrategyParams{0.0, 0.0}, StrategyParams{0.7, 0.3},
                                   StrategyParams{kPi, kHalfPi}, StrategyParams{2.2, 1.0}}) {
    auto [br, u] = best_response(opp, m, cfg, grid);
    CAPTURE(opp.theta);
    CHECK(br.theta == kPi);
    // classical best response payoff against p = sin^2(theta/2): T(1-p) + Pp
    const double p = std::pow(std::sin(opp.theta / 2.0), 2);
    CHECK(u == doctest::Approx(5.0 * (1.0 - p) + 1.0 * p).epsilon(1e-9));
  }
}

TEST_CASE("grid equilibria at gamma=pi/2: the quantum profile, Pareto-efficient") {
  const auto eqs = find_pure_grid_equilibria(canonical_pd_matrix(), EngineConfig{},
                                             StrategyGrid{33, 17}, 1e-9);
  REQUIRE(!eqs.empty());
  CHECK(contains_profile(eqs, kQuantumParams, kQuantumParams));
  for (const auto& e : eqs) {
    if (!params_equal(e.s1, kQuantumParams) || !params_equal(e.s2, kQuantumParams)) continue;
    CHECK(e.payoffs.u1 == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(e.payoffs.u2 == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(e.max_deviation_gain <= 1e-9);
    CHECK(e.max_deviation_gain >= -1e-9);
    CHECK(e.pareto_efficient_among_grid);
  }
}

TEST_CASE("grid equilibria at gamma=0 all pay (P,P) and defect") {
  const auto eqs = find_pure_grid_equilibria(canonical_pd_matrix(), EngineConfig{0.0, 0},
                                             StrategyGrid{33, 17}, 1e-9);
  REQUIRE(!eqs.empty());
  for (const auto& e : eqs) {
    CHECK(e.payoffs.u1 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(e.payoffs.u2 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK(e.s1.theta == kPi);
    CHECK(e.s2.theta == kPi);
    CHECK(e.pareto_efficient_among_grid == false);  // (3,3) exists on the grid
  }
}

TEST_CASE("restricted {identity, flip} set reproduces the classical analysis for any gamma") {
  const PayoffMatrix m = canonical_pd_matrix();
  const std::vector<StrategyParams> classical{kIdentityParams, kDefectParams};
  for (int k = 0; k <= 4; ++k) {
    const EngineConfig cfg{kHalfPi * static_cast<double>(k) / 4.0, 0};
    const auto eqs = find_pure_equilibria_over(classical, m, cfg, 1e-9);
    REQUIRE(eqs.size() == 1);
    CHECK(params_equal(eqs[0].s1, kDefectParams));
    CHECK(params_equal(eqs[0].s2, kDefectParams));
    CHECK(eqs[0].payoffs.u1 == doctest::Approx(1.0).epsilon(1e-9));

    const auto ne = enumerate_2x2_pure_ne(m);
    REQUIRE(ne.size() == 1);
    CHECK(ne[0] == std::pair<int, int>(1, 1));
  }
}

TEST_CASE("enumerate_2x2_pure_ne") {
  // participation-shaped matrix [[(3,3),(1,1)],[(1,1),(1,1)]]
  const PayoffMatrix meta = PayoffMatrix::from_cells({3, 3}, {1, 1}, {1, 1}, {1, 1});
  const auto ne = enumerate_2x2_pure_ne(meta);
  REQUIRE(ne.size() == 2);
  CHECK(ne[0] == std::pair<int, int>(0, 0));
  CHECK(ne[1] == std::pair<int, int>(1, 1));

  const auto pd_ne = enumerate_2x2_pure_ne(canonical_pd_matrix());
  REQUIRE(pd_ne.size() == 1);
  CHECK(pd_ne[0] == std::pair<int, int>(1, 1));

  const PayoffMatrix flat = PayoffMatrix::from_cells({2, 2}, {2, 2}, {2, 2}, {2, 2});
  CHECK(enumerate_2x2_pure_ne(flat).size() == 4);
}

TEST_CASE("pareto_filter") {
  CHECK(pareto_filter({{3, 3}, {1, 1}}) == std::vector<std::size_t>{0});
  CHECK(pareto_filter({{5, 0}, {0, 5}, {3, 3}, {1, 1}}) == std::vector<std::size_t>{0, 1, 2});
  // participation payoff set
  CHECK(pareto_filter({{3, 3}, {1, 1}, {1, 1}, {1, 1}}) == std::vector<std::size_t>{0});
  CHECK_THROWS_AS(pareto_filter({}), std::domain_error);
}

TEST_CASE("pareto_filter is never empty for nonempty input") {
  std::mt19937_64 gen(8128);
  std::uniform_real_distribution<double> unit(-5.0, 5.0);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<PayoffPair> pays;
    const int n = 1 + static_cast<int>(gen() % 12);
    for (int i = 0; i < n; ++i) pays.push_back({unit(gen), unit(gen)});
    CHECK(!pareto_filter(pays).empty());
  }
}

TEST_CASE("three-parameter probe breaks the two-parameter equilibrium") {
  const PayoffMatrix m = canonical_pd_matrix();
  const EngineConfig cfg{};
  auto [dev, gain] = three_param_deviation_probe(kQuantumParams, kQuantumParams, m, cfg,
                                                 ThreeParamGrid{17, 9, 9});
  CHECK(gain > 0.0);
  CHECK(gain == doctest::Approx(2.0).epsilon(1e-9));  // reaches (T - R) on this grid
  CHECK(dev.theta == kPi);
  CHECK(dev.alpha == kHalfPi);

  auto [dev0, gain0] = three_param_deviation_probe(kQuantumParams, kQuantumParams, m, cfg,
                                                   ThreeParamGrid{17, 9, 1});
  CHECK(gain0 <= 1e-9);
  CHECK(dev0.alpha == 0.0);
}

TEST_CASE("three-parameter probe cannot improve on classical defection at gamma=0") {
  auto [dev, gain] = three_param_deviation_probe(kDefectParams, kDefectParams,
                                                 canonical_pd_matrix(), EngineConfig{0.0, 0},
                                                 ThreeParamGrid{17, 9, 9});
  CHECK(gain <= 1e-9);
}

TEST_CASE("alpha=0 three-parameter operation matches the two-parameter one") {
  for (double theta : {0.0, 0.4, 1.3, kPi}) {
    for (double phi : {0.0, 0.7, kHalfPi}) {
      CHECK(max_abs_diff(omega(ThreeParamStrategy{theta, phi, 0.0}), omega(theta, phi)) <= 1e-15);
    }
  }
}

TEST_CASE("best-response payoff is monotone under grid refinement") {
  const PayoffMatrix m = canonical_pd_matrix();
  for (double gamma : {0.0, 0.6, kHalfPi}) {
    const EngineConfig cfg{gamma, 0};
    for (const StrategyParams opp : {StrategyParams{0.9, 0.2}, StrategyParams{2.0, 1.2}}) {
      double prev = -1e300;
      // 5->9->17 theta points are nested supersets (same for phi)
      for (int steps : {5, 9, 17}) {
        auto [br, u] = best_response(opp, m, cfg, StrategyGrid{steps, (steps + 1) / 2});
        CHECK(u >= prev - 1e-12);
        prev = u;
      }
    }
  }
}

TEST_CASE("equilibrium reports are symmetric for the symmetric game") {
  for (double gamma : {0.0, 0.8, kHalfPi}) {
    const auto eqs = find_pure_grid_equilibria(canonical_pd_matrix(), EngineConfig{gamma, 0},
                                               StrategyGrid{9, 5}, 1e-9);
    for (const auto& e : eqs) {
      CHECK(contains_profile(eqs, e.s2, e.s1));
    }
  }
}

TEST_CASE("positive affine payoff maps preserve argmax and equilibrium set") {
  const auto transform = [](const PayoffMatrix& m, double a, double b) {
    const auto f = [&](const PayoffPair& p) { return PayoffPair{a * p.u1 + b, a * p.u2 + b}; };
    return PayoffMatrix::from_cells(f(m.cell(0, 0)), f(m.cell(0, 1)), f(m.cell(1, 0)),
                                    f(m.cell(1, 1)));
  };
  const PayoffMatrix base = canonical_pd_matrix();
  const PayoffMatrix scaled = transform(base, 2.5, -7.0);
  const EngineConfig cfg{};
  const StrategyGrid grid{17, 9};

  for (const StrategyParams opp : {kQuantumParams, kDefectParams, StrategyParams{1.1, 0.4}}) {
    auto [br_a, u_a] = best_response(opp, base, cfg, grid);
    auto [br_b, u_b] = best_response(opp, scaled, cfg, grid);
    CHECK(params_equal(br_a, br_b));
  }

  const auto eq_a = find_pure_grid_equilibria(base, cfg, grid, 1e-9);
  const auto eq_b = find_pure_grid_equilibria(scaled, cfg, grid, 2.5e-9);
  REQUIRE(eq_a.size() == eq_b.size());
  for (std::size_t i = 0; i < eq_a.size(); ++i) {
    CHECK(params_equal(eq_a[i].s1, eq_b[i].s1));
    CHECK(params_equal(eq_a[i].s2, eq_b[i].s2));
  }
}

TEST_CASE("equilibrium report JSON shape") {
  nlohmann::ordered_json j;
  to_json(j, EquilibriumReport{{0.0, kHalfPi}, {0.0, kHalfPi}, {3.0, 3.0}, 0.0, true});
  CHECK(j["profile"][0][1] == kHalfPi);
  CHECK(j["payoffs"] == nlohmann::ordered_json({3.0, 3.0}));
  CHECK(j["pareto"] == true);
  CHECK(j["max_deviation_gain"] == 0.0);
}
