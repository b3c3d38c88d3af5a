#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "json.hpp"
#include "qpd/engine.hpp"
#include "qpd/games.hpp"

// Grid-discretized best-response analysis over the two-parameter strategy
// space, pure Nash-equilibrium detection, Pareto classification and the
// three-parameter deviation probe.
//
// Grid sweeps are pure evaluations with a deterministic tie-break, so the
// evaluation order never affects results.

namespace qpd {

/// Evenly spaced grid over [0, pi] x [0, pi/2], endpoints included, so the
/// named strategies (0,0), (pi, pi/2) and (0, pi/2) are exact grid points.
struct StrategyGrid {
  int theta_steps = 33;
  int phi_steps = 17;

  double theta_at(int i) const;
  double phi_at(int j) const;
  std::vector<StrategyParams> points() const;  // theta-major order
};

void validate(const StrategyGrid& g);

struct EquilibriumReport {
  StrategyParams s1;
  StrategyParams s2;
  PayoffPair payoffs;
  /// Best unilateral grid deviation gain across both agents (>= 0; the
  /// profile's own point counts as a deviation of gain 0).
  double max_deviation_gain = 0.0;
  /// Not dominated by any grid profile's payoff pair.
  bool pareto_efficient_among_grid = false;
};

/// General SU(2) extension used only by the deviation probe:
///   [[e^{i phi} cos(theta/2),        i e^{i alpha} sin(theta/2)],
///    [i e^{-i alpha} sin(theta/2),   e^{-i phi} cos(theta/2)  ]]
/// alpha = 0 reduces exactly to the two-parameter set.
struct ThreeParamStrategy {
  double theta = 0.0;  // [0, pi]
  double phi = 0.0;    // [0, pi/2]
  double alpha = 0.0;  // [0, pi/2]
};

void validate(const ThreeParamStrategy& s);

Matrix2 omega(const ThreeParamStrategy& s);

/// Grid over ThreeParamStrategy.  alpha_steps may be 1, which pins
/// alpha = 0 (the two-parameter slice).
struct ThreeParamGrid {
  int theta_steps = 17;
  int phi_steps = 9;
  int alpha_steps = 9;

  double theta_at(int i) const;
  double phi_at(int j) const;
  double alpha_at(int k) const;
};

void validate(const ThreeParamGrid& g);

/// Grid point maximizing agent 1's expected payoff against `opponent`
/// (played by agent 2), with its payoff.  Ties break to the smallest
/// (theta index, then phi index).
std::pair<StrategyParams, double> best_response(const StrategyParams& opponent,
                                                const PayoffMatrix& m, const EngineConfig& cfg,
                                                const StrategyGrid& grid);

/// All profiles over an explicit strategy set where neither agent can gain
/// more than tol by any unilateral deviation within the set.  Reports carry
/// the Pareto flag relative to every profile's payoff pair.
std::vector<EquilibriumReport> find_pure_equilibria_over(
    const std::vector<StrategyParams>& points, const PayoffMatrix& m, const EngineConfig& cfg,
    double tol);

std::vector<EquilibriumReport> find_pure_grid_equilibria(const PayoffMatrix& m,
                                                         const EngineConfig& cfg,
                                                         const StrategyGrid& grid, double tol);

/// Pure Nash equilibria of an arbitrary 2x2 bimatrix, as (row, col) indices
/// in {0,1}; weak inequalities, deterministic (0,0),(0,1),(1,0),(1,1) order.
std::vector<std::pair<int, int>> enumerate_2x2_pure_ne(const PayoffMatrix& m);

/// Indices of payoff pairs not dominated by any listed pair (dominated:
/// another pair is >= in both coordinates and > in at least one).
/// Never empty for nonempty input; empty input is a domain error.
std::vector<std::size_t> pareto_filter(const std::vector<PayoffPair>& payoffs);

/// Three-parameter strategy maximizing agent 1's gain when deviating from
/// profile (eq1, eq2) while agent 2 stays fixed; gain may be negative if no
/// deviation helps.  Ties break to the smallest (theta, phi, alpha) indices.
std::pair<ThreeParamStrategy, double> three_param_deviation_probe(
    const StrategyParams& eq1, const StrategyParams& eq2, const PayoffMatrix& m,
    const EngineConfig& cfg, const ThreeParamGrid& grid3);

// {profile:[[theta,phi],[theta,phi]], payoffs:[u1,u2], max_deviation_gain, pareto:bool}
void to_json(nlohmann::ordered_json& j, const EquilibriumReport& r);

}  // namespace qpd
