#include "qpd/equilibrium.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qpd {

namespace {

constexpr double kPi = std::numbers::pi;

double grid_coord(int i, int steps, double hi) {
  // Last index returns hi exactly; i*hi/(steps-1) can round past it.
  if (i == steps - 1) return hi;
  return hi * static_cast<double>(i) / static_cast<double>(steps - 1);
}

void require_steps(const char* name, int steps, int min_steps) {
  if (steps < min_steps) {
    throw std::domain_error(std::string(name) + " must be >= " + std::to_string(min_steps) +
                            ": got " + std::to_string(steps));
  }
}

// Expected payoffs of every ordered profile over `points`, row-major:
// u1[i*n+j], u2[i*n+j] for (s1 = points[i], s2 = points[j]).
struct ProfileTable {
  std::size_t n = 0;
  std::vector<double> u1;
  std::vector<double> u2;
};

ProfileTable build_table(const std::vector<StrategyParams>& points, const PayoffMatrix& m,
                         const EngineConfig& cfg) {
  ProfileTable t;
  t.n = points.size();
  t.u1.resize(t.n * t.n);
  t.u2.resize(t.n * t.n);
  for (std::size_t i = 0; i < t.n; ++i) {
    for (std::size_t j = 0; j < t.n; ++j) {
      const PayoffPair e = expected_payoffs(m, evolve(points[i], points[j], cfg));
      t.u1[i * t.n + j] = e.u1;
      t.u2[i * t.n + j] = e.u2;
    }
  }
  return t;
}

bool dominated_by_any(double u1, double u2, const std::vector<double>& all1,
                      const std::vector<double>& all2) {
  for (std::size_t k = 0; k < all1.size(); ++k) {
    if (all1[k] >= u1 && all2[k] >= u2 && (all1[k] > u1 || all2[k] > u2)) return true;
  }
  return false;
}

}  // namespace

void validate(const StrategyGrid& g) {
  require_steps("theta_steps", g.theta_steps, 2);
  require_steps("phi_steps", g.phi_steps, 2);
}

double StrategyGrid::theta_at(int i) const { return grid_coord(i, theta_steps, kPi); }
double StrategyGrid::phi_at(int j) const { return grid_coord(j, phi_steps, kPi / 2.0); }

std::vector<StrategyParams> StrategyGrid::points() const {
  validate(*this);
  std::vector<StrategyParams> pts;
  pts.reserve(static_cast<std::size_t>(theta_steps) * static_cast<std::size_t>(phi_steps));
  for (int i = 0; i < theta_steps; ++i) {
    for (int j = 0; j < phi_steps; ++j) {
      pts.push_back({theta_at(i), phi_at(j)});
    }
  }
  return pts;
}

void validate(const ThreeParamStrategy& s) {
  if (!std::isfinite(s.theta) || s.theta < 0.0 || s.theta > kPi) {
    throw std::domain_error("theta out of range [0, pi]");
  }
  if (!std::isfinite(s.phi) || s.phi < 0.0 || s.phi > kPi / 2.0) {
    throw std::domain_error("phi out of range [0, pi/2]");
  }
  if (!std::isfinite(s.alpha) || s.alpha < 0.0 || s.alpha > kPi / 2.0) {
    throw std::domain_error("alpha out of range [0, pi/2]");
  }
}

Matrix2 omega(const ThreeParamStrategy& s) {
  validate(s);
  const double c = std::cos(s.theta / 2.0);
  const double sn = std::sin(s.theta / 2.0);
  Matrix2 m;
  m.at(0, 0) = std::polar(c, s.phi);
  m.at(0, 1) = Complex(0.0, 1.0) * std::polar(sn, s.alpha);
  m.at(1, 0) = Complex(0.0, 1.0) * std::polar(sn, -s.alpha);
  m.at(1, 1) = std::polar(c, -s.phi);
  return m;
}

void validate(const ThreeParamGrid& g) {
  require_steps("theta_steps", g.theta_steps, 2);
  require_steps("phi_steps", g.phi_steps, 2);
  require_steps("alpha_steps", g.alpha_steps, 1);
}

double ThreeParamGrid::theta_at(int i) const { return grid_coord(i, theta_steps, kPi); }
double ThreeParamGrid::phi_at(int j) const { return grid_coord(j, phi_steps, kPi / 2.0); }
double ThreeParamGrid::alpha_at(int k) const {
  if (alpha_steps == 1) return 0.0;
  return grid_coord(k, alpha_steps, kPi / 2.0);
}

std::pair<StrategyParams, double> best_response(const StrategyParams& opponent,
                                                const PayoffMatrix& m, const EngineConfig& cfg,
                                                const StrategyGrid& grid) {
  validate(grid);
  validate(opponent);
  StrategyParams best{};
  double best_u = 0.0;
  bool first = true;
  for (int i = 0; i < grid.theta_steps; ++i) {
    for (int j = 0; j < grid.phi_steps; ++j) {
      const StrategyParams s{grid.theta_at(i), grid.phi_at(j)};
      const double u = expected_payoffs(m, evolve(s, opponent, cfg)).u1;
      if (first || u > best_u) {
        best = s;
        best_u = u;
        first = false;
      }
    }
  }
  return {best, best_u};
}

std::vector<EquilibriumReport> find_pure_equilibria_over(
    const std::vector<StrategyParams>& points, const PayoffMatrix& m, const EngineConfig& cfg,
    double tol) {
  if (tol < 0.0) throw std::domain_error("tol must be >= 0");
  if (points.empty()) throw std::domain_error("strategy set must be nonempty");

  const ProfileTable t = build_table(points, m, cfg);
  const std::size_t n = t.n;

  // Best-response payoffs: agent 1 maximizes over rows, agent 2 over columns.
  std::vector<double> col_max1(n, -std::numeric_limits<double>::infinity());
  std::vector<double> row_max2(n, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      col_max1[j] = std::max(col_max1[j], t.u1[i * n + j]);
      row_max2[i] = std::max(row_max2[i], t.u2[i * n + j]);
    }
  }

  std::vector<EquilibriumReport> out;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double u1 = t.u1[i * n + j];
      const double u2 = t.u2[i * n + j];
      const double gain = std::max(col_max1[j] - u1, row_max2[i] - u2);
      if (gain <= tol) {
        out.push_back({points[i], points[j], PayoffPair{u1, u2}, gain,
                       !dominated_by_any(u1, u2, t.u1, t.u2)});
      }
    }
  }
  return out;
}

std::vector<EquilibriumReport> find_pure_grid_equilibria(const PayoffMatrix& m,
                                                         const EngineConfig& cfg,
                                                         const StrategyGrid& grid, double tol) {
  return find_pure_equilibria_over(grid.points(), m, cfg, tol);
}

std::vector<std::pair<int, int>> enumerate_2x2_pure_ne(const PayoffMatrix& m) {
  std::vector<std::pair<int, int>> out;
  for (int r = 0; r < 2; ++r) {
    for (int c = 0; c < 2; ++c) {
      const bool row_best = m.cell(r, c).u1 >= m.cell(1 - r, c).u1;
      const bool col_best = m.cell(r, c).u2 >= m.cell(r, 1 - c).u2;
      if (row_best && col_best) out.emplace_back(r, c);
    }
  }
  return out;
}

std::vector<std::size_t> pareto_filter(const std::vector<PayoffPair>& payoffs) {
  if (payoffs.empty()) throw std::domain_error("pareto_filter requires a nonempty list");
  std::vector<std::size_t> keep;
  for (std::size_t i = 0; i < payoffs.size(); ++i) {
    bool dominated = false;
    for (std::size_t j = 0; j < payoffs.size() && !dominated; ++j) {
      dominated = payoffs[j].u1 >= payoffs[i].u1 && payoffs[j].u2 >= payoffs[i].u2 &&
                  (payoffs[j].u1 > payoffs[i].u1 || payoffs[j].u2 > payoffs[i].u2);
    }
    if (!dominated) keep.push_back(i);
  }
  return keep;
}

std::pair<ThreeParamStrategy, double> three_param_deviation_probe(
    const StrategyParams& eq1, const StrategyParams& eq2, const PayoffMatrix& m,
    const EngineConfig& cfg, const ThreeParamGrid& grid3) {
  validate(grid3);
  validate(cfg);
  const double base = expected_payoffs(m, evolve(eq1, eq2, cfg)).u1;
  const Matrix2 opponent = omega(eq2.theta, eq2.phi);

  ThreeParamStrategy best{};
  double best_gain = 0.0;
  bool first = true;
  for (int i = 0; i < grid3.theta_steps; ++i) {
    for (int j = 0; j < grid3.phi_steps; ++j) {
      for (int k = 0; k < grid3.alpha_steps; ++k) {
        const ThreeParamStrategy s{grid3.theta_at(i), grid3.phi_at(j), grid3.alpha_at(k)};
        const OutcomeDistribution d = distribution_of(evolve_state_ops(omega(s), opponent,
                                                                       cfg.gamma));
        const double gain = expected_payoffs(m, d).u1 - base;
        if (first || gain > best_gain) {
          best = s;
          best_gain = gain;
          first = false;
        }
      }
    }
  }
  return {best, best_gain};
}

void to_json(nlohmann::ordered_json& j, const EquilibriumReport& r) {
  j = nlohmann::ordered_json{
      {"profile", {{r.s1.theta, r.s1.phi}, {r.s2.theta, r.s2.phi}}},
      {"payoffs", {r.payoffs.u1, r.payoffs.u2}},
      {"max_deviation_gain", r.max_deviation_gain},
      {"pareto", r.pareto_efficient_among_grid}};
}

}  // namespace qpd
