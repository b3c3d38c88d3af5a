#include "qpd/engine.hpp"

#include <cmath>
#include <stdexcept>

namespace qpd {

namespace {

constexpr double kNegativeDust = 1e-12;
constexpr double kNormalizationTol = 1e-9;

void require_angle(const char* name, double value, double lo, double hi) {
  if (!std::isfinite(value)) {
    throw std::domain_error(std::string(name) + " must be finite");
  }
  if (value < lo || value > hi) {
    throw std::domain_error(std::string(name) + " out of range [" + std::to_string(lo) +
                            ", " + std::to_string(hi) + "]: got " + std::to_string(value));
  }
}

}  // namespace

void validate(const StrategyParams& s) {
  require_angle("theta", s.theta, 0.0, std::numbers::pi);
  require_angle("phi", s.phi, 0.0, std::numbers::pi / 2.0);
}

void validate(const EngineConfig& cfg) {
  require_angle("gamma", cfg.gamma, 0.0, std::numbers::pi / 2.0);
}

void validate(const CardSet& cards) {
  if (cards.card_0.empty() || cards.card_1.empty()) {
    throw std::domain_error("card texts must be non-empty");
  }
  if (cards.card_0 == cards.card_1) {
    throw std::domain_error("card texts must be distinct: \"" + cards.card_0 + "\"");
  }
}

Outcome Outcome::from_index(int i) {
  if (i < 0 || i > 3) throw std::domain_error("outcome index out of range: " + std::to_string(i));
  return {(i & 2) ? Coin::D : Coin::C, (i & 1) ? Coin::D : Coin::C};
}

OutcomeDistribution OutcomeDistribution::from_probs(const std::array<double, 4>& probs) {
  std::array<double, 4> p = probs;
  double sum = 0.0;
  for (double& x : p) {
    if (!std::isfinite(x)) throw std::domain_error("probability must be finite");
    if (x < 0.0) {
      if (x < -kNegativeDust) {
        throw std::domain_error("negative probability: " + std::to_string(x));
      }
      x = 0.0;  // |eta|^2 is mathematically nonnegative
    }
    if (x > 1.0 + kNormalizationTol) {
      throw std::domain_error("probability above 1: " + std::to_string(x));
    }
    sum += x;
  }
  if (std::abs(sum - 1.0) > kNormalizationTol) {
    throw std::domain_error("probabilities sum to " + std::to_string(sum) + ", expected 1");
  }
  for (double& x : p) x /= sum;
  return OutcomeDistribution(p);
}

std::uint64_t Rng::substream_seed(std::uint64_t master, std::uint64_t index) {
  // splitmix64 finalizer
  std::uint64_t z = master + index * 0x9e3779b97f4a7c15ULL + 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vector4 psi1(double gamma) {
  require_angle("gamma", gamma, 0.0, std::numbers::pi / 2.0);
  Vector4 v;
  v[0] = std::cos(gamma / 2.0);
  v[3] = Complex(0.0, std::sin(gamma / 2.0));
  return v;
}

Vector4 evolve_state_ops(const Matrix2& op1, const Matrix2& op2, double gamma) {
  require_angle("gamma", gamma, 0.0, std::numbers::pi / 2.0);
  const auto [left, right] = tensor_outer_columns(op1, op2);
  const double c = std::cos(gamma / 2.0);
  const Complex is(0.0, std::sin(gamma / 2.0));

  // psi2 = cos(gamma/2) * leftmost column + i sin(gamma/2) * rightmost column
  Vector4 psi2;
  for (int i = 0; i < 4; ++i) psi2[i] = c * left[i] + is * right[i];

  // J+ has cos(gamma/2) on the diagonal and -i sin(gamma/2) on the anti-diagonal
  Vector4 psi3;
  const Complex mis(0.0, -std::sin(gamma / 2.0));
  for (int i = 0; i < 4; ++i) psi3[i] = c * psi2[i] + mis * psi2[3 - i];
  return psi3;
}

Vector4 evolve_state_ops_full_matrix(const Matrix2& op1, const Matrix2& op2, double gamma) {
  const Matrix4 j = j_operator(gamma);
  Vector4 cc;
  cc[0] = 1.0;
  return conjugate_transpose(j) * (tensor2x2(op1, op2) * (j * cc));
}

OutcomeDistribution distribution_of(const Vector4& psi3) {
  return OutcomeDistribution::from_probs(
      {std::norm(psi3[0]), std::norm(psi3[1]), std::norm(psi3[2]), std::norm(psi3[3])});
}

OutcomeDistribution evolve(const StrategyParams& s1, const StrategyParams& s2,
                           const EngineConfig& cfg) {
  validate(s1);
  validate(s2);
  validate(cfg);
  return distribution_of(evolve_state_ops(omega(s1.theta, s1.phi), omega(s2.theta, s2.phi),
                                          cfg.gamma));
}

OutcomeDistribution evolve_full_matrix(const StrategyParams& s1, const StrategyParams& s2,
                                       const EngineConfig& cfg) {
  validate(s1);
  validate(s2);
  validate(cfg);
  return distribution_of(evolve_state_ops_full_matrix(omega(s1.theta, s1.phi),
                                                      omega(s2.theta, s2.phi), cfg.gamma));
}

Outcome sample_outcome(const OutcomeDistribution& delta, Rng& rng) {
  const double u = rng.uniform01();
  double cum = 0.0;
  for (int i = 0; i < 3; ++i) {
    cum += delta[i];
    if (u < cum) return Outcome::from_index(i);
  }
  return Outcome::from_index(3);
}

std::pair<Message, Message> dispatch_messages(const Outcome& outcome, const CardSet& cards1,
                                              const CardSet& cards2) {
  const auto pick = [](Coin c, const CardSet& cards) {
    return c == Coin::C ? cards.card_0 : cards.card_1;
  };
  return {Message{1, pick(outcome.coin1, cards1)}, Message{2, pick(outcome.coin2, cards2)}};
}

RunResult run_algorithmic_model(const StrategyParams& s1, const StrategyParams& s2,
                                const CardSet& cards1, const CardSet& cards2,
                                const EngineConfig& cfg) {
  validate(cards1);
  validate(cards2);
  const OutcomeDistribution delta = evolve(s1, s2, cfg);
  Rng rng(cfg.rng_seed);
  const Outcome outcome = sample_outcome(delta, rng);
  auto [m1, m2] = dispatch_messages(outcome, cards1, cards2);
  return RunResult{std::move(m1), std::move(m2), delta, outcome};
}

}  // namespace qpd
