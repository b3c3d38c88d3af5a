#pragma once

#include <array>
#include <cstdint>
#include <numbers>
#include <random>
#include <string>
#include <utility>

#include "qpd/linalg.hpp"

// The two-coin game engine: evolve |CC> through J, the agents' local
// operations and J+, read off the outcome distribution, sample one collapsed
// outcome and dispatch the matching card messages.
//
// Evaluation is pure given (inputs, seed); distinct runs may execute
// concurrently.  RNG state is confined to a single run and never shared.

namespace qpd {

/// An agent's local operation parameters (theta, phi),
/// theta in [0, pi], phi in [0, pi/2].
struct StrategyParams {
  double theta = 0.0;
  double phi = 0.0;
};

/// Throws std::domain_error naming the offending parameter.
void validate(const StrategyParams& s);

// Named strategies: identity, flip, and the quantum cooperate-like operation.
inline constexpr StrategyParams kIdentityParams{0.0, 0.0};
inline constexpr StrategyParams kDefectParams{std::numbers::pi, std::numbers::pi / 2.0};
inline constexpr StrategyParams kQuantumParams{0.0, std::numbers::pi / 2.0};

struct EngineConfig {
  double gamma = std::numbers::pi / 2.0;  // entanglement measure, [0, pi/2]
  std::uint64_t rng_seed = 0;
};

void validate(const EngineConfig& cfg);

enum class Coin { C, D };

inline char coin_char(Coin c) { return c == Coin::C ? 'C' : 'D'; }

/// One collapsed joint state of the two coins.
struct Outcome {
  Coin coin1 = Coin::C;
  Coin coin2 = Coin::C;

  /// Position in the basis order [CC, CD, DC, DD].
  int index() const { return (coin1 == Coin::D ? 2 : 0) + (coin2 == Coin::D ? 1 : 0); }
  static Outcome from_index(int i);
  std::string label() const { return {coin_char(coin1), coin_char(coin2)}; }

  friend bool operator==(const Outcome&, const Outcome&) = default;
};

/// Probability distribution over [CC, CD, DC, DD].  Entries are clamped of
/// negative floating-point dust (>= -1e-12), required to sum to 1 within
/// 1e-9, then renormalized exactly.
class OutcomeDistribution {
 public:
  static OutcomeDistribution from_probs(const std::array<double, 4>& probs);

  double operator[](int i) const { return probs_[static_cast<std::size_t>(i)]; }
  double prob(const Outcome& o) const { return (*this)[o.index()]; }
  const std::array<double, 4>& probs() const { return probs_; }

 private:
  explicit OutcomeDistribution(const std::array<double, 4>& probs) : probs_(probs) {}
  std::array<double, 4> probs_{};
};

/// The two sides of an agent's card; texts must be distinct and non-empty.
struct CardSet {
  std::string card_0;  // represents Cooperate
  std::string card_1;  // represents Defect
};

void validate(const CardSet& cards);

struct Message {
  int agent = 1;  // 1 or 2
  std::string text;

  friend bool operator==(const Message&, const Message&) = default;
};

/// Seedable, platform-independent generator (mt19937_64 with an explicit
/// 53-bit uniform).  One engine run consumes exactly one uniform01() draw.
/// Independent sessions use substream_seed(master, index).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  /// Uniform in [0, 1), from the top 53 bits of one 64-bit output.
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  /// splitmix64 of (master + index): decorrelated per-session seeds.
  static std::uint64_t substream_seed(std::uint64_t master, std::uint64_t index);

 private:
  std::mt19937_64 gen_;
};

/// psi1 = J(gamma)|CC> = [cos(gamma/2), 0, 0, i sin(gamma/2)].
Vector4 psi1(double gamma);

/// psi3 for arbitrary local operations, via the two-column shortcut:
/// psi1 has only two nonzero amplitudes, so psi2 needs only the outer
/// columns of op1 (x) op2, and J+ rows have only two nonzero entries.
Vector4 evolve_state_ops(const Matrix2& op1, const Matrix2& op2, double gamma);

/// Same state through materialized 4x4 products: J+ [op1 (x) op2] J |CC>.
/// Kept as the independently-routed verification path.
Vector4 evolve_state_ops_full_matrix(const Matrix2& op1, const Matrix2& op2, double gamma);

/// |psi3|^2 componentwise, as a validated distribution.
OutcomeDistribution distribution_of(const Vector4& psi3);

/// Outcome distribution for a pair of two-parameter strategies (shortcut path).
OutcomeDistribution evolve(const StrategyParams& s1, const StrategyParams& s2,
                           const EngineConfig& cfg);

/// Full-matrix verification path for evolve().
OutcomeDistribution evolve_full_matrix(const StrategyParams& s1, const StrategyParams& s2,
                                       const EngineConfig& cfg);

/// Inverse-CDF draw over the fixed basis order; consumes one uniform01().
Outcome sample_outcome(const OutcomeDistribution& delta, Rng& rng);

/// Coin C maps to card_0, coin D to card_1, per agent.
std::pair<Message, Message> dispatch_messages(const Outcome& outcome, const CardSet& cards1,
                                              const CardSet& cards2);

struct RunResult {
  Message m1;
  Message m2;
  OutcomeDistribution delta;
  Outcome outcome;
};

/// End-to-end run: evolve -> sample -> dispatch.  Returns the distribution
/// and the sampled outcome alongside the messages for audit.
RunResult run_algorithmic_model(const StrategyParams& s1, const StrategyParams& s2,
                                const CardSet& cards1, const CardSet& cards2,
                                const EngineConfig& cfg);

}  // namespace qpd
