#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "qpd/engine.hpp"
#include "qpd/equilibrium.hpp"
#include "qpd/games.hpp"

// The participation meta-game: each agent either leaves their channel to the
// computer (Participate) or takes it back and messages the arbitrator
// directly (Withdraw).  The inner engine is triggered iff both participate;
// either withdrawal is observed and re-routes the session before any engine
// execution.  The arbitrator sees messages only.

namespace qpd {

/// Message that does not match either side of the sender's card.
class ProtocolError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class MetaChoice { participate, withdraw };

inline const char* to_string(MetaChoice c) {
  return c == MetaChoice::participate ? "participate" : "withdraw";
}

/// An agent's stage-1 strategy.  Participants submit (params, cards) to the
/// computer; in any non-triggered session the agent sends a direct message,
/// which defaults to their card_1 (the dominant fallback) unless an explicit
/// override is set.
struct MetaStrategy {
  MetaChoice choice = MetaChoice::withdraw;
  CardSet cards;
  StrategyParams params{};                       // meaningful iff participate
  std::optional<std::string> fallback_message{};

  static MetaStrategy participate(const StrategyParams& params, const CardSet& cards,
                                  std::optional<std::string> fallback = std::nullopt);
  static MetaStrategy withdraw(const CardSet& cards,
                               std::optional<std::string> message = std::nullopt);

  const std::string& direct_message() const {
    return fallback_message ? *fallback_message : cards.card_1;
  }
};

/// Structural features of a one-shot PD setting; payoffs are orthogonal to
/// the type.
struct GameSetting {
  bool has_arbitrator = false;
  bool strategies_are_messages = false;
  bool agents_can_communicate = false;
  /// Agents can build the inner model and each observes whether the other
  /// keeps their channel with it.
  bool model_constructible_with_observation = false;
};

/// Enforces: model_constructible_with_observation implies both
/// strategies_are_messages and agents_can_communicate.
void validate(const GameSetting& s);

enum class PdType { type1 = 1, type2, type3, type4, type5 };

std::string to_string(PdType t);

/// Total over valid settings:
///   no arbitrator -> type 1; actions -> type 2; no communication -> type 3;
///   constructible-with-observation -> type 4; otherwise type 5.
PdType classify(const GameSetting& s);

/// Human-readable matched conditions, in classification order.
std::vector<std::string> classification_conditions(const GameSetting& s);

struct Stage1Trace {
  bool triggered = false;
  std::vector<std::string> events;
  std::optional<OutcomeDistribution> delta;
  std::optional<Outcome> outcome;
  PayoffPair payoffs;  // assigned by the arbitrator in stage 2
};

struct Stage1Result {
  Message m1;
  Message m2;
  Stage1Trace trace;
};

/// Stage 1: run the inner engine iff both participate, otherwise both fall
/// back to direct messages.  The trace records the trigger decision,
/// observation events and the stage-2 payoffs for audit.
Stage1Result play_stage1(const MetaStrategy& a1, const MetaStrategy& a2, const PayoffMatrix& m,
                         const EngineConfig& cfg);

/// Stage 2: map each message to C/D through the sender's card set and read
/// the payoff cell.  A pure function of messages, card sets and the matrix;
/// it has no access to strategy parameters or distributions.
/// Throws ProtocolError on unrecognized message text.
PayoffPair arbitrate(const Message& m1, const Message& m2, const CardSet& cards1,
                     const CardSet& cards2, const PayoffMatrix& m);

/// The 2x2 participation matrix: the (Participate, Participate) cell carries
/// the inner game's grid-equilibrium payoffs (the Pareto-best one when
/// several exist); every cell involving Withdraw carries (P, P).
/// Row/column 0 is Participate, 1 is Withdraw.  Requires m.is_pd().
PayoffMatrix build_meta_matrix(const PayoffMatrix& m, const EngineConfig& cfg,
                               const StrategyGrid& grid);

struct SessionRecord {
  std::uint64_t session = 0;
  MetaChoice choice1 = MetaChoice::withdraw;
  MetaChoice choice2 = MetaChoice::withdraw;
  bool triggered = false;
  std::optional<Outcome> outcome;
  std::string m1;
  std::string m2;
  PayoffPair payoffs;
};

struct SessionStats {
  std::uint64_t n = 0;
  std::uint64_t master_seed = 0;
  std::uint64_t triggered_count = 0;
  std::array<std::uint64_t, 4> outcome_counts{};  // triggered sessions only
  std::map<std::pair<std::string, std::string>, std::uint64_t> message_pair_counts;
  PayoffPair mean_payoffs;
  std::vector<SessionRecord> records;  // filled iff keep_records
};

/// n independent sessions of the fixed policies; session i uses the RNG
/// substream seed derived from (cfg.rng_seed, i).
SessionStats monte_carlo_sessions(const MetaStrategy& policy1, const MetaStrategy& policy2,
                                  std::uint64_t n_sessions, const PayoffMatrix& m,
                                  const EngineConfig& cfg, bool keep_records = false);

// One JSON-lines record:
// {session, meta:[choice,choice], triggered, outcome, messages, payoffs}
void to_json(nlohmann::ordered_json& j, const SessionRecord& r);

}  // namespace qpd
