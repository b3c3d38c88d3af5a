#include "qpd/protocol.hpp"

#include <stdexcept>

namespace qpd {

MetaStrategy MetaStrategy::participate(const StrategyParams& params, const CardSet& cards,
                                       std::optional<std::string> fallback) {
  validate(params);
  qpd::validate(cards);
  return MetaStrategy{MetaChoice::participate, cards, params, std::move(fallback)};
}

MetaStrategy MetaStrategy::withdraw(const CardSet& cards, std::optional<std::string> message) {
  qpd::validate(cards);
  return MetaStrategy{MetaChoice::withdraw, cards, StrategyParams{}, std::move(message)};
}

void validate(const GameSetting& s) {
  if (s.model_constructible_with_observation && !s.agents_can_communicate) {
    throw std::domain_error(
        "inconsistent setting: model_constructible_with_observation requires "
        "agents_can_communicate");
  }
  if (s.model_constructible_with_observation && !s.strategies_are_messages) {
    throw std::domain_error(
        "inconsistent setting: model_constructible_with_observation requires "
        "strategies_are_messages");
  }
}

std::string to_string(PdType t) { return "type" + std::to_string(static_cast<int>(t)); }

PdType classify(const GameSetting& s) {
  validate(s);
  if (!s.has_arbitrator) return PdType::type1;
  if (!s.strategies_are_messages) return PdType::type2;
  if (!s.agents_can_communicate) return PdType::type3;
  return s.model_constructible_with_observation ? PdType::type4 : PdType::type5;
}

std::vector<std::string> classification_conditions(const GameSetting& s) {
  std::vector<std::string> out;
  out.push_back(s.has_arbitrator ? "an arbitrator assigns payoffs"
                                 : "no arbitrator; payoffs follow from the actions themselves");
  if (!s.has_arbitrator) return out;
  out.push_back(s.strategies_are_messages ? "strategies are messages sent through channels"
                                          : "strategies are actions performed by agents");
  if (!s.strategies_are_messages) return out;
  out.push_back(s.agents_can_communicate ? "agents can communicate with each other"
                                         : "agents cannot communicate");
  if (!s.agents_can_communicate) return out;
  out.push_back(s.model_constructible_with_observation
                    ? "agents can build the algorithmic model and observe participation"
                    : "the algorithmic model cannot be constructed with mutual observation");
  return out;
}

Stage1Result play_stage1(const MetaStrategy& a1, const MetaStrategy& a2, const PayoffMatrix& m,
                         const EngineConfig& cfg) {
  validate(a1.cards);
  validate(a2.cards);
  Stage1Trace trace;
  trace.triggered = a1.choice == MetaChoice::participate && a2.choice == MetaChoice::participate;

  if (trace.triggered) {
    trace.events.push_back("both agents participate: algorithmic model triggered");
    const RunResult run = run_algorithmic_model(a1.params, a2.params, a1.cards, a2.cards, cfg);
    trace.delta = run.delta;
    trace.outcome = run.outcome;
    trace.payoffs = arbitrate(run.m1, run.m2, a1.cards, a2.cards, m);
    return {run.m1, run.m2, trace};
  }

  // Either withdrawal is observed before any engine execution; both agents
  // end up messaging the arbitrator directly.
  if (a1.choice == MetaChoice::withdraw) trace.events.push_back("agent 1 takes back the channel");
  if (a2.choice == MetaChoice::withdraw) trace.events.push_back("agent 2 takes back the channel");
  if (a1.choice == MetaChoice::participate) {
    trace.events.push_back("agent 1 observes the withdrawal and reverts to a direct message");
  }
  if (a2.choice == MetaChoice::participate) {
    trace.events.push_back("agent 2 observes the withdrawal and reverts to a direct message");
  }
  Message m1{1, a1.direct_message()};
  Message m2{2, a2.direct_message()};
  trace.payoffs = arbitrate(m1, m2, a1.cards, a2.cards, m);
  return {std::move(m1), std::move(m2), trace};
}

namespace {

Coin coin_of_message(const Message& msg, const CardSet& cards) {
  if (msg.text == cards.card_0) return Coin::C;
  if (msg.text == cards.card_1) return Coin::D;
  throw ProtocolError("unrecognized message on channel " + std::to_string(msg.agent) + ": \"" +
                      msg.text + "\"");
}

}  // namespace

PayoffPair arbitrate(const Message& m1, const Message& m2, const CardSet& cards1,
                     const CardSet& cards2, const PayoffMatrix& m) {
  return m.cell(coin_of_message(m1, cards1), coin_of_message(m2, cards2));
}

PayoffMatrix build_meta_matrix(const PayoffMatrix& m, const EngineConfig& cfg,
                               const StrategyGrid& grid) {
  if (!m.is_pd()) throw std::domain_error("meta matrix requires a PD base game");

  const std::vector<EquilibriumReport> eqs = find_pure_grid_equilibria(m, cfg, grid, 1e-9);
  if (eqs.empty()) {
    throw std::domain_error("inner game has no pure grid equilibrium at this resolution");
  }
  std::vector<PayoffPair> payoffs;
  payoffs.reserve(eqs.size());
  for (const EquilibriumReport& e : eqs) payoffs.push_back(e.payoffs);
  const PayoffPair inner = eqs[pareto_filter(payoffs).front()].payoffs;

  const PayoffPair pp = m.cell(Coin::D, Coin::D);
  return PayoffMatrix::from_cells(inner, pp, pp, pp);
}

SessionStats monte_carlo_sessions(const MetaStrategy& policy1, const MetaStrategy& policy2,
                                  std::uint64_t n_sessions, const PayoffMatrix& m,
                                  const EngineConfig& cfg, bool keep_records) {
  if (n_sessions < 1) throw std::domain_error("n_sessions must be >= 1");

  SessionStats stats;
  stats.n = n_sessions;
  stats.master_seed = cfg.rng_seed;
  if (keep_records) stats.records.reserve(n_sessions);

  double sum1 = 0.0, sum2 = 0.0;
  for (std::uint64_t i = 0; i < n_sessions; ++i) {
    EngineConfig session_cfg = cfg;
    session_cfg.rng_seed = Rng::substream_seed(cfg.rng_seed, i);
    const Stage1Result r = play_stage1(policy1, policy2, m, session_cfg);

    if (r.trace.triggered) {
      ++stats.triggered_count;
      ++stats.outcome_counts[static_cast<std::size_t>(r.trace.outcome->index())];
    }
    ++stats.message_pair_counts[{r.m1.text, r.m2.text}];
    sum1 += r.trace.payoffs.u1;
    sum2 += r.trace.payoffs.u2;

    if (keep_records) {
      stats.records.push_back({i, policy1.choice, policy2.choice, r.trace.triggered,
                               r.trace.outcome, r.m1.text, r.m2.text, r.trace.payoffs});
    }
  }
  stats.mean_payoffs = {sum1 / static_cast<double>(n_sessions),
                        sum2 / static_cast<double>(n_sessions)};
  return stats;
}

void to_json(nlohmann::ordered_json& j, const SessionRecord& r) {
  j = nlohmann::ordered_json{
      {"session", r.session},
      {"meta", {to_string(r.choice1), to_string(r.choice2)}},
      {"triggered", r.triggered},
      {"outcome", r.outcome ? nlohmann::ordered_json(r.outcome->label())
                            : nlohmann::ordered_json(nullptr)},
      {"messages", {r.m1, r.m2}},
      {"payoffs", {r.payoffs.u1, r.payoffs.u2}}};
}

}  // namespace qpd
