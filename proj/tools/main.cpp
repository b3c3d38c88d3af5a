// qpd: simulate the two-coin message game, sweep payoff surfaces, search for
// grid equilibria, run participation sessions and classify PD settings.
//
// Exit codes: 0 success, 2 usage or parameter range error, 3 protocol error.

#include <array>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <numbers>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "qpd/engine.hpp"
#include "qpd/equilibrium.hpp"
#include "qpd/games.hpp"
#include "qpd/protocol.hpp"
#include "qpd/version.hpp"

namespace {

using nlohmann::ordered_json;
using namespace qpd;

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

// Decimal approximations of pi multiples (e.g. 1.5708) land slightly outside
// the closed parameter ranges; inputs within this slack of an edge snap to it.
// The engine itself stays strict.
constexpr double kEdgeSnap = 1e-3;

double snap_to_range(const std::string& name, double v, double lo, double hi) {
  if (v > lo - kEdgeSnap && v < lo) return lo;
  if (v < hi + kEdgeSnap && v > hi) return hi;
  if (v < lo || v > hi || !std::isfinite(v)) {
    throw std::domain_error(name + " out of range [" + std::to_string(lo) + ", " +
                            std::to_string(hi) + "]: got " + std::to_string(v));
  }
  return v;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) parts.push_back(item);
  return parts;
}

double parse_double(const std::string& name, const std::string& text) {
  try {
    std::size_t pos = 0;
    const double v = std::stod(text, &pos);
    if (pos != text.size()) throw std::invalid_argument(text);
    return v;
  } catch (const std::exception&) {
    throw std::domain_error(name + ": cannot parse number \"" + text + "\"");
  }
}

// "theta,phi" in radians, or one of the aliases C / D / I.
StrategyParams parse_strategy(const std::string& name, const std::string& text) {
  if (text == "C") return kQuantumParams;
  if (text == "D") return kDefectParams;
  if (text == "I") return kIdentityParams;
  const auto parts = split(text, ',');
  if (parts.size() != 2) {
    throw std::domain_error(name + ": expected \"theta,phi\" or one of C, D, I; got \"" + text +
                            "\"");
  }
  StrategyParams s;
  s.theta = snap_to_range(name + " theta", parse_double(name, parts[0]), 0.0, kPi);
  s.phi = snap_to_range(name + " phi", parse_double(name, parts[1]), 0.0, kHalfPi);
  return s;
}

PayoffMatrix parse_payoffs(const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) {
    throw std::domain_error("--payoffs: expected \"T,R,P,S\"; got \"" + text + "\"");
  }
  return pd_matrix(parse_double("T", parts[0]), parse_double("R", parts[1]),
                   parse_double("P", parts[2]), parse_double("S", parts[3]));
}

StrategyGrid parse_grid(const std::string& text) {
  const auto parts = split(text, 'x');
  if (parts.size() != 2) {
    throw std::domain_error("--grid: expected \"THETAxPHI\" step counts; got \"" + text + "\"");
  }
  StrategyGrid g;
  g.theta_steps = static_cast<int>(parse_double("grid theta steps", parts[0]));
  g.phi_steps = static_cast<int>(parse_double("grid phi steps", parts[1]));
  validate(g);
  return g;
}

CardSet parse_cards(const std::string& name, const std::string& text) {
  const auto parts = split(text, ',');
  if (parts.size() != 2) {
    throw std::domain_error(name + ": expected \"cooperate-text,defect-text\"; got \"" + text +
                            "\"");
  }
  CardSet cards{parts[0], parts[1]};
  validate(cards);
  return cards;
}

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm_utc{};
  gmtime_r(&now, &tm_utc);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm_utc);
  return buf;
}

std::string format_double(double v) {
  std::array<char, 32> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

std::filesystem::path resolve_out_path(const std::string& path) {
  std::filesystem::path p(path);
  if (p.is_relative()) {
    if (const char* dir = std::getenv("QPD_OUT_DIR")) p = std::filesystem::path(dir) / p;
  }
  return p;
}

void emit(const ordered_json& report, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << report.dump(2) << "\n";
    return;
  }
  std::ofstream f(resolve_out_path(out_path));
  if (!f) throw std::runtime_error("cannot open output file: " + out_path);
  f << report.dump(2) << "\n";
}

ordered_json report_header(const std::string& command) {
  return ordered_json{{"tool", kToolName},
                      {"version", kToolVersion},
                      {"command", command},
                      {"generated_at", iso_timestamp()}};
}

std::uint64_t resolve_seed(std::optional<std::uint64_t> seed) {
  if (seed) return *seed;
  std::random_device rd;
  return (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
}

ordered_json config_common(double gamma, const PayoffMatrix& m) {
  ordered_json payoff_json;
  to_json(payoff_json, m);
  return ordered_json{{"gamma", gamma}, {"payoff_matrix", payoff_json}};
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  std::string s1, s2;
  double gamma = kHalfPi;
  std::string payoffs = "5,3,1,0";
  std::optional<std::uint64_t> seed;
  std::string cards1 = "cooperate,defect";
  std::string cards2 = "cooperate,defect";
  std::string out;
};

int run_simulate(const SimulateArgs& a) {
  const StrategyParams s1 = parse_strategy("--s1", a.s1);
  const StrategyParams s2 = parse_strategy("--s2", a.s2);
  const PayoffMatrix m = parse_payoffs(a.payoffs);
  const CardSet cards1 = parse_cards("--cards1", a.cards1);
  const CardSet cards2 = parse_cards("--cards2", a.cards2);
  EngineConfig cfg;
  cfg.gamma = snap_to_range("--gamma", a.gamma, 0.0, kHalfPi);
  cfg.rng_seed = resolve_seed(a.seed);

  const RunResult run = run_algorithmic_model(s1, s2, cards1, cards2, cfg);
  const PayoffPair pay = expected_payoffs(m, run.delta);
  const PayoffPair realized = m.cell(run.outcome);

  ordered_json report = report_header("simulate");
  report["config"] = config_common(cfg.gamma, m);
  report["config"]["s1"] = {s1.theta, s1.phi};
  report["config"]["s2"] = {s2.theta, s2.phi};
  report["config"]["cards1"] = {cards1.card_0, cards1.card_1};
  report["config"]["cards2"] = {cards2.card_0, cards2.card_1};
  report["config"]["seed"] = cfg.rng_seed;
  report["delta"] = run.delta.probs();
  report["outcome"] = run.outcome.label();
  report["messages"] = {{{"agent", 1}, {"text", run.m1.text}}, {{"agent", 2}, {"text", run.m2.text}}};
  report["payoffs"] = {realized.u1, realized.u2};
  report["expected_payoffs"] = {pay.u1, pay.u2};
  emit(report, a.out);
  return 0;
}

struct SweepArgs {
  std::string grid = "33x17";
  double gamma = kHalfPi;
  std::string payoffs = "5,3,1,0";
  std::string opponent;
  bool full = false;
  std::string out;
};

int run_sweep(const SweepArgs& a) {
  const StrategyGrid grid = parse_grid(a.grid);
  const PayoffMatrix m = parse_payoffs(a.payoffs);
  const double gamma = snap_to_range("--gamma", a.gamma, 0.0, kHalfPi);
  const EngineConfig cfg{gamma, 0};
  if (a.full && !a.opponent.empty()) {
    throw std::domain_error("sweep: --opponent and --full are mutually exclusive");
  }
  if (!a.full && a.opponent.empty()) {
    throw std::domain_error("sweep: exactly one of --opponent or --full is required");
  }

  const std::vector<StrategyParams> pts = grid.points();
  std::ostringstream rows;
  std::size_t row_count = 0;
  const auto add_row = [&](const StrategyParams& s1, const StrategyParams& s2) {
    const PayoffPair e = expected_payoffs(m, evolve(s1, s2, cfg));
    rows << format_double(s1.theta) << ',' << format_double(s1.phi) << ','
         << format_double(s2.theta) << ',' << format_double(s2.phi) << ','
         << format_double(e.u1) << ',' << format_double(e.u2) << '\n';
    ++row_count;
  };
  std::string mode;
  if (a.full) {
    mode = "full";
    for (const StrategyParams& s1 : pts)
      for (const StrategyParams& s2 : pts) add_row(s1, s2);
  } else {
    const StrategyParams opp = parse_strategy("--opponent", a.opponent);
    mode = "vs-opponent " + format_double(opp.theta) + "," + format_double(opp.phi);
    for (const StrategyParams& s1 : pts) add_row(s1, opp);
  }

  std::ostringstream header;
  header << "# tool: " << kToolName << " " << kToolVersion << "\n"
         << "# command: sweep\n"
         << "# config: gamma=" << format_double(gamma) << " payoffs=" << a.payoffs
         << " grid=" << grid.theta_steps << "x" << grid.phi_steps << " mode=" << mode << "\n"
         << "# sampling: none (rows are exact expectations; no seed involved)\n"
         << "# rows: " << row_count << "\n"
         << "# generated_at: " << iso_timestamp() << "\n"
         << "theta1,phi1,theta2,phi2,u1,u2\n";

  if (a.out.empty()) {
    std::cout << header.str() << rows.str();
  } else {
    std::ofstream f(resolve_out_path(a.out));
    if (!f) throw std::runtime_error("cannot open output file: " + a.out);
    f << header.str() << rows.str();
  }
  return 0;
}

struct EquilibriumArgs {
  std::string grid = "33x17";
  double gamma = kHalfPi;
  std::string payoffs = "5,3,1,0";
  double tol = 1e-9;
  std::string out;
};

int run_equilibrium(const EquilibriumArgs& a) {
  const StrategyGrid grid = parse_grid(a.grid);
  const PayoffMatrix m = parse_payoffs(a.payoffs);
  const double gamma = snap_to_range("--gamma", a.gamma, 0.0, kHalfPi);
  const auto eqs = find_pure_grid_equilibria(m, EngineConfig{gamma, 0}, grid, a.tol);

  ordered_json report = report_header("equilibrium");
  report["config"] = config_common(gamma, m);
  report["config"]["grid"] = {grid.theta_steps, grid.phi_steps};
  report["config"]["tol"] = a.tol;
  report["count"] = eqs.size();
  report["equilibria"] = ordered_json::array();
  for (const EquilibriumReport& e : eqs) {
    ordered_json j;
    to_json(j, e);
    report["equilibria"].push_back(std::move(j));
  }
  emit(report, a.out);
  return 0;
}

struct ProtocolArgs {
  std::string meta1 = "dominant";
  std::string meta2 = "dominant";
  std::string s1 = "C";
  std::string s2 = "C";
  std::optional<std::string> msg1;
  std::optional<std::string> msg2;
  std::string cards1 = "cooperate,defect";
  std::string cards2 = "cooperate,defect";
  std::string payoffs = "5,3,1,0";
  double gamma = kHalfPi;
  std::uint64_t sessions = 1;
  std::optional<std::uint64_t> seed;
  std::string sessions_out;
  std::string out;
};

MetaStrategy parse_meta(const std::string& name, const std::string& choice,
                        const std::string& params_text, const CardSet& cards,
                        const std::optional<std::string>& msg) {
  if (choice == "dominant") return MetaStrategy::participate(kQuantumParams, cards, msg);
  if (choice == "participate") {
    return MetaStrategy::participate(parse_strategy(name, params_text), cards, msg);
  }
  if (choice == "withdraw") return MetaStrategy::withdraw(cards, msg);
  throw std::domain_error(name + ": expected participate, withdraw or dominant; got \"" + choice +
                          "\"");
}

int run_protocol(const ProtocolArgs& a) {
  const PayoffMatrix m = parse_payoffs(a.payoffs);
  const CardSet cards1 = parse_cards("--cards1", a.cards1);
  const CardSet cards2 = parse_cards("--cards2", a.cards2);
  const MetaStrategy p1 = parse_meta("--s1", a.meta1, a.s1, cards1, a.msg1);
  const MetaStrategy p2 = parse_meta("--s2", a.meta2, a.s2, cards2, a.msg2);
  EngineConfig cfg;
  cfg.gamma = snap_to_range("--gamma", a.gamma, 0.0, kHalfPi);
  cfg.rng_seed = resolve_seed(a.seed);

  const bool keep = !a.sessions_out.empty();
  const SessionStats stats = monte_carlo_sessions(p1, p2, a.sessions, m, cfg, keep);

  if (keep) {
    std::ofstream f(resolve_out_path(a.sessions_out));
    if (!f) throw std::runtime_error("cannot open output file: " + a.sessions_out);
    for (const SessionRecord& r : stats.records) {
      ordered_json j;
      to_json(j, r);
      f << j.dump() << "\n";
    }
  }

  ordered_json report = report_header("protocol");
  report["config"] = config_common(cfg.gamma, m);
  report["config"]["meta"] = {a.meta1, a.meta2};
  report["config"]["cards1"] = {cards1.card_0, cards1.card_1};
  report["config"]["cards2"] = {cards2.card_0, cards2.card_1};
  report["config"]["sessions"] = a.sessions;
  report["config"]["seed"] = cfg.rng_seed;
  report["triggered"] = stats.triggered_count;
  report["outcome_counts"] = {{"CC", stats.outcome_counts[0]},
                              {"CD", stats.outcome_counts[1]},
                              {"DC", stats.outcome_counts[2]},
                              {"DD", stats.outcome_counts[3]}};
  report["message_pairs"] = ordered_json::array();
  for (const auto& [pair, count] : stats.message_pair_counts) {
    report["message_pairs"].push_back(
        {{"m1", pair.first}, {"m2", pair.second}, {"count", count}});
  }
  report["mean_payoffs"] = {stats.mean_payoffs.u1, stats.mean_payoffs.u2};
  emit(report, a.out);
  return 0;
}

struct ClassifyArgs {
  GameSetting setting;
  std::string out;
};

int run_classify(const ClassifyArgs& a) {
  const PdType type = classify(a.setting);

  ordered_json report = report_header("classify");
  report["config"] = {
      {"arbitrator", a.setting.has_arbitrator},
      {"messages", a.setting.strategies_are_messages},
      {"communication", a.setting.agents_can_communicate},
      {"observed_construction", a.setting.model_constructible_with_observation}};
  report["type"] = to_string(type);
  report["conditions"] = classification_conditions(a.setting);
  emit(report, a.out);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-coin message-game toolkit: engine simulation, payoff sweeps, "
               "equilibrium search, participation sessions and PD classification"};
  app.require_subcommand(1);

  SimulateArgs sim;
  CLI::App* c_sim = app.add_subcommand("simulate", "Run the engine once and report the "
                                                   "distribution, outcome, messages and payoffs");
  c_sim->add_option("--s1", sim.s1, "agent 1 parameters \"theta,phi\" or alias C|D|I")->required();
  c_sim->add_option("--s2", sim.s2, "agent 2 parameters")->required();
  c_sim->add_option("--gamma", sim.gamma, "entanglement measure in [0, pi/2] (default pi/2)");
  c_sim->add_option("--payoffs", sim.payoffs, "payoffs \"T,R,P,S\" (default 5,3,1,0)");
  c_sim->add_option("--seed", sim.seed, "RNG seed (auto-generated and reported if absent)");
  c_sim->add_option("--cards1", sim.cards1, "agent 1 card texts \"coop,defect\"");
  c_sim->add_option("--cards2", sim.cards2, "agent 2 card texts");
  c_sim->add_option("-o,--out", sim.out, "output file (default stdout)");

  SweepArgs sweep;
  CLI::App* c_sweep = app.add_subcommand("sweep", "Expected-payoff surface over a strategy grid "
                                                  "(CSV; deterministic, no sampling)");
  c_sweep->add_option("--grid", sweep.grid, "grid steps \"THETAxPHI\" (default 33x17)");
  c_sweep->add_option("--gamma", sweep.gamma, "entanglement measure (default pi/2)");
  c_sweep->add_option("--payoffs", sweep.payoffs, "payoffs \"T,R,P,S\"");
  c_sweep->add_option("--opponent", sweep.opponent, "fixed agent-2 strategy; one row per grid point");
  c_sweep->add_flag("--full", sweep.full, "full cross-product over ordered profiles");
  c_sweep->add_option("-o,--out", sweep.out, "output CSV file (default stdout)");

  EquilibriumArgs eq;
  CLI::App* c_eq = app.add_subcommand("equilibrium", "Pure grid Nash equilibria with Pareto flags");
  c_eq->add_option("--grid", eq.grid, "grid steps (default 33x17)");
  c_eq->add_option("--gamma", eq.gamma, "entanglement measure (default pi/2)");
  c_eq->add_option("--payoffs", eq.payoffs, "payoffs \"T,R,P,S\"");
  c_eq->add_option("--tol", eq.tol, "deviation-gain tolerance (default 1e-9)");
  c_eq->add_option("-o,--out", eq.out, "output file (default stdout)");

  ProtocolArgs proto;
  CLI::App* c_proto = app.add_subcommand("protocol", "Participation sessions: trigger rule, "
                                                     "session traces and summary frequencies");
  c_proto->add_option("--meta1", proto.meta1, "participate | withdraw | dominant");
  c_proto->add_option("--meta2", proto.meta2, "participate | withdraw | dominant");
  c_proto->add_option("--s1", proto.s1, "agent 1 engine parameters when participating");
  c_proto->add_option("--s2", proto.s2, "agent 2 engine parameters when participating");
  c_proto->add_option("--msg1", proto.msg1, "agent 1 direct-message override (default defect card)");
  c_proto->add_option("--msg2", proto.msg2, "agent 2 direct-message override");
  c_proto->add_option("--cards1", proto.cards1, "agent 1 card texts");
  c_proto->add_option("--cards2", proto.cards2, "agent 2 card texts");
  c_proto->add_option("--payoffs", proto.payoffs, "payoffs \"T,R,P,S\"");
  c_proto->add_option("--gamma", proto.gamma, "entanglement measure (default pi/2)");
  c_proto->add_option("-n,--sessions", proto.sessions, "number of independent sessions");
  c_proto->add_option("--seed", proto.seed, "master seed; session i uses substream (seed, i)");
  c_proto->add_option("--sessions-out", proto.sessions_out, "JSON-lines trace file, one session per line");
  c_proto->add_option("-o,--out", proto.out, "summary output file (default stdout)");

  ClassifyArgs cls;
  CLI::App* c_cls = app.add_subcommand("classify", "Classify a one-shot PD setting into types 1-5");
  c_cls->add_flag("--arbitrator,!--no-arbitrator", cls.setting.has_arbitrator,
                  "an arbitrator assigns payoffs");
  c_cls->add_flag("--messages,!--actions", cls.setting.strategies_are_messages,
                  "strategies are messages (vs actions)");
  c_cls->add_flag("--communication,!--no-communication", cls.setting.agents_can_communicate,
                  "agents can communicate");
  c_cls->add_flag("--observed-construction,!--no-observed-construction",
                  cls.setting.model_constructible_with_observation,
                  "the model can be built with mutual participation observation");
  c_cls->add_option("-o,--out", cls.out, "output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (c_sim->parsed()) return run_simulate(sim);
    if (c_sweep->parsed()) return run_sweep(sweep);
    if (c_eq->parsed()) return run_equilibrium(eq);
    if (c_proto->parsed()) return run_protocol(proto);
    if (c_cls->parsed()) return run_classify(cls);
  } catch (const ProtocolError& e) {
    std::cerr << "protocol error: " << e.what() << "\n";
    return 3;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
