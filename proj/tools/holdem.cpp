#include <omp.h>

#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "holdem/equity.hpp"
#include "holdem/harness.hpp"
#include "holdem/logstats.hpp"
#include "holdem/pokerlang.hpp"
#include "holdem/serve.hpp"
#include "holdem/text.hpp"

using namespace holdem;

namespace {

constexpr int kDomainError = 1;
constexpr int kUsageError = 2;

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidInput("cannot read '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidInput("cannot write '" + path + "'");
  out << text;
}

struct MatchOptions {
  std::string config;
  std::string agents;
  std::string mode;
  int hands = 0;
  int tournaments = 0;
  std::uint64_t seed = 0;
  bool seed_set = false;
  bool duplicate = false;
  bool rotate = false;
  int threads = 0;
  std::string out;
  std::string log;
};

void add_match_options(CLI::App* cmd, MatchOptions& o) {
  cmd->add_option("--config", o.config, "match config file (key = value lines)");
  cmd->add_option("--agents", o.agents, "comma-separated registry names, one per seat");
  cmd->add_option("--mode", o.mode, "cash, ring, tournament or elimination-series");
  cmd->add_option("--hands", o.hands, "hands per match or per tournament")->check(CLI::PositiveNumber);
  cmd->add_option("--seed", o.seed, "master seed")->each([&](const std::string&) { o.seed_set = true; });
  cmd->add_flag("--duplicate", o.duplicate, "replay each deal through every seat rotation");
  cmd->add_flag("--rotate", o.rotate, "shift the roster one seat every hand");
  cmd->add_option("--threads", o.threads, "OpenMP threads (0 = runtime default)")->check(CLI::NonNegativeNumber);
  cmd->add_option("--out", o.out, "report CSV path (default stdout)");
}

MatchConfig build_config(const MatchOptions& o) {
  MatchConfig c = o.config.empty() ? MatchConfig{} : MatchConfig::load(o.config);
  if (!o.agents.empty()) {
    c.agents.clear();
    for (const auto& a : split(o.agents, ',')) c.agents.emplace_back(trim(a));
  }
  if (!o.mode.empty()) c.mode = parse_mode(o.mode);
  if (o.hands > 0) c.hands = o.hands;
  if (o.tournaments > 0) c.tournaments = o.tournaments;
  if (o.seed_set) c.seed = o.seed;
  if (o.duplicate) c.duplicate = true;
  if (o.rotate) c.rotate_seats = true;
  if (!o.log.empty()) c.keep_log = true;
  if (o.threads > 0) omp_set_num_threads(o.threads);
  c.validate();
  return c;
}

int cmd_simulate(const MatchOptions& o) {
  const MatchConfig c = build_config(o);
  const MatchReport r = run_match(c);
  write_output(o.out, r.to_csv());
  if (!o.log.empty()) write_log_file(r.log, o.log);
  if (!o.out.empty() && o.out != "-") {
    for (const auto& a : r.agents) {
      std::cerr << a.name << ": " << format_double(a.income_rate) << " sb/hand over " << a.hands << " hands\n";
    }
  }
  return 0;
}

int cmd_tournament(MatchOptions o) {
  if (o.mode.empty()) o.mode = "elimination-series";
  const MatchConfig c = build_config(o);
  if (c.mode == MatchMode::kEliminationSeries) {
    write_output(o.out, run_elimination_series(c).to_csv());
  } else {
    const MatchReport r = run_match(c);
    write_output(o.out, r.to_csv());
    if (!o.log.empty()) write_log_file(r.log, o.log);
  }
  return 0;
}

int cmd_income_table(int players, std::uint64_t iters, std::uint64_t seed, bool serial, int threads,
                     const std::string& out) {
  if (threads > 0) omp_set_num_threads(threads);
  const IncomeRateTable t = serial ? income_rate_table_serial(players, iters, seed)
                                   : income_rate_table(players, iters, seed);
  write_output(out, t.to_csv());
  return 0;
}

int cmd_pokerlang_check(const std::vector<std::string>& files) {
  int status = 0;
  for (const auto& f : files) {
    try {
      const pokerlang::Program p = pokerlang::parse(slurp(f));
      const auto warnings = pokerlang::validate(p);
      for (const auto& w : warnings) {
        pokerlang::Diagnostic d = w;
        d.message = "warning: " + d.message;
        std::cerr << d.str(f) << '\n';
      }
      std::cout << f << ": ok (" << p.strategy.size() << " entries, " << p.tactics.size() << " tactics, "
                << warnings.size() << " warnings)\n";
    } catch (const pokerlang::ParseError& e) {
      for (const auto& d : e.diagnostics()) std::cerr << d.str(f) << '\n';
      status = kDomainError;
    }
  }
  return status;
}

int cmd_pokerlang_fmt(const std::string& file, bool write, bool check) {
  const std::string text = slurp(file);
  std::string formatted;
  try {
    formatted = pokerlang::format(pokerlang::parse(text));
  } catch (const pokerlang::ParseError& e) {
    for (const auto& d : e.diagnostics()) std::cerr << d.str(file) << '\n';
    return kDomainError;
  }
  if (check) {
    if (formatted == text) return 0;
    std::cerr << file << ": not in canonical form\n";
    return kDomainError;
  }
  if (write) {
    if (formatted != text) write_output(file, formatted);
    return 0;
  }
  std::cout << formatted;
  return 0;
}

GameLog read_log_reporting(const std::string& path) {
  try {
    return read_log(slurp(path));
  } catch (const LogError& e) {
    throw InvalidInput(path + ":" + e.what());
  }
}

int cmd_analyze(const std::vector<std::string>& logs, const std::string& factors, const std::string& rows,
                const std::string& players, bool no_ehs, std::uint64_t seed) {
  std::vector<GameLog> loaded;
  for (const auto& path : logs) loaded.push_back(read_log_reporting(path));
  write_output(factors, factor_analysis(loaded).to_csv());
  if (!rows.empty() || !players.empty()) {
    ExtractOptions opts;
    opts.compute_ehs = !no_ehs;
    opts.seed = seed;
    std::vector<GameStatsRow> all;
    std::string player_csv;
    for (const auto& log : loaded) {
      Extraction ex = extract(log, opts);
      all.insert(all.end(), ex.rows.begin(), ex.rows.end());
      player_csv = player_csv.empty() ? player_list_csv(ex) : player_csv;
    }
    if (!rows.empty()) write_output(rows, rows_to_csv(all));
    if (!players.empty()) write_output(players, player_csv);
  }
  return 0;
}

int cmd_replay(const std::string& path, long long only_hand) {
  const GameLog log = read_log_reporting(path);
  std::ostringstream out;
  out << "table: " << log.table.seats << " seats, " << log.table.small_bet << "/" << log.table.big_bet
      << " limit, " << log.hands.size() << " hands\n";
  bool found = only_hand < 0;
  for (const auto& h : log.hands) {
    if (only_hand >= 0 && h.hand_id != static_cast<std::uint64_t>(only_hand)) continue;
    found = true;
    out << "hand " << h.hand_id << " button " << h.button << '\n';
    for (std::size_t s = 0; s < h.players.size(); ++s) {
      if (h.players[s] < 0) continue;
      out << "  seat " << s << ' ' << log.players[static_cast<std::size_t>(h.players[s])] << " stack " << h.stacks[s];
      if (h.holes[s]) out << " [" << h.holes[s]->str() << ']';
      out << '\n';
    }
    Street street = Street::kPreflop;
    out << "  " << street_name(street) << ':';
    for (const auto& e : h.events) {
      if (e.street != street) {
        street = e.street;
        const std::size_t shown = street == Street::kFlop ? 3 : street == Street::kTurn ? 4 : 5;
        out << "\n  " << street_name(street) << " ["
            << cards_str(std::span<const Card>(h.board.data(), std::min(shown, h.board.size()))) << "]:";
      }
      out << ' ' << e.seat << ':' << action_name(e.action);
      if (e.amount > 0) out << '(' << e.amount << ')';
    }
    out << "\n  net";
    for (std::size_t s = 0; s < h.net.size(); ++s) out << ' ' << h.net[s];
    out << '\n';
  }
  if (!found) throw InvalidInput("no hand " + std::to_string(only_hand) + " in " + path);
  std::cout << out.str();
  return 0;
}

int cmd_serve(const std::string& opponents, std::uint64_t seed, Chips stack, int port, int max_connections) {
  ServeConfig config;
  config.opponents.clear();
  for (const auto& a : split(opponents, ',')) config.opponents.emplace_back(trim(a));
  config.seed = seed;
  config.starting_stack = stack;
  ServeSession session(config);
  if (port < 0) {
    serve_stream(session, std::cin, std::cout);
  } else {
    serve_tcp(session, port, max_connections, [](int bound) {
      std::cerr << "listening on 127.0.0.1:" << bound << std::endl;
    });
  }
  return 0;
}

// "pokerlang check f" and "pokerlang fmt f" are spellings of the dashed verbs.
std::vector<std::string> normalize(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  if (args.size() >= 2 && args[0] == "pokerlang" && (args[1] == "check" || args[1] == "fmt")) {
    args[1] = "pokerlang-" + args[1];
    args.erase(args.begin());
  }
  std::reverse(args.begin(), args.end());
  return args;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Fixed-limit hold'em toolkit"};
  app.name("holdem");
  app.require_subcommand(1);

  MatchOptions sim;
  auto* simulate = app.add_subcommand("simulate", "run a match and write the report CSV");
  add_match_options(simulate, sim);
  simulate->add_option("--log", sim.log, "write the hands as an XML game log");

  MatchOptions tour;
  auto* tournament = app.add_subcommand("tournament", "run an elimination series or a single tournament");
  add_match_options(tournament, tour);
  tournament->add_option("--tournaments", tour.tournaments, "tournaments in the series")
      ->check(CLI::PositiveNumber);
  tournament->add_option("--log", tour.log, "write the hands as an XML game log (single tournament)");

  int players = 2;
  std::uint64_t iters = 100000, table_seed = 1;
  bool serial = false;
  int table_threads = 0;
  std::string table_out;
  auto* income = app.add_subcommand("income-table", "roll-out preflop income-rate table as CSV");
  income->add_option("--players", players, "players at the table")->check(CLI::Range(2, 10));
  income->add_option("--iters", iters, "roll-outs per class")->check(CLI::PositiveNumber);
  income->add_option("--seed", table_seed, "seed");
  income->add_flag("--serial", serial, "use the single-threaded reference");
  income->add_option("--threads", table_threads, "OpenMP threads")->check(CLI::NonNegativeNumber);
  income->add_option("--out", table_out, "output path (default stdout)");

  std::vector<std::string> check_files;
  auto* check = app.add_subcommand("pokerlang-check", "parse and validate strategy files");
  check->add_option("files", check_files, "strategy files")->required()->check(CLI::ExistingFile);

  std::string fmt_file;
  bool fmt_write = false, fmt_check = false;
  auto* fmt = app.add_subcommand("pokerlang-fmt", "print a strategy file in canonical form");
  fmt->add_option("file", fmt_file, "strategy file")->required()->check(CLI::ExistingFile);
  auto* write_flag = fmt->add_flag("--write,-w", fmt_write, "rewrite the file in place");
  fmt->add_flag("--check", fmt_check, "exit 1 unless the file is already canonical")->excludes(write_flag);

  std::vector<std::string> logs;
  std::string factors_out, rows_out, players_out;
  bool no_ehs = false;
  std::uint64_t analyze_seed = 1;
  auto* analyze = app.add_subcommand("analyze", "factor analysis and per-decision extraction from XML logs");
  analyze->add_option("logs", logs, "XML game logs")->required()->check(CLI::ExistingFile);
  analyze->add_option("--factors", factors_out, "factor CSV path (default stdout)");
  analyze->add_option("--rows", rows_out, "per-decision rows CSV path");
  analyze->add_option("--players", players_out, "player list CSV path");
  analyze->add_flag("--no-ehs", no_ehs, "skip EHS estimation in the rows");
  analyze->add_option("--seed", analyze_seed, "seed for EHS estimation");

  std::string opponents = "observer";
  std::uint64_t serve_seed = 1;
  Chips serve_stack = 200;
  int port = -1, max_connections = 0;
  auto* serve = app.add_subcommand("serve", "human-play table over newline-delimited JSON");
  serve->add_option("--opponents", opponents, "comma-separated registry names for seats 1..n");
  serve->add_option("--seed", serve_seed, "seed");
  serve->add_option("--stack", serve_stack, "starting stack in chips")->check(CLI::PositiveNumber);
  serve->add_option("--port", port, "listen on 127.0.0.1:PORT instead of stdio (0 picks one)")
      ->check(CLI::Range(0, 65535));
  serve->add_option("--max-connections", max_connections, "exit after this many connections (0 = no limit)")
      ->check(CLI::NonNegativeNumber);

  std::string replay_file;
  long long replay_hand = -1;
  auto* replay = app.add_subcommand("replay", "validate an XML log against the engine and print it");
  replay->add_option("log", replay_file, "XML game log")->required()->check(CLI::ExistingFile);
  replay->add_option("--hand", replay_hand, "print only this hand id")->check(CLI::NonNegativeNumber);

  if (argc > 1 && argv[1][0] != '-' && std::string_view(argv[1]) != "pokerlang") {
    bool known = false;
    for (const auto* sub : app.get_subcommands({})) known |= sub->get_name() == argv[1];
    if (!known) {
      std::cerr << "holdem: unknown command '" << argv[1] << "'\n\n" << app.help();
      return kUsageError;
    }
  }
  try {
    app.parse(normalize(argc, argv));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "holdem: " << e.what() << "\n\n" << app.help();
    return kUsageError;
  }

  try {
    if (*simulate) return cmd_simulate(sim);
    if (*tournament) return cmd_tournament(tour);
    if (*income) return cmd_income_table(players, iters, table_seed, serial, table_threads, table_out);
    if (*check) return cmd_pokerlang_check(check_files);
    if (*fmt) return cmd_pokerlang_fmt(fmt_file, fmt_write, fmt_check);
    if (*analyze) return cmd_analyze(logs, factors_out, rows_out, players_out, no_ehs, analyze_seed);
    if (*serve) return cmd_serve(opponents, serve_seed, serve_stack, port, max_connections);
    if (*replay) return cmd_replay(replay_file, replay_hand);
  } catch (const std::exception& e) {
    std::cerr << "holdem: " << e.what() << '\n';
    return kDomainError;
  }
  return kUsageError;
}
