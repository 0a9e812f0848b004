// Copyright 2026 The Dhumbal Bench Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "cli.h"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "dhumbal/analytics.h"
#include "dhumbal/arena.h"
#include "dhumbal/config.h"
#include "dhumbal/errors.h"
#include "dhumbal/learning.h"
#include "play.h"

namespace dhumbal::cli {

namespace fs = std::filesystem;

namespace {

// Missing or unreadable inputs and unwritable outputs.
class DataError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Common {
  std::uint64_t seed = kDefaultSeed;
  int rounds = 1024;
  int players = 4;
  std::string config;
  std::string out;
  std::string format = "csv";
  CLI::Option* seed_opt = nullptr;
  CLI::Option* rounds_opt = nullptr;
  CLI::Option* players_opt = nullptr;
};

void add_common(CLI::App& app, Common& c) {
  c.seed_opt = app.add_option("--seed", c.seed, "Random seed (default 42)");
  c.rounds_opt =
      app.add_option("--rounds", c.rounds, "Rounds to play (default 1024)")->check(CLI::PositiveNumber);
  c.players_opt =
      app.add_option("--players", c.players, "Seats at the table")->check(CLI::Range(2, 5));
  app.add_option("--config", c.config, "JSON experiment config");
  app.add_option("--out", c.out, "Output directory");
  app.add_option("--format", c.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
}

ExperimentConfig resolve_config(const Common& c) {
  ExperimentConfig cfg;
  if (!c.config.empty()) {
    if (!fs::exists(c.config)) throw DataError("config file " + c.config + " does not exist");
    cfg = load_config(c.config);
  }
  if (c.seed_opt->count()) cfg.seed = c.seed;
  if (c.rounds_opt->count()) cfg.rounds = c.rounds;
  if (c.players_opt->count()) cfg.round.num_players = c.players;
  return cfg;
}

// --out, then DHUMBAL_OUT_DIR, then the config file, then ./dhumbal-out.
fs::path resolve_out_dir(const Common& c, const ExperimentConfig& cfg) {
  if (!c.out.empty()) return c.out;
  if (const char* env = std::getenv("DHUMBAL_OUT_DIR"); env && *env) return env;
  if (cfg.out_dir) return *cfg.out_dir;
  return "dhumbal-out";
}

void ensure_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw DataError("cannot create " + dir.string() + ": " + ec.message());
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  f << content;
  if (!f) throw DataError("cannot write " + path.string());
}

std::string read_file(const fs::path& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw DataError("cannot read " + path.string());
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

ParsedRecords load_records(const fs::path& path) {
  const std::string text = read_file(path);
  const auto first = text.find_first_not_of(" \t\r\n");
  ParsedRecords parsed;
  if (first != std::string::npos && text[first] == '{') {
    parsed = records_from_json(text);
  } else {
    std::istringstream ss(text);
    parsed = read_records_csv(ss);
  }
  if (parsed.records.empty()) throw DataError(path.string() + " holds no records");
  return parsed;
}

std::unique_ptr<GreedyNetAgent> load_checkpoint(const std::string& path,
                                                std::optional<LearnerKind> kind = std::nullopt) {
  if (!fs::exists(path)) throw DataError("checkpoint " + path + " does not exist");
  if (!kind) {
    const DenseNet net = load_weights(path);
    kind = net.activations().back() == Activation::kSoftmax ? LearnerKind::kPpo : LearnerKind::kDqn;
  }
  return load_learned_agent(*kind, path);
}

std::string report_text(const std::string& title, const ParsedRecords& data,
                        const MetricsSummary& summary) {
  std::ostringstream os;
  os << format_summary_table(summary, title);
  const int best = category_winner(summary);
  if (best >= 0) os << "\nCategory winner: " << summary.agents[best].name << '\n';
  if (data.labels.size() >= 2) {
    const auto cmp = pairwise_comparisons(data.records, static_cast<int>(data.labels.size()));
    os << "\nPairwise comparisons (Welch t, Cohen's d, Bonferroni over " << cmp.size()
       << " tests)\n"
       << format_comparison_csv(cmp, data.labels);
  }
  return os.str();
}

// Records, summary, comparison table and text report for one finished run.
void write_run(const fs::path& dir, const std::string& title, const TournamentResult& r,
               const std::string& format, std::ostream& out) {
  ensure_dir(dir);
  std::ostringstream csv;
  write_records_csv(csv, r.labels, r.records);
  write_file(dir / "records.csv", csv.str());
  if (format == "json") write_file(dir / "records.json", records_to_json(r.labels, r.records));
  write_file(dir / "summary.json", summary_to_json(r.summary) + "\n");
  const ParsedRecords data{r.labels, r.records};
  const auto cmp = pairwise_comparisons(r.records, static_cast<int>(r.labels.size()));
  write_file(dir / "comparisons.csv", format_comparison_csv(cmp, r.labels));
  const std::string text = report_text(title, data, r.summary);
  write_file(dir / "report.txt", text);
  out << text << "\nWrote " << (dir / "records.csv").string() << ", summary.json, report.txt\n";
}

TournamentResult run(std::vector<std::unique_ptr<Agent>> agents, const ExperimentConfig& cfg) {
  return run_tournament(std::move(agents), cfg.tournament_options());
}

std::vector<std::string> default_lineup(const std::string& kind) {
  if (kind == "rule") return {"aggressive", "conservative", "balanced", "opportunistic"};
  if (kind == "search") return {"mcts", "ismcts"};
  return {};
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::istream& in, std::ostream& out,
            std::ostream& err) {
  CLI::App app{"Dhumbal simulator and benchmark suite", "dhumbal"};
  app.require_subcommand(1);
  app.set_help_all_flag("--help-all", "Help for every subcommand");

  // tournament
  Common tc;
  std::string tkind;
  std::vector<std::string> tagents, tcheckpoints;
  int titer = 0, tdet = 0;
  bool tparallel = false;
  auto* tournament = app.add_subcommand("tournament", "Within-category tournament");
  tournament->add_option("kind", tkind, "rule, search or learning")
      ->required()
      ->check(CLI::IsMember({"rule", "search", "learning"}));
  add_common(*tournament, tc);
  tournament->add_option("--agents", tagents, "Participants (e.g. aggressive ismcts ppo:p.json)");
  auto* titer_opt = tournament->add_option("--iterations", titer, "Search iterations")
                        ->check(CLI::PositiveNumber);
  auto* tdet_opt = tournament->add_option("--determinizations", tdet, "ISMCTS worlds per iteration")
                       ->check(CLI::PositiveNumber);
  tournament->add_option("--checkpoint", tcheckpoints, "Learner checkpoints (kind is detected)");
  tournament->add_flag("--parallel", tparallel, "Run rounds on worker threads");

  // championship
  Common cc;
  std::string ccheckpoint;
  int citer = 0, cdet = 0;
  auto* championship =
      app.add_subcommand("championship", "Aggressive vs ISMCTS vs PPO vs Random");
  add_common(*championship, cc);
  championship->add_option("--checkpoint", ccheckpoint, "Trained PPO checkpoint");
  auto* citer_opt = championship->add_option("--iterations", citer, "ISMCTS iterations")
                        ->check(CLI::PositiveNumber);
  auto* cdet_opt = championship->add_option("--determinizations", cdet, "ISMCTS worlds per iteration")
                       ->check(CLI::PositiveNumber);

  // train
  Common rc;
  std::string rkind = "ppo";
  std::vector<std::string> ropponents;
  int repisodes = 0, revery = 0, rvalidation = 0;
  auto* train_cmd = app.add_subcommand("train", "Train a DQN or PPO agent");
  add_common(*train_cmd, rc);
  train_cmd->add_option("--kind", rkind, "dqn or ppo")->check(CLI::IsMember({"dqn", "ppo"}));
  auto* repisodes_opt =
      train_cmd->add_option("--episodes", repisodes, "Training episodes")->check(CLI::NonNegativeNumber);
  train_cmd->add_option("--opponents", ropponents, "Opponents (default: the four rule profiles)");
  auto* revery_opt = train_cmd->add_option("--checkpoint-every", revery, "Episodes between checkpoints")
                         ->check(CLI::PositiveNumber);
  auto* rvalidation_opt =
      train_cmd->add_option("--validation-rounds", rvalidation, "Rounds per checkpoint evaluation")
          ->check(CLI::PositiveNumber);

  // report
  Common pc;
  std::string precords, ptitle = "Results";
  auto* report = app.add_subcommand("report", "Recompute tables from stored records");
  add_common(*report, pc);
  report->add_option("--records", precords, "records.csv or records.json")->required();
  report->add_option("--title", ptitle, "Table title");

  // export
  Common xc;
  std::string xrecords, xtarget;
  auto* export_cmd = app.add_subcommand("export", "Convert stored records between CSV and JSON");
  add_common(*export_cmd, xc);
  export_cmd->add_option("--records", xrecords, "records.csv or records.json")->required();
  export_cmd->add_option("--to", xtarget, "Output file (default: stdout)");

  // play
  Common yc;
  std::vector<std::string> yagents;
  auto* play = app.add_subcommand("play", "Play against AI seats in the terminal");
  add_common(*play, yc);
  play->add_option("--agents", yagents, "Opponents (default: aggressive balanced conservative)");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "dhumbal: " << e.what() << "\nRun with --help for usage.\n";
    return kExitUsage;
  }

  try {
    if (tournament->parsed()) {
      ExperimentConfig cfg = resolve_config(tc);
      if (titer_opt->count()) cfg.search.iterations = titer;
      if (tdet_opt->count()) cfg.search.determinizations = tdet;
      if (tparallel) cfg.parallel = true;
      std::vector<std::unique_ptr<Agent>> agents;
      if (tkind == "learning") {
        if (tcheckpoints.empty() && tagents.empty()) {
          throw ConfigError("tournament learning needs --checkpoint files or --agents");
        }
        for (const auto& p : tcheckpoints) agents.push_back(load_checkpoint(p));
      }
      std::vector<std::string> specs = tagents.empty() ? default_lineup(tkind) : tagents;
      if (tkind == "search" && tagents.empty() && tc.players_opt->count() && tc.players > 2) {
        // Extra seats alternate between the two search kinds.
        for (int i = 2; i < tc.players; ++i) specs.push_back(i % 2 == 0 ? "mcts" : "ismcts");
      }
      for (auto& a : make_agents(specs, cfg)) agents.push_back(std::move(a));
      if (agents.size() < 2 || agents.size() > 5) {
        throw ConfigError("a table needs 2 to 5 participants, got " + std::to_string(agents.size()));
      }
      const auto result = run(std::move(agents), cfg);
      std::string title = tkind == "rule" ? "Rule-based tournament"
                          : tkind == "search" ? "Search-based tournament"
                                              : "Learning-based tournament";
      write_run(resolve_out_dir(tc, cfg) / ("tournament-" + tkind), title, result, tc.format, out);
      return kExitOk;
    }

    if (championship->parsed()) {
      ExperimentConfig cfg = resolve_config(cc);
      if (citer_opt->count()) cfg.search.iterations = citer;
      if (cdet_opt->count()) cfg.search.determinizations = cdet;
      const std::string ckpt = !ccheckpoint.empty() ? ccheckpoint : cfg.ppo_checkpoint.value_or("");
      if (ckpt.empty()) {
        throw DataError(
            "championship needs a trained PPO checkpoint: pass --checkpoint or set "
            "checkpoints.ppo in the config (train one with `dhumbal train --kind ppo`)");
      }
      std::vector<std::unique_ptr<Agent>> agents;
      agents.push_back(make_agent("aggressive", cfg));
      agents.push_back(make_agent("ismcts", cfg));
      agents.push_back(load_checkpoint(ckpt, LearnerKind::kPpo));
      agents.push_back(make_agent("random", cfg));
      const auto result = run(std::move(agents), cfg);
      write_run(resolve_out_dir(cc, cfg) / "championship", "Championship", result, cc.format, out);
      return kExitOk;
    }

    if (train_cmd->parsed()) {
      ExperimentConfig cfg = resolve_config(rc);
      if (repisodes_opt->count()) cfg.episodes = repisodes;
      if (revery_opt->count()) cfg.checkpoint_every = revery;
      if (rvalidation_opt->count()) cfg.validation_rounds = rvalidation;
      const LearnerKind kind = rkind == "dqn" ? LearnerKind::kDqn : LearnerKind::kPpo;
      const auto specs = ropponents.empty() ? default_lineup("rule") : ropponents;
      if (specs.empty() || specs.size() > 4) throw ConfigError("train needs 1 to 4 opponents");
      const auto opponents = make_agents(specs, cfg);
      const fs::path dir = resolve_out_dir(rc, cfg) / ("train-" + rkind);
      ensure_dir(dir);
      const int total = cfg.episodes;
      auto result = train(cfg.train_config(kind), opponents, [&](const EpisodeLog& e) {
        if (e.episode % std::max(1, total / 10) == 0) {
          err << "episode " << e.episode << "/" << total << '\n';
        }
      });
      std::ostringstream curve;
      write_curve_csv(curve, result.curve);
      write_file(dir / "curve.csv", curve.str());
      std::vector<DenseNet> candidates;
      for (const auto& [episode, net] : result.checkpoints) {
        char name[48];
        std::snprintf(name, sizeof name, "checkpoint-%06d.json", episode);
        save_weights(net, (dir / name).string());
        candidates.push_back(net);
      }
      save_weights(result.final_net, (dir / "final.json").string());
      if (result.checkpoints.empty() || result.checkpoints.back().first != total) {
        candidates.push_back(result.final_net);
      }
      std::vector<double> rates;
      const int best = checkpoint_select(kind, candidates, opponents, cfg.validation_rounds,
                                         cfg.seed + 1, &rates);
      save_weights(candidates[best], (dir / "best.json").string());
      out << "Trained " << to_string(kind) << " for " << result.curve.size() << " episodes";
      if (result.converged_at) out << " (converged at episode " << *result.converged_at << ")";
      out << ".\nValidation win rates:";
      for (double r : rates) out << ' ' << r;
      out << "\nBest checkpoint: " << (dir / "best.json").string() << '\n';
      return kExitOk;
    }

    if (report->parsed()) {
      const ExperimentConfig cfg = resolve_config(pc);
      const auto data = load_records(precords);
      const auto summary = summarize(data.records, data.labels);
      if (pc.format == "json") {
        out << summary_to_json(summary) << '\n';
      } else {
        out << report_text(ptitle, data, summary);
      }
      if (!pc.out.empty()) {
        const fs::path dir = resolve_out_dir(pc, cfg);
        ensure_dir(dir);
        write_file(dir / "summary.json", summary_to_json(summary) + "\n");
        write_file(dir / "report.txt", report_text(ptitle, data, summary));
      }
      return kExitOk;
    }

    if (export_cmd->parsed()) {
      const auto data = load_records(xrecords);
      std::string text;
      if (xc.format == "json") {
        text = records_to_json(data.labels, data.records) + "\n";
      } else {
        std::ostringstream os;
        write_records_csv(os, data.labels, data.records);
        text = os.str();
      }
      if (xtarget.empty() || xtarget == "-") {
        out << text;
      } else {
        write_file(xtarget, text);
      }
      return kExitOk;
    }

    if (play->parsed()) {
      PlayOptions opts;
      opts.config = resolve_config(yc);
      opts.seed = opts.config.seed;
      opts.rounds = yc.rounds_opt->count() ? yc.rounds : 1;
      if (!yagents.empty()) opts.opponents = yagents;
      const auto result = play_session(opts, in, out);
      return result.aborted ? kExitData : kExitOk;
    }
  } catch (const DataError& e) {
    err << "dhumbal: " << e.what() << '\n';
    return kExitData;
  } catch (const ParseError& e) {
    err << "dhumbal: " << e.what() << '\n';
    return kExitData;
  } catch (const ConfigError& e) {
    err << "dhumbal: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "dhumbal: " << e.what() << '\n';
    return kExitData;
  }
  return kExitUsage;
}

}  // namespace dhumbal::cli
