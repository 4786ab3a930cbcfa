// driftrec: recommender pipeline harness.
//
// Subcommands: ingest, synth, recommend, mine, evaluate, report.
// Exit codes: 0 success, 1 usage/config error, 2 input or parse failure,
// 3 unknown entity, 4 precondition failure (evaluation/mining).

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "driftrec/archive.hpp"
#include "driftrec/config.hpp"
#include "driftrec/errors.hpp"
#include "driftrec/eval.hpp"
#include "driftrec/parsers.hpp"
#include "driftrec/synth.hpp"

namespace {

using namespace driftrec;

std::string config_key_help() {
  std::string s = "Config keys (current defaults), settable via --config FILE or --set KEY=VALUE:\n";
  for (const auto& [key, value] : config_entries(Config{})) s += "  " + key + " = " + value + "\n";
  return s;
}

// --config / --set plumbing shared by the config-sensitive subcommands.
struct ConfigArgs {
  std::string path;
  std::vector<std::string> sets;

  void attach(CLI::App* cmd) {
    cmd->add_option("--config", path, "config file, one `key = value` per line");
    cmd->add_option("--set", sets, "override a config key")->type_name("KEY=VALUE");
  }

  Config resolve() const {
    Config cfg = path.empty() ? Config{} : load_config_file(path);
    for (const std::string& kv : sets) {
      std::size_t eq = kv.find('=');
      if (eq == std::string::npos || eq == 0)
        throw ConfigError("--set wants KEY=VALUE, got '" + kv + "'");
      set_config_key(cfg, kv.substr(0, eq), kv.substr(eq + 1));
    }
    validate_config(cfg);
    return cfg;
  }
};

std::ifstream open_input(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open input file: " + path);
  return in;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open output file: " + path);
  out << text;
  if (!out) throw IoError("write failed: " + path);
}

void print_stats(const Dataset& d) {
  std::printf("dataset %s: users=%zu items=%zu interactions=%zu catalog=%zu%s\n", d.name.c_str(),
              d.stats.n_users, d.stats.n_items, d.stats.n_interactions, d.catalog.size(),
              d.catalog_incomplete ? " (catalog incomplete)" : "");
}

void report_rejects(const ParseReport& report, const std::string& rejects_path) {
  if (report.warnings > 0)
    std::fprintf(stderr, "warning: %zu recoverable input anomalies (duplicates, last wins)\n",
                 report.warnings);
  if (!report.rejects.empty())
    std::fprintf(stderr, "warning: rejected %zu of %zu lines\n", report.rejects.size(),
                 report.lines_seen);
  if (!rejects_path.empty()) write_text_file(rejects_path, rejects_to_csv(report.rejects));
}

std::string default_name(const std::string& out_path) {
  return std::filesystem::path(out_path).stem().string();
}

ItemFeatureIndex features_or_empty(const Dataset& d) {
  return d.catalog.empty() ? ItemFeatureIndex{} : build_item_features(d.catalog);
}

FusionWeights static_or_uniform_weights(const Config& cfg) {
  if (cfg.fusion_weights) return FusionWeights{*cfg.fusion_weights};
  // no evaluation context at recommend time: fall back to uniform
  return derive_weights({{kAlgoContent, 0.0}, {kAlgoCf, 0.0}, {kAlgoRules, 0.0}});
}

std::string ranked_to_csv(const RankedList& list) {
  std::string out = "rank,item_id,score\n";
  char buf[64];
  for (std::size_t i = 0; i < list.items.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%zu,%u,%.6f\n", i + 1, list.items[i].item,
                  list.items[i].score);
    out += buf;
  }
  return out;
}

int cmd_ingest(const std::string& format, const std::vector<std::string>& inputs,
               const std::string& out_path, const std::string& name,
               const std::string& rejects_path, const ConfigArgs& cargs) {
  Config cfg = cargs.resolve();
  ParseOptions opts{cfg.ingest_max_reject_rate};
  ParseReport report;

  std::vector<Interaction> interactions;
  Catalog catalog;
  if (format == "movielens") {
    if (inputs.empty() || inputs.size() > 2)
      throw ConfigError("ingest --format movielens wants RATINGS_FILE [MOVIES_FILE]");
    auto ratings = open_input(inputs[0]);
    interactions = parse_movielens_ratings(ratings, opts, report);
    if (inputs.size() == 2) {
      auto movies = open_input(inputs[1]);
      catalog = parse_movielens_movies(movies, opts, report);
    }
  } else {  // events
    if (inputs.size() != 1) throw ConfigError("ingest --format events wants one EVENTS_FILE");
    auto events = open_input(inputs[0]);
    interactions = parse_event_log(events, opts, report);
  }

  Dataset ds = make_dataset(name.empty() ? default_name(out_path) : name,
                            std::move(interactions), std::move(catalog));
  validate_dataset(ds);
  save_archive_file(out_path, ds);
  report_rejects(report, rejects_path);
  print_stats(ds);
  return 0;
}

int cmd_synth(std::size_t users, std::size_t items, std::size_t events, std::uint64_t seed,
              const std::string& out_path, const std::string& name, const ConfigArgs& cargs) {
  Config cfg = cargs.resolve();
  SynthOptions opts{cfg.synth_browse_frac, cfg.synth_click_frac};
  Dataset ds = generate_synthetic_dataset(name.empty() ? default_name(out_path) : name, users,
                                          items, events, seed, opts);
  save_archive_file(out_path, ds);
  print_stats(ds);
  return 0;
}

int cmd_recommend(const std::string& data_path, UserId user, const std::string& algo,
                  std::size_t top_n, const ConfigArgs& cargs) {
  Config cfg = cargs.resolve();
  Dataset ds = load_archive_file(data_path);
  ItemFeatureIndex features = features_or_empty(ds);
  PipelineModels models = PipelineModels::build(features, ds.interactions, cfg);
  if (!models.has_user(user)) throw NotFoundError("unknown user " + std::to_string(user));

  if (algo == kAlgoCf && build_neighborhood(models.matrix, user, cf_config(cfg)).members.empty())
    std::fprintf(stderr,
                 "warning: user %u has no similar peers; scores fall back to the user's mean\n",
                 user);

  if (algo == kAlgoHybrid) {
    std::vector<RankedList> lists;
    for (const char* a : {kAlgoContent, kAlgoCf, kAlgoRules})
      lists.push_back(normalize_scores(models.recommend(a, user, top_n, cfg)));
    std::fputs(fused_to_csv(fuse_detailed(lists, static_or_uniform_weights(cfg), top_n)).c_str(),
               stdout);
  } else {
    std::fputs(ranked_to_csv(models.recommend(algo, user, top_n, cfg)).c_str(), stdout);
  }
  return 0;
}

int cmd_mine(const std::string& data_path, const std::string& out_path, const ConfigArgs& cargs) {
  Config cfg = cargs.resolve();
  Dataset ds = load_archive_file(data_path);
  std::vector<Itemset> transactions = user_transactions(ds.interactions);
  bool has_pair = false;
  for (const Itemset& t : transactions) has_pair = has_pair || t.size() >= 2;
  if (!has_pair)
    throw PreconditionError("mine: no user has two or more basket items (purchase, click, or "
                            "rating >= 4), nothing to mine");
  auto rules = mine_rules(transactions, cfg.rules_min_support, cfg.rules_min_confidence,
                          cfg.rules_max_len, cfg.rules_max_consequent);
  std::string csv = rules_to_csv(rules);
  if (out_path.empty())
    std::fputs(csv.c_str(), stdout);
  else
    write_text_file(out_path, csv);
  std::fprintf(stderr, "mined %zu rules from %zu baskets\n", rules.size(), transactions.size());
  return 0;
}

int cmd_evaluate(const std::string& data_path, const std::string& out_dir,
                 const ConfigArgs& cargs) {
  Config cfg = cargs.resolve();
  Dataset ds = load_archive_file(data_path);
  EvalReport report = run_experiment(ds, cfg);

  std::filesystem::path dir(out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);  // best effort; open error reports below
  std::string csv = emit_report(report, ReportFormat::csv);
  write_text_file((dir / "report.csv").string(), csv);
  write_text_file((dir / "report.json").string(), emit_report(report, ReportFormat::json));
  std::fputs(csv.c_str(), stdout);
  std::fprintf(stderr, "wrote %s and %s\n", (dir / "report.csv").c_str(),
               (dir / "report.json").c_str());
  return 0;
}

int cmd_report(const std::string& in_path, const std::string& format,
               const std::string& out_path) {
  auto in = open_input(in_path);
  std::ostringstream buf;
  buf << in.rdbuf();
  EvalReport report = report_from_json(buf.str());
  std::string text =
      emit_report(report, format == "csv" ? ReportFormat::csv : ReportFormat::json);
  if (out_path.empty())
    std::fputs(text.c_str(), stdout);
  else
    write_text_file(out_path, text);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"driftrec: hybrid recommender pipeline (content, user CF, association rules)"};
  app.require_subcommand(1);
  std::string footer = config_key_help();
  app.footer(footer);

  // ingest
  auto* ingest = app.add_subcommand("ingest", "parse raw data into a dataset archive");
  std::string ingest_format;
  std::vector<std::string> ingest_inputs;
  std::string ingest_out, ingest_name, ingest_rejects;
  ConfigArgs ingest_cfg;
  ingest->add_option("--format", ingest_format, "input format")
      ->required()
      ->check(CLI::IsMember({"movielens", "events"}));
  ingest->add_option("inputs", ingest_inputs, "input files (movielens: RATINGS [MOVIES])")
      ->required();
  ingest->add_option("-o,--out", ingest_out, "output archive path")->required();
  ingest->add_option("--name", ingest_name, "dataset name (default: output stem)");
  ingest->add_option("--rejects", ingest_rejects, "write rejected-line report CSV here");
  ingest_cfg.attach(ingest);
  ingest->footer(footer);

  // synth
  auto* synth = app.add_subcommand("synth", "generate a seeded synthetic behavior dataset");
  std::size_t synth_users = 0, synth_items = 0, synth_events = 0;
  std::uint64_t synth_seed = 42;
  std::string synth_out, synth_name;
  ConfigArgs synth_cfg;
  synth->add_option("--users", synth_users, "number of users")->required();
  synth->add_option("--items", synth_items, "number of items")->required();
  synth->add_option("--events", synth_events, "number of events (>= users)")->required();
  synth->add_option("--seed", synth_seed, "generator seed (default 42)");
  synth->add_option("-o,--out", synth_out, "output archive path")->required();
  synth->add_option("--name", synth_name, "dataset name (default: output stem)");
  synth_cfg.attach(synth);
  synth->footer(footer);

  // recommend
  auto* rec = app.add_subcommand("recommend", "top-N recommendations for one user");
  std::string rec_data, rec_algo = kAlgoHybrid;
  UserId rec_user = 0;
  std::size_t rec_n = 10;
  ConfigArgs rec_cfg;
  rec->add_option("--data", rec_data, "dataset archive")->required();
  rec->add_option("--user", rec_user, "user id")->required();
  rec->add_option("--algo", rec_algo, "algorithm (default hybrid)")
      ->check(CLI::IsMember({kAlgoContent, kAlgoCf, kAlgoRules, kAlgoHybrid}));
  rec->add_option("-n,--top-n", rec_n, "list length (default 10)");
  rec_cfg.attach(rec);
  rec->footer(footer);

  // mine
  auto* mine = app.add_subcommand("mine", "mine association rules from user baskets");
  std::string mine_data, mine_out;
  ConfigArgs mine_cfg;
  mine->add_option("--data", mine_data, "dataset archive")->required();
  mine->add_option("-o,--out", mine_out, "rules CSV path (default: stdout)");
  mine_cfg.attach(mine);
  mine->footer(footer);

  // evaluate
  auto* eval = app.add_subcommand("evaluate", "k-fold cross-validated benchmark of all algorithms");
  std::string eval_data, eval_dir = ".";
  ConfigArgs eval_cfg;
  bool eval_seed_set = false, eval_folds_set = false;
  std::uint64_t eval_seed = 0;
  int eval_folds = 0;
  eval->add_option("--data", eval_data, "dataset archive")->required();
  eval->add_option("--out-dir", eval_dir, "directory for report.csv / report.json (default .)");
  eval->add_option("--seed", eval_seed, "shortcut for --set eval.seed=N")
      ->each([&](const std::string&) { eval_seed_set = true; });
  eval->add_option("--folds", eval_folds, "shortcut for --set eval.folds=N")
      ->each([&](const std::string&) { eval_folds_set = true; });
  eval_cfg.attach(eval);
  eval->footer(footer);

  // report
  auto* rep = app.add_subcommand("report", "re-emit a report.json as csv or json");
  std::string rep_in, rep_format = "csv", rep_out;
  rep->add_option("--in", rep_in, "report.json path")->required();
  rep->add_option("--format", rep_format, "output format (default csv)")
      ->check(CLI::IsMember({"csv", "json"}));
  rep->add_option("-o,--out", rep_out, "output path (default: stdout)");
  rep->footer(footer);

  try {
    app.parse(argc, argv);
    if (ingest->parsed())
      return cmd_ingest(ingest_format, ingest_inputs, ingest_out, ingest_name, ingest_rejects,
                        ingest_cfg);
    if (synth->parsed())
      return cmd_synth(synth_users, synth_items, synth_events, synth_seed, synth_out, synth_name,
                       synth_cfg);
    if (rec->parsed()) return cmd_recommend(rec_data, rec_user, rec_algo, rec_n, rec_cfg);
    if (mine->parsed()) return cmd_mine(mine_data, mine_out, mine_cfg);
    if (eval->parsed()) {
      if (eval_seed_set)
        eval_cfg.sets.push_back("eval.seed=" + std::to_string(eval_seed));
      if (eval_folds_set)
        eval_cfg.sets.push_back("eval.folds=" + std::to_string(eval_folds));
      return cmd_evaluate(eval_data, eval_dir, eval_cfg);
    }
    if (rep->parsed()) return cmd_report(rep_in, rep_format, rep_out);
    return 1;
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // normalize all usage errors to exit 1
  } catch (const NotFoundError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 3;
  } catch (const PreconditionError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 4;
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const driftrec::Error& e) {  // ParseError, IoError, archive corruption
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
