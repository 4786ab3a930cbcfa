#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "driftrec/cf.hpp"
#include "driftrec/profile.hpp"

namespace driftrec {

// Every under-specified pipeline parameter, externalized. Unknown keys and
// out-of-range values are rejected by set_config_key / validate_config.
struct Config {
  double decay_half_life_days = 30.0;
  double decay_weight_browse = 0.2;
  double decay_weight_click = 0.5;
  double decay_weight_purchase = 1.0;
  double decay_weight_rating = 1.0;

  int cf_k_neighbors = 40;
  int cf_min_overlap = 2;
  std::string cf_sim = "pearson";  // pearson | cosine
  double cf_sim_floor = 0.0;

  double rules_min_support = 0.01;
  double rules_min_confidence = 0.3;
  int rules_max_len = 3;
  int rules_max_consequent = 1;

  std::optional<std::map<std::string, double>> fusion_weights;  // static override

  int eval_k = 10;
  int eval_folds = 5;
  std::uint64_t eval_seed = 42;
  int eval_relevance_threshold = 4;
  std::string eval_averaging = "macro";  // macro | micro
  bool eval_measure_latency = false;

  double ingest_max_reject_rate = 0.01;

  double synth_browse_frac = 0.7;
  double synth_click_frac = 0.2;

  friend bool operator==(const Config&, const Config&) = default;
};

// `key = value` assignment, dotted keys (e.g. "cf.k_neighbors").
// fusion.weights value format: "content:0.4,cf:0.4,rules:0.2".
void set_config_key(Config& cfg, const std::string& key, const std::string& value);

// One `key = value` per line, '#' comments, blank lines ignored.
Config parse_config_text(const std::string& text);
Config load_config_file(const std::string& path);

void validate_config(const Config& cfg);  // throws ConfigError

// key -> printed value for every key, in listing order (for --help and dumps).
std::vector<std::pair<std::string, std::string>> config_entries(const Config& cfg);

std::string config_to_json(const Config& cfg);
Config config_from_json(const std::string& json_text);

DecayConfig decay_config(const Config& cfg);
CfConfig cf_config(const Config& cfg);

}  // namespace driftrec
