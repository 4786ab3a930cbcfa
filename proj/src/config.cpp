#include "driftrec/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "driftrec/errors.hpp"
#include "driftrec/fusion.hpp"

namespace driftrec {

namespace {

double parse_double(const std::string& key, const std::string& value) {
  double out = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size())
    throw ConfigError("config key " + key + ": not a number: '" + value + "'");
  return out;
}

long long parse_integer(const std::string& key, const std::string& value) {
  long long out = 0;
  auto [p, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (ec != std::errc() || p != value.data() + value.size())
    throw ConfigError("config key " + key + ": not an integer: '" + value + "'");
  return out;
}

bool parse_flag(const std::string& key, const std::string& value) {
  if (value == "true" || value == "1") return true;
  if (value == "false" || value == "0") return false;
  throw ConfigError("config key " + key + ": not a boolean: '" + value + "'");
}

std::map<std::string, double> parse_weight_map(const std::string& key, const std::string& value) {
  // "content:0.4,cf:0.4,rules:0.2"
  std::map<std::string, double> out;
  std::size_t start = 0;
  while (start <= value.size()) {
    std::size_t end = value.find(',', start);
    if (end == std::string::npos) end = value.size();
    std::string part = value.substr(start, end - start);
    std::size_t colon = part.find(':');
    if (colon == std::string::npos || colon == 0)
      throw ConfigError("config key " + key + ": want name:weight pairs, got '" + part + "'");
    std::string name = part.substr(0, colon);
    double w = parse_double(key, part.substr(colon + 1));
    if (!out.emplace(name, w).second)
      throw ConfigError("config key " + key + ": duplicate algorithm '" + name + "'");
    if (end == value.size()) break;
    start = end + 1;
  }
  if (out.empty()) throw ConfigError("config key " + key + ": empty weight list");
  return out;
}

std::string trim(const std::string& s) {
  std::size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  std::size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%g", v);
  return buf;
}

}  // namespace

void set_config_key(Config& cfg, const std::string& key, const std::string& value) {
  if (key == "decay.half_life_days") {
    cfg.decay_half_life_days = parse_double(key, value);
  } else if (key == "decay.weight_browse") {
    cfg.decay_weight_browse = parse_double(key, value);
  } else if (key == "decay.weight_click") {
    cfg.decay_weight_click = parse_double(key, value);
  } else if (key == "decay.weight_purchase") {
    cfg.decay_weight_purchase = parse_double(key, value);
  } else if (key == "decay.weight_rating") {
    cfg.decay_weight_rating = parse_double(key, value);
  } else if (key == "cf.k_neighbors") {
    cfg.cf_k_neighbors = static_cast<int>(parse_integer(key, value));
  } else if (key == "cf.min_overlap") {
    cfg.cf_min_overlap = static_cast<int>(parse_integer(key, value));
  } else if (key == "cf.sim") {
    cfg.cf_sim = value;
  } else if (key == "cf.sim_floor") {
    cfg.cf_sim_floor = parse_double(key, value);
  } else if (key == "rules.min_support") {
    cfg.rules_min_support = parse_double(key, value);
  } else if (key == "rules.min_confidence") {
    cfg.rules_min_confidence = parse_double(key, value);
  } else if (key == "rules.max_len") {
    cfg.rules_max_len = static_cast<int>(parse_integer(key, value));
  } else if (key == "rules.max_consequent") {
    cfg.rules_max_consequent = static_cast<int>(parse_integer(key, value));
  } else if (key == "fusion.weights") {
    cfg.fusion_weights = parse_weight_map(key, value);
  } else if (key == "eval.k") {
    cfg.eval_k = static_cast<int>(parse_integer(key, value));
  } else if (key == "eval.folds") {
    cfg.eval_folds = static_cast<int>(parse_integer(key, value));
  } else if (key == "eval.seed") {
    long long seed = parse_integer(key, value);
    if (seed < 0) throw ConfigError("config key eval.seed: must be nonnegative");
    cfg.eval_seed = static_cast<std::uint64_t>(seed);
  } else if (key == "eval.relevance_threshold") {
    cfg.eval_relevance_threshold = static_cast<int>(parse_integer(key, value));
  } else if (key == "eval.averaging") {
    cfg.eval_averaging = value;
  } else if (key == "eval.measure_latency") {
    cfg.eval_measure_latency = parse_flag(key, value);
  } else if (key == "ingest.max_reject_rate") {
    cfg.ingest_max_reject_rate = parse_double(key, value);
  } else if (key == "synth.browse_frac") {
    cfg.synth_browse_frac = parse_double(key, value);
  } else if (key == "synth.click_frac") {
    cfg.synth_click_frac = parse_double(key, value);
  } else {
    throw ConfigError("unknown config key: " + key);
  }
}

Config parse_config_text(const std::string& text) {
  Config cfg;
  std::istringstream in(text);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(line_no) + ": want key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ConfigError("config line " + std::to_string(line_no) + ": empty key or value");
    set_config_key(cfg, key, value);
  }
  validate_config(cfg);
  return cfg;
}

Config load_config_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_config_text(buf.str());
}

void validate_config(const Config& cfg) {
  auto fail = [](const std::string& what) { throw ConfigError(what); };
  if (!(cfg.decay_half_life_days > 0)) fail("decay.half_life_days must be > 0");
  const std::pair<const char*, double> behavior_weights[] = {
      {"decay.weight_browse", cfg.decay_weight_browse},
      {"decay.weight_click", cfg.decay_weight_click},
      {"decay.weight_purchase", cfg.decay_weight_purchase},
      {"decay.weight_rating", cfg.decay_weight_rating}};
  for (auto [name, w] : behavior_weights)
    if (!(w >= 0)) fail(std::string(name) + " must be >= 0");
  if (cfg.cf_k_neighbors < 1) fail("cf.k_neighbors must be >= 1");
  if (cfg.cf_min_overlap < 1) fail("cf.min_overlap must be >= 1");
  if (cfg.cf_sim != "pearson" && cfg.cf_sim != "cosine") fail("cf.sim must be pearson or cosine");
  if (!(cfg.cf_sim_floor >= 0 && cfg.cf_sim_floor <= 1)) fail("cf.sim_floor must be in [0,1]");
  if (!(cfg.rules_min_support > 0 && cfg.rules_min_support <= 1))
    fail("rules.min_support must be in (0,1]");
  if (!(cfg.rules_min_confidence > 0 && cfg.rules_min_confidence <= 1))
    fail("rules.min_confidence must be in (0,1]");
  if (cfg.rules_max_len < 1 || cfg.rules_max_len > 10) fail("rules.max_len must be in [1,10]");
  if (cfg.rules_max_consequent < 1 || cfg.rules_max_consequent >= cfg.rules_max_len + 1)
    fail("rules.max_consequent must be in [1, rules.max_len]");
  if (cfg.fusion_weights) {
    for (const auto& [name, w] : *cfg.fusion_weights) {
      if (name != kAlgoContent && name != kAlgoCf && name != kAlgoRules)
        fail("fusion.weights: unknown algorithm '" + name + "'");
      if (!(w >= 0)) fail("fusion.weights: weight for " + name + " must be >= 0");
    }
  }
  if (cfg.eval_k < 1) fail("eval.k must be >= 1");
  // eval.folds is checked by kfold_split, as an evaluation precondition
  if (cfg.eval_relevance_threshold < 1 || cfg.eval_relevance_threshold > 5)
    fail("eval.relevance_threshold must be in [1,5]");
  if (cfg.eval_averaging != "macro" && cfg.eval_averaging != "micro")
    fail("eval.averaging must be macro or micro");
  if (!(cfg.ingest_max_reject_rate >= 0 && cfg.ingest_max_reject_rate <= 1))
    fail("ingest.max_reject_rate must be in [0,1]");
  if (!(cfg.synth_browse_frac >= 0 && cfg.synth_click_frac >= 0 &&
        cfg.synth_browse_frac + cfg.synth_click_frac <= 1))
    fail("synth.browse_frac/click_frac must be nonnegative and sum to <= 1");
}

std::vector<std::pair<std::string, std::string>> config_entries(const Config& cfg) {
  std::vector<std::pair<std::string, std::string>> out;
  out.emplace_back("decay.half_life_days", format_double(cfg.decay_half_life_days));
  out.emplace_back("decay.weight_browse", format_double(cfg.decay_weight_browse));
  out.emplace_back("decay.weight_click", format_double(cfg.decay_weight_click));
  out.emplace_back("decay.weight_purchase", format_double(cfg.decay_weight_purchase));
  out.emplace_back("decay.weight_rating", format_double(cfg.decay_weight_rating));
  out.emplace_back("cf.k_neighbors", std::to_string(cfg.cf_k_neighbors));
  out.emplace_back("cf.min_overlap", std::to_string(cfg.cf_min_overlap));
  out.emplace_back("cf.sim", cfg.cf_sim);
  out.emplace_back("cf.sim_floor", format_double(cfg.cf_sim_floor));
  out.emplace_back("rules.min_support", format_double(cfg.rules_min_support));
  out.emplace_back("rules.min_confidence", format_double(cfg.rules_min_confidence));
  out.emplace_back("rules.max_len", std::to_string(cfg.rules_max_len));
  out.emplace_back("rules.max_consequent", std::to_string(cfg.rules_max_consequent));
  if (cfg.fusion_weights) {
    std::string joined;
    for (const auto& [name, w] : *cfg.fusion_weights) {
      if (!joined.empty()) joined += ',';
      joined += name + ':' + format_double(w);
    }
    out.emplace_back("fusion.weights", joined);
  } else {
    out.emplace_back("fusion.weights", "(derived from validation F1)");
  }
  out.emplace_back("eval.k", std::to_string(cfg.eval_k));
  out.emplace_back("eval.folds", std::to_string(cfg.eval_folds));
  out.emplace_back("eval.seed", std::to_string(cfg.eval_seed));
  out.emplace_back("eval.relevance_threshold", std::to_string(cfg.eval_relevance_threshold));
  out.emplace_back("eval.averaging", cfg.eval_averaging);
  out.emplace_back("eval.measure_latency", cfg.eval_measure_latency ? "true" : "false");
  out.emplace_back("ingest.max_reject_rate", format_double(cfg.ingest_max_reject_rate));
  out.emplace_back("synth.browse_frac", format_double(cfg.synth_browse_frac));
  out.emplace_back("synth.click_frac", format_double(cfg.synth_click_frac));
  return out;
}

std::string config_to_json(const Config& cfg) {
  nlohmann::json doc;
  doc["decay.half_life_days"] = cfg.decay_half_life_days;
  doc["decay.weight_browse"] = cfg.decay_weight_browse;
  doc["decay.weight_click"] = cfg.decay_weight_click;
  doc["decay.weight_purchase"] = cfg.decay_weight_purchase;
  doc["decay.weight_rating"] = cfg.decay_weight_rating;
  doc["cf.k_neighbors"] = cfg.cf_k_neighbors;
  doc["cf.min_overlap"] = cfg.cf_min_overlap;
  doc["cf.sim"] = cfg.cf_sim;
  doc["cf.sim_floor"] = cfg.cf_sim_floor;
  doc["rules.min_support"] = cfg.rules_min_support;
  doc["rules.min_confidence"] = cfg.rules_min_confidence;
  doc["rules.max_len"] = cfg.rules_max_len;
  doc["rules.max_consequent"] = cfg.rules_max_consequent;
  if (cfg.fusion_weights)
    doc["fusion.weights"] = *cfg.fusion_weights;
  else
    doc["fusion.weights"] = nullptr;
  doc["eval.k"] = cfg.eval_k;
  doc["eval.folds"] = cfg.eval_folds;
  doc["eval.seed"] = cfg.eval_seed;
  doc["eval.relevance_threshold"] = cfg.eval_relevance_threshold;
  doc["eval.averaging"] = cfg.eval_averaging;
  doc["eval.measure_latency"] = cfg.eval_measure_latency;
  doc["ingest.max_reject_rate"] = cfg.ingest_max_reject_rate;
  doc["synth.browse_frac"] = cfg.synth_browse_frac;
  doc["synth.click_frac"] = cfg.synth_click_frac;
  return doc.dump(2);
}

Config config_from_json(const std::string& json_text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config json: ") + e.what());
  }
  if (!doc.is_object()) throw ParseError("config json: want an object");
  Config cfg;
  try {
    cfg.decay_half_life_days = doc.at("decay.half_life_days").get<double>();
    cfg.decay_weight_browse = doc.at("decay.weight_browse").get<double>();
    cfg.decay_weight_click = doc.at("decay.weight_click").get<double>();
    cfg.decay_weight_purchase = doc.at("decay.weight_purchase").get<double>();
    cfg.decay_weight_rating = doc.at("decay.weight_rating").get<double>();
    cfg.cf_k_neighbors = doc.at("cf.k_neighbors").get<int>();
    cfg.cf_min_overlap = doc.at("cf.min_overlap").get<int>();
    cfg.cf_sim = doc.at("cf.sim").get<std::string>();
    cfg.cf_sim_floor = doc.at("cf.sim_floor").get<double>();
    cfg.rules_min_support = doc.at("rules.min_support").get<double>();
    cfg.rules_min_confidence = doc.at("rules.min_confidence").get<double>();
    cfg.rules_max_len = doc.at("rules.max_len").get<int>();
    cfg.rules_max_consequent = doc.at("rules.max_consequent").get<int>();
    if (!doc.at("fusion.weights").is_null())
      cfg.fusion_weights = doc.at("fusion.weights").get<std::map<std::string, double>>();
    cfg.eval_k = doc.at("eval.k").get<int>();
    cfg.eval_folds = doc.at("eval.folds").get<int>();
    cfg.eval_seed = doc.at("eval.seed").get<std::uint64_t>();
    cfg.eval_relevance_threshold = doc.at("eval.relevance_threshold").get<int>();
    cfg.eval_averaging = doc.at("eval.averaging").get<std::string>();
    cfg.eval_measure_latency = doc.at("eval.measure_latency").get<bool>();
    cfg.ingest_max_reject_rate = doc.at("ingest.max_reject_rate").get<double>();
    cfg.synth_browse_frac = doc.at("synth.browse_frac").get<double>();
    cfg.synth_click_frac = doc.at("synth.click_frac").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("config json: ") + e.what());
  }
  validate_config(cfg);
  return cfg;
}

DecayConfig decay_config(const Config& cfg) {
  DecayConfig d;
  d.half_life_seconds = cfg.decay_half_life_days * 86400.0;
  d.weight_browse = cfg.decay_weight_browse;
  d.weight_click = cfg.decay_weight_click;
  d.weight_purchase = cfg.decay_weight_purchase;
  d.weight_rating = cfg.decay_weight_rating;
  return d;
}

CfConfig cf_config(const Config& cfg) {
  CfConfig c;
  c.k_neighbors = cfg.cf_k_neighbors;
  c.min_overlap = cfg.cf_min_overlap;
  c.sim_floor = cfg.cf_sim_floor;
  c.sim = cfg.cf_sim == "cosine" ? Similarity::cosine : Similarity::pearson;
  return c;
}

}  // namespace driftrec
