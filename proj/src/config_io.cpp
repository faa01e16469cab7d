#include "tad/config_io.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace tad {

using nlohmann::json;

namespace {

double number_at(const json& obj, const std::string& key, const std::string& path, double fallback) {
  if (!obj.contains(key)) return fallback;
  const json& v = obj.at(key);
  if (!v.is_number()) throw ConfigError(path + "." + key + ": expected a number");
  return v.get<double>();
}

Vec2 point(const json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ConfigError(path + ": expected [x, y]");
  }
  return Vec2(v[0].get<double>(), v[1].get<double>());
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& path) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ConfigError((path.empty() ? "" : path + ".") + it.key() + ": unknown field");
    }
  }
}

const json& object_or_empty(const json& doc, const std::string& key) {
  static const json empty = json::object();
  if (!doc.contains(key)) return empty;
  const json& v = doc.at(key);
  if (!v.is_object()) throw ConfigError(key + ": expected an object");
  return v;
}

std::set<std::string> roster(int n) {
  std::set<std::string> names{"tau", "a"};
  for (int i = 1; i <= n; ++i) names.insert("d" + std::to_string(i));
  return names;
}

PairWeights weights_from(const json& w, const std::string& path) {
  if (!w.is_object()) throw ConfigError(path + ": expected an object");
  reject_unknown(w, {"f_pa", "f_ap", "q_pa", "q_ap"}, path);
  PairWeights p;
  p.f_pa = number_at(w, "f_pa", path, 1.0);
  p.f_ap = number_at(w, "f_ap", path, 1.0);
  p.q_pa = number_at(w, "q_pa", path, 1.0);
  p.q_ap = number_at(w, "q_ap", path, 1.0);
  return p;
}

VisibilityRadius radius_from(const json& v, const std::string& path) {
  if (v.is_null()) return VisibilityRadius::unbounded();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf" || s == "infinity" || s == "unbounded") return VisibilityRadius::unbounded();
    throw ConfigError(path + ": expected a number or \"inf\"");
  }
  if (!v.is_number()) throw ConfigError(path + ": expected a number or \"inf\"");
  return VisibilityRadius::finite(v.get<double>());
}

json radius_to(const VisibilityRadius& r) {
  if (r.is_unbounded()) return "inf";
  return r.value();
}

json weights_to(const PairWeights& w) {
  return json{{"f_pa", w.f_pa}, {"f_ap", w.f_ap}, {"q_pa", w.q_pa}, {"q_ap", w.q_ap}};
}

}  // namespace

ScenarioConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw ConfigError("document: expected a JSON object");
  reject_unknown(doc,
                 {"name", "interaction", "n", "initial_positions", "capture_radii",
                  "visibility_radii", "weights", "control_penalties", "lambda", "horizon", "step",
                  "gamma_weights"},
                 "");

  ScenarioConfig cfg;
  if (doc.contains("name")) {
    if (!doc["name"].is_string()) throw ConfigError("name: expected a string");
    cfg.name = doc["name"].get<std::string>();
  }
  if (doc.contains("interaction")) {
    const json& v = doc["interaction"];
    if (v == "I1") {
      cfg.interaction = Interaction::I1;
    } else if (v == "I2") {
      cfg.interaction = Interaction::I2;
    } else {
      throw ConfigError("interaction: expected \"I1\" or \"I2\"");
    }
  }

  if (!doc.contains("initial_positions")) throw ConfigError("initial_positions: missing");
  const json& positions = object_or_empty(doc, "initial_positions");
  int n = 0;
  while (positions.contains("d" + std::to_string(n + 1))) ++n;
  if (doc.contains("n")) {
    if (!doc["n"].is_number_integer()) throw ConfigError("n: expected an integer");
    if (doc["n"].get<int>() != n) {
      throw ConfigError("n: " + std::to_string(doc["n"].get<int>()) + " defenders declared but " +
                        std::to_string(n) + " positioned");
    }
  }
  const auto names = roster(n);
  reject_unknown(positions, names, "initial_positions");

  std::map<PlayerId, Vec2> pos_map;
  for (const auto& name : names) {
    if (positions.contains(name)) {
      pos_map[PlayerId::parse(name)] = point(positions[name], "initial_positions." + name);
    }
  }
  const Positions pos = Positions::from_map(pos_map, n);

  const json& capture = object_or_empty(doc, "capture_radii");
  std::set<std::string> capture_names{"a"};
  for (int i = 1; i <= n; ++i) capture_names.insert("d" + std::to_string(i));
  reject_unknown(capture, capture_names, "capture_radii");

  const json& vis = object_or_empty(doc, "visibility_radii");
  std::set<std::string> vis_names{"tau"};
  for (int i = 1; i <= n; ++i) vis_names.insert("d" + std::to_string(i));
  reject_unknown(vis, vis_names, "visibility_radii");

  const json& weights = object_or_empty(doc, "weights");
  std::set<std::string> weight_names = vis_names;
  reject_unknown(weights, weight_names, "weights");

  const json& penalties = object_or_empty(doc, "control_penalties");
  reject_unknown(penalties, names, "control_penalties");

  for (int i = 1; i <= n; ++i) {
    const std::string id = "d" + std::to_string(i);
    DefenderParams d;
    d.position = pos.defenders[i - 1];
    d.capture_radius = number_at(capture, id, "capture_radii", 0.1);
    if (!vis.contains(id)) throw ConfigError("visibility_radii." + id + ": missing");
    d.visibility = radius_from(vis[id], "visibility_radii." + id);
    if (weights.contains(id)) d.weights = weights_from(weights[id], "weights." + id);
    d.control_penalty = number_at(penalties, id, "control_penalties", 1.0);
    cfg.defenders.push_back(d);
  }
  cfg.target.position = pos.target;
  cfg.target.visibility =
      vis.contains("tau") ? radius_from(vis["tau"], "visibility_radii.tau") : VisibilityRadius::unbounded();
  if (weights.contains("tau")) cfg.target.weights = weights_from(weights["tau"], "weights.tau");
  cfg.target.control_penalty = number_at(penalties, "tau", "control_penalties", 1.0);
  cfg.attacker.position = pos.attacker;
  cfg.attacker.capture_radius = number_at(capture, "a", "capture_radii", 0.1);
  cfg.attacker.control_penalty = number_at(penalties, "a", "control_penalties", 1.0);

  if (doc.contains("lambda")) {
    if (!doc["lambda"].is_number_integer()) throw ConfigError("lambda: expected 0 or 1");
    cfg.lambda = doc["lambda"].get<int>();
  }
  cfg.horizon = number_at(doc, "horizon", "", 6.0);
  cfg.step = number_at(doc, "step", "", 0.005);
  if (doc.contains("gamma_weights")) {
    const json& g = doc["gamma_weights"];
    if (!g.is_array()) throw ConfigError("gamma_weights: expected an array of numbers");
    for (std::size_t k = 0; k < g.size(); ++k) {
      if (!g[k].is_number()) {
        throw ConfigError("gamma_weights[" + std::to_string(k) + "]: expected a number");
      }
      cfg.gamma_weights.push_back(g[k].get<double>());
    }
  } else {
    cfg.gamma_weights = default_gammas(cfg.interaction);
  }
  cfg.validate();
  return cfg;
}

json config_to_json(const ScenarioConfig& cfg) {
  json doc;
  doc["name"] = cfg.name;
  doc["interaction"] = to_string(cfg.interaction);
  doc["n"] = cfg.n();
  json positions = json::object(), capture = json::object(), vis = json::object(),
       weights = json::object(), penalties = json::object();
  for (int i = 1; i <= cfg.n(); ++i) {
    const auto& d = cfg.defenders[i - 1];
    const std::string id = "d" + std::to_string(i);
    positions[id] = {d.position.x(), d.position.y()};
    capture[id] = d.capture_radius;
    vis[id] = radius_to(d.visibility);
    weights[id] = weights_to(d.weights);
    penalties[id] = d.control_penalty;
  }
  positions["tau"] = {cfg.target.position.x(), cfg.target.position.y()};
  positions["a"] = {cfg.attacker.position.x(), cfg.attacker.position.y()};
  capture["a"] = cfg.attacker.capture_radius;
  vis["tau"] = radius_to(cfg.target.visibility);
  weights["tau"] = weights_to(cfg.target.weights);
  penalties["tau"] = cfg.target.control_penalty;
  penalties["a"] = cfg.attacker.control_penalty;
  doc["initial_positions"] = positions;
  doc["capture_radii"] = capture;
  doc["visibility_radii"] = vis;
  doc["weights"] = weights;
  doc["control_penalties"] = penalties;
  doc["lambda"] = cfg.lambda;
  doc["horizon"] = cfg.horizon;
  doc["step"] = cfg.step;
  doc["gamma_weights"] = cfg.gamma_weights;
  return doc;
}

ScenarioConfig apply_overrides(const ScenarioConfig& cfg, const std::vector<std::string>& overrides) {
  if (overrides.empty()) return cfg;
  json doc = config_to_json(cfg);
  for (const auto& item : overrides) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError("override '" + item + "': expected key=value");
    }
    const std::string key = item.substr(0, eq);
    const std::string raw = item.substr(eq + 1);

    json* node = &doc;
    std::stringstream parts(key);
    std::string part;
    std::string walked;
    while (std::getline(parts, part, '.')) {
      walked += (walked.empty() ? "" : ".") + part;
      if (node->is_object()) {
        if (!node->contains(part)) throw ConfigError(walked + ": unknown configuration key");
        node = &(*node)[part];
      } else if (node->is_array()) {
        std::size_t idx = 0;
        try {
          idx = std::stoul(part);
        } catch (const std::exception&) {
          throw ConfigError(walked + ": expected an array index");
        }
        if (idx >= node->size()) throw ConfigError(walked + ": index out of range");
        node = &(*node)[idx];
      } else {
        throw ConfigError(walked + ": not an object");
      }
    }
    json value = json::parse(raw, nullptr, false);
    if (value.is_discarded()) value = raw;
    *node = value;
  }
  return config_from_json(doc);
}

ScenarioConfig load_config(const std::filesystem::path& path,
                           const std::vector<std::string>& overrides) {
  std::ifstream in(path);
  if (!in) throw ConfigError(path.string() + ": cannot open configuration file");
  json doc;
  try {
    in >> doc;
  } catch (const json::parse_error& e) {
    throw ConfigError(path.string() + ": malformed JSON (" + e.what() + ")");
  }
  ScenarioConfig cfg = config_from_json(doc);
  if (cfg.name.empty()) cfg.name = path.stem().string();
  return apply_overrides(cfg, overrides);
}

}  // namespace tad
