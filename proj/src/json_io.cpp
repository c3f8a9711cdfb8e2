#include "setcalc/json_io.hpp"

#include <algorithm>

namespace setcalc {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw Error(std::string("missing key \"") + key + "\"");
  return *it;
}

double require_number(const json& j, const char* key) {
  const json& v = require(j, key);
  if (!v.is_number()) throw Error(std::string("\"") + key + "\" must be a number");
  return v.get<double>();
}

}  // namespace

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(std::string("malformed JSON: ") + e.what());
  }
}

json universe_to_json(const UniversePtr& u) {
  json j;
  j["elements"] = u->elements();
  std::vector<double> weights(u->size());
  for (std::size_t i = 0; i < u->size(); ++i) weights[i] = u->weight(i);
  j["weights"] = weights;
  return j;
}

UniversePtr universe_from_json(const json& j) {
  const json& elements = require(j, "elements");
  const json& weights = require(j, "weights");
  if (!elements.is_array() || !weights.is_array()) {
    throw Error("\"elements\" and \"weights\" must be arrays");
  }
  return make_universe(elements.get<std::vector<std::string>>(),
                       weights.get<std::vector<double>>());
}

json subset_to_json(const Subset& s) {
  auto names = s.element_names();
  std::sort(names.begin(), names.end());
  return json(names);
}

Subset subset_from_json(const json& j, const UniversePtr& u) {
  if (!j.is_array()) throw Error("a subset must be an array of element names");
  return Subset::from_names(u, j.get<std::vector<std::string>>());
}

json hybrid_to_json(const HybridSet& a) {
  json j;
  j["intervals"] = json::array();
  for (const Interval& p : a.intervals.pieces()) {
    j["intervals"].push_back({{"a", p.a},
                              {"b", p.b},
                              {"closed_left", p.closed_left},
                              {"closed_right", p.closed_right}});
  }
  j["fractals"] = json::array();
  for (const FractalComponent& f : a.fractals) {
    j["fractals"].push_back({{"a", f.a}, {"b", f.b}, {"k", f.k}, {"r", f.r}});
  }
  j["points"] = a.points.values();
  return j;
}

HybridSet hybrid_from_json(const json& j) {
  std::vector<Interval> pieces;
  if (const auto it = j.find("intervals"); it != j.end()) {
    for (const json& p : *it) {
      pieces.emplace_back(require_number(p, "a"), require_number(p, "b"),
                          p.value("closed_left", true), p.value("closed_right", true));
    }
  }
  std::vector<FractalComponent> fractals;
  if (const auto it = j.find("fractals"); it != j.end()) {
    for (const json& f : *it) {
      fractals.emplace_back(require_number(f, "a"), require_number(f, "b"),
                            static_cast<int>(require_number(f, "k")),
                            require_number(f, "r"));
    }
  }
  std::vector<double> points;
  if (const auto it = j.find("points"); it != j.end()) {
    points = it->get<std::vector<double>>();
  }
  return HybridSet(IntervalSet(std::move(pieces)), std::move(fractals),
                   PointSet(std::move(points)));
}

json config_to_json(const MeasureConfig& cfg) {
  json j;
  j["alpha"] = {cfg.alpha1, cfg.alpha2, cfg.alpha3};
  j["c"] = cfg.c;
  switch (cfg.H.kind()) {
    case PointWeight::Kind::One: j["H"] = "one"; break;
    case PointWeight::Kind::ExpAbs: j["H"] = "exp_abs"; break;
    case PointWeight::Kind::Table: {
      json rows = json::array();
      for (const auto& [x, w] : cfg.H.table()) rows.push_back({x, w});
      j["H"] = {{"table", rows}};
      break;
    }
  }
  return j;
}

MeasureConfig config_from_json(const json& j) {
  MeasureConfig cfg;
  if (const auto it = j.find("alpha"); it != j.end()) {
    if (!it->is_array() || it->size() != 3) {
      throw Error("\"alpha\" must hold exactly three numbers");
    }
    cfg.alpha1 = (*it)[0].get<double>();
    cfg.alpha2 = (*it)[1].get<double>();
    cfg.alpha3 = (*it)[2].get<double>();
  }
  if (const auto it = j.find("c"); it != j.end()) cfg.c = it->get<double>();
  if (const auto it = j.find("H"); it != j.end()) {
    if (it->is_string()) {
      const std::string name = it->get<std::string>();
      if (name == "one") {
        cfg.H = PointWeight::one();
      } else if (name == "exp_abs") {
        cfg.H = PointWeight::exp_abs();
      } else {
        throw Error("unknown point weight \"" + name + "\"");
      }
    } else if (it->is_object() && it->contains("table")) {
      std::map<double, double> table;
      for (const json& row : (*it)["table"]) {
        if (!row.is_array() || row.size() != 2) {
          throw Error("\"table\" rows must be [x, weight] pairs");
        }
        table[row[0].get<double>()] = row[1].get<double>();
      }
      cfg.H = PointWeight::from_table(std::move(table));
    } else {
      throw Error("\"H\" must be \"one\", \"exp_abs\", or {\"table\": ...}");
    }
  }
  cfg.validate();
  return cfg;
}

}  // namespace setcalc
