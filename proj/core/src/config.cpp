#include "fml/config.hpp"

#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "fml/errors.hpp"

namespace fml {

namespace {

using nlohmann::json;

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

json parse_json(std::string_view text) {
  try {
    return json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("invalid JSON: ") + e.what());
  }
}

void reject_unknown(const json& obj, const std::set<std::string>& allowed, std::string_view what) {
  if (!obj.is_object()) throw ConfigError(std::string(what) + " must be a JSON object");
  for (const auto& [key, value] : obj.items()) {
    if (!allowed.contains(key)) {
      throw ConfigError("unknown key '" + key + "' in " + std::string(what));
    }
  }
}

std::vector<double> number_array(const json& j, std::string_view what) {
  if (!j.is_array()) throw ConfigError(std::string(what) + " must be an array of numbers");
  std::vector<double> out;
  for (const json& x : j) {
    if (!x.is_number()) throw ConfigError(std::string(what) + " must contain only numbers");
    out.push_back(x.get<double>());
  }
  return out;
}

}  // namespace

IteratedFunctionSystem parse_ifs_config(std::string_view json_text, std::string default_name) {
  const json cfg = parse_json(json_text);
  reject_unknown(cfg, {"name", "ratios", "probabilities", "translations", "rotations", "ssc"},
                 "IFS config");
  if (!cfg.contains("ratios")) throw ConfigError("IFS config needs 'ratios'");
  if (!cfg.contains("probabilities")) throw ConfigError("IFS config needs 'probabilities'");

  const std::vector<double> ratios = number_array(cfg["ratios"], "ratios");
  std::vector<double> probs = number_array(cfg["probabilities"], "probabilities");
  std::vector<SimilarityMap> maps(ratios.size());
  for (std::size_t i = 0; i < ratios.size(); ++i) maps[i].ratio = ratios[i];

  if (cfg.contains("translations")) {
    const json& t = cfg["translations"];
    if (!t.is_array() || t.size() != ratios.size()) {
      throw ConfigError("'translations' needs one vector per map");
    }
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      maps[i].translation = t[i].is_number() ? std::vector<double>{t[i].get<double>()}
                                             : number_array(t[i], "translation");
    }
  }
  if (cfg.contains("rotations")) {
    const json& r = cfg["rotations"];
    if (!r.is_array() || r.size() != ratios.size()) {
      throw ConfigError("'rotations' needs one matrix per map");
    }
    for (std::size_t i = 0; i < ratios.size(); ++i) {
      if (!r[i].is_array()) throw ConfigError("rotation must be an array of rows");
      for (const json& row : r[i]) {
        const std::vector<double> vals = number_array(row, "rotation row");
        maps[i].rotation.insert(maps[i].rotation.end(), vals.begin(), vals.end());
      }
    }
  }
  std::string name = std::move(default_name);
  if (cfg.contains("name")) {
    if (!cfg["name"].is_string()) throw ConfigError("'name' must be a string");
    name = cfg["name"].get<std::string>();
  }
  bool ssc = true;
  if (cfg.contains("ssc")) {
    if (!cfg["ssc"].is_boolean()) throw ConfigError("'ssc' must be a boolean");
    ssc = cfg["ssc"].get<bool>();
  }
  try {
    return IteratedFunctionSystem(std::move(maps), std::move(probs), std::move(name), ssc);
  } catch (const InvalidArgument& e) {
    throw ConfigError(std::string("invalid IFS: ") + e.what());
  }
}

IteratedFunctionSystem load_ifs_config(const std::filesystem::path& path) {
  return parse_ifs_config(read_file(path), path.stem().string());
}

std::vector<Word> parse_cells(std::string_view text, int arity) {
  std::vector<Word> out;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    const auto b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    const auto e = line.find_last_not_of(" \t\r");
    try {
      out.push_back(Word::parse(std::string_view(line).substr(b, e - b + 1), arity));
    } catch (const InvalidArgument& err) {
      throw ConfigError(err.what());
    }
  }
  return out;
}

std::vector<Word> load_cells(const std::filesystem::path& path, int arity) {
  return parse_cells(read_file(path), arity);
}

CylinderFunction parse_function(std::string_view json_text, int arity) {
  const json doc = parse_json(json_text);
  reject_unknown(doc, {"depth", "values"}, "function file");
  if (!doc.contains("depth") || !doc["depth"].is_number_integer()) {
    throw ConfigError("function file needs an integer 'depth'");
  }
  const int depth = doc["depth"].get<int>();
  if (depth < 0) throw ConfigError("'depth' must be nonnegative");
  std::map<Word, double> values;
  if (doc.contains("values")) {
    if (!doc["values"].is_object()) throw ConfigError("'values' must be an object");
    for (const auto& [key, v] : doc["values"].items()) {
      if (!v.is_number()) throw ConfigError("value of '" + key + "' must be a number");
      try {
        values[Word::parse(key, arity)] = v.get<double>();
      } catch (const InvalidArgument& err) {
        throw ConfigError(err.what());
      }
    }
  }
  try {
    return CylinderFunction::from_sparse(arity, depth, values);
  } catch (const InvalidArgument& err) {
    throw ConfigError(err.what());
  }
}

CylinderFunction load_function(const std::filesystem::path& path, int arity) {
  return parse_function(read_file(path), arity);
}

std::string function_to_json(const CylinderFunction& f) {
  json values = json::object();
  for (const auto& [w, v] : f.to_sparse()) values[w.to_string()] = v;
  json out = {{"depth", f.depth()}, {"values", values}};
  return out.dump(2);
}

}  // namespace fml
