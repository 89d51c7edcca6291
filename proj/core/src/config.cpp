#include "gnv/config.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace gnv {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  std::size_t e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

double parse_number(const std::string& s, const std::string& where) {
  std::string t = trim(s);
  if (t == "inf" || t == "+inf") return kInf;
  if (t == "-inf") return -kInf;
  try {
    std::size_t pos = 0;
    double v = std::stod(t, &pos);
    if (pos != t.size()) throw std::invalid_argument(t);
    return v;
  } catch (const std::exception&) {
    throw Error(errc::config_error, where + ": cannot parse number '" + s + "'");
  }
}

}  // namespace

NamedSpec parse_named_spec(const std::string& text) {
  NamedSpec spec;
  spec.raw = trim(text);
  auto colon = spec.raw.find(':');
  if (colon == std::string::npos) {
    spec.name = spec.raw;
    return spec;
  }
  spec.name = trim(spec.raw.substr(0, colon));
  for (const auto& kv : split(spec.raw.substr(colon + 1), ',')) {
    auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw Error(errc::config_error, "spec '" + text + "': expected key=value, got '" + kv + "'");
    spec.params[trim(kv.substr(0, eq))] = parse_number(kv.substr(eq + 1), "spec '" + text + "'");
  }
  return spec;
}

const char* expectation_name(Expectation e) {
  switch (e) {
    case Expectation::holds: return "holds";
    case Expectation::divergent_lhs: return "divergent_lhs";
    case Expectation::any: return "any";
  }
  return "unknown";
}

namespace {

Expectation expectation_from_name(const std::string& s, const std::string& where) {
  if (s == "holds") return Expectation::holds;
  if (s == "divergent_lhs") return Expectation::divergent_lhs;
  if (s == "any") return Expectation::any;
  throw Error(errc::config_error, where + ": unknown expectation '" + s + "'");
}

struct Section {
  std::string name;
  int line = 0;
  std::vector<std::pair<std::string, std::string>> entries;  // key, value
  std::vector<int> entry_lines;

  const std::string* find(const std::string& key) const {
    for (const auto& [k, v] : entries)
      if (k == key) return &v;
    return nullptr;
  }
  std::string require(const std::string& key, const std::string& origin) const {
    const std::string* v = find(key);
    if (!v)
      throw Error(errc::config_error, origin + ": section [" + name + "] (line " +
                                          std::to_string(line) + ") is missing key '" + key + "'");
    return *v;
  }
};

Interval parse_window(const std::string& s, const std::string& where) {
  auto parts = split(s, ',');
  if (parts.size() != 2)
    throw Error(errc::config_error, where + ": window must be 'lo, hi'");
  return Interval(parse_number(parts[0], where), parse_number(parts[1], where));
}

}  // namespace

CampaignConfig parse_config_text(const std::string& text, const std::string& origin) {
  std::vector<Section> sections;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw Error(errc::config_error,
                    origin + ":" + std::to_string(lineno) + ": malformed section header");
      sections.push_back({trim(line.substr(1, line.size() - 2)), lineno, {}, {}});
      continue;
    }
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(errc::config_error,
                  origin + ":" + std::to_string(lineno) + ": expected key = value");
    if (sections.empty())
      throw Error(errc::config_error,
                  origin + ":" + std::to_string(lineno) + ": entry before any [section]");
    sections.back().entries.emplace_back(trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    sections.back().entry_lines.push_back(lineno);
  }

  CampaignConfig cfg;
  for (const auto& sec : sections) {
    std::string where = origin + ": section [" + sec.name + "] line " + std::to_string(sec.line);
    if (sec.name == "tolerances") {
      if (const auto* v = sec.find("rel")) cfg.tol.rel = parse_number(*v, where);
      if (const auto* v = sec.find("abs")) cfg.tol.abs = parse_number(*v, where);
    } else if (sec.name == "case") {
      CaseBlock block;
      // list items are ';'-separated (',' separates parameters inside a spec)
      for (const auto& s : split(sec.require("functions", origin), ';'))
        block.functions.push_back(parse_named_spec(s));
      for (const auto& s : split(sec.require("weights", origin), ';'))
        block.weights.push_back(parse_named_spec(s));
      for (const auto& s : split(sec.require("p", origin), ','))
        block.p_values.push_back(parse_number(s, where));
      block.regime = regime_from_name(sec.require("regime", origin));
      if (const auto* v = sec.find("window")) block.window = parse_window(*v, where);
      if (const auto* v = sec.find("expect")) block.expect = expectation_from_name(*v, where);
      if (block.functions.empty() || block.weights.empty() || block.p_values.empty())
        throw Error(errc::config_error, where + ": empty case block");
      cfg.cases.push_back(std::move(block));
    } else if (sec.name == "eig") {
      EigBlock block;
      const std::string* model = sec.find("model");
      if (model) {
        block.kind = EigBlock::Kind::model;
        NamedSpec ms = parse_named_spec(*model);
        block.model = ms.name;
        block.model_params = ms.params;
        if (const auto* v = sec.find("t0")) block.t0 = parse_number(*v, where);
        if (const auto* v = sec.find("y0")) block.y0 = parse_number(*v, where);
        if (const auto* v = sec.find("yp0")) block.yp0 = parse_number(*v, where);
        if (const auto* v = sec.find("t1")) block.t1 = parse_number(*v, where);
        block.tau = parse_named_spec("power:alpha=1");  // replaced by the model registry
      } else {
        block.kind = EigBlock::Kind::manufactured;
        block.f = parse_named_spec(sec.require("f", origin));
        block.tau = parse_named_spec(sec.require("tau", origin));
        if (block.tau.name != "power")
          throw Error(errc::config_error, where + ": only power nonlinearities are configurable");
      }
      block.q = parse_number(sec.require("q", origin), where);
      if (const auto* v = sec.find("window")) block.window = parse_window(*v, where);
      if (const auto* v = sec.find("perturb_g")) block.perturb_g = parse_number(*v, where);
      if (const auto* v = sec.find("checks"))
        block.checks = split(*v, ',');
      else
        block.checks = {"identity", "i", "holder"};
      cfg.eig.push_back(std::move(block));
    } else {
      throw Error(errc::config_error, where + ": unknown section");
    }
  }
  return cfg;
}

CampaignConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(errc::config_error, "cannot open config file " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config_text(ss.str(), path);
}

}  // namespace gnv
