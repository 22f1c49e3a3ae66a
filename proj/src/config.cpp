#include "catenoid/config.hpp"

#include <cstdio>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace catenoid {

using nlohmann::json;

namespace {

void require_keys(const json& j, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key()))
      throw ConfigError("config: unknown field '" + it.key() + "' in " + where);
  }
}

json to_json(const ExperimentConfig& c) {
  json j;
  j["grid"] = {{"rho_max", c.rho_max}, {"n_points", c.n_points}};
  j["evolution"] = {{"dt_safety", c.dt_safety}, {"t_final", c.t_final},
                    {"sectors", c.sectors},     {"alpha", c.alpha},
                    {"rp_cutoff", c.rp_cutoff}, {"probes", c.probes}};
  j["evolution"]["data"] = json::array();
  for (const auto& d : c.data)
    j["evolution"]["data"].push_back({{"sector", d.sector},
                                      {"amplitude", d.amplitude},
                                      {"center", d.center},
                                      {"width", d.width},
                                      {"velocity_amplitude", d.velocity_amplitude}});
  j["evolution"]["sources"] = json::array();
  for (const auto& s : c.sources)
    j["evolution"]["sources"].push_back({{"sector", s.sector},
                                         {"radial_type", s.radial_type},
                                         {"a", s.a},
                                         {"r0", s.r0},
                                         {"r_support", s.r_support},
                                         {"time_type", s.time_type},
                                         {"b", s.b},
                                         {"t0", s.t0},
                                         {"t_width", s.t_width}});
  j["modulation"] = {{"r_ctf", c.r_ctf}};
  j["shooting"] = {{"bracket", {c.bracket_lo, c.bracket_hi}},
                   {"envelope_factor", c.envelope_factor},
                   {"tol", c.shoot_tol},
                   {"t_final", c.shoot_t_final}};
  j["tails"] = {{"a", c.tails_a}, {"b", c.tails_b}, {"probes", c.tail_probes}};
  j["output_dir"] = c.output_dir;
  j["seed"] = c.seed;
  return j;
}

ExperimentConfig from_json(const json& j) {
  ExperimentConfig c;
  require_keys(j, {"grid", "evolution", "modulation", "shooting", "tails", "output_dir", "seed"},
               "top level");
  if (j.contains("grid")) {
    const auto& g = j.at("grid");
    require_keys(g, {"rho_max", "n_points"}, "grid");
    if (g.contains("rho_max")) c.rho_max = g.at("rho_max").get<double>();
    if (g.contains("n_points")) c.n_points = g.at("n_points").get<int>();
  }
  if (j.contains("evolution")) {
    const auto& e = j.at("evolution");
    require_keys(e, {"dt_safety", "t_final", "sectors", "alpha", "rp_cutoff", "data", "sources",
                     "probes"},
                 "evolution");
    if (e.contains("dt_safety")) c.dt_safety = e.at("dt_safety").get<double>();
    if (e.contains("t_final")) c.t_final = e.at("t_final").get<double>();
    if (e.contains("sectors")) c.sectors = e.at("sectors").get<std::vector<int>>();
    if (e.contains("alpha")) c.alpha = e.at("alpha").get<double>();
    if (e.contains("rp_cutoff")) c.rp_cutoff = e.at("rp_cutoff").get<double>();
    if (e.contains("probes")) c.probes = e.at("probes").get<std::vector<double>>();
    if (e.contains("data")) {
      c.data.clear();
      for (const auto& d : e.at("data")) {
        require_keys(d, {"sector", "amplitude", "center", "width", "velocity_amplitude"},
                     "evolution.data");
        DataSpec ds;
        if (d.contains("sector")) ds.sector = d.at("sector").get<int>();
        if (d.contains("amplitude")) ds.amplitude = d.at("amplitude").get<double>();
        if (d.contains("center")) ds.center = d.at("center").get<double>();
        if (d.contains("width")) ds.width = d.at("width").get<double>();
        if (d.contains("velocity_amplitude"))
          ds.velocity_amplitude = d.at("velocity_amplitude").get<double>();
        c.data.push_back(ds);
      }
    }
    if (e.contains("sources")) {
      c.sources.clear();
      for (const auto& s : e.at("sources")) {
        require_keys(s, {"sector", "radial_type", "a", "r0", "r_support", "time_type", "b", "t0",
                         "t_width"},
                     "evolution.sources");
        SourceConfig sc;
        if (s.contains("sector")) sc.sector = s.at("sector").get<int>();
        if (s.contains("radial_type")) sc.radial_type = s.at("radial_type").get<std::string>();
        if (s.contains("a")) sc.a = s.at("a").get<double>();
        if (s.contains("r0")) sc.r0 = s.at("r0").get<double>();
        if (s.contains("r_support")) sc.r_support = s.at("r_support").get<double>();
        if (s.contains("time_type")) sc.time_type = s.at("time_type").get<std::string>();
        if (s.contains("b")) sc.b = s.at("b").get<double>();
        if (s.contains("t0")) sc.t0 = s.at("t0").get<double>();
        if (s.contains("t_width")) sc.t_width = s.at("t_width").get<double>();
        c.sources.push_back(sc);
      }
    }
  }
  if (j.contains("modulation")) {
    const auto& m = j.at("modulation");
    require_keys(m, {"r_ctf"}, "modulation");
    if (m.contains("r_ctf")) c.r_ctf = m.at("r_ctf").get<double>();
  }
  if (j.contains("shooting")) {
    const auto& s = j.at("shooting");
    require_keys(s, {"bracket", "envelope_factor", "tol", "t_final"}, "shooting");
    if (s.contains("bracket")) {
      const auto br = s.at("bracket").get<std::vector<double>>();
      if (br.size() != 2) throw ConfigError("config: shooting.bracket needs two entries");
      c.bracket_lo = br[0];
      c.bracket_hi = br[1];
    }
    if (s.contains("envelope_factor")) c.envelope_factor = s.at("envelope_factor").get<double>();
    if (s.contains("tol")) c.shoot_tol = s.at("tol").get<double>();
    if (s.contains("t_final")) c.shoot_t_final = s.at("t_final").get<double>();
  }
  if (j.contains("tails")) {
    const auto& t = j.at("tails");
    require_keys(t, {"a", "b", "probes"}, "tails");
    if (t.contains("a")) c.tails_a = t.at("a").get<int>();
    if (t.contains("b")) c.tails_b = t.at("b").get<double>();
    if (t.contains("probes")) c.tail_probes = t.at("probes").get<std::vector<double>>();
  }
  if (j.contains("output_dir")) c.output_dir = j.at("output_dir").get<std::string>();
  if (j.contains("seed")) c.seed = j.at("seed").get<std::uint64_t>();
  c.validate();
  return c;
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("config: cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json_text(ss.str());
}

ExperimentConfig ExperimentConfig::from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const std::exception& e) {
    throw ConfigError(std::string("config: parse error: ") + e.what());
  }
  return from_json(j);
}

std::string ExperimentConfig::to_json_text() const { return to_json(*this).dump(2) + "\n"; }

void ExperimentConfig::validate() const {
  if (!(rho_max > 0)) throw ConfigError("config: grid.rho_max must be positive");
  if (n_points < 33 || n_points % 2 == 0)
    throw ConfigError("config: grid.n_points must be odd and >= 33");
  if (!(dt_safety > 0) || dt_safety > 1.0)
    throw ConfigError("config: evolution.dt_safety must be in (0, 1]");
  if (!(t_final > 0)) throw ConfigError("config: evolution.t_final must be positive");
  if (!(alpha > 0) || alpha >= 1.0) throw ConfigError("config: evolution.alpha must be in (0,1)");
  for (int s : sectors)
    if (s < 0) throw ConfigError("config: sectors must be non-negative");
  if (!(r_ctf >= 4.0)) throw ConfigError("config: modulation.r_ctf must be >= 4");
  if (!(bracket_lo < bracket_hi)) throw ConfigError("config: shooting.bracket must be ordered");
  if (tails_a != 3 && tails_a != 4) throw ConfigError("config: tails.a must be 3 or 4");
  if (!(tails_b > 1.0)) throw ConfigError("config: tails.b must exceed 1");
  if (output_dir.empty()) throw ConfigError("config: output_dir must be non-empty");
}

std::uint64_t ExperimentConfig::hash() const {
  const std::string s = to_json_text();
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

void RunManifest::write(const std::string& path) const {
  json j;
  j["artifact_version"] = artifact_version;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(config_hash));
  j["config_hash"] = std::string(buf);
  j["outputs"] = outputs;
  json t = json::object();
  for (const auto& [k, v] : timings_s) t[k] = v;
  j["timings_s"] = t;
  std::ofstream out(path);
  out << j.dump(2) << "\n";
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace catenoid
