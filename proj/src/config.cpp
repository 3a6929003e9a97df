// SPDX-License-Identifier: Apache-2.0

#include "netmimo/config.hpp"

#include <cerrno>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "netmimo/errors.hpp"

namespace netmimo {

namespace {

using nlohmann::json;

void reject_unknown(const json& obj, const std::set<std::string>& allowed, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    if (!allowed.count(it.key())) throw ConfigError("unknown key '" + where + it.key() + "'");
  }
}

template <typename T>
void read(const json& obj, const char* key, T& dst, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) return;
  try {
    dst = it->get<T>();
  } catch (const json::exception& e) {
    throw ConfigError("key '" + where + key + "': " + e.what());
  }
}

SystemConfig parse_base(const json& b) {
  if (!b.is_object()) throw ConfigError("key 'base' must be an object");
  reject_unknown(b,
                 {"n_t", "n_bs", "n_r", "n_users", "p_max", "noise_power", "cell_radius_m",
                  "min_bs_distance_m", "shadowing_std_db", "pathloss_intercept_db",
                  "pathloss_slope", "bits_per_cell", "delta", "trials", "seed",
                  "shared_codebooks", "redraw_codebooks_per_trial"},
                 "base.");
  SystemConfig c;
  const std::string w = "base.";
  read(b, "n_t", c.n_t, w);
  read(b, "n_bs", c.n_bs, w);
  read(b, "n_r", c.n_r, w);
  read(b, "n_users", c.n_users, w);
  read(b, "p_max", c.p_max, w);
  read(b, "noise_power", c.noise_power, w);
  read(b, "cell_radius_m", c.cell_radius_m, w);
  read(b, "min_bs_distance_m", c.min_bs_distance_m, w);
  read(b, "shadowing_std_db", c.shadowing_std_db, w);
  read(b, "pathloss_intercept_db", c.pathloss_intercept_db, w);
  read(b, "pathloss_slope", c.pathloss_slope, w);
  read(b, "trials", c.trials, w);
  read(b, "seed", c.seed, w);
  read(b, "shared_codebooks", c.shared_codebooks, w);
  read(b, "redraw_codebooks_per_trial", c.redraw_codebooks_per_trial, w);
  if (c.n_bs < 1) throw ConfigError("base.n_bs must be positive");
  if (!b.contains("bits_per_cell")) c.bits_per_cell.assign(static_cast<std::size_t>(c.n_bs), 4);
  if (!b.contains("delta")) c.delta.assign(static_cast<std::size_t>(c.n_bs), 0.9);
  read(b, "bits_per_cell", c.bits_per_cell, w);
  read(b, "delta", c.delta, w);
  return c;
}

}  // namespace

ExperimentSpec parse_spec(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("malformed JSON: ") + e.what());
  }
  if (!j.is_object()) throw ConfigError("top level must be an object");
  reject_unknown(j,
                 {"name", "base", "snr_grid_db", "schemes", "delta_grid", "bit_mode",
                  "output_path", "bits_cap", "bits_per_bs_grid"},
                 "");
  ExperimentSpec s;
  read(j, "name", s.name, "");
  if (j.contains("base")) s.base = parse_base(j["base"]);
  read(j, "snr_grid_db", s.snr_grid_db, "");
  read(j, "schemes", s.schemes, "");
  read(j, "delta_grid", s.delta_grid, "");
  read(j, "output_path", s.output_path, "");
  read(j, "bits_cap", s.bits_cap, "");
  read(j, "bits_per_bs_grid", s.bits_per_bs_grid, "");
  if (j.contains("bit_mode")) {
    const json& m = j["bit_mode"];
    if (m.is_string() && m.get<std::string>() == "fixed") {
      s.bit_mode = BitMode::Fixed;
    } else if (m.is_object()) {
      reject_unknown(m, {"mode", "epsilon"}, "bit_mode.");
      std::string mode;
      read(m, "mode", mode, "bit_mode.");
      if (mode == "fixed") {
        s.bit_mode = BitMode::Fixed;
      } else if (mode == "corollary1-scaled") {
        s.bit_mode = BitMode::Corollary1Scaled;
        read(m, "epsilon", s.epsilon, "bit_mode.");
      } else {
        throw ConfigError("bit_mode.mode must be 'fixed' or 'corollary1-scaled'");
      }
    } else {
      throw ConfigError("bit_mode must be \"fixed\" or {\"mode\": ..., \"epsilon\": ...}");
    }
  }
  s.validate();
  return s;
}

ExperimentSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config '" + path + "': " + std::strerror(errno));
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_spec(buf.str());
}

std::string spec_to_json(const ExperimentSpec& s) {
  const SystemConfig& c = s.base;
  json base = {{"n_t", c.n_t},
               {"n_bs", c.n_bs},
               {"n_r", c.n_r},
               {"n_users", c.n_users},
               {"p_max", c.p_max},
               {"noise_power", c.noise_power},
               {"cell_radius_m", c.cell_radius_m},
               {"min_bs_distance_m", c.min_bs_distance_m},
               {"shadowing_std_db", c.shadowing_std_db},
               {"pathloss_intercept_db", c.pathloss_intercept_db},
               {"pathloss_slope", c.pathloss_slope},
               {"bits_per_cell", c.bits_per_cell},
               {"delta", c.delta},
               {"trials", c.trials},
               {"seed", c.seed},
               {"shared_codebooks", c.shared_codebooks},
               {"redraw_codebooks_per_trial", c.redraw_codebooks_per_trial}};
  json j = {{"name", s.name},
            {"base", base},
            {"snr_grid_db", s.snr_grid_db},
            {"schemes", s.schemes},
            {"delta_grid", s.delta_grid},
            {"output_path", s.output_path},
            {"bits_cap", s.bits_cap},
            {"bits_per_bs_grid", s.bits_per_bs_grid}};
  if (s.bit_mode == BitMode::Fixed) {
    j["bit_mode"] = "fixed";
  } else {
    j["bit_mode"] = {{"mode", "corollary1-scaled"}, {"epsilon", s.epsilon}};
  }
  return j.dump(2);
}

}  // namespace netmimo
