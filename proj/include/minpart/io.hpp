#pragma once

// Run configuration shared by every subcommand, and atomic output files.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "minpart/eigensolver.hpp"
#include "minpart/errors.hpp"
#include "minpart/partition_analysis.hpp"

#ifndef MINPART_VERSION
#define MINPART_VERSION "0.1.0"
#endif

namespace minpart {

inline constexpr const char* kVersion = MINPART_VERSION;

struct RunConfig {
  std::string subcommand;
  std::string domain = "unit_square";
  double h = 1.0 / 64;
  std::size_t k = 2;
  std::size_t poles = 0;
  /// Explicit pole positions for solve/partition/certify; snapped to plaquette centers.
  std::vector<Point> pole_positions;
  /// Pole counts for a search sweep; empty means the single value `poles`.
  std::vector<std::size_t> pole_sweep;
  double eps = 0.0;  // 0 selects eps_max
  double t = 0.0;    // 0 selects t(eps)
  double t_tile = 5.0;
  double t_min = 2.0;
  double t_max = 50.0;
  double step = 0.1;
  double tol = kDefaultTol;
  double zero_tol = kDefaultZeroTol;
  std::uint64_t seed = kDefaultSeed;
  std::size_t budget = 200;
  std::size_t eigenpairs = 5;
  bool richardson = false;
  bool dump_matrix = false;
  std::string entries;
  std::string out = "out";
  unsigned threads = 1;

  nlohmann::json to_json() const {
    nlohmann::json j;
    j["subcommand"] = subcommand;
    j["domain"] = DomainSpec::parse(domain).to_json();
    j["h"] = h;
    j["k"] = k;
    j["poles"] = poles;
    auto& pp = j["pole_positions"] = nlohmann::json::array();
    for (const auto& p : pole_positions) pp.push_back({p.x, p.y});
    j["pole_sweep"] = pole_sweep;
    j["eps"] = eps;
    j["t"] = t;
    j["t_tile"] = t_tile;
    j["t_min"] = t_min;
    j["t_max"] = t_max;
    j["step"] = step;
    j["tol"] = tol;
    j["zero_tol"] = zero_tol;
    j["seed"] = seed;
    j["budget"] = budget;
    j["eigenpairs"] = eigenpairs;
    j["richardson"] = richardson;
    j["dump_matrix"] = dump_matrix;
    j["entries"] = entries;
    j["out"] = out;
    // threads change scheduling only, never results, so they stay out of the payload
    return j;
  }

  /// Overwrites fields present in a JSON object; unknown keys are an error.
  void merge(const nlohmann::json& j) {
    if (!j.is_object()) throw Error(ErrorCode::ConfigError, "config must be a JSON object");
    try {
      for (const auto& [key, v] : j.items()) {
        if (key == "subcommand") subcommand = v.get<std::string>();
        else if (key == "domain") domain = v.is_string() ? v.get<std::string>() : v.dump();
        else if (key == "h") h = v.get<double>();
        else if (key == "k") k = v.get<std::size_t>();
        else if (key == "poles") poles = v.get<std::size_t>();
        else if (key == "pole_positions") {
          pole_positions.clear();
          for (const auto& p : v) pole_positions.push_back({p.at(0).get<double>(), p.at(1).get<double>()});
        } else if (key == "pole_sweep") pole_sweep = v.get<std::vector<std::size_t>>();
        else if (key == "eps") eps = v.get<double>();
        else if (key == "t") t = v.get<double>();
        else if (key == "t_tile") t_tile = v.get<double>();
        else if (key == "t_min") t_min = v.get<double>();
        else if (key == "t_max") t_max = v.get<double>();
        else if (key == "step") step = v.get<double>();
        else if (key == "tol") tol = v.get<double>();
        else if (key == "zero_tol") zero_tol = v.get<double>();
        else if (key == "seed") seed = v.get<std::uint64_t>();
        else if (key == "budget") budget = v.get<std::size_t>();
        else if (key == "eigenpairs") eigenpairs = v.get<std::size_t>();
        else if (key == "richardson") richardson = v.get<bool>();
        else if (key == "dump_matrix") dump_matrix = v.get<bool>();
        else if (key == "entries") entries = v.get<std::string>();
        else if (key == "out") out = v.get<std::string>();
        else if (key == "threads") threads = v.get<unsigned>();
        else throw Error(ErrorCode::ConfigError, "unknown config key '" + key + "'");
      }
    } catch (const nlohmann::json::exception& e) {
      throw Error(ErrorCode::ConfigError, std::string("bad config value: ") + e.what());
    }
  }

  /// Checks every field before any computation starts.
  void validate() const {
    auto bad = [](const std::string& m) { throw Error(ErrorCode::ConfigError, m); };
    try {
      (void)DomainSpec::parse(domain);
    } catch (const Error& e) {
      bad(std::string("domain: ") + e.what());
    }
    if (!(h > 0) || !std::isfinite(h)) bad("h must be positive");
    if (k < 1) bad("k must be >= 1");
    if (!(tol > 0 && tol < 1)) bad("tol must lie in (0, 1)");
    if (!(zero_tol > 0 && zero_tol < 0.1)) bad("zero_tol must lie in (0, 0.1)");
    if (eps < 0) bad("eps must be >= 0");
    if (t < 0) bad("t must be >= 0");
    if (!(t_tile >= 1)) bad("t_tile must be >= 1");
    if (!(step > 0) || !(t_max >= t_min)) bad("bad t range");
    if (budget < 1) bad("budget must be >= 1");
    if (eigenpairs < 1) bad("eigenpairs must be >= 1");
    if (out.empty()) bad("out must name a directory");
  }
};

/// Writes to a sibling temporary file and renames it over the target.
inline void write_atomic(const std::filesystem::path& path, const std::string& payload) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write " + tmp.string());
    f << payload;
    f.flush();
    if (!f) throw Error(ErrorCode::InvalidArgument, "write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

/// JSON document with the run configuration and version as its header.
inline std::string json_payload(const RunConfig& cfg, const nlohmann::json& result) {
  nlohmann::json doc;
  doc["version"] = kVersion;
  doc["config"] = cfg.to_json();
  doc["result"] = result;
  return doc.dump(2) + "\n";
}

/// CSV with the run configuration as leading comment lines.
inline std::string csv_payload(const RunConfig& cfg, const std::string& body) {
  std::ostringstream os;
  os << "# minpart " << kVersion << "\n# config " << cfg.to_json().dump() << "\n" << body;
  return os.str();
}

inline std::string pgm_payload(const RunConfig& cfg, const NodalPartition& part, const Grid& grid) {
  std::ostringstream body;
  write_pgm(body, part, grid);
  // PGM allows comment lines after the magic number.
  auto s = body.str();
  const auto nl = s.find('\n');
  return s.substr(0, nl + 1) + "# minpart " + kVersion + " " + cfg.to_json().dump() + "\n" + s.substr(nl + 1);
}

}  // namespace minpart
