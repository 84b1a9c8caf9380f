#pragma once

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "imdd/channel.hpp"
#include "imdd/wiener.hpp"

namespace imdd {

/// Experiment description for the CLI. Defaults reproduce the reference
/// 20 km / 27 GBaud setup: 4-PAM, phase budget 0.1 rad, 1e5 symbols per
/// sweep point, 1/100 impulse-response truncation, one observation per
/// impulse-response tap.
struct ExperimentConfig {
  LinkParams link;
  int pam_order = 4;
  double phi_max_rad = 0.1;
  std::vector<double> snr_grid_db = {-42.8, -37.8, -32.8, -27.8, -22.8, -17.8, -12.8, -7.8,
                                     -2.8,  2.2,   7.2,   12.2,  17.2,  21.8,  26.3,  31.0,
                                     35.8,  40.7,  45.7,  50.6,  55.6,  60.6,  65.6};
  std::vector<FilterVariant> filter_variants = {FilterVariant::matched, FilterVariant::mismatched,
                                                FilterVariant::naive};
  long n_symbols = 100000;
  std::uint64_t master_seed = 1;
  double truncation_rel = 0.01;
  std::size_t grid_size = std::size_t{1} << 16;
  int k_observations = 0;  // 0: match the impulse-response length

  void validate() const {
    if (pam_order < 2) throw std::invalid_argument("config: pam_order must be >= 2");
    if (snr_grid_db.empty()) throw std::invalid_argument("config: empty snr grid");
    if (!std::is_sorted(snr_grid_db.begin(), snr_grid_db.end()))
      throw std::invalid_argument("config: snr grid must be sorted");
    if (filter_variants.empty()) throw std::invalid_argument("config: no filter variants");
    if (n_symbols < 10000) throw std::invalid_argument("config: n_symbols must be >= 10000");
    if (!(truncation_rel > 0.0 && truncation_rel <= 1.0))
      throw std::invalid_argument("config: truncation_rel must be in (0, 1]");
    if (k_observations < 0) throw std::invalid_argument("config: negative k_observations");
    if (link.n_os != 2) throw std::invalid_argument("config: only n_os = 2 is supported");
  }
};

namespace detail {

inline std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline std::string fmt_g(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline double parse_double(const std::string& s, const std::string& key) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(s, &pos);
  } catch (const std::exception&) {
    throw std::invalid_argument("config: bad number for " + key + ": '" + s + "'");
  }
  if (trim(s.substr(pos)) != "")
    throw std::invalid_argument("config: trailing junk for " + key + ": '" + s + "'");
  return v;
}

inline std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const std::string t = trim(item);
    if (!t.empty()) out.push_back(t);
  }
  return out;
}

}  // namespace detail

/// Parses the key-value configuration format: '#' comments, [section]
/// headers, key = value lines, comma-separated lists. Unknown keys are
/// rejected. Quantities carry their unit in the key name.
inline ExperimentConfig parse_config(const std::string& text) {
  ExperimentConfig cfg;
  std::istringstream in(text);
  std::string line, section;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    line = detail::trim(line);
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw std::invalid_argument("config: malformed section at line " + std::to_string(lineno));
      section = detail::trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::invalid_argument("config: expected key = value at line " + std::to_string(lineno));
    const std::string key = section + "." + detail::trim(line.substr(0, eq));
    const std::string val = detail::trim(line.substr(eq + 1));

    if (key == "link.beta2_s2_per_km") cfg.link.beta2_s2_per_km = detail::parse_double(val, key);
    else if (key == "link.alpha_per_km") cfg.link.alpha_per_km = detail::parse_double(val, key);
    else if (key == "link.gamma_per_w_km") cfg.link.gamma_per_w_km = detail::parse_double(val, key);
    else if (key == "link.length_km") cfg.link.length_km = detail::parse_double(val, key);
    else if (key == "link.baud_hz") cfg.link.baud_hz = detail::parse_double(val, key);
    else if (key == "link.n_os") cfg.link.n_os = static_cast<int>(detail::parse_double(val, key));
    else if (key == "transmitter.pam_order") cfg.pam_order = static_cast<int>(detail::parse_double(val, key));
    else if (key == "transmitter.phi_max_rad") cfg.phi_max_rad = detail::parse_double(val, key);
    else if (key == "receiver.truncation_rel") cfg.truncation_rel = detail::parse_double(val, key);
    else if (key == "receiver.grid_size") cfg.grid_size = static_cast<std::size_t>(detail::parse_double(val, key));
    else if (key == "receiver.k_policy") {
      if (val == "cir_length") cfg.k_observations = 0;
      else cfg.k_observations = static_cast<int>(detail::parse_double(val, key));
    } else if (key == "sweep.snr_el_db") {
      cfg.snr_grid_db.clear();
      for (const auto& s : detail::split_list(val)) cfg.snr_grid_db.push_back(detail::parse_double(s, key));
    } else if (key == "sweep.filter_variants") {
      cfg.filter_variants.clear();
      for (const auto& s : detail::split_list(val)) cfg.filter_variants.push_back(variant_from_name(s));
    } else if (key == "sweep.n_symbols") cfg.n_symbols = static_cast<long>(detail::parse_double(val, key));
    else if (key == "sweep.master_seed") cfg.master_seed = static_cast<std::uint64_t>(std::stoull(val));
    else throw std::invalid_argument("config: unknown key '" + key + "'");
  }
  return cfg;
}

inline std::string serialize_config(const ExperimentConfig& cfg) {
  std::ostringstream out;
  out << "[link]\n";
  out << "beta2_s2_per_km = " << detail::fmt_g(cfg.link.beta2_s2_per_km) << "\n";
  out << "alpha_per_km = " << detail::fmt_g(cfg.link.alpha_per_km) << "\n";
  out << "gamma_per_w_km = " << detail::fmt_g(cfg.link.gamma_per_w_km) << "\n";
  out << "length_km = " << detail::fmt_g(cfg.link.length_km) << "\n";
  out << "baud_hz = " << detail::fmt_g(cfg.link.baud_hz) << "\n";
  out << "n_os = " << cfg.link.n_os << "\n";
  out << "\n[transmitter]\n";
  out << "pam_order = " << cfg.pam_order << "\n";
  out << "phi_max_rad = " << detail::fmt_g(cfg.phi_max_rad) << "\n";
  out << "\n[receiver]\n";
  out << "truncation_rel = " << detail::fmt_g(cfg.truncation_rel) << "\n";
  out << "grid_size = " << cfg.grid_size << "\n";
  if (cfg.k_observations == 0) out << "k_policy = cir_length\n";
  else out << "k_policy = " << cfg.k_observations << "\n";
  out << "\n[sweep]\n";
  out << "snr_el_db = ";
  for (std::size_t i = 0; i < cfg.snr_grid_db.size(); ++i)
    out << (i ? ", " : "") << detail::fmt_g(cfg.snr_grid_db[i]);
  out << "\n";
  out << "filter_variants = ";
  for (std::size_t i = 0; i < cfg.filter_variants.size(); ++i)
    out << (i ? ", " : "") << variant_name(cfg.filter_variants[i]);
  out << "\n";
  out << "n_symbols = " << cfg.n_symbols << "\n";
  out << "master_seed = " << cfg.master_seed << "\n";
  return out.str();
}

}  // namespace imdd
