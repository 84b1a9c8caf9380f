// Command-line front end: impulse-response inspection, filter design,
// span shaping, and full SNR sweeps, all emitting CSV.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "imdd/imdd.hpp"

namespace {

imdd::ExperimentConfig load_config(const std::string& path) {
  if (path.empty()) return {};
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return imdd::parse_config(ss.str());
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  return out;
}

int default_threads() {
  if (const char* env = std::getenv("IMDDWF_THREADS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Wiener-filter equalization toolbox for dispersive IM/DD links"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_path = "out.csv";
  std::string variant_arg;
  std::uint64_t seed = 0;
  bool seed_set = false;
  int threads = default_threads();

  app.add_option("--config", config_path, "configuration file (key = value sections)");
  app.add_option("--out", out_path, "output CSV path");
  app.add_option_function<std::uint64_t>(
         "--seed", [&](std::uint64_t s) { seed = s; seed_set = true; },
         "override the master seed");
  app.add_option("--variant", variant_arg, "restrict to one filter variant");
  app.add_option("--threads", threads, "worker threads for sweeps");

  auto* cmd_cir = app.add_subcommand("cir", "export the sampled combined impulse response");
  auto* cmd_design = app.add_subcommand("design", "export Wiener filter taps");
  auto* cmd_shape = app.add_subcommand("shape", "export the ESR-optimal span per SNR point");
  auto* cmd_sweep = app.add_subcommand("sweep", "run the Monte-Carlo SNR sweep");

  double design_snr_db = 0.0;
  bool design_snr_set = false;
  cmd_design->add_option_function<double>(
      "--snr-db", [&](double v) { design_snr_db = v; design_snr_set = true; },
      "design SNR (default: top of the configured grid)");

  CLI11_PARSE(app, argc, argv);

  try {
    imdd::ExperimentConfig cfg = load_config(config_path);
    if (seed_set) cfg.master_seed = seed;
    if (!variant_arg.empty()) cfg.filter_variants = {imdd::variant_from_name(variant_arg)};

    if (cmd_cir->parsed()) {
      const imdd::Cir cir = imdd::sample_cir(cfg.link, cfg.truncation_rel, cfg.grid_size);
      auto out = open_output(out_path);
      imdd::write_cir_csv(out, cir);
    } else if (cmd_design->parsed()) {
      cfg.validate();
      const imdd::Cir cir = imdd::sample_cir(cfg.link, cfg.truncation_rel, cfg.grid_size);
      const int k_obs = cfg.k_observations > 0 ? cfg.k_observations : cir.size();
      const imdd::ConvOperator op = imdd::build_conv_operator(cir, k_obs, cfg.link.n_os);
      const imdd::StatsKernel kr(op);
      const double p = imdd::sweep_tx_power(cfg.link, cfg.phi_max_rad);
      const double snr = design_snr_set ? design_snr_db : cfg.snr_grid_db.back();
      const imdd::FilterVariant variant = cfg.filter_variants.front();
      const imdd::TransmitterDesign des = imdd::design_transmitter(
          kr, cfg.pam_order, p, snr,
          variant == imdd::FilterVariant::matched ? imdd::FilterVariant::matched
                                                  : imdd::FilterVariant::mismatched);
      imdd::WienerFilter f;
      switch (variant) {
        case imdd::FilterVariant::matched: f = imdd::matched_wf(kr, des.breve, des.sigma_eta2); break;
        case imdd::FilterVariant::mismatched: f = imdd::mismatched_wf(kr, des.breve, des.sigma_eta2); break;
        case imdd::FilterVariant::naive: f = imdd::naive_wf(op, des.breve, des.sigma_eta2); break;
      }
      auto out = open_output(out_path);
      imdd::write_filter_csv(out, f);
    } else if (cmd_shape->parsed()) {
      cfg.validate();
      const auto rows = imdd::run_shape(cfg);
      auto out = open_output(out_path);
      imdd::write_shape_csv(out, cfg, rows);
    } else if (cmd_sweep->parsed()) {
      cfg.validate();
      const auto rows = imdd::run_sweep(cfg, threads);
      auto out = open_output(out_path);
      imdd::write_sweep_csv(out, cfg, rows);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
