#pragma once

#include <atomic>
#include <cmath>
#include <thread>
#include <vector>

#include "imdd/config.hpp"
#include "imdd/shaping.hpp"
#include "imdd/sim.hpp"

namespace imdd {

/// One sweep row: variant performance at one SNR point.
struct SweepPoint {
  double snr_el_db = 0.0;
  FilterVariant variant = FilterVariant::matched;
  double d_norm = 0.0;
  double esr_analytic = 0.0;   // linear, not dB
  double esr_empirical = 0.0;  // linear
  double rate_bpcu = 0.0;
  double sigma_eta2 = 0.0;
  std::uint64_t seed = 0;
};

/// Transmitter design for one SNR target: the shaped span and the noise
/// variance realizing the target, found by iterating
/// span -> signal statistics -> noise variance -> span to a fixed point
/// (the two are coupled because the receive power depends on the shaped
/// alphabet). Deterministic; starts from the full span.
struct TransmitterDesign {
  double d_norm = 1.0;
  double sigma_eta2 = 0.0;
  double esr_analytic = 0.0;
  Constellation breve;
};

inline TransmitterDesign design_transmitter(const StatsKernel& kr, int order, double p_tx_opt,
                                            double snr_el_db, FilterVariant variant) {
  const bool exact_objective = variant == FilterVariant::matched;
  double d = 1.0;
  double sigma = 0.0;
  for (int iter = 0; iter < 20; ++iter) {
    const Constellation breve = build_pam(order, p_tx_opt, 2.0 * p_tx_opt * d);
    const SymbolMoments m = exact_objective ? moments_of(breve) : taylor_substituted(breve);
    const OutputStats noiseless = output_stats(kr, m, 0.0);
    sigma = calibrate_noise(noiseless, snr_el_db, kr.n_prime, 2);
    const ShapingResult res = exact_objective
                                  ? optimize_span_matched(kr, order, p_tx_opt, sigma)
                                  : optimize_span(kr, order, p_tx_opt, sigma);
    const bool done = std::abs(res.d_norm - d) < 1e-9;
    d = res.d_norm;
    if (done) break;
  }
  TransmitterDesign out;
  out.d_norm = d;
  out.breve = build_pam(order, p_tx_opt, 2.0 * p_tx_opt * d);
  const SymbolMoments m = exact_objective ? moments_of(out.breve) : taylor_substituted(out.breve);
  out.sigma_eta2 = calibrate_noise(output_stats(kr, m, 0.0), snr_el_db, kr.n_prime, 2);
  out.esr_analytic = exact_objective ? matched_esr(kr, out.breve, out.sigma_eta2)
                                     : analytic_esr(kr, out.breve, out.sigma_eta2);
  return out;
}

/// Shaping-only sweep (no Monte-Carlo): per SNR point, the fixed-point
/// span and its analytic ESR under the predistorted-transmitter
/// objective.
inline std::vector<ShapingResult> run_shape(const ExperimentConfig& cfg) {
  cfg.validate();
  const Cir cir = sample_cir(cfg.link, cfg.truncation_rel, cfg.grid_size);
  const int k_obs = cfg.k_observations > 0 ? cfg.k_observations : cir.size();
  const ConvOperator op = build_conv_operator(cir, k_obs, cfg.link.n_os);
  const StatsKernel kr(op);
  const double p = sweep_tx_power(cfg.link, cfg.phi_max_rad);
  std::vector<ShapingResult> out;
  for (double snr : cfg.snr_grid_db) {
    const TransmitterDesign d = design_transmitter(kr, cfg.pam_order, p, snr, FilterVariant::mismatched);
    ShapingResult r;
    r.d_norm = d.d_norm;
    r.esr = d.esr_analytic;
    r.constellation = d.breve;
    out.push_back(std::move(r));
  }
  return out;
}

namespace detail {

inline SweepPoint evaluate_point(const ConvOperator& op, const StatsKernel& kr, const Cir& cir,
                                 const ExperimentConfig& cfg, double snr_db,
                                 const TransmitterDesign& mis_design,
                                 const TransmitterDesign& mat_design, FilterVariant variant,
                                 std::uint64_t seed) {
  SweepPoint pt;
  pt.snr_el_db = snr_db;
  pt.variant = variant;
  pt.seed = seed;

  const TransmitterDesign& des =
      (variant == FilterVariant::matched) ? mat_design : mis_design;
  pt.d_norm = des.d_norm;
  pt.sigma_eta2 = des.sigma_eta2;

  WienerFilter filter;
  switch (variant) {
    case FilterVariant::matched:
      filter = matched_wf(kr, des.breve, des.sigma_eta2);
      pt.esr_analytic = des.esr_analytic;
      break;
    case FilterVariant::mismatched:
      filter = mismatched_wf(kr, des.breve, des.sigma_eta2);
      pt.esr_analytic = des.esr_analytic;
      break;
    case FilterVariant::naive:
      filter = naive_wf(op, des.breve, des.sigma_eta2);
      pt.esr_analytic = naive_model_esr(op, des.breve, des.sigma_eta2);
      break;
  }

  const McResult mc = run_monte_carlo(op, cir, filter, des.breve, des.sigma_eta2, cfg.n_symbols, seed);
  pt.esr_empirical = mc.esr_empirical;
  pt.rate_bpcu = achievable_rate_lb(mc.estimates, mc.symbol_indices, cfg.pam_order, des.breve.variance);
  return pt;
}

}  // namespace detail

/// Full Monte-Carlo sweep. Rows come back in grid order (SNR major,
/// variant minor in the order requested by the config); each (point,
/// variant) task is seeded independently from the master seed, so the
/// output is byte-identical for any thread count.
inline std::vector<SweepPoint> run_sweep(const ExperimentConfig& cfg, int threads = 1) {
  cfg.validate();
  const Cir cir = sample_cir(cfg.link, cfg.truncation_rel, cfg.grid_size);
  const int k_obs = cfg.k_observations > 0 ? cfg.k_observations : cir.size();
  const ConvOperator op = build_conv_operator(cir, k_obs, cfg.link.n_os);
  const StatsKernel kr(op);
  const double p_tx_opt = sweep_tx_power(cfg.link, cfg.phi_max_rad);

  const std::size_t n_snr = cfg.snr_grid_db.size();
  const std::size_t n_var = cfg.filter_variants.size();
  std::vector<SweepPoint> rows(n_snr * n_var);

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= n_snr) return;
      const double snr = cfg.snr_grid_db[i];
      const bool need_mis = std::any_of(cfg.filter_variants.begin(), cfg.filter_variants.end(),
                                        [](FilterVariant v) { return v != FilterVariant::matched; });
      const bool need_mat = std::any_of(cfg.filter_variants.begin(), cfg.filter_variants.end(),
                                        [](FilterVariant v) { return v == FilterVariant::matched; });
      TransmitterDesign mis_design, mat_design;
      if (need_mis)
        mis_design = design_transmitter(kr, cfg.pam_order, p_tx_opt, snr, FilterVariant::mismatched);
      if (need_mat)
        mat_design = design_transmitter(kr, cfg.pam_order, p_tx_opt, snr, FilterVariant::matched);
      for (std::size_t v = 0; v < n_var; ++v) {
        const std::uint64_t seed = derive_seed(cfg.master_seed, i * 8 + v + 1);
        rows[i * n_var + v] = detail::evaluate_point(op, kr, cir, cfg, snr, mis_design,
                                                     mat_design, cfg.filter_variants[v], seed);
      }
    }
  };

  const int n_threads = std::max(1, threads);
  if (n_threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(n_threads));
    for (int t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return rows;
}

}  // namespace imdd
