#pragma once

#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "imdd/config.hpp"
#include "imdd/sweep.hpp"

namespace imdd {

inline std::string csv_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline double to_db(double x) { return 10.0 * std::log10(std::max(x, 1e-30)); }

inline void write_cir_csv(std::ostream& out, const Cir& cir) {
  out << "# schema: imddwf.cir.v1\n";
  out << "# m = " << cir.size() << "\n";
  out << "# sample_period_s = " << csv_num(cir.sample_period_s) << "\n";
  out << "# center_index = " << cir.center_index << "\n";
  out << "index,tap_real,tap_imag,tap_abs\n";
  for (int i = 0; i < cir.size(); ++i) {
    const auto& t = cir.taps[static_cast<std::size_t>(i)];
    out << i << "," << csv_num(t.real()) << "," << csv_num(t.imag()) << ","
        << csv_num(std::abs(t)) << "\n";
  }
}

inline void write_filter_csv(std::ostream& out, const WienerFilter& f) {
  out << "# schema: imddwf.design.v1\n";
  out << "# variant = " << variant_name(f.variant) << "\n";
  out << "# k = " << f.size() << "\n";
  out << "# g_m_real = " << csv_num(f.bias.real()) << "\n";
  out << "# g_m_imag = " << csv_num(f.bias.imag()) << "\n";
  out << "tap_index,g_real,g_imag\n";
  for (int i = 0; i < f.size(); ++i)
    out << i << "," << csv_num(f.taps(i).real()) << "," << csv_num(f.taps(i).imag()) << "\n";
}

inline void write_shape_csv(std::ostream& out, const ExperimentConfig& cfg,
                            const std::vector<ShapingResult>& rows) {
  out << "# schema: imddwf.shape.v1\n";
  out << "# pam_order = " << cfg.pam_order << "\n";
  out << "# length_km = " << csv_num(cfg.link.length_km) << "\n";
  out << "snr_el_db,d_norm,esr_analytic_db\n";
  for (std::size_t i = 0; i < rows.size(); ++i)
    out << csv_num(cfg.snr_grid_db[i]) << "," << csv_num(rows[i].d_norm) << ","
        << csv_num(to_db(rows[i].esr)) << "\n";
}

inline void write_sweep_csv(std::ostream& out, const ExperimentConfig& cfg,
                            const std::vector<SweepPoint>& rows) {
  out << "# schema: imddwf.sweep.v1\n";
  out << "# pam_order = " << cfg.pam_order << "\n";
  out << "# length_km = " << csv_num(cfg.link.length_km) << "\n";
  out << "# n_symbols = " << cfg.n_symbols << "\n";
  out << "# master_seed = " << cfg.master_seed << "\n";
  out << "snr_el_db,variant,d_norm,esr_analytic_db,esr_empirical_db,rate_bpcu,sigma_eta2,seed\n";
  for (const auto& r : rows)
    out << csv_num(r.snr_el_db) << "," << variant_name(r.variant) << "," << csv_num(r.d_norm)
        << "," << csv_num(to_db(r.esr_analytic)) << "," << csv_num(to_db(r.esr_empirical)) << ","
        << csv_num(r.rate_bpcu) << "," << csv_num(r.sigma_eta2) << "," << r.seed << "\n";
}

}  // namespace imdd
