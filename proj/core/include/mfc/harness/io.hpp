#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "mfc/npgpd.hpp"

namespace mfc::harness {

/// One (seed, N) evaluation cell. error_pct is |v_N_r - v_inf_r| / |v_inf_r| * 100,
/// or the plain absolute difference with error_abs set when |v_inf_r| <= 1e-9.
struct ResultRow {
  std::uint64_t seed = 0;
  std::size_t n = 0;
  double v_n_r = 0.0;
  double v_n_c = 0.0;
  double v_inf_r = 0.0;
  double v_inf_c = 0.0;
  double error_pct = 0.0;
  double zeta = 0.0;
  double runtime_s = 0.0;
  bool error_abs = false;

  friend bool operator==(const ResultRow&, const ResultRow&) = default;
};

inline constexpr const char* kResultsHeader = "seed,N,v_N_r,v_N_c,v_inf_r,v_inf_c,error_pct,zeta,runtime_s,error_abs";
inline constexpr const char* kTraceHeader = "j,lambda,w_l1,v_hat_c,v_inf_r,v_inf_c,phi_max_abs,l_q,wall_s";

/// Shortest round-trip decimal form, always with a decimal point or exponent
/// ("5.0", "0.1", "1e-07", "nan").
std::string format_real(double v);

void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows);
std::vector<ResultRow> read_results_csv(const std::filesystem::path& path);

/// wall_s is written as 0 unless record_timing.
void write_trace_csv(const std::filesystem::path& path, const SolverTrace& trace, bool record_timing);

}  // namespace mfc::harness
