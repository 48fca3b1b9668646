#include "mfc/harness/io.hpp"

#include <fstream>
#include <stdexcept>

#include <boost/algorithm/string.hpp>
#include <fmt/format.h>

#include "mfc/policy.hpp"

namespace mfc::harness {

std::string format_real(double v) {
  std::string s = fmt::format("{}", v);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_results_csv(const std::filesystem::path& path, const std::vector<ResultRow>& rows) {
  auto out = open_out(path);
  out << kResultsHeader << '\n';
  for (const auto& r : rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{},{}\n", r.seed, r.n, format_real(r.v_n_r), format_real(r.v_n_c),
                       format_real(r.v_inf_r), format_real(r.v_inf_c), format_real(r.error_pct), format_real(r.zeta),
                       format_real(r.runtime_s), r.error_abs ? 1 : 0);
  }
}

std::vector<ResultRow> read_results_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path.string());
  std::string line;
  if (!std::getline(in, line) || line != kResultsHeader) throw std::runtime_error("unexpected results header");
  std::vector<ResultRow> rows;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> f;
    boost::algorithm::split(f, line, boost::algorithm::is_any_of(","));
    if (f.size() != 10) throw std::runtime_error("malformed results row: " + line);
    ResultRow r;
    r.seed = std::stoull(f[0]);
    r.n = std::stoull(f[1]);
    r.v_n_r = std::stod(f[2]);
    r.v_n_c = std::stod(f[3]);
    r.v_inf_r = std::stod(f[4]);
    r.v_inf_c = std::stod(f[5]);
    r.error_pct = std::stod(f[6]);
    r.zeta = std::stod(f[7]);
    r.runtime_s = std::stod(f[8]);
    r.error_abs = f[9] == "1";
    rows.push_back(r);
  }
  return rows;
}

void write_trace_csv(const std::filesystem::path& path, const SolverTrace& trace, bool record_timing) {
  auto out = open_out(path);
  out << kTraceHeader << '\n';
  for (const auto& row : trace.rows) {
    out << fmt::format("{},{},{},{},{},{},{},{},{}\n", row.j, format_real(row.lambda), format_real(row.w_l1),
                       format_real(row.v_hat_c), format_real(row.v_inf_r), format_real(row.v_inf_c),
                       format_real(row.phi.max_abs()), format_real(lipschitz_constant(row.phi)),
                       format_real(record_timing ? row.wall_s : 0.0));
  }
}

}  // namespace mfc::harness
