#include "rapg/bench/csv.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>

#include "rapg/errors.hpp"

namespace rapg::bench {
namespace {

std::ofstream open(const std::string& path) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  return out;
}

void preamble(std::ofstream& out, const std::string& schema, const std::string& meta) {
  out << "# " << schema << " v" << kCsvVersion;
  if (!meta.empty()) out << ' ' << meta;
  out << '\n';
}

}  // namespace

std::string fmt(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void write_trace_csv(const std::string& path, const RunRecord& rec, const std::string& meta) {
  auto out = open(path);
  preamble(out, "rapg-trace", meta);
  out << "k,F,eta_norm,A,beta,gamma,tau,L,restarts,safeguard,prox_solves,prox_residual,prox_iters\n";
  for (const auto& r : rec.rows) {
    out << r.k << ',' << fmt(r.F) << ',' << fmt(r.eta_norm) << ',' << fmt(r.A) << ','
        << fmt(r.beta) << ',' << fmt(r.gamma) << ',' << fmt(r.tau) << ',' << fmt(r.L) << ','
        << r.restarts << ',' << (r.safeguard ? 1 : 0) << ',' << r.prox_solves << ','
        << fmt(r.prox_residual) << ',' << r.prox_iters << '\n';
  }
}

void write_timing_csv(const std::string& path, const RunRecord& rec, const std::string& meta) {
  auto out = open(path);
  preamble(out, "rapg-timing", meta);
  out << "k,elapsed_s\n";
  for (const auto& r : rec.rows) out << r.k << ',' << fmt(r.elapsed_s) << '\n';
}

void write_safeguard_csv(const std::string& path, const RunRecord& rec, const std::string& meta) {
  auto out = open(path);
  preamble(out, "rapg-safeguard", meta);
  out << "k,triggered,alpha,ls_iters,L_escalations,L_before,L_after,F_xtilde,F_candidate,F_xk,eta_norm,N_next\n";
  for (const auto& e : rec.safeguards) {
    out << e.k << ',' << (e.triggered ? 1 : 0) << ',' << fmt(e.alpha) << ',' << e.ls_iters << ','
        << e.L_escalations << ',' << fmt(e.L_before) << ',' << fmt(e.L_after) << ','
        << fmt(e.F_xtilde) << ',' << fmt(e.F_candidate) << ',' << fmt(e.F_xk) << ','
        << fmt(e.eta_norm) << ',' << e.N_next << '\n';
  }
}

void write_table_csv(const std::string& path, const std::string& schema, const std::string& meta,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  auto out = open(path);
  preamble(out, schema, meta);
  for (std::size_t i = 0; i < header.size(); ++i) out << (i ? "," : "") << header[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i) out << (i ? "," : "") << row[i];
    out << '\n';
  }
}

void write_series_csv(const std::string& path, const std::string& meta, const std::string& xname,
                      const std::string& yname, const std::vector<double>& x,
                      const std::vector<double>& y) {
  auto out = open(path);
  preamble(out, "rapg-series", meta);
  out << xname << ',' << yname << '\n';
  for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) out << fmt(x[i]) << ',' << fmt(y[i]) << '\n';
}

}  // namespace rapg::bench
