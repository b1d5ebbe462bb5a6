#pragma once

#include <string>
#include <vector>

#include "rapg/solvers.hpp"

namespace rapg::bench {

/// Every CSV starts with "# <schema> v<version> key=value ..." followed by a header row.
inline constexpr int kCsvVersion = 1;

/// Per-iteration trace without wall-clock data, so reruns are byte-identical.
void write_trace_csv(const std::string& path, const RunRecord& rec, const std::string& meta);

/// Wall-clock seconds per iteration.
void write_timing_csv(const std::string& path, const RunRecord& rec, const std::string& meta);

void write_safeguard_csv(const std::string& path, const RunRecord& rec, const std::string& meta);

/// Generic table; `rows` are preformatted cells.
void write_table_csv(const std::string& path, const std::string& schema, const std::string& meta,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);

/// Two-column series for plotting.
void write_series_csv(const std::string& path, const std::string& meta, const std::string& xname,
                      const std::string& yname, const std::vector<double>& x,
                      const std::vector<double>& y);

/// Shortest round-trip representation.
std::string fmt(double v);

}  // namespace rapg::bench
