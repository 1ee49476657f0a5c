#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "covfield/covariance.hpp"
#include "covfield/interpolation.hpp"
#include "covfield/sphere.hpp"

namespace covfield::io {

/// Shortest text that parses back to the same double (17 significant digits).
std::string format_double(double v);

/// Numeric CSV with a header row. Cells that are not numbers are rejected on read,
/// except "nan", which marks an undefined statistic.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;

  std::size_t column(const std::string& name) const;  // throws IoError if absent
};

void write_table(const std::filesystem::path& path, const Table& table);
Table read_table(const std::filesystem::path& path);
std::string table_to_string(const Table& table);

// x,y,z
void write_points(const std::filesystem::path& path, std::span<const UnitPoint> points);
std::vector<UnitPoint> read_points(const std::filesystem::path& path);

// single column f
void write_pmf(const std::filesystem::path& path, const Pmf& f);
Pmf read_pmf(const std::filesystem::path& path);

// qx,qy,qz,a11,a12,a22 with operators in tangent_frame(q)
void write_cov_field(const std::filesystem::path& path, const CovField& field);
CovField read_cov_field(const std::filesystem::path& path);

struct ProblemFile {
  InterpProblem problem;
  SolverConfig solver;
};

/// JSON with domain (k x 3), obs (n x 3), endpoints (m x k), alpha (m), invariant, weight and
/// an optional solver {max_iter, tol, restarts, seed}. weight defaults per functional.
ProblemFile read_problem(const std::filesystem::path& path);
void write_problem(const std::filesystem::path& path, const ProblemFile& file);

void write_result(const std::filesystem::path& path, const InterpResult& result);
void write_trace(const std::filesystem::path& path, std::span<const TraceRow> trace);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace covfield::io
