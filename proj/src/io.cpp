#include "covfield/io.hpp"

#include <json.hpp>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "covfield/error.hpp"

namespace covfield::io {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

[[noreturn]] void fail(const fs::path& path, const std::string& what) {
  throw Error(ErrorKind::IoError, path.string() + ": " + what);
}

std::vector<std::string> split(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream in(line);
  while (std::getline(in, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? "" : cell.substr(b, e - b + 1));
  }
  if (!line.empty() && line.back() == ',') cells.emplace_back();
  return cells;
}

void require_columns(const Table& t, const fs::path& path, std::initializer_list<const char*> names) {
  if (t.header.size() != names.size()) fail(path, "unexpected column count");
  std::size_t c = 0;
  for (const char* n : names) {
    if (t.header[c++] != n) fail(path, std::string("expected column '") + n + "'");
  }
}

Eigen::Vector3d vec3(const json& row, const fs::path& path, const char* field) {
  if (!row.is_array() || row.size() != 3) fail(path, std::string(field) + " rows must have 3 entries");
  return {row[0].get<double>(), row[1].get<double>(), row[2].get<double>()};
}

std::vector<UnitPoint> points_field(const json& doc, const char* field, const fs::path& path) {
  if (!doc.contains(field) || !doc[field].is_array()) fail(path, std::string("missing array '") + field + "'");
  std::vector<UnitPoint> pts;
  for (const auto& row : doc[field]) pts.emplace_back(vec3(row, path, field));
  return pts;
}

json points_json(std::span<const UnitPoint> pts) {
  json a = json::array();
  for (const auto& p : pts) a.push_back({p.x(), p.y(), p.z()});
  return a;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::size_t Table::column(const std::string& name) const {
  for (std::size_t c = 0; c < header.size(); ++c) {
    if (header[c] == name) return c;
  }
  throw Error(ErrorKind::IoError, "no column named '" + name + "'");
}

std::string table_to_string(const Table& table) {
  std::string out;
  for (std::size_t c = 0; c < table.header.size(); ++c) {
    if (c) out += ',';
    out += table.header[c];
  }
  out += '\n';
  for (const auto& row : table.rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += format_double(row[c]);
    }
    out += '\n';
  }
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    fs::create_directories(path.parent_path(), ec);
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(path, "cannot open for writing");
  out << text;
  if (!out) fail(path, "write failed");
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_table(const fs::path& path, const Table& table) {
  for (const auto& row : table.rows) {
    if (row.size() != table.header.size()) fail(path, "row width does not match the header");
  }
  write_text(path, table_to_string(table));
}

Table read_table(const fs::path& path) {
  std::istringstream in(read_text(path));
  Table t;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      fail(path, "line " + std::to_string(lineno) + " has " + std::to_string(cells.size()) +
                     " cells, header has " + std::to_string(t.header.size()));
    }
    std::vector<double> row;
    for (const auto& cell : cells) {
      char* end = nullptr;
      errno = 0;
      const double v = std::strtod(cell.c_str(), &end);
      if (cell.empty() || *end != '\0' || errno == ERANGE) {
        fail(path, "line " + std::to_string(lineno) + ": '" + cell + "' is not a number");
      }
      row.push_back(v);
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) fail(path, "empty file");
  return t;
}

void write_points(const fs::path& path, std::span<const UnitPoint> points) {
  Table t{{"x", "y", "z"}, {}};
  for (const auto& p : points) t.rows.push_back({p.x(), p.y(), p.z()});
  write_table(path, t);
}

std::vector<UnitPoint> read_points(const fs::path& path) {
  const Table t = read_table(path);
  require_columns(t, path, {"x", "y", "z"});
  std::vector<UnitPoint> pts;
  for (const auto& r : t.rows) pts.emplace_back(r[0], r[1], r[2]);
  return pts;
}

void write_pmf(const fs::path& path, const Pmf& f) {
  Table t{{"f"}, {}};
  for (double w : f.weights()) t.rows.push_back({w});
  write_table(path, t);
}

Pmf read_pmf(const fs::path& path) {
  const Table t = read_table(path);
  require_columns(t, path, {"f"});
  std::vector<double> w;
  for (const auto& r : t.rows) w.push_back(r[0]);
  return Pmf(std::move(w));
}

void write_cov_field(const fs::path& path, const CovField& field) {
  if (field.obs.size() != field.ops.size()) fail(path, "field has mismatched obs/ops");
  Table t{{"qx", "qy", "qz", "a11", "a12", "a22"}, {}};
  for (std::size_t j = 0; j < field.obs.size(); ++j) {
    const auto& q = field.obs[j];
    const auto& o = field.ops[j];
    t.rows.push_back({q.x(), q.y(), q.z(), o.a11, o.a12, o.a22});
  }
  write_table(path, t);
}

CovField read_cov_field(const fs::path& path) {
  const Table t = read_table(path);
  require_columns(t, path, {"qx", "qy", "qz", "a11", "a12", "a22"});
  CovField field;
  for (const auto& r : t.rows) {
    field.obs.emplace_back(r[0], r[1], r[2]);
    field.ops.push_back({r[3], r[4], r[5]});
  }
  return field;
}

ProblemFile read_problem(const fs::path& path) {
  json doc;
  try {
    doc = json::parse(read_text(path));
  } catch (const json::exception& e) {
    fail(path, e.what());
  }
  ProblemFile pf;
  try {
    InterpProblem& p = pf.problem;
    p.domain = points_field(doc, "domain", path);
    p.obs = points_field(doc, "obs", path);
    for (const auto& row : doc.at("endpoints")) p.endpoints.emplace_back(row.get<std::vector<double>>());
    p.alpha = doc.at("alpha").get<std::vector<double>>();
    p.invariant = parse_invariant_kind(doc.at("invariant").get<std::string>());
    p.weight = doc.contains("weight") ? parse_weight(doc["weight"].get<std::string>())
                                      : default_weight(p.invariant);
    if (doc.contains("solver")) {
      const json& s = doc["solver"];
      pf.solver.max_iter = s.value("max_iter", pf.solver.max_iter);
      pf.solver.tol = s.value("tol", pf.solver.tol);
      pf.solver.restarts = s.value("restarts", pf.solver.restarts);
      pf.solver.seed = s.value("seed", pf.solver.seed);
    }
  } catch (const json::exception& e) {
    fail(path, e.what());
  } catch (const Error& e) {
    if (e.kind() == ErrorKind::IoError) throw;
    throw Error(e.kind(), path.string() + ": " + e.what());
  }
  return pf;
}

void write_problem(const fs::path& path, const ProblemFile& pf) {
  const InterpProblem& p = pf.problem;
  json doc;
  doc["domain"] = points_json(p.domain);
  doc["obs"] = points_json(p.obs);
  doc["endpoints"] = json::array();
  for (const auto& f : p.endpoints) doc["endpoints"].push_back(f.vec());
  doc["alpha"] = p.alpha;
  doc["invariant"] = std::string(to_string(p.invariant));
  doc["weight"] = std::string(to_string(p.weight));
  doc["solver"] = {{"max_iter", pf.solver.max_iter},
                   {"tol", pf.solver.tol},
                   {"restarts", pf.solver.restarts},
                   {"seed", pf.solver.seed}};
  write_text(path, doc.dump(2) + "\n");
}

void write_result(const fs::path& path, const InterpResult& r) {
  json doc;
  doc["f_hat"] = r.f_hat.vec();
  doc["objective"] = r.objective;
  doc["iterations"] = r.iterations;
  doc["converged"] = r.converged;
  doc["restarts_used"] = r.restarts_used;
  doc["restart_objectives"] = r.restart_objectives;  // inf serializes as null
  write_text(path, doc.dump(2) + "\n");
}

void write_trace(const fs::path& path, std::span<const TraceRow> trace) {
  Table t{{"iter", "objective", "step", "grad_norm"}, {}};
  for (const auto& row : trace) t.rows.push_back({double(row.iter), row.objective, row.step, row.grad_norm});
  write_table(path, t);
}

}  // namespace covfield::io
