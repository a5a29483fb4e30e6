#pragma once

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "rfpca/errors.hpp"
#include "rfpca/manifold.hpp"
#include "rfpca/types.hpp"

namespace rfpca {

inline constexpr double kIngestProjectionTol = 1e-6;

namespace detail {

inline std::string fmt17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(field);
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_double(const std::string& tok, int row, int col) {
  const char* begin = tok.c_str();
  char* end = nullptr;
  const double v = std::strtod(begin, &end);
  if (end == begin || *end != '\0')
    fail(ErrorKind::ParseError, "cannot parse '" + tok + "' as a number (row " +
                                    std::to_string(row) + ", column " + std::to_string(col) +
                                    ")");
  return v;
}

struct RawTable {
  std::vector<std::string> value_headers;              // headers after id,t
  std::vector<std::string> ids;                        // grouped order of appearance
  std::vector<std::vector<double>> times;              // per group
  std::vector<std::vector<Vec>> values;                // per group, rows of doubles
  bool has_extra = false;                              // trailing extra column present
};

// Shared reader for the id,t,v1..vD formats: groups consecutive rows by
// id, requires ascending t within each group and forbids an id from
// reappearing after another id started. An optional trailing column
// named `extra_last` is parsed along with the values when present.
inline RawTable read_grouped_csv(const std::string& path, const std::string& prefix,
                                 int min_value_cols, const std::string& extra_last = "") {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::IoError, "cannot open " + path);
  RawTable table;
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::ParseError, path + " is empty");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  auto header = split_csv_line(line);
  if (header.size() < static_cast<std::size_t>(2 + min_value_cols) || header[0] != "id" ||
      header[1] != "t")
    fail(ErrorKind::ParseError, "expected header id,t," + prefix + "1,... in " + path);
  for (std::size_t c = 2; c < header.size(); ++c) {
    if (!extra_last.empty() && c + 1 == header.size() && header[c] == extra_last) {
      table.has_extra = true;
      break;
    }
    if (header[c] != prefix + std::to_string(c - 1))
      fail(ErrorKind::ParseError, "unexpected column header '" + header[c] + "' (column " +
                                      std::to_string(c + 1) + ")");
    table.value_headers.push_back(header[c]);
  }
  const std::size_t ncols = header.size();
  int row = 1;
  std::vector<std::string> seen_ids;
  while (std::getline(in, line)) {
    ++row;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    auto tok = split_csv_line(line);
    if (tok.size() != ncols)
      fail(ErrorKind::ParseError, "row " + std::to_string(row) + " has " +
                                      std::to_string(tok.size()) + " fields, expected " +
                                      std::to_string(ncols));
    const std::string& id = tok[0];
    if (table.ids.empty() || table.ids.back() != id) {
      for (const auto& prev : seen_ids)
        if (prev == id)
          fail(ErrorKind::ParseError,
               "rows for id '" + id + "' are not contiguous (row " + std::to_string(row) + ")");
      seen_ids.push_back(id);
      table.ids.push_back(id);
      table.times.emplace_back();
      table.values.emplace_back();
    }
    const double t = parse_double(tok[1], row, 2);
    if (!table.times.back().empty() && t <= table.times.back().back())
      fail(ErrorKind::ParseError, "times for id '" + id + "' are not strictly increasing (row " +
                                      std::to_string(row) + ")");
    table.times.back().push_back(t);
    Vec vals(ncols - 2);
    for (std::size_t c = 2; c < ncols; ++c)
      vals[c - 2] = parse_double(tok[c], row, static_cast<int>(c) + 1);
    table.values.back().push_back(std::move(vals));
  }
  if (table.ids.empty()) fail(ErrorKind::ParseError, path + " contains no data rows");
  return table;
}

inline std::string grid_to_string(const std::vector<double>& g) {
  std::string s = "[";
  for (std::size_t j = 0; j < g.size(); ++j) {
    if (j) s += ", ";
    s += fmt17(g[j]);
  }
  return s + "]";
}

}  // namespace detail

/// Reads a trajectory CSV (header id,t,x1,...,xD) and validates it
/// against the manifold: a shared uniform grid over [0,1], and points
/// within 1e-6 of the manifold, which are projected onto it.
inline std::vector<TrajectorySample> ingest_trajectories_csv(const std::string& path,
                                                             const ManifoldSpec& spec) {
  auto table = detail::read_grouped_csv(path, "x", 1);
  if (static_cast<int>(table.value_headers.size()) != spec.ambient_dim)
    fail(ErrorKind::ParseError, "file has " + std::to_string(table.value_headers.size()) +
                                    " coordinate columns, manifold needs " +
                                    std::to_string(spec.ambient_dim));
  const auto& grid = table.times.front();
  if (grid.size() < 2)
    fail(ErrorKind::GridMismatch, "subject " + table.ids.front() + " has fewer than 2 times");
  for (std::size_t g = 1; g < table.ids.size(); ++g)
    if (!grids_equal(table.times[g], grid))
      fail(ErrorKind::GridMismatch,
           "subjects " + table.ids.front() + " and " + table.ids[g] + " use different grids " +
               detail::grid_to_string(grid) + " vs " + detail::grid_to_string(table.times[g]));
  const auto expected = uniform_grid(static_cast<int>(grid.size()));
  if (!grids_equal(grid, expected))
    fail(ErrorKind::GridMismatch,
         "grid must be uniform over [0,1] with t_j = (j-1)/(m-1); got " +
             detail::grid_to_string(grid));

  std::vector<TrajectorySample> samples;
  samples.reserve(table.ids.size());
  for (std::size_t g = 0; g < table.ids.size(); ++g) {
    TrajectorySample s{table.ids[g], expected, {}};
    s.points.reserve(table.values[g].size());
    for (std::size_t j = 0; j < table.values[g].size(); ++j) {
      const double dev = manifold_deviation(spec, table.values[g][j]);
      if (dev > kIngestProjectionTol)
        fail(ErrorKind::OffManifold, "id '" + table.ids[g] + "' at t = " +
                                         detail::fmt17(table.times[g][j]) +
                                         " deviates from the manifold by " +
                                         detail::fmt17(dev));
      s.points.push_back(project_to_manifold(spec, table.values[g][j]));
    }
    samples.push_back(std::move(s));
  }
  return samples;
}

inline void write_trajectories_csv(const std::string& path,
                                   const std::vector<TrajectorySample>& samples) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path);
  const std::size_t d0 = samples.empty() ? 0 : samples.front().points.front().coords.size();
  out << "id,t";
  for (std::size_t c = 1; c <= d0; ++c) out << ",x" << c;
  out << "\n";
  for (const auto& s : samples)
    for (std::size_t j = 0; j < s.grid.size(); ++j) {
      out << s.subject_id << ',' << detail::fmt17(s.grid[j]);
      for (double v : s.points[j].coords) out << ',' << detail::fmt17(v);
      out << "\n";
    }
  if (!out.good()) fail(ErrorKind::IoError, "write to " + path + " failed");
}

/// Counts CSV: header id,t,c1,...,cJ; nonnegative rows with positive sums.
inline std::vector<CountPanel> read_counts_csv(const std::string& path) {
  auto table = detail::read_grouped_csv(path, "c", 1);
  std::vector<CountPanel> panels;
  panels.reserve(table.ids.size());
  for (std::size_t g = 0; g < table.ids.size(); ++g) {
    CountPanel p{table.ids[g], table.times[g], table.values[g]};
    for (std::size_t j = 0; j < p.counts.size(); ++j) {
      double sum = 0.0;
      for (double c : p.counts[j]) {
        if (c < 0.0)
          fail(ErrorKind::ParseError,
               "negative count for id '" + p.subject_id + "' at t = " +
                   detail::fmt17(p.times[j]));
        sum += c;
      }
      if (sum <= 0.0)
        fail(ErrorKind::ZeroRowSum, "id '" + p.subject_id + "' has zero total count at t = " +
                                        detail::fmt17(p.times[j]));
    }
    panels.push_back(std::move(p));
  }
  return panels;
}

/// Proportions CSV: header id,t,y1,...,yJ, with an optional trailing
/// in_orthant column written by reconstruction reports.
inline void write_proportions_csv(const std::string& path,
                                  const std::vector<CompositionCurve>& curves,
                                  const std::vector<std::vector<bool>>* in_orthant = nullptr) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::IoError, "cannot write " + path);
  const std::size_t nj = curves.empty() ? 0 : curves.front().proportions.front().size();
  out << "id,t";
  for (std::size_t c = 1; c <= nj; ++c) out << ",y" << c;
  if (in_orthant) out << ",in_orthant";
  out << "\n";
  for (std::size_t g = 0; g < curves.size(); ++g) {
    const auto& curve = curves[g];
    for (std::size_t j = 0; j < curve.times.size(); ++j) {
      out << curve.subject_id << ',' << detail::fmt17(curve.times[j]);
      for (double v : curve.proportions[j]) out << ',' << detail::fmt17(v);
      if (in_orthant) out << ',' << ((*in_orthant)[g][j] ? 1 : 0);
      out << "\n";
    }
  }
  if (!out.good()) fail(ErrorKind::IoError, "write to " + path + " failed");
}

inline std::vector<CompositionCurve> read_proportions_csv(const std::string& path) {
  auto table = detail::read_grouped_csv(path, "y", 1, "in_orthant");
  std::vector<CompositionCurve> curves;
  curves.reserve(table.ids.size());
  for (std::size_t g = 0; g < table.ids.size(); ++g) {
    CompositionCurve c{table.ids[g], table.times[g], {}};
    c.proportions.reserve(table.values[g].size());
    for (auto& row : table.values[g]) {
      if (table.has_extra) row.pop_back();
      double sum = 0.0;
      for (double v : row) sum += v;
      if (std::abs(sum - 1.0) > 1e-9)
        fail(ErrorKind::ParseError,
             "proportions for id '" + c.subject_id + "' sum to " + detail::fmt17(sum));
      c.proportions.push_back(std::move(row));
    }
    curves.push_back(std::move(c));
  }
  return curves;
}

}  // namespace rfpca
