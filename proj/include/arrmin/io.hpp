// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef ARRMIN_IO_HPP_
#define ARRMIN_IO_HPP_

#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <utility>
#include <vector>

#include <json.hpp>

#include "arrmin/core.hpp"
#include "arrmin/distributions.hpp"

namespace arrmin {

namespace detail {

inline std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::stringstream ss(line);
  while (std::getline(ss, field, ',')) {
    const auto first = field.find_first_not_of(" \t\r");
    const auto last = field.find_last_not_of(" \t\r");
    out.push_back(first == std::string::npos ? std::string()
                                             : field.substr(first, last - first + 1));
  }
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

inline double parse_double(const std::string& token, int line_no, const char* what) {
  double v = 0.0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    throw ValidationError("line " + std::to_string(line_no) + ": cannot parse " + what +
                          " from '" + token + "'");
  if (!std::isfinite(v))
    throw ValidationError("line " + std::to_string(line_no) + ": non-finite " + what);
  return v;
}

inline long long parse_int(const std::string& token, int line_no, const char* what) {
  long long v = 0;
  const char* begin = token.data();
  const char* end = begin + token.size();
  auto [ptr, ec] = std::from_chars(begin, end, v);
  if (ec != std::errc() || ptr != end)
    throw ValidationError("line " + std::to_string(line_no) + ": cannot parse " + what +
                          " from '" + token + "'");
  return v;
}

inline std::vector<std::string> read_lines(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) lines.push_back(line);
  return lines;
}

inline bool blank(const std::string& line) {
  return line.find_first_not_of(" \t\r") == std::string::npos;
}

inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  (void)ec;
  return std::string(buf, ptr);
}

}  // namespace detail

struct LoadedDataset {
  Dataset dataset;
  std::vector<long long> source_ids;  // original id column of each kept point
  int duplicates_dropped = 0;
};

/// Reads `id,x1,...,xd` CSV. Rows are validated (finite, >= 0), exact
/// duplicate coordinate rows are dropped keeping the first, and ids are
/// reassigned to row order; the original id column is kept as a map.
inline LoadedDataset load_dataset(const std::string& path) {
  const std::vector<std::string> lines = detail::read_lines(path);
  if (lines.empty() || detail::blank(lines[0]))
    throw ValidationError("empty dataset file: " + path);
  const auto header = detail::split_csv_line(lines[0]);
  if (header.size() < 2 || header[0] != "id")
    throw ValidationError("dataset header must be 'id,x1,...,xd'");
  const std::size_t d = header.size() - 1;

  std::vector<std::vector<double>> rows;
  std::vector<long long> row_source;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (detail::blank(lines[li])) continue;
    const int line_no = static_cast<int>(li) + 1;
    const auto tokens = detail::split_csv_line(lines[li]);
    if (tokens.size() != d + 1)
      throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(d + 1) + " fields, got " +
                            std::to_string(tokens.size()));
    row_source.push_back(detail::parse_int(tokens[0], line_no, "id"));
    std::vector<double> coords(d);
    for (std::size_t c = 0; c < d; ++c) {
      coords[c] = detail::parse_double(tokens[c + 1], line_no, "coordinate");
      if (coords[c] < 0.0)
        throw ValidationError("line " + std::to_string(line_no) + ": negative coordinate");
    }
    rows.push_back(std::move(coords));
  }
  if (rows.empty()) throw ValidationError("dataset file has no data rows: " + path);

  // Re-run the dedup bookkeeping to keep the source-id map aligned.
  LoadedDataset out;
  std::vector<std::vector<double>> rows_copy = rows;
  out.dataset = Dataset::from_rows(std::move(rows_copy), &out.duplicates_dropped);
  std::size_t next = 0;
  for (std::size_t i = 0; i < rows.size() && next < out.dataset.points().size(); ++i) {
    if (out.dataset.point(static_cast<int>(next)).coords == rows[i]) {
      out.source_ids.push_back(row_source[i]);
      ++next;
    }
  }
  return out;
}

/// Reads `prob,u1,...,un` CSV into a discrete distribution of tabular
/// utilities; n must match the dataset size. Probabilities summing to
/// [0.999, 1.001] are renormalized, anything else is rejected.
inline DiscreteDistribution load_utility_matrix(const std::string& path,
                                                const Dataset& dataset) {
  const std::vector<std::string> lines = detail::read_lines(path);
  if (lines.empty() || detail::blank(lines[0]))
    throw ValidationError("empty utility matrix file: " + path);
  const auto header = detail::split_csv_line(lines[0]);
  if (header.size() < 2 || header[0] != "prob")
    throw ValidationError("utility matrix header must be 'prob,u1,...,un'");
  const std::size_t n = header.size() - 1;
  if (n != static_cast<std::size_t>(dataset.size()))
    throw ValidationError("utility matrix width (" + std::to_string(n) +
                          ") does not match dataset size (" +
                          std::to_string(dataset.size()) + ")");

  std::vector<double> probs;
  std::vector<std::vector<double>> tables;
  for (std::size_t li = 1; li < lines.size(); ++li) {
    if (detail::blank(lines[li])) continue;
    const int line_no = static_cast<int>(li) + 1;
    const auto tokens = detail::split_csv_line(lines[li]);
    if (tokens.size() != n + 1)
      throw ValidationError("line " + std::to_string(line_no) + ": expected " +
                            std::to_string(n + 1) + " fields, got " +
                            std::to_string(tokens.size()));
    probs.push_back(detail::parse_double(tokens[0], line_no, "probability"));
    std::vector<double> utilities(n);
    for (std::size_t c = 0; c < n; ++c) {
      utilities[c] = detail::parse_double(tokens[c + 1], line_no, "utility");
      if (utilities[c] < 0.0 || utilities[c] > 1.0)
        throw ValidationError("line " + std::to_string(line_no) +
                              ": utility outside [0, 1]");
    }
    tables.push_back(std::move(utilities));
  }
  if (probs.empty()) throw ValidationError("utility matrix has no data rows: " + path);

  double sum = 0.0;
  for (double p : probs) sum += p;
  if (sum < 0.999 || sum > 1.001)
    throw ValidationError("utility matrix probabilities sum to " + std::to_string(sum) +
                          ", expected 1");
  std::vector<DiscreteDistribution::Entry> entries;
  entries.reserve(probs.size());
  for (std::size_t i = 0; i < probs.size(); ++i)
    entries.push_back({UtilityFunction::tabular(std::move(tables[i])), probs[i] / sum});
  return DiscreteDistribution(std::move(entries));
}

enum class SyntheticKind { kUniform, kCorrelated, kAnticorrelated };

inline SyntheticKind synthetic_kind_from_string(const std::string& s) {
  if (s == "uniform") return SyntheticKind::kUniform;
  if (s == "correlated") return SyntheticKind::kCorrelated;
  if (s == "anticorrelated") return SyntheticKind::kAnticorrelated;
  throw ValidationError("unknown synthetic kind: " + s +
                        " (expected uniform|correlated|anticorrelated)");
}

/// Seeded synthetic data. uniform: i.i.d. coordinates. correlated: one base
/// value per point plus +-0.05 per-dimension jitter. anticorrelated: points
/// recentered onto the plane sum(x) = d/2, then jittered; everything is
/// clamped to [0, 1].
inline Dataset generate_synthetic(int n, int d, SyntheticKind kind, std::uint64_t seed,
                                  int* duplicates_dropped = nullptr) {
  if (n < 1 || d < 1) throw PreconditionError("synthetic generation needs n >= 1, d >= 1");
  Rng rng(seed);
  auto jitter = [&] { return (rng.uniform01() * 2.0 - 1.0) * 0.05; };
  auto clamp01 = [](double v) { return std::min(1.0, std::max(0.0, v)); };
  std::vector<std::vector<double>> rows;
  rows.reserve(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    std::vector<double> row(static_cast<std::size_t>(d));
    switch (kind) {
      case SyntheticKind::kUniform:
        for (double& v : row) v = rng.uniform01();
        break;
      case SyntheticKind::kCorrelated: {
        const double base = rng.uniform01();
        for (double& v : row) v = clamp01(base + jitter());
        break;
      }
      case SyntheticKind::kAnticorrelated: {
        double mean = 0.0;
        for (double& v : row) {
          v = rng.uniform01();
          mean += v;
        }
        mean /= static_cast<double>(d);
        for (double& v : row) v = clamp01(v - mean + 0.5 + jitter());
        break;
      }
    }
    rows.push_back(std::move(row));
  }
  return Dataset::from_rows(std::move(rows), duplicates_dropped);
}

inline void write_dataset_csv(const Dataset& dataset, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write file: " + path);
  out << "id";
  for (int c = 0; c < dataset.dim(); ++c) out << ",x" << (c + 1);
  out << "\n";
  for (const Point& p : dataset.points()) {
    out << p.id;
    for (double v : p.coords) out << ',' << detail::format_double(v);
    out << "\n";
  }
  if (!out) throw ValidationError("write failed: " + path);
}

/// Gaussian-mixture weight distribution from a JSON config:
/// {"components": [{"mean": [...], "stddev": [...], "weight": w}, ...]}
inline ContinuousLinearSpec load_gmm_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("invalid JSON in " + path + ": " + e.what());
  }
  if (!j.is_object() || !j.contains("components") || !j["components"].is_array())
    throw ValidationError("gmm config must be an object with a 'components' array");
  std::vector<ContinuousLinearSpec::GmmComponent> components;
  for (const auto& c : j["components"]) {
    ContinuousLinearSpec::GmmComponent comp;
    try {
      comp.mean = c.at("mean").get<std::vector<double>>();
      comp.stddev = c.at("stddev").get<std::vector<double>>();
      comp.weight = c.at("weight").get<double>();
    } catch (const nlohmann::json::exception& e) {
      throw ValidationError("bad gmm component in " + path + ": " + e.what());
    }
    components.push_back(std::move(comp));
  }
  return ContinuousLinearSpec::gmm(std::move(components));
}

}  // namespace arrmin

#endif  // ARRMIN_IO_HPP_
