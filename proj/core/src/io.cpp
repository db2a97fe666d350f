#include "spqf/io.hpp"

#include <cmath>
#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>

namespace spqf {

nlohmann::json matrix_to_json(const Operator& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      row.push_back({m(i, j).real(), m(i, j).imag()});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

Operator matrix_from_json(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(what + ": expected a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  Operator m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError(what + ": ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      const auto& cell = row[static_cast<std::size_t>(c)];
      if (cell.is_number()) {
        m(i, c) = Complex{cell.get<double>(), 0.0};
      } else if (cell.is_array() && cell.size() == 2) {
        m(i, c) = Complex{cell[0].get<double>(), cell[1].get<double>()};
      } else {
        throw ConfigError(what + ": matrix entries must be numbers or [re, im]");
      }
    }
  }
  return m;
}

nlohmann::json real_matrix_to_json(const RealMatrix& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

RealMatrix real_matrix_from_json(const nlohmann::json& j,
                                 const std::string& what) {
  if (!j.is_array() || j.empty()) {
    throw ConfigError(what + ": expected a nonempty array of rows");
  }
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j.front().size());
  RealMatrix m(rows, cols);
  for (Eigen::Index i = 0; i < rows; ++i) {
    const auto& row = j[static_cast<std::size_t>(i)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) {
      throw ConfigError(what + ": ragged matrix rows");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(i, c) = row[static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

std::string format_double(double x) {
  char buf[32];
  const int len = std::snprintf(buf, sizeof(buf), "%.17g", x);
  return std::string(buf, static_cast<std::size_t>(len));
}

std::uint64_t fnv1a64(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return std::string(buf);
}

void write_record_csv(std::ostream& os, const MeasurementRecord& rec) {
  os << "t,dY\n";
  for (int i = 0; i < rec.steps(); ++i) {
    os << format_double(i * rec.dt) << ','
       << format_double(rec.increments[static_cast<std::size_t>(i)]) << '\n';
  }
}

MeasurementRecord read_record_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || line.rfind("t,dY", 0) != 0) {
    throw ConfigError("record file: missing 't,dY' header");
  }
  MeasurementRecord rec;
  std::vector<double> times;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) {
      throw ConfigError("record file: malformed row '" + line + "'");
    }
    try {
      times.push_back(std::stod(line.substr(0, comma)));
      rec.increments.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw ConfigError("record file: unparseable row '" + line + "'");
    }
    if (!std::isfinite(times.back()) || !std::isfinite(rec.increments.back())) {
      throw ConfigError("record file: non-finite value in row '" + line + "'");
    }
  }
  if (times.size() < 2) {
    throw ConfigError("record file: need at least two rows");
  }
  const double dt = times[1] - times[0];
  if (!(dt > 0.0)) throw ConfigError("record file: non-increasing time grid");
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (std::abs(times[i] - static_cast<double>(i) * dt) > 1e-9 * std::max(1.0, times[i])) {
      throw ConfigError("record file: time grid is not uniform");
    }
  }
  rec.dt = dt;
  rec.t_end = static_cast<double>(times.size()) * dt;
  return rec;
}

nlohmann::json record_sidecar(const MeasurementRecord& rec,
                              const std::string& config_hash,
                              bool include_hidden) {
  nlohmann::json j;
  j["seed"] = rec.seed;
  j["config_hash"] = config_hash;
  j["dt"] = rec.dt;
  j["t_end"] = rec.t_end;
  j["steps"] = rec.steps();
  if (include_hidden) {
    nlohmann::json hidden;
    hidden["initial_mode"] = rec.hidden_path.initial_mode + 1;
    nlohmann::json jumps = nlohmann::json::array();
    for (const auto& jump : rec.hidden_path.jumps) {
      jumps.push_back({{"time", jump.time}, {"to_mode", jump.to_mode + 1}});
    }
    hidden["jumps"] = std::move(jumps);
    j["hidden"] = std::move(hidden);
  }
  return j;
}

void write_fault_path_csv(std::ostream& os, const FaultPath& path) {
  os << "t,mode\n";
  for (std::size_t i = 0; i < path.mode_grid.size(); ++i) {
    os << format_double(static_cast<double>(i) * path.dt) << ','
       << (path.mode_grid[i] + 1) << '\n';
  }
}

void write_trajectory_header(std::ostream& os, int num_modes,
                             const std::vector<std::string>& observable_names,
                             bool zakai) {
  os << "t,dY,K";
  for (int j = 1; j <= num_modes; ++j) os << ",p_hat_" << j;
  for (const auto& name : observable_names) os << ",obs_" << name;
  if (zakai) os << ",log_norm";
  os << '\n';
}

void write_trajectory_row(std::ostream& os, double t, double dY, double k,
                          const RealVector& p_hat,
                          const std::vector<double>& observables,
                          bool zakai, double log_normalizer) {
  os << format_double(t) << ',' << format_double(dY) << ',' << format_double(k);
  for (Eigen::Index j = 0; j < p_hat.size(); ++j) {
    os << ',' << format_double(p_hat(j));
  }
  for (double v : observables) os << ',' << format_double(v);
  if (zakai) os << ',' << format_double(log_normalizer);
  os << '\n';
}

std::vector<RealVector> read_trajectory_posteriors(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw ConfigError("trajectory file: empty");
  std::vector<int> p_cols;
  {
    std::stringstream header(line);
    std::string col;
    int idx = 0;
    while (std::getline(header, col, ',')) {
      if (col.rfind("p_hat_", 0) == 0) p_cols.push_back(idx);
      ++idx;
    }
  }
  if (p_cols.empty()) {
    throw ConfigError("trajectory file: no p_hat_* columns in header");
  }
  std::vector<RealVector> out;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    std::stringstream row(line);
    std::string cell;
    std::vector<std::string> cells;
    while (std::getline(row, cell, ',')) cells.push_back(cell);
    RealVector p(static_cast<Eigen::Index>(p_cols.size()));
    for (std::size_t k = 0; k < p_cols.size(); ++k) {
      const auto idx = static_cast<std::size_t>(p_cols[k]);
      if (idx >= cells.size()) {
        throw ConfigError("trajectory file: truncated row '" + line + "'");
      }
      try {
        p(static_cast<Eigen::Index>(k)) = std::stod(cells[idx]);
      } catch (const std::exception&) {
        throw ConfigError("trajectory file: unparseable row '" + line + "'");
      }
    }
    out.push_back(std::move(p));
  }
  if (out.empty()) throw ConfigError("trajectory file: no data rows");
  return out;
}

void write_flags_csv(std::ostream& os, const DetectionReport& report) {
  os << "t,flagged_modes\n";
  for (std::size_t i = 0; i < report.flags.size(); ++i) {
    os << format_double(static_cast<double>(i) * report.dt) << ',';
    const auto& f = report.flags[i];
    for (std::size_t k = 0; k < f.size(); ++k) {
      if (k) os << ';';
      os << (f[k] + 1);
    }
    os << '\n';
  }
}

nlohmann::json metrics_to_json(const DetectionMetrics& m) {
  nlohmann::json j;
  j["calibration_mode"] = m.calibration_mode + 1;
  nlohmann::json bins = nlohmann::json::array();
  for (const auto& b : m.calibration) {
    bins.push_back({{"lo", b.lo},
                    {"hi", b.hi},
                    {"count", b.count},
                    {"mean_p", b.mean_p},
                    {"freq", b.freq},
                    {"se", b.se}});
  }
  j["calibration"] = std::move(bins);

  nlohmann::json quantiles;
  if (!m.latencies.empty()) {
    const auto& lat = m.latencies;
    auto q = [&](double f) {
      const auto idx = static_cast<std::size_t>(
          f * static_cast<double>(lat.size() - 1) + 0.5);
      return lat[std::min(idx, lat.size() - 1)];
    };
    quantiles = {{"q10", q(0.1)}, {"q25", q(0.25)}, {"q50", q(0.5)},
                 {"q75", q(0.75)}, {"q90", q(0.9)}};
  }
  j["latency_quantiles"] = std::move(quantiles);
  j["latency_samples"] = m.latencies.size();
  j["missed_jumps"] = m.missed_jumps;
  j["confusion"] = m.confusion;
  j["flagged_samples"] = m.flagged_samples;
  j["flagged_agree"] = m.flagged_agree;
  return j;
}

}  // namespace spqf
