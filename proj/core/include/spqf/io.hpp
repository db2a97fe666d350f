#ifndef SPQF_IO_HPP
#define SPQF_IO_HPP

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "spqf/detect.hpp"
#include "spqf/faultproc.hpp"
#include "spqf/truthsim.hpp"
#include "spqf/types.hpp"

namespace spqf {

/// Complex matrices serialize as row-major arrays of [re, im] pairs.
nlohmann::json matrix_to_json(const Operator& m);
Operator matrix_from_json(const nlohmann::json& j, const std::string& what);

nlohmann::json real_matrix_to_json(const RealMatrix& m);
RealMatrix real_matrix_from_json(const nlohmann::json& j, const std::string& what);

/// Shortest round-trip decimal formatting; all file output goes through
/// this so identical runs are byte-identical.
std::string format_double(double x);

std::uint64_t fnv1a64(std::string_view s);
std::string hex64(std::uint64_t v);

// Record files: CSV of (t, dY) plus a JSON sidecar carrying seed, config
// hash and (optionally) the hidden fault path.
void write_record_csv(std::ostream& os, const MeasurementRecord& rec);
MeasurementRecord read_record_csv(std::istream& is);

nlohmann::json record_sidecar(const MeasurementRecord& rec,
                              const std::string& config_hash,
                              bool include_hidden);

/// Fault path CSV: t, mode (1-based).
void write_fault_path_csv(std::ostream& os, const FaultPath& path);

// Filter trajectory CSV: t, dY, K, p_hat_1..N, one column per requested
// observable estimate, and the log-normalizer for Zakai runs.
void write_trajectory_header(std::ostream& os, int num_modes,
                             const std::vector<std::string>& observable_names,
                             bool zakai);
void write_trajectory_row(std::ostream& os, double t, double dY, double k,
                          const RealVector& p_hat,
                          const std::vector<double>& observables,
                          bool zakai, double log_normalizer);

/// Parses the p_hat columns back out of a trajectory CSV.
std::vector<RealVector> read_trajectory_posteriors(std::istream& is);

/// Flags CSV: t, flagged_modes (1-based, ';'-separated, empty if none).
void write_flags_csv(std::ostream& os, const DetectionReport& report);

nlohmann::json metrics_to_json(const DetectionMetrics& m);

}  // namespace spqf

#endif
