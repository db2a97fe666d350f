#ifndef SPQF_CONFIG_HPP
#define SPQF_CONFIG_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "spqf/cascade.hpp"
#include "spqf/faultproc.hpp"
#include "spqf/filter.hpp"
#include "spqf/wavepacket.hpp"

namespace spqf {

/// Serializable wavepacket description; `build` constructs (and thereby
/// validates) the actual Wavepacket.
struct WavepacketSpec {
  Wavepacket::Shape shape = Wavepacket::Shape::Exponential;
  double gamma = 1.0;                 // exponential
  double center = 3.0, width = 0.5;   // gaussian
  double t_a = 0.0, t_b = 1.0;        // square
  double table_dt = 0.0;              // tabulated
  std::vector<Complex> table;
  double omega_floor = 1e-8;
  double phase = 0.0;  // radians

  Wavepacket build() const;
};

struct RunConfig {
  double t_end = 10.0;
  double dt = 1e-3;
  std::uint64_t seed = 1;
  int trajectories = 1;
  FilterForm form = FilterForm::Normalized;
  int renorm_interval = 100;
  int resym_interval = 1;
  double detect_threshold = 0.8;
  /// Named observables whose estimates become trajectory CSV columns.
  std::vector<std::pair<std::string, Operator>> observables;
  bool keep_hidden = true;
  int workers = 1;
  /// Mode whose posterior gets calibration-binned in ensemble summaries;
  /// defaults to the last mode.
  int calibration_mode = -1;
  int checkpoints = 10;
};

struct ExperimentConfig {
  PlantModel plant;
  FaultModel fault;
  WavepacketSpec wavepacket;
  RunConfig run;

  FilterConfig filter_config() const {
    return FilterConfig{run.form, run.renorm_interval, run.resym_interval, true};
  }
  int effective_calibration_mode() const {
    return run.calibration_mode >= 0 ? run.calibration_mode
                                     : fault.num_modes - 1;
  }
};

/// Parses and fully validates a config; throws ConfigError with a
/// diagnostic on any violation.
ExperimentConfig parse_config(const std::string& json_text);
ExperimentConfig load_config(const std::string& path);
std::string serialize_config(const ExperimentConfig& config);

/// FNV-1a hash of the canonical serialization, as 16 hex digits.
std::string config_hash(const ExperimentConfig& config);

}  // namespace spqf

#endif
