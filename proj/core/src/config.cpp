#include "spqf/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "spqf/io.hpp"
#include "spqf/linop.hpp"

namespace spqf {

using nlohmann::json;

Wavepacket WavepacketSpec::build() const {
  switch (shape) {
    case Wavepacket::Shape::Exponential:
      return Wavepacket::exponential(gamma, omega_floor, phase);
    case Wavepacket::Shape::Gaussian:
      return Wavepacket::gaussian(center, width, omega_floor, phase);
    case Wavepacket::Shape::Square:
      return Wavepacket::square(t_a, t_b, omega_floor, phase);
    case Wavepacket::Shape::Tabulated:
      return Wavepacket::tabulated(table_dt, table, omega_floor, phase);
  }
  throw ConfigError("unknown wavepacket shape");
}

namespace {

json wavepacket_to_json(const WavepacketSpec& w) {
  json j;
  switch (w.shape) {
    case Wavepacket::Shape::Exponential:
      j["shape"] = "exponential";
      j["gamma"] = w.gamma;
      break;
    case Wavepacket::Shape::Gaussian:
      j["shape"] = "gaussian";
      j["center"] = w.center;
      j["width"] = w.width;
      break;
    case Wavepacket::Shape::Square:
      j["shape"] = "square";
      j["t_a"] = w.t_a;
      j["t_b"] = w.t_b;
      break;
    case Wavepacket::Shape::Tabulated: {
      j["shape"] = "tabulated";
      j["dt"] = w.table_dt;
      json values = json::array();
      for (const Complex& v : w.table) values.push_back({v.real(), v.imag()});
      j["values"] = std::move(values);
      break;
    }
  }
  j["omega_floor"] = w.omega_floor;
  if (w.phase != 0.0) j["phase"] = w.phase;
  return j;
}

WavepacketSpec wavepacket_from_json(const json& j) {
  WavepacketSpec w;
  const std::string shape = j.at("shape").get<std::string>();
  if (shape == "exponential") {
    w.shape = Wavepacket::Shape::Exponential;
    w.gamma = j.at("gamma").get<double>();
  } else if (shape == "gaussian") {
    w.shape = Wavepacket::Shape::Gaussian;
    w.center = j.at("center").get<double>();
    w.width = j.at("width").get<double>();
  } else if (shape == "square") {
    w.shape = Wavepacket::Shape::Square;
    w.t_a = j.at("t_a").get<double>();
    w.t_b = j.at("t_b").get<double>();
  } else if (shape == "tabulated") {
    w.shape = Wavepacket::Shape::Tabulated;
    w.table_dt = j.at("dt").get<double>();
    for (const auto& cell : j.at("values")) {
      if (cell.is_number()) {
        w.table.emplace_back(cell.get<double>(), 0.0);
      } else {
        w.table.emplace_back(cell.at(0).get<double>(), cell.at(1).get<double>());
      }
    }
  } else {
    throw ConfigError("unknown wavepacket shape '" + shape + "'");
  }
  w.omega_floor = j.value("omega_floor", 1e-8);
  w.phase = j.value("phase", 0.0);
  return w;
}

}  // namespace

ExperimentConfig parse_config(const std::string& json_text) {
  json j;
  try {
    j = json::parse(json_text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config is not valid JSON: ") + e.what());
  }

  ExperimentConfig cfg;
  try {
    const json& plant = j.at("plant");
    cfg.plant.dim = plant.at("dim").get<int>();
    for (const auto& h : plant.at("hamiltonians")) {
      cfg.plant.hamiltonians.push_back(matrix_from_json(h, "plant.hamiltonians"));
    }
    cfg.plant.coupling = matrix_from_json(plant.at("coupling"), "plant.coupling");
    cfg.plant.initial_state =
        matrix_from_json(plant.at("initial_state"), "plant.initial_state");

    const json& fault = j.at("fault");
    const RealMatrix pi =
        real_matrix_from_json(fault.at("rate_matrix"), "fault.rate_matrix");
    const auto& p0_json = fault.at("initial_probs");
    RealVector p0(static_cast<Eigen::Index>(p0_json.size()));
    for (std::size_t k = 0; k < p0_json.size(); ++k) {
      p0(static_cast<Eigen::Index>(k)) = p0_json[k].get<double>();
    }
    cfg.fault = validate_qmatrix(pi, p0);

    cfg.wavepacket = wavepacket_from_json(j.at("wavepacket"));

    const json& run = j.at("run");
    cfg.run.t_end = run.at("t_end").get<double>();
    cfg.run.dt = run.at("dt").get<double>();
    cfg.run.seed = run.value("seed", std::uint64_t{1});
    cfg.run.trajectories = run.value("trajectories", 1);
    const std::string form = run.value("form", std::string("normalized"));
    if (form == "normalized") {
      cfg.run.form = FilterForm::Normalized;
    } else if (form == "zakai") {
      cfg.run.form = FilterForm::Zakai;
    } else {
      throw ConfigError("run.form must be 'normalized' or 'zakai'");
    }
    cfg.run.renorm_interval = run.value("renorm_interval", 100);
    cfg.run.resym_interval = run.value("resym_interval", 1);
    cfg.run.detect_threshold = run.value("detect_threshold", 0.8);
    cfg.run.keep_hidden = run.value("keep_hidden", true);
    cfg.run.workers = run.value("workers", 1);
    cfg.run.calibration_mode = run.value("calibration_mode", 0) - 1;
    cfg.run.checkpoints = run.value("checkpoints", 10);
    if (run.contains("observables")) {
      for (const auto& [name, matrix] : run.at("observables").items()) {
        cfg.run.observables.emplace_back(
            name, matrix_from_json(matrix, "run.observables." + name));
      }
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config structure error: ") + e.what());
  }

  // Cross-validation.
  validate_plant(cfg.plant);
  if (cfg.plant.num_modes() != cfg.fault.num_modes) {
    std::ostringstream msg;
    msg << "plant declares " << cfg.plant.num_modes()
        << " mode Hamiltonians but fault model has " << cfg.fault.num_modes;
    throw ConfigError(msg.str());
  }
  cfg.wavepacket.build();  // validates normalization
  if (cfg.run.t_end <= 0.0 || cfg.run.dt <= 0.0) {
    throw ConfigError("run.t_end and run.dt must be positive");
  }
  const double raw_steps = cfg.run.t_end / cfg.run.dt;
  if (std::abs(raw_steps - std::llround(raw_steps)) >
      1e-9 * std::max(1.0, raw_steps)) {
    throw ConfigError("run.t_end/run.dt must be an integer step count");
  }
  if (cfg.run.trajectories < 1) throw ConfigError("run.trajectories must be >= 1");
  if (cfg.run.workers < 1) throw ConfigError("run.workers must be >= 1");
  if (!(cfg.run.detect_threshold > 0.0) || cfg.run.detect_threshold > 1.0) {
    throw ConfigError("run.detect_threshold must lie in (0, 1]");
  }
  if (cfg.run.calibration_mode >= cfg.fault.num_modes) {
    throw ConfigError("run.calibration_mode out of range");
  }
  if (cfg.run.checkpoints < 1) throw ConfigError("run.checkpoints must be >= 1");
  for (const auto& [name, x] : cfg.run.observables) {
    if (x.rows() != cfg.plant.dim || x.cols() != cfg.plant.dim) {
      throw ConfigError("observable '" + name + "' dimension mismatch");
    }
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse_config(buffer.str());
}

std::string serialize_config(const ExperimentConfig& cfg) {
  json j;
  json plant;
  plant["dim"] = cfg.plant.dim;
  json hams = json::array();
  for (const Operator& h : cfg.plant.hamiltonians) hams.push_back(matrix_to_json(h));
  plant["hamiltonians"] = std::move(hams);
  plant["coupling"] = matrix_to_json(cfg.plant.coupling);
  plant["initial_state"] = matrix_to_json(cfg.plant.initial_state);
  j["plant"] = std::move(plant);

  json fault;
  fault["rate_matrix"] = real_matrix_to_json(cfg.fault.rate_matrix);
  json p0 = json::array();
  for (Eigen::Index k = 0; k < cfg.fault.initial_probs.size(); ++k) {
    p0.push_back(cfg.fault.initial_probs(k));
  }
  fault["initial_probs"] = std::move(p0);
  j["fault"] = std::move(fault);

  j["wavepacket"] = wavepacket_to_json(cfg.wavepacket);

  json run;
  run["t_end"] = cfg.run.t_end;
  run["dt"] = cfg.run.dt;
  run["seed"] = cfg.run.seed;
  run["trajectories"] = cfg.run.trajectories;
  run["form"] = cfg.run.form == FilterForm::Normalized ? "normalized" : "zakai";
  run["renorm_interval"] = cfg.run.renorm_interval;
  run["resym_interval"] = cfg.run.resym_interval;
  run["detect_threshold"] = cfg.run.detect_threshold;
  run["keep_hidden"] = cfg.run.keep_hidden;
  run["workers"] = cfg.run.workers;
  run["calibration_mode"] = cfg.run.calibration_mode + 1;
  run["checkpoints"] = cfg.run.checkpoints;
  if (!cfg.run.observables.empty()) {
    json obs;
    for (const auto& [name, x] : cfg.run.observables) {
      obs[name] = matrix_to_json(x);
    }
    run["observables"] = std::move(obs);
  }
  j["run"] = std::move(run);
  return j.dump(2);
}

std::string config_hash(const ExperimentConfig& cfg) {
  return hex64(fnv1a64(serialize_config(cfg)));
}

}  // namespace spqf
