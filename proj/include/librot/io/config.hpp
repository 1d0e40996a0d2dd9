#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "librot/cooling.hpp"
#include "librot/interferometry.hpp"
#include "librot/shapes.hpp"
#include "librot/thermo.hpp"
#include "librot/trap.hpp"

namespace librot::io {

/// Full resolved run configuration. Defaults reproduce the reference trap
/// (elliptic-cylinder particle, sqrt(ab) = 30 nm, L = 100 nm, 100 e,
/// U_AC = 100 V, l0 = 100 um, f_AC = 250 kHz).
struct RunConfig {
  BodyShape particle;
  TrapConfig trap;
  GasModel gas;
  FeedbackConfig feedback;
  bool feedback_all_hot = false;  ///< excite uncontrolled modes too (cross-talk runs)

  struct Sim {
    int dt_per_period = 100;      ///< RK4 steps per RF period
    double t_end = 5e-3;          ///< s
    std::uint64_t seed = 12345;
    double initial_offset = 0.1;  ///< rad, applied to excited modes
    std::array<bool, 3> excite{false, true, false};  ///< modes excited by `simulate`
    bool noise = false;           ///< stochastic gas torque in `simulate`
    int record_stride = 5;        ///< steps between trajectory samples
  } sim;

  InterferometerConfig interferometer;

  struct Sweep {
    std::string parameter = "b_over_a";  ///< b_over_a | L_over_2b | temperature
    double min = 1.0;
    double max = 2.0;
    int points = 21;
    bool log_spacing = false;
  } sweep;
  bool sweep_given = false;  ///< whether the config file provided a sweep section

  RunConfig();  ///< reference defaults
};

/// Parse and validate a JSON config file; unknown keys are rejected and every
/// quantity accepts either an SI number or a "value unit" string
/// (nm/um/mm/m, G/mT/T, Torr/mbar/Pa, Hz/kHz/MHz, e/C, uK/mK/K, us/ms/s, amu/kg).
/// Throws ConfigError with a field path on any violation.
RunConfig load_config(const std::string& path);

/// Apply the same schema to an already-parsed JSON tree (used by tests).
RunConfig config_from_json(const nlohmann::json& j);

/// Resolved config (pure SI) for sidecar emission; round-trips through
/// config_from_json.
nlohmann::json to_json(const RunConfig& cfg);

/// Write `<data_path>.json` sidecar with the resolved config, command line,
/// and code version. No timestamps: outputs stay byte-identical.
void write_sidecar(const std::string& data_path, const std::string& command,
                   const RunConfig& cfg);

/// Sidecar variant carrying an extra `results` object (fit summaries etc.).
void write_sidecar(const std::string& data_path, const std::string& command,
                   const RunConfig& cfg, const nlohmann::json& results);

}  // namespace librot::io
