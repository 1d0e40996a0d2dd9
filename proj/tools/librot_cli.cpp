// librot command-line front end: figure-style sweeps, trajectory dumps,
// closed-loop cooling runs, steady-state tables, and interferometer numbers.
// All outputs are CSV with a JSON sidecar; identical config + seed gives
// byte-identical files.

#include <cmath>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "librot/constants.hpp"
#include "librot/cooling.hpp"
#include "librot/dynamics.hpp"
#include "librot/errors.hpp"
#include "librot/interferometry.hpp"
#include "librot/io/config.hpp"
#include "librot/io/csv.hpp"
#include "librot/io/svg.hpp"
#include "librot/io/threadpool.hpp"
#include "librot/secular.hpp"
#include "librot/shapes.hpp"
#include "librot/thermo.hpp"
#include "librot/version.hpp"

namespace {

namespace fs = std::filesystem;
using librot::constants::pi;
using librot::io::CsvWriter;
using librot::io::RunConfig;

const double nan_d = std::numeric_limits<double>::quiet_NaN();

struct GlobalArgs {
  std::string out_dir = ".";
  int threads = 1;
  bool validate = false;
  bool svg = false;
};

std::string join_path(const std::string& dir, const std::string& name) {
  return (fs::path(dir) / name).string();
}

std::vector<double> sweep_values(const RunConfig::Sweep& sw) {
  std::vector<double> v(sw.points);
  for (int i = 0; i < sw.points; ++i) {
    const double f = sw.points == 1 ? 0.0 : static_cast<double>(i) / (sw.points - 1);
    v[i] = sw.log_spacing ? std::exp(std::log(sw.min) + f * (std::log(sw.max) - std::log(sw.min)))
                          : sw.min + f * (sw.max - sw.min);
  }
  return v;
}

/// Shape for one sweep value. b_over_a varies the cross-section at fixed
/// geometric-mean radius and height; L_over_2b rescales at fixed volume and
/// fixed b/a.
librot::BodyShape sweep_shape(const RunConfig& cfg, const std::string& parameter,
                              double value) {
  const auto* cyl = std::get_if<librot::Cylindroid>(&cfg.particle.geometry);
  if (!cyl) throw librot::ConfigError("shape sweeps require a cylindroid particle");
  librot::BodyShape shape = cfg.particle;
  if (parameter == "b_over_a") {
    const double r0 = std::sqrt(cyl->a * cyl->b);
    librot::Cylindroid c = *cyl;
    c.a = r0 / std::sqrt(value);
    c.b = r0 * std::sqrt(value);
    shape.geometry = c;
  } else if (parameter == "L_over_2b") {
    const double volume = pi * cyl->a * cyl->b * cyl->L;
    const double ratio = cyl->b / cyl->a;
    librot::Cylindroid c;
    c.a = std::cbrt(volume / (2 * pi * ratio * ratio * value));
    c.b = ratio * c.a;
    c.L = 2 * c.b * value;
    shape.geometry = c;
  } else {
    throw librot::ConfigError("unsupported sweep parameter for this command: " + parameter);
  }
  return shape;
}

const std::vector<std::string> kSweepHeader{
    "sweep_param", "omega_alpha", "omega_beta", "omega_gamma", "q_alpha", "q_beta",
    "q_gamma",     "T_alpha",     "T_beta",     "T_gamma",     "qz_com"};

std::vector<librot::SecularReport> sweep_reports(const RunConfig& cfg,
                                                 const std::vector<double>& values,
                                                 int threads) {
  std::vector<librot::SecularReport> reports(values.size());
  librot::io::parallel_for(static_cast<int>(values.size()), threads, [&](int i) {
    const librot::BodyShape shape = sweep_shape(cfg, cfg.sweep.parameter, values[i]);
    const librot::MassProperties props = librot::mass_properties(shape);
    const librot::ChargeMoments cm = librot::charge_moments(shape);
    reports[i] = librot::secular_report(props, cm, cfg.trap);
  });
  return reports;
}

void write_sweep_csv(const std::string& path, const std::vector<double>& values,
                     const std::vector<librot::SecularReport>& reports) {
  CsvWriter csv(path, kSweepHeader);
  for (size_t i = 0; i < values.size(); ++i) {
    const auto& r = reports[i];
    csv.row({CsvWriter::cell(values[i]), CsvWriter::cell(r.omega_s[0]),
             CsvWriter::cell(r.omega_s[1]), CsvWriter::cell(r.omega_s[2]),
             CsvWriter::cell(r.q_lib[0]), CsvWriter::cell(r.q_lib[1]),
             CsvWriter::cell(r.q_lib[2]), CsvWriter::cell(r.T_lib[0]),
             CsvWriter::cell(r.T_lib[1]), CsvWriter::cell(r.T_lib[2]),
             CsvWriter::cell(r.q_com[2])});
  }
}

void sweep_svg(const std::string& path, const std::string& title, const std::string& ylabel,
               const std::vector<double>& values,
               const std::vector<librot::SecularReport>& reports, bool thresholds) {
  std::vector<librot::io::Series> series(3);
  const char* labels[3] = {"alpha", "beta", "gamma"};
  for (int m = 0; m < 3; ++m) {
    series[m].label = labels[m];
    for (size_t i = 0; i < values.size(); ++i) {
      series[m].x.push_back(values[i]);
      series[m].y.push_back(thresholds ? reports[i].T_lib[m] : reports[i].omega_s[m]);
    }
  }
  librot::io::write_svg_lines(path, title, "sweep value", ylabel, series);
}

int mode_count(const std::array<bool, 3>& flags) {
  return static_cast<int>(flags[0]) + static_cast<int>(flags[1]) + static_cast<int>(flags[2]);
}

void cmd_modes(const RunConfig& cfg, const GlobalArgs& args, bool thresholds_table) {
  if (cfg.sweep.parameter == "temperature")
    throw librot::ConfigError("this command sweeps a shape parameter, not temperature");
  const std::vector<double> values = sweep_values(cfg.sweep);
  const std::vector<librot::SecularReport> reports = sweep_reports(cfg, values, args.threads);

  const std::string name = thresholds_table ? "thresholds" : "modes";
  const std::string csv_path = join_path(args.out_dir, name + ".csv");
  write_sweep_csv(csv_path, values, reports);
  librot::io::write_sidecar(csv_path, name, cfg);
  if (args.svg)
    sweep_svg(join_path(args.out_dir, name + ".svg"),
              thresholds_table ? "threshold temperatures" : "secular libration frequencies",
              thresholds_table ? "T_lib (K)" : "omega (rad/s)", values, reports,
              thresholds_table);

  if (!thresholds_table && args.validate) {
    // Numeric cross-check: 5 ms single-mode runs at 0.1 rad excitation.
    const double duration = 5e-3;
    const double offset = 0.1;
    const int n_points = static_cast<int>(values.size());
    std::vector<double> numeric(static_cast<size_t>(n_points) * 3, nan_d);
    librot::io::parallel_for(n_points * 3, args.threads, [&](int task) {
      const int i = task / 3;
      const int m = task % 3;
      const double omega_a = reports[i].omega_s[m];
      // Skip modes that cannot complete the minimum cycle count in the run.
      if (!(omega_a * duration > 2 * pi * 2.5)) return;
      const librot::BodyShape shape = sweep_shape(cfg, cfg.sweep.parameter, values[i]);
      const librot::MassProperties props = librot::mass_properties(shape);
      const librot::ChargeMoments cm = librot::charge_moments(shape);
      numeric[task] = librot::measure_mode_frequency(props, cm, cfg.trap, m, offset,
                                                     duration, cfg.sim.dt_per_period);
    });
    const std::string vpath = join_path(args.out_dir, "modes_validation.csv");
    CsvWriter vcsv(vpath, {"sweep_param", "mode", "omega_analytic", "omega_numeric",
                           "relative_deviation"});
    const char* labels[3] = {"alpha", "beta", "gamma"};
    for (int i = 0; i < n_points; ++i)
      for (int m = 0; m < 3; ++m) {
        const double ana = reports[i].omega_s[m];
        const double num = numeric[static_cast<size_t>(i) * 3 + m];
        const double dev = ana > 0.0 ? std::abs(num - ana) / ana : nan_d;
        vcsv.row({CsvWriter::cell(values[i]), labels[m], CsvWriter::cell(ana),
                  CsvWriter::cell(num), CsvWriter::cell(dev)});
      }
    librot::io::write_sidecar(vpath, "modes --validate", cfg);
  }
}

void cmd_simulate(const RunConfig& cfg, const GlobalArgs& args) {
  const librot::MassProperties props = librot::mass_properties(cfg.particle);
  const librot::ChargeMoments cm = librot::charge_moments(cfg.particle);
  const librot::SecularReport rep = librot::secular_report(props, cm, cfg.trap);

  librot::RigidBodyState state;
  state.phi = librot::EulerAngles{0.0, pi / 2, 0.0};
  if (cfg.sim.excite[0]) state.phi.alpha += cfg.sim.initial_offset;
  if (cfg.sim.excite[1]) state.phi.beta += cfg.sim.initial_offset;
  if (cfg.sim.excite[2]) state.phi.gamma += cfg.sim.initial_offset;

  librot::DriveWaveform wave;
  wave.base = cfg.trap;
  librot::IntegratorConfig icfg;
  icfg.dt = (2 * pi / cfg.trap.Omega_AC) / cfg.sim.dt_per_period;
  icfg.record_stride = cfg.sim.record_stride;
  icfg.t_end = cfg.sim.t_end;

  std::mt19937_64 rng(cfg.sim.seed);
  librot::RotationalNoise noise;
  const bool use_noise = cfg.sim.noise;
  if (use_noise) {
    noise.Gamma = librot::damping_tensor_surface(cfg.particle, props, cfg.gas).Gamma;
    noise.T_gas = cfg.gas.T_gas;
    noise.rng = &rng;
  }

  const std::string csv_path = join_path(args.out_dir, "trajectory.csv");
  CsvWriter csv(csv_path,
                {"t", "alpha", "beta", "gamma", "omega1", "omega2", "omega3", "x", "y", "z",
                 "vx", "vy", "vz", "energy_alpha", "energy_beta", "energy_gamma"});
  std::vector<librot::io::Series> angle_series(3);
  const char* labels[3] = {"alpha", "beta - pi/2", "gamma"};
  for (int m = 0; m < 3; ++m) angle_series[m].label = labels[m];

  librot::integrate(state, props, cm, wave, icfg,
                    [&](const librot::RigidBodyState& s) {
                      const librot::Vec3 E = librot::mode_energies(s, props, rep.omega_s);
                      csv.row({CsvWriter::cell(s.t), CsvWriter::cell(s.phi.alpha),
                               CsvWriter::cell(s.phi.beta), CsvWriter::cell(s.phi.gamma),
                               CsvWriter::cell(s.omega[0]), CsvWriter::cell(s.omega[1]),
                               CsvWriter::cell(s.omega[2]), CsvWriter::cell(s.R_com[0]),
                               CsvWriter::cell(s.R_com[1]), CsvWriter::cell(s.R_com[2]),
                               CsvWriter::cell(s.V_com[0]), CsvWriter::cell(s.V_com[1]),
                               CsvWriter::cell(s.V_com[2]), CsvWriter::cell(E[0]),
                               CsvWriter::cell(E[1]), CsvWriter::cell(E[2])});
                      if (args.svg) {
                        const double d[3] = {s.phi.alpha, s.phi.beta - pi / 2, s.phi.gamma};
                        for (int m = 0; m < 3; ++m) {
                          angle_series[m].x.push_back(s.t);
                          angle_series[m].y.push_back(d[m]);
                        }
                      }
                    },
                    use_noise ? &noise : nullptr);
  librot::io::write_sidecar(csv_path, "simulate", cfg);
  if (args.svg)
    librot::io::write_svg_lines(join_path(args.out_dir, "trajectory.svg"),
                                "Euler-angle displacements", "t (s)", "displacement (rad)",
                                angle_series);
}

void cmd_cool(const RunConfig& cfg, const GlobalArgs& args) {
  const librot::MassProperties props = librot::mass_properties(cfg.particle);
  const librot::ChargeMoments cm = librot::charge_moments(cfg.particle);
  if (mode_count(cfg.feedback.modes) == 0 && !cfg.feedback_all_hot)
    throw librot::ConfigError("cooling run needs at least one controlled or excited mode");

  librot::RigidBodyState state;
  state.phi = librot::EulerAngles{0.0, pi / 2, 0.0};
  const auto excited = [&](int m) { return cfg.feedback.modes[m] || cfg.feedback_all_hot; };
  if (excited(0)) state.phi.alpha += cfg.sim.initial_offset;
  if (excited(1)) state.phi.beta += cfg.sim.initial_offset;
  if (excited(2)) state.phi.gamma += cfg.sim.initial_offset;

  const librot::CoolingTrace trace = librot::run_cooling(
      state, props, cm, cfg.trap, cfg.feedback, cfg.sim.t_end, cfg.sim.dt_per_period);

  const std::string csv_path = join_path(args.out_dir, "cooling.csv");
  CsvWriter csv(csv_path, {"t", "E_alpha", "E_beta", "E_gamma", "f_est_alpha",
                           "phi_est_alpha", "f_est_beta", "phi_est_beta", "f_est_gamma",
                           "phi_est_gamma"});
  for (const auto& row : trace.rows)
    csv.row({CsvWriter::cell(row.t), CsvWriter::cell(row.E[0]), CsvWriter::cell(row.E[1]),
             CsvWriter::cell(row.E[2]), CsvWriter::cell(row.f_est[0]),
             CsvWriter::cell(row.phi_est[0]), CsvWriter::cell(row.f_est[1]),
             CsvWriter::cell(row.phi_est[1]), CsvWriter::cell(row.f_est[2]),
             CsvWriter::cell(row.phi_est[2])});

  nlohmann::json results;
  for (int m = 0; m < 3; ++m) {
    const char* names[3] = {"alpha", "beta", "gamma"};
    results[names[m]] = {{"omega", trace.omega_mode[m]},
                         {"fitted_rate", trace.fitted_rate[m]},
                         {"predicted_rate", trace.predicted_rate[m]},
                         {"first_actuation", trace.first_actuation[m]},
                         {"hbar_crossing", trace.hbar_crossing[m]},
                         {"micromotion_fraction", trace.micromotion_fraction[m]}};
  }
  results["warnings"] = trace.warnings;
  librot::io::write_sidecar(csv_path, "cool", cfg, results);

  if (args.svg) {
    std::vector<librot::io::Series> series(3);
    const char* labels[3] = {"log10 E_alpha", "log10 E_beta", "log10 E_gamma"};
    for (int m = 0; m < 3; ++m) {
      series[m].label = labels[m];
      for (const auto& row : trace.rows) {
        series[m].x.push_back(row.t);
        series[m].y.push_back(row.E[m] > 0.0 ? std::log10(row.E[m]) : nan_d);
      }
    }
    librot::io::write_svg_lines(join_path(args.out_dir, "cooling.svg"),
                                "mode energies under feedback", "t (s)", "log10 E (J)",
                                series);
  }
}

void cmd_steadystate(const RunConfig& cfg, const GlobalArgs& args) {
  RunConfig::Sweep sweep = cfg.sweep;
  if (!cfg.sweep_given) {
    sweep.parameter = "b_over_a";
    sweep.min = 1.05;
    sweep.max = 2.0;
    sweep.points = 20;
    sweep.log_spacing = false;
  }
  if (sweep.parameter != "b_over_a")
    throw librot::ConfigError("steady-state sweeps run over b_over_a");
  const std::vector<double> values = sweep_values(sweep);
  const int n = static_cast<int>(values.size());

  struct Row {
    librot::Vec3 T_ss = librot::Vec3::Zero();
  };
  std::vector<Row> rows(static_cast<size_t>(n) * 2);
  librot::io::parallel_for(2 * n, args.threads, [&](int task) {
    const int model = task / n;  // 0 = specular, 1 = diffuse
    const int i = task % n;
    const librot::BodyShape shape = sweep_shape(cfg, sweep.parameter, values[i]);
    const librot::MassProperties props = librot::mass_properties(shape);
    const librot::ChargeMoments cm = librot::charge_moments(shape);
    const librot::Vec3 omega_s = librot::secular_frequencies(props, cm, cfg.trap);
    librot::GasModel gas = cfg.gas;
    gas.alpha_c = model == 0 ? 0.0 : 1.0;
    const librot::Vec3 G_gas = librot::damping_tensor_surface(shape, props, gas).Gamma;
    for (int m = 0; m < 3; ++m) {
      const double G_fb = cfg.feedback.modes[m]
                              ? librot::predicted_damping_rate(omega_s[m], cfg.feedback.delta)
                              : 0.0;
      rows[static_cast<size_t>(model) * n + i].T_ss[m] =
          librot::steady_state_temperature(G_gas[m], G_fb, gas.T_gas);
    }
  });

  const std::string csv_path = join_path(args.out_dir, "steadystate.csv");
  CsvWriter csv(csv_path, {"b_over_a", "Tss_alpha", "Tss_beta", "Tss_gamma", "model"});
  const char* model_names[2] = {"specular", "diffuse"};
  for (int model = 0; model < 2; ++model)
    for (int i = 0; i < n; ++i) {
      const auto& r = rows[static_cast<size_t>(model) * n + i];
      csv.row({CsvWriter::cell(values[i]), CsvWriter::cell(r.T_ss[0]),
               CsvWriter::cell(r.T_ss[1]), CsvWriter::cell(r.T_ss[2]), model_names[model]});
    }
  librot::io::write_sidecar(csv_path, "steadystate", cfg);

  if (args.svg) {
    std::vector<librot::io::Series> series;
    const char* mode_names[3] = {"alpha", "beta", "gamma"};
    for (int model = 0; model < 2; ++model)
      for (int m = 0; m < 3; ++m) {
        librot::io::Series s;
        s.label = std::string(mode_names[m]) + " " + model_names[model];
        for (int i = 0; i < n; ++i) {
          s.x.push_back(values[i]);
          s.y.push_back(rows[static_cast<size_t>(model) * n + i].T_ss[m]);
        }
        series.push_back(std::move(s));
      }
    librot::io::write_svg_lines(join_path(args.out_dir, "steadystate.svg"),
                                "steady-state mode temperatures", "b/a", "T_ss (K)", series);
  }
}

void cmd_contrast(const RunConfig& cfg, const GlobalArgs& args, double target) {
  std::vector<double> temperatures;
  if (cfg.sweep_given) {
    if (cfg.sweep.parameter != "temperature")
      throw librot::ConfigError("contrast sweeps run over temperature");
    temperatures = sweep_values(cfg.sweep);
  } else {
    RunConfig::Sweep sw;
    sw.parameter = "temperature";
    sw.min = 5e-7;
    sw.max = 1e-4;
    sw.points = 41;
    sw.log_spacing = true;
    temperatures = sweep_values(sw);
  }
  const int n = static_cast<int>(temperatures.size());

  const double omega_B = librot::libration_frequency_B(
      cfg.interferometer.mu, cfg.interferometer.B, cfg.interferometer.I_axis);
  const double t_quantum = librot::quantum_temperature_scale(omega_B);

  struct Row {
    double contrast = 0.0;
    double phonons = 0.0;
  };
  std::vector<Row> rows(n);
  librot::io::parallel_for(n, args.threads, [&](int i) {
    librot::InterferometerConfig work = cfg.interferometer;
    if (work.n_max == 0) {
      // Size the thermal sum so the tail bound passes at this temperature.
      const double x = t_quantum / temperatures[i];
      work.n_max = std::max(1, static_cast<int>(std::ceil(std::log(1e4) / x)));
    }
    rows[i].contrast = librot::contrast(temperatures[i], work);
    rows[i].phonons = librot::mean_phonons(temperatures[i], omega_B);
  });

  const std::string csv_path = join_path(args.out_dir, "contrast.csv");
  CsvWriter csv(csv_path, {"omegaB_Tp", "contrast", "temperature_over_hbar_omegaB_kB",
                           "temperature_K", "mean_phonons"});
  for (int i = 0; i < n; ++i)
    csv.row({CsvWriter::cell(omega_B * cfg.interferometer.T_p),
             CsvWriter::cell(rows[i].contrast),
             CsvWriter::cell(temperatures[i] / t_quantum),
             CsvWriter::cell(temperatures[i]), CsvWriter::cell(rows[i].phonons)});
  nlohmann::json results;
  results["omega_B"] = omega_B;
  results["hbar_omegaB_over_kB"] = t_quantum;
  if (target > 0.0) {
    // Inversion may need a deeper thermal sum than any sweep row.
    librot::InterferometerConfig work = cfg.interferometer;
    if (work.n_max == 0) work.n_max = 20000;
    results["required_temperature_K"] = librot::required_temperature(target, work);
    results["contrast_target"] = target;
  }
  const std::string warning = cfg.interferometer.weak_field_warning();
  if (!warning.empty()) results["warnings"] = {warning};
  librot::io::write_sidecar(csv_path, "contrast", cfg, results);

  if (args.svg) {
    librot::io::Series s;
    s.label = "contrast";
    for (int i = 0; i < n; ++i) {
      s.x.push_back(std::log10(temperatures[i]));
      s.y.push_back(rows[i].contrast);
    }
    librot::io::write_svg_lines(join_path(args.out_dir, "contrast.svg"),
                                "two-path contrast vs temperature", "log10 T (K)", "C", {s});
  }
}

void cmd_phase(const RunConfig& cfg, const GlobalArgs& args) {
  const librot::PhaseReport rep = librot::interferometer_phase(cfg.interferometer);
  const double omega_B = librot::libration_frequency_B(
      cfg.interferometer.mu, cfg.interferometer.B, cfg.interferometer.I_axis);
  const double t_quantum = librot::quantum_temperature_scale(omega_B);

  const std::string csv_path = join_path(args.out_dir, "phase.csv");
  CsvWriter csv(csv_path, {"phi_int", "phi_int_no_gravity", "splitting", "omega_B",
                           "hbar_omegaB_over_kB"});
  csv.row({CsvWriter::cell(rep.phi_int), CsvWriter::cell(rep.phi_int_no_gravity),
           CsvWriter::cell(rep.splitting), CsvWriter::cell(omega_B),
           CsvWriter::cell(t_quantum)});
  nlohmann::json results;
  results["phi_int"] = rep.phi_int;
  results["phi_int_no_gravity"] = rep.phi_int_no_gravity;
  results["splitting"] = rep.splitting;
  results["omega_B"] = omega_B;
  results["hbar_omegaB_over_kB"] = t_quantum;
  const std::string warning = cfg.interferometer.weak_field_warning();
  if (!warning.empty()) results["warnings"] = {warning};
  librot::io::write_sidecar(csv_path, "phase", cfg, results);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"librational dynamics of a charged nanoparticle in a quadrupole RF trap"};
  app.require_subcommand(1);
  app.fallthrough();

  std::string config_path;
  GlobalArgs args;
  std::int64_t seed_override = -1;
  app.add_option("--config", config_path, "JSON configuration file");
  app.add_option("--out", args.out_dir, "output directory")->capture_default_str();
  app.add_option("--threads", args.threads, "worker threads for sweeps")
      ->capture_default_str();
  app.add_flag("--validate", args.validate, "add numeric cross-validation output");
  app.add_option("--seed", seed_override, "override the configured RNG seed");
  app.add_flag("--svg", args.svg, "write quick-look SVG plots next to the CSVs");
  app.set_version_flag("--version", std::string(librot::version_string));

  auto* sc_modes = app.add_subcommand("modes", "secular frequencies over a shape sweep");
  auto* sc_simulate = app.add_subcommand("simulate", "raw rigid-body trajectory");
  auto* sc_cool = app.add_subcommand("cool", "closed-loop parametric feedback cooling");
  auto* sc_thresholds =
      app.add_subcommand("thresholds", "librational threshold temperatures over a sweep");
  auto* sc_steadystate =
      app.add_subcommand("steadystate", "steady-state mode temperatures, both gas models");
  auto* sc_contrast = app.add_subcommand("contrast", "two-path contrast vs temperature");
  double contrast_target = 0.0;
  sc_contrast->add_option("--target", contrast_target,
                          "also invert for the temperature reaching this contrast");
  auto* sc_phase = app.add_subcommand("phase", "interferometer phase and path splitting");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }

  try {
    RunConfig cfg = config_path.empty() ? RunConfig{} : librot::io::load_config(config_path);
    if (seed_override >= 0) cfg.sim.seed = static_cast<std::uint64_t>(seed_override);
    if (args.threads < 1) throw librot::ConfigError("--threads must be at least 1");
    fs::create_directories(args.out_dir);

    if (sc_modes->parsed()) cmd_modes(cfg, args, false);
    if (sc_thresholds->parsed()) cmd_modes(cfg, args, true);
    if (sc_simulate->parsed()) cmd_simulate(cfg, args);
    if (sc_cool->parsed()) cmd_cool(cfg, args);
    if (sc_steadystate->parsed()) cmd_steadystate(cfg, args);
    if (sc_contrast->parsed()) cmd_contrast(cfg, args, contrast_target);
    if (sc_phase->parsed()) cmd_phase(cfg, args);
    return 0;
  } catch (const librot::ConfigError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const librot::InvalidShapeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const librot::TruncationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const librot::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const librot::InstabilityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const librot::GimbalSingularityError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const librot::NoSteadyStateError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const librot::UnattainableTargetError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
