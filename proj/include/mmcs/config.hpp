#pragma once

#include <string>
#include <vector>

#include "mmcs/analysis.hpp"
#include "mmcs/protocols.hpp"
#include "mmcs/radio.hpp"
#include "mmcs/scenario.hpp"
#include "mmcs/simulator.hpp"

namespace mmcs {

enum class RunMode { analysis, simulation, both };

std::string to_string(RunMode mode);
RunMode run_mode_from_string(const std::string& text);

struct OutputSpec {
    std::string path = ".";
    bool csv = true;
    bool json = true;
};

/// Full description of one experiment: which protocols to run, in which
/// mode(s), over which parameter sweeps, plus every radio/network knob.
/// Defaults reproduce the reference parameter set used throughout the tests:
/// W = 600 MHz, C_L = -60 dB, C_N = -70 dB, alpha = (2, 4), P_X = 36 dBm,
/// P_U = 15 dBm, n_BS = 64, n_UE = 16, N_F = 10 dB, beta = 0.007 /m,
/// lambda_1 = lambda_2 = 30 /km^2, rho = 0.5, R_bar = 100 m,
/// P_th = noise floor + 15 dB, P_th^A = noise floor.
struct ExperimentConfig {
    std::vector<Protocol> protocols{Protocol::non_cs, Protocol::ocst,
                                    Protocol::dcst,   Protocol::ocsr,
                                    Protocol::dcsr,   Protocol::dcsra};
    RunMode mode = RunMode::both;

    double lambda_1_per_km2 = 30.0;
    double lambda_2_per_km2 = 30.0;
    std::vector<double> rho_sweep{0.5};

    PathLossParams path_loss{};
    AntennaParams antenna{};
    NoiseParams noise{};
    double p_x_dbm = 36.0;
    double p_u_dbm = 15.0;

    // Sensing thresholds as dB offsets above the computed noise floor.
    std::vector<double> p_th_offset_db_sweep{15.0};
    std::vector<double> p_th_a_offset_db_sweep{0.0};

    double r_bar_m = 100.0;

    // Recorded for bookkeeping; no implemented formula consumes it.
    double slot_duration_s = 0.0;

    std::vector<double> z_grid_db = default_z_grid();
    SimConfig sim{};
    QuadratureSpec quadrature{};
    OutputSpec output{};
};

/// Parse a flat JSON config file. Every omitted key falls back to the
/// defaults above; unknown keys are rejected so typos fail loudly.
/// Scalar-or-list keys (rho, p_th_offset_db, p_th_a_offset_db) accept either
/// a number or an array of numbers. Absolute thresholds (p_th_dbm,
/// p_th_a_dbm) are accepted as alternatives to the offset form and are
/// converted to offsets against the computed noise floor.
ExperimentConfig load_config(const std::string& path);

/// Range/consistency checks; throws std::invalid_argument naming the field.
void validate_config(const ExperimentConfig& cfg);

/// Assemble the per-run scenario for one sweep point.
Scenario make_scenario(const ExperimentConfig& cfg, Protocol protocol,
                       double rho, double p_th_offset_db,
                       double p_th_a_offset_db);

}  // namespace mmcs
