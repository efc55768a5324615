#include "mmcs/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mmcs {

namespace {

using nlohmann::json;

constexpr double kPi = 3.14159265358979323846;

[[noreturn]] void fail(const std::string& key, const std::string& msg) {
    throw std::invalid_argument("config." + key + ": " + msg);
}

// Tracks which keys were consumed so leftovers can be reported as typos.
struct Doc {
    json j;
    std::set<std::string> used;

    bool has(const std::string& key) const { return j.contains(key); }

    const json& raw(const std::string& key) {
        used.insert(key);
        return j.at(key);
    }

    double number(const std::string& key, double fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number()) fail(key, "expected a number");
        return v.get<double>();
    }

    int integer(const std::string& key, int fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_number_integer()) fail(key, "expected an integer");
        return v.get<int>();
    }

    bool boolean(const std::string& key, bool fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_boolean()) fail(key, "expected true/false");
        return v.get<bool>();
    }

    std::string text(const std::string& key, std::string fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (!v.is_string()) fail(key, "expected a string");
        return v.get<std::string>();
    }

    // Accepts a single number or an array of numbers.
    std::vector<double> number_list(const std::string& key, std::vector<double> fallback) {
        if (!has(key)) return fallback;
        const json& v = raw(key);
        if (v.is_number()) return {v.get<double>()};
        if (!v.is_array() || v.empty()) fail(key, "expected a number or a non-empty array");
        std::vector<double> out;
        for (const auto& e : v) {
            if (!e.is_number()) fail(key, "expected numeric entries");
            out.push_back(e.get<double>());
        }
        return out;
    }
};

std::vector<double> make_z_grid(double lo, double hi, double step, const std::string& key) {
    if (step <= 0.0) fail(key, "step must be positive");
    if (hi < lo) fail(key, "z_max_db below z_min_db");
    std::vector<double> grid;
    for (double z = lo; z <= hi + 1e-9; z += step) grid.push_back(z);
    return grid;
}

}  // namespace

std::string to_string(RunMode mode) {
    switch (mode) {
        case RunMode::analysis: return "analysis";
        case RunMode::simulation: return "sim";
        case RunMode::both: return "both";
    }
    throw std::logic_error("unreachable run mode");
}

RunMode run_mode_from_string(const std::string& text) {
    if (text == "analysis") return RunMode::analysis;
    if (text == "sim" || text == "simulation") return RunMode::simulation;
    if (text == "both") return RunMode::both;
    throw std::invalid_argument("unknown mode '" + text + "' (want analysis|sim|both)");
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open config file: " + path);

    Doc doc;
    try {
        in >> doc.j;
    } catch (const json::parse_error& e) {
        throw std::runtime_error(path + ": " + e.what());
    }
    if (!doc.j.is_object()) throw std::runtime_error(path + ": top level must be an object");

    ExperimentConfig cfg;

    if (doc.has("protocols")) {
        const json& v = doc.raw("protocols");
        if (!v.is_array() || v.empty()) fail("protocols", "expected a non-empty array");
        cfg.protocols.clear();
        for (const auto& e : v) {
            if (!e.is_string()) fail("protocols", "expected protocol names");
            cfg.protocols.push_back(protocol_from_string(e.get<std::string>()));
        }
    }
    if (doc.has("mode")) cfg.mode = run_mode_from_string(doc.text("mode", ""));

    cfg.lambda_1_per_km2 = doc.number("lambda_1_per_km2", cfg.lambda_1_per_km2);
    cfg.lambda_2_per_km2 = doc.number("lambda_2_per_km2", cfg.lambda_2_per_km2);
    cfg.rho_sweep = doc.number_list("rho", cfg.rho_sweep);

    cfg.path_loss.c_los = db_to_linear(doc.number("c_los_db", linear_to_db(cfg.path_loss.c_los)));
    cfg.path_loss.c_nlos = db_to_linear(doc.number("c_nlos_db", linear_to_db(cfg.path_loss.c_nlos)));
    cfg.path_loss.alpha_los = doc.number("alpha_los", cfg.path_loss.alpha_los);
    cfg.path_loss.alpha_nlos = doc.number("alpha_nlos", cfg.path_loss.alpha_nlos);
    cfg.path_loss.beta = doc.number("beta_per_m", cfg.path_loss.beta);

    cfg.antenna.n_bs = doc.integer("n_bs", cfg.antenna.n_bs);
    cfg.antenna.n_ue = doc.integer("n_ue", cfg.antenna.n_ue);
    cfg.antenna.theta_bs = doc.number("theta_bs_deg", cfg.antenna.theta_bs * 180.0 / kPi) * kPi / 180.0;
    cfg.antenna.theta_ue = doc.number("theta_ue_deg", cfg.antenna.theta_ue * 180.0 / kPi) * kPi / 180.0;
    cfg.antenna.omni_penalty_db = doc.number("omni_penalty_db", cfg.antenna.omni_penalty_db);

    cfg.noise.n0_dbm_per_hz = doc.number("noise_psd_dbm_hz", cfg.noise.n0_dbm_per_hz);
    cfg.noise.bandwidth_hz = doc.number("bandwidth_hz", cfg.noise.bandwidth_hz);
    cfg.noise.noise_figure_db = doc.number("noise_figure_db", cfg.noise.noise_figure_db);

    cfg.p_x_dbm = doc.number("p_x_dbm", cfg.p_x_dbm);
    cfg.p_u_dbm = doc.number("p_u_dbm", cfg.p_u_dbm);

    const double nf_dbm = noise_floor_dbm(cfg.noise);
    cfg.p_th_offset_db_sweep = doc.number_list("p_th_offset_db", cfg.p_th_offset_db_sweep);
    if (doc.has("p_th_dbm")) {
        if (doc.has("p_th_offset_db")) fail("p_th_dbm", "give either the offset or the absolute form, not both");
        cfg.p_th_offset_db_sweep.clear();
        for (double dbm : doc.number_list("p_th_dbm", {}))
            cfg.p_th_offset_db_sweep.push_back(dbm - nf_dbm);
    }
    cfg.p_th_a_offset_db_sweep = doc.number_list("p_th_a_offset_db", cfg.p_th_a_offset_db_sweep);
    if (doc.has("p_th_a_dbm")) {
        if (doc.has("p_th_a_offset_db")) fail("p_th_a_dbm", "give either the offset or the absolute form, not both");
        cfg.p_th_a_offset_db_sweep.clear();
        for (double dbm : doc.number_list("p_th_a_dbm", {}))
            cfg.p_th_a_offset_db_sweep.push_back(dbm - nf_dbm);
    }

    cfg.r_bar_m = doc.number("r_bar_m", cfg.r_bar_m);
    cfg.slot_duration_s = doc.number("slot_duration_s", cfg.slot_duration_s);

    if (doc.has("z_grid_db")) {
        if (doc.has("z_min_db") || doc.has("z_max_db") || doc.has("z_step_db"))
            fail("z_grid_db", "give either the explicit grid or min/max/step, not both");
        cfg.z_grid_db = doc.number_list("z_grid_db", {});
        if (!std::is_sorted(cfg.z_grid_db.begin(), cfg.z_grid_db.end()))
            fail("z_grid_db", "grid must be ascending");
    } else if (doc.has("z_min_db") || doc.has("z_max_db") || doc.has("z_step_db")) {
        cfg.z_grid_db = make_z_grid(doc.number("z_min_db", -10.0), doc.number("z_max_db", 70.0),
                                    doc.number("z_step_db", 5.0), "z_step_db");
    }

    cfg.sim.iterations_pt = doc.integer("iterations_pt", cfg.sim.iterations_pt);
    cfg.sim.iterations_cov = doc.integer("iterations_cov", cfg.sim.iterations_cov);
    cfg.sim.region_radius_m = doc.number("region_radius_m", cfg.sim.region_radius_m);
    if (doc.has("seed")) {
        const json& v = doc.raw("seed");
        if (!v.is_number_unsigned() && !v.is_number_integer()) fail("seed", "expected an integer");
        cfg.sim.master_seed = v.get<uint64_t>();
    }
    cfg.sim.threads = doc.integer("threads", cfg.sim.threads);
    cfg.sim.trace = doc.boolean("trace", cfg.sim.trace);
    cfg.sim.trace_path = doc.text("trace_path", cfg.sim.trace_path);

    cfg.quadrature.rel_tol = doc.number("quad_rel_tol", cfg.quadrature.rel_tol);
    cfg.quadrature.abs_tol = doc.number("quad_abs_tol", cfg.quadrature.abs_tol);

    cfg.output.path = doc.text("out_dir", cfg.output.path);
    cfg.output.csv = doc.boolean("emit_csv", cfg.output.csv);
    cfg.output.json = doc.boolean("emit_json", cfg.output.json);

    for (const auto& item : doc.j.items()) {
        if (!doc.used.count(item.key()))
            throw std::invalid_argument("config." + item.key() + ": unknown key");
    }

    validate_config(cfg);
    return cfg;
}

void validate_config(const ExperimentConfig& cfg) {
    if (cfg.protocols.empty()) fail("protocols", "at least one protocol required");
    if (cfg.lambda_1_per_km2 <= 0.0) fail("lambda_1_per_km2", "must be positive");
    if (cfg.lambda_2_per_km2 <= 0.0) fail("lambda_2_per_km2", "must be positive");
    for (double rho : cfg.rho_sweep) {
        if (rho < 0.0 || rho > 1.0) fail("rho", "must lie in [0, 1]");
        SharingModel m{cfg.lambda_1_per_km2, cfg.lambda_2_per_km2, rho};
        decompose_densities(m);  // rejects negative exclusive densities
    }
    if (cfg.path_loss.c_los <= 0.0 || cfg.path_loss.c_nlos <= 0.0)
        fail("c_los_db", "intercepts must be finite");
    if (cfg.path_loss.alpha_los < 2.0 || cfg.path_loss.alpha_nlos < 2.0)
        fail("alpha_los", "path-loss exponents below 2 make the interference field diverge");
    if (cfg.path_loss.beta <= 0.0) fail("beta_per_m", "must be positive");
    if (cfg.antenna.n_bs < 1 || cfg.antenna.n_ue < 1) fail("n_bs", "array sizes must be >= 1");
    if (cfg.antenna.theta_bs <= 0.0 || cfg.antenna.theta_bs > 2.0 * kPi)
        fail("theta_bs_deg", "beamwidth must lie in (0, 360] degrees");
    if (cfg.antenna.theta_ue <= 0.0 || cfg.antenna.theta_ue > 2.0 * kPi)
        fail("theta_ue_deg", "beamwidth must lie in (0, 360] degrees");
    if (cfg.noise.bandwidth_hz <= 0.0) fail("bandwidth_hz", "must be positive");
    if (cfg.p_th_offset_db_sweep.empty()) fail("p_th_offset_db", "sweep must be non-empty");
    if (cfg.p_th_a_offset_db_sweep.empty()) fail("p_th_a_offset_db", "sweep must be non-empty");
    if (cfg.r_bar_m < 0.0) fail("r_bar_m", "must be non-negative");
    if (cfg.z_grid_db.empty()) fail("z_grid_db", "grid must be non-empty");
    if (cfg.sim.iterations_pt < 1) fail("iterations_pt", "must be >= 1");
    if (cfg.sim.iterations_cov < 1) fail("iterations_cov", "must be >= 1");
    if (cfg.sim.region_radius_m <= 0.0) fail("region_radius_m", "must be positive");
    if (cfg.sim.threads < 0) fail("threads", "must be >= 0 (0 = all cores)");
    if (cfg.quadrature.rel_tol <= 0.0 || cfg.quadrature.rel_tol >= 1.0)
        fail("quad_rel_tol", "must lie in (0, 1)");
}

Scenario make_scenario(const ExperimentConfig& cfg, Protocol protocol, double rho,
                       double p_th_offset_db, double p_th_a_offset_db) {
    Scenario sc;
    sc.model = SharingModel{cfg.lambda_1_per_km2, cfg.lambda_2_per_km2, rho};
    sc.pl = cfg.path_loss;
    sc.antenna = cfg.antenna;
    sc.noise = cfg.noise;
    sc.protocol = protocol;
    sc.r_bar_m = cfg.r_bar_m;

    const double nf_dbm = noise_floor_dbm(cfg.noise);
    sc.sensing.p_x_mw = dbm_to_mw(cfg.p_x_dbm);
    sc.sensing.p_u_mw = dbm_to_mw(cfg.p_u_dbm);
    sc.sensing.p_th_mw = dbm_to_mw(nf_dbm + p_th_offset_db);
    sc.sensing.p_th_a_mw = dbm_to_mw(nf_dbm + p_th_a_offset_db);
    return sc;
}

}  // namespace mmcs
