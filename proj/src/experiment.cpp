#include "mmcs/experiment.hpp"

#include <cstdio>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace mmcs {

namespace {

std::string sig6(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.6g", v);
    return buf;
}

struct SweepPoint {
    double rho;
    double p_th_offset_db;
    double p_th_a_offset_db;
};

void run_analysis_combo(const ExperimentConfig& cfg, Protocol proto, const SweepPoint& pt,
                        ResultTable& table) {
    AnalysisContext ctx;
    ctx.scenario = make_scenario(cfg, proto, pt.rho, pt.p_th_offset_db, pt.p_th_a_offset_db);
    ctx.r_bar_m = cfg.r_bar_m;
    ctx.quadrature = cfg.quadrature;

    std::vector<ResultRow> rows;
    rows.reserve(cfg.z_grid_db.size());
    try {
        for (double z : cfg.z_grid_db) {
            CoverageResult res = coverage_probability(z, ctx);
            if (!res.converged)
                throw std::runtime_error("quadrature did not converge at z = " + sig6(z) + " dB");
            ResultRow row;
            row.protocol = proto;
            row.mode = "analysis";
            row.rho = pt.rho;
            row.p_th_offset_db = pt.p_th_offset_db;
            row.p_th_a_offset_db = pt.p_th_a_offset_db;
            row.z_db = z;
            row.p_c = res.p_c;
            row.p_t = res.p_t;
            rows.push_back(row);
        }
    } catch (const std::exception& e) {
        table.failures.push_back({proto, "analysis", pt.rho, pt.p_th_offset_db,
                                  pt.p_th_a_offset_db, e.what()});
        return;
    }
    table.rows.insert(table.rows.end(), rows.begin(), rows.end());
}

void run_sim_combo(const ExperimentConfig& cfg, Protocol proto, const SweepPoint& pt,
                   ResultTable& table) {
    Scenario sc = make_scenario(cfg, proto, pt.rho, pt.p_th_offset_db, pt.p_th_a_offset_db);
    SimConfig sim = cfg.sim;
    sim.z_grid_db = cfg.z_grid_db;  // both paths must answer on the same grid
    try {
        TransmissionEstimate pt_est = estimate_transmission_probability(sc, sim);
        CoverageCurve curve = simulate_coverage(sc, sim, pt_est.p_t);
        for (size_t i = 0; i < curve.z_db.size(); ++i) {
            ResultRow row;
            row.protocol = proto;
            row.mode = "sim";
            row.rho = pt.rho;
            row.p_th_offset_db = pt.p_th_offset_db;
            row.p_th_a_offset_db = pt.p_th_a_offset_db;
            row.z_db = curve.z_db[i];
            row.p_c = curve.p_c[i];
            row.p_t = curve.p_t_empirical;
            row.std_err = curve.std_err[i];
            row.seed = cfg.sim.master_seed;
            table.rows.push_back(row);
        }
    } catch (const std::exception& e) {
        table.failures.push_back({proto, "sim", pt.rho, pt.p_th_offset_db,
                                  pt.p_th_a_offset_db, e.what()});
    }
}

}  // namespace

ResultTable run_experiment(const ExperimentConfig& cfg) {
    validate_config(cfg);
    ResultTable table;
    for (Protocol proto : cfg.protocols) {
        for (double rho : cfg.rho_sweep) {
            for (double p_th : cfg.p_th_offset_db_sweep) {
                for (double p_th_a : cfg.p_th_a_offset_db_sweep) {
                    SweepPoint pt{rho, p_th, p_th_a};
                    if (cfg.mode != RunMode::simulation) run_analysis_combo(cfg, proto, pt, table);
                    if (cfg.mode != RunMode::analysis) run_sim_combo(cfg, proto, pt, table);
                }
            }
        }
    }
    return table;
}

void write_csv(const ResultTable& table, std::ostream& out) {
    out << "protocol,mode,rho,p_th_offset_db,p_th_a_offset_db,z_db,p_c,p_t,stderr,seed\n";
    for (const ResultRow& r : table.rows) {
        out << to_string(r.protocol) << ',' << r.mode << ',' << sig6(r.rho) << ','
            << sig6(r.p_th_offset_db) << ',' << sig6(r.p_th_a_offset_db) << ','
            << sig6(r.z_db) << ',' << sig6(r.p_c) << ',' << sig6(r.p_t) << ',';
        if (r.std_err) out << sig6(*r.std_err);
        out << ',';
        if (r.seed) out << *r.seed;
        out << '\n';
    }
}

void write_json(const ResultTable& table, std::ostream& out) {
    nlohmann::json doc;
    doc["rows"] = nlohmann::json::array();
    for (const ResultRow& r : table.rows) {
        nlohmann::json row{{"protocol", to_string(r.protocol)}, {"mode", r.mode},
                           {"rho", r.rho},
                           {"p_th_offset_db", r.p_th_offset_db},
                           {"p_th_a_offset_db", r.p_th_a_offset_db},
                           {"z_db", r.z_db},
                           {"p_c", r.p_c},
                           {"p_t", r.p_t}};
        if (r.std_err) row["stderr"] = *r.std_err;
        if (r.seed) row["seed"] = *r.seed;
        doc["rows"].push_back(std::move(row));
    }
    doc["failures"] = nlohmann::json::array();
    for (const RowFailure& f : table.failures) {
        doc["failures"].push_back({{"protocol", to_string(f.protocol)},
                                   {"mode", f.mode},
                                   {"rho", f.rho},
                                   {"p_th_offset_db", f.p_th_offset_db},
                                   {"p_th_a_offset_db", f.p_th_a_offset_db},
                                   {"reason", f.reason}});
    }
    out << doc.dump(2) << '\n';
}

std::vector<ResultRow> read_csv(std::istream& in) {
    std::string line;
    if (!std::getline(in, line))
        throw std::runtime_error("empty CSV");
    if (line != "protocol,mode,rho,p_th_offset_db,p_th_a_offset_db,z_db,p_c,p_t,stderr,seed")
        throw std::runtime_error("unexpected CSV header: " + line);

    std::vector<ResultRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<std::string> cells;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) cells.push_back(cell);
        while (cells.size() < 10) cells.emplace_back();  // trailing empties
        if (cells.size() != 10) throw std::runtime_error("bad CSV row: " + line);

        ResultRow r;
        r.protocol = protocol_from_string(cells[0]);
        r.mode = cells[1];
        r.rho = std::stod(cells[2]);
        r.p_th_offset_db = std::stod(cells[3]);
        r.p_th_a_offset_db = std::stod(cells[4]);
        r.z_db = std::stod(cells[5]);
        r.p_c = std::stod(cells[6]);
        r.p_t = std::stod(cells[7]);
        if (!cells[8].empty()) r.std_err = std::stod(cells[8]);
        if (!cells[9].empty()) r.seed = std::stoull(cells[9]);
        rows.push_back(std::move(r));
    }
    return rows;
}

}  // namespace mmcs
