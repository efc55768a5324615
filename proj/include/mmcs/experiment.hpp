#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mmcs/config.hpp"

namespace mmcs {

struct ResultRow {
    Protocol protocol = Protocol::non_cs;
    std::string mode;  // "analysis" or "sim"
    double rho = 0.5;
    double p_th_offset_db = 15.0;
    double p_th_a_offset_db = 0.0;
    double z_db = 0.0;
    double p_c = 0.0;
    double p_t = 1.0;
    std::optional<double> std_err;       // simulation rows only
    std::optional<uint64_t> seed;        // simulation rows only
};

// One failed (protocol, sweep point, mode) combination; its rows are absent.
struct RowFailure {
    Protocol protocol = Protocol::non_cs;
    std::string mode;
    double rho = 0.5;
    double p_th_offset_db = 15.0;
    double p_th_a_offset_db = 0.0;
    std::string reason;
};

struct ResultTable {
    std::vector<ResultRow> rows;
    std::vector<RowFailure> failures;
    bool ok() const { return failures.empty(); }
};

/// Run the full Cartesian sweep (protocol x rho x thresholds x mode).
/// Analysis refuses transmitter-side sensing protocols; such combinations are
/// recorded as failures and the sweep continues. Row order is deterministic:
/// config protocol order, then sweep order, analysis before sim, Z ascending.
ResultTable run_experiment(const ExperimentConfig& cfg);

/// Header: protocol,mode,rho,p_th_offset_db,p_th_a_offset_db,z_db,p_c,p_t,stderr,seed
/// Values carry 6 significant digits; stderr/seed are empty on analysis rows.
void write_csv(const ResultTable& table, std::ostream& out);

/// Same rows as the CSV plus the failure list.
void write_json(const ResultTable& table, std::ostream& out);

/// Parse write_csv output back into rows (failures are not round-tripped).
std::vector<ResultRow> read_csv(std::istream& in);

}  // namespace mmcs
