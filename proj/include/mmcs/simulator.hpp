#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mmcs/association.hpp"
#include "mmcs/scenario.hpp"

namespace mmcs {

std::vector<double> default_z_grid();  // -10..70 dB in 5 dB steps

struct SimConfig {
    int iterations_pt = 10000;
    int iterations_cov = 10000;
    double region_radius_m = 2000.0;
    uint64_t master_seed = 1;
    std::vector<double> z_grid_db = default_z_grid();
    int threads = 1;  // 0 = hardware concurrency
    bool trace = false;
    std::string trace_path;  // JSON lines, one record per coverage iteration
};

struct ContenderCount {
    int sensing = 0;
    int announcement = 0;
    int total() const { return sensing + announcement; }
};

// One realization's contender count at a typical sensing node placed at the
// origin (the typical UE for receiver sensing, a typical BS for transmitter
// sensing). Candidates are whole sites: co-located BSs share one carrier
// emission, so a site is heard or not as a unit. Receiver sensing skips
// operator-1-holding sites inside the average association distance (the
// guard ball standing in for the serving-cell void); transmitter sensing has
// no guard. Announcement contenders (dCSRA) are other UEs' announcements
// heard at the listening BS, one announcing UE per BS, each standing at its
// BS position (a shared site announces twice). Lobe marks and
// announcement-path blocking are drawn from `rng`; the sensing path reuses
// `site_link` so both phases see one world.
ContenderCount count_contenders(const Scenario& sc, const Deployment& dep,
                                std::span<const LinkType> site_link, Rng& rng);

struct TransmissionEstimate {
    double p_t = 1.0;
    double std_err = 0.0;
    double mean_contenders = 0.0;
    int resampled_deployments = 0;
};

// Step 1: average over realizations of the per-realization root of
// p = (1 - p)^N_c. Returns exactly 1 for non-cs.
TransmissionEstimate estimate_transmission_probability(const Scenario& sc, const SimConfig& cfg);

struct CoverageCurve {
    std::vector<double> z_db;
    std::vector<double> p_c;
    std::vector<double> std_err;
    double p_t_used = 1.0;       // activity coin fed to the contenders
    double p_t_empirical = 1.0;  // fraction of realizations whose transmission went ahead
    int resampled_deployments = 0;
    long blocked_iterations = 0;  // realizations with an active contender (SINR pinned to 0)
};

// Step 2: empirical P(SINR > z) over fresh realizations, with contenders
// active with probability p_t (an active contender blanks the iteration) and
// non-contenders interfering with probability p_t.
CoverageCurve simulate_coverage(const Scenario& sc, const SimConfig& cfg, double p_t);

}  // namespace mmcs
