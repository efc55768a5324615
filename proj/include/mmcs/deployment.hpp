#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mmcs/radio.hpp"
#include "mmcs/rng.hpp"

namespace mmcs {

// Which operators own a base station at a site. Two-operator system.
enum class OperatorSet : uint8_t { op1_only, op2_only, shared };

bool contains_operator(OperatorSet s, int op);
const char* to_string(OperatorSet s);

// Subscriber densities per operator plus the sharing degree rho. Densities are
// sites per km^2; positions everywhere else are meters.
struct SharingModel {
    double lambda_1 = 30.0;
    double lambda_2 = 30.0;
    double rho = 0.5;  // in [0,1]: fraction of sites hosting both operators
};

struct DensityDecomposition {
    double total;   // lambda = (lambda_1 + lambda_2) / (1 + rho), sites/km^2
    double shared;  // rho * lambda
    double excl_1;  // lambda_1 - rho * lambda
    double excl_2;
    double a;       // lambda_1 / lambda
    double b;       // 1 - lambda_2 / lambda (not consumed by any formula; reporting only)

    double of(OperatorSet s) const;
};

// Splits the per-operator densities into the three independent site processes.
// Rejects rho outside [0,1] and parameter combinations where an exclusive
// density would come out negative.
DensityDecomposition decompose_densities(const SharingModel& model);

struct Site {
    double x = 0.0;  // m
    double y = 0.0;
    OperatorSet operators = OperatorSet::op1_only;

    double distance_to(double px, double py) const;
    double distance_to_origin() const;
};

struct Deployment {
    std::vector<Site> sites;
    double region_radius = 0.0;  // m, disk centered on the typical UE at the origin
    uint64_t seed = 0;
    int resample_count = 0;  // draws redone because no operator-1 site appeared
};

// Superposition of three independent Poisson processes on a disk around the
// origin. Realizations with no operator-1 site are redrawn (and counted).
Deployment sample_deployment(const SharingModel& model, double region_radius_m, uint64_t seed);
Deployment sample_deployment(const SharingModel& model, double region_radius_m, Rng& rng);

// Indices of the sites an operator's UE can associate with.
std::vector<int> operator_view(const Deployment& d, int op);

// JSON-lines round trip: a header line with region metadata, then one object
// per site. Meant for pinning regression fixtures.
void dump_jsonl(const Deployment& d, const std::string& path);
Deployment load_jsonl(const std::string& path);

}  // namespace mmcs
