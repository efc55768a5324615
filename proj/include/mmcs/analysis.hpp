#pragma once

#include "mmcs/association.hpp"
#include "mmcs/quadrature.hpp"
#include "mmcs/scenario.hpp"

namespace mmcs {

struct QuadratureSpec {
    double rel_tol = 1e-6;
    double abs_tol = 1e-10;
    double r_max_m = 0.0;  // >0 truncates the radial integrals there; 0 = automatic tail handling
};

struct AnalysisContext {
    Scenario scenario;
    double r_bar_m = 100.0;  // mean association distance used by the contender integrals
    QuadratureSpec quadrature;
};

// Mean carrier-sense exclusion radii: h for ongoing transmissions, d for
// announcements (dCSRA only). Zero radii for non-cs; transmitter-side sensing
// has no receiver-centric exclusion and is rejected.
struct ExclusionRadii {
    double h_los = 0.0;
    double h_nlos = 0.0;
    double d_los = 0.0;
    double d_nlos = 0.0;

    double h(LinkType t) const { return t == LinkType::los ? h_los : h_nlos; }
    double d(LinkType t) const { return t == LinkType::los ? d_los : d_nlos; }
};

// Laplace-transform kernel of one interferer at range t:
//   u(s,t) = (1 - p_t/2) + (p_t/2) E_G[ 1 / (1 + s C_tau G t^-alpha_tau) ]
// The p_t/2 factor is the chance the interferer is active within its
// hidden-or-deaf half of the population.
double u_function(double s, double t, LinkType link, double p_t, const AnalysisContext& ctx);

ExclusionRadii avg_exclusion_radii(const AnalysisContext& ctx);

// Conditional Laplace transform of the total interference at the typical UE,
// given service from `serving_set` at range r over `serving_link`.
double laplace_interference(double s, double r, LinkType serving_link, OperatorSet serving_set,
                            double p_t, const ExclusionRadii& radii, const AnalysisContext& ctx);

// Mean number of contenders heard by the sensing node (plus announcement
// contenders for dCSRA). Rejects non-cs.
double avg_contenders(const AnalysisContext& ctx);

// Root of p = (1 - p)^n_c on [0,1]; bisection to 1e-12 interval width.
double solve_transmission_probability(double n_c);

struct CoverageResult {
    double p_c = 0.0;
    double p_t = 1.0;
    bool converged = true;
};

// Downlink coverage probability P(SINR > z) for the typical operator-1 UE.
// Analytic path supports non-cs and the receiver-sensing family only.
CoverageResult coverage_probability(double z_db, const AnalysisContext& ctx);

}  // namespace mmcs
