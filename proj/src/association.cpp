#include "mmcs/association.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmcs {

namespace {

// (1 - e^-x (1 + x)) / beta^2 written as r^2 * series(x) for small x = beta r,
// where the direct form loses all precision to cancellation.
double blocked_mass(double r, double beta) {
    double x = beta * r;
    if (x < 1e-3)
        return r * r * (0.5 - x / 3.0 + x * x / 8.0 - x * x * x / 30.0 + x * x * x * x / 144.0);
    return (1.0 - std::exp(-x) * (1.0 + x)) / (beta * beta);
}

}  // namespace

double exclusion_radius(double r, LinkType serving_link, const PathLossParams& pl) {
    if (r <= 0.0) throw std::invalid_argument("exclusion_radius: distance must be positive");
    if (serving_link == LinkType::los)
        return std::pow(pl.c_nlos / pl.c_los, 1.0 / pl.alpha_nlos) *
               std::pow(r, pl.alpha_los / pl.alpha_nlos);
    return std::pow(pl.c_los / pl.c_nlos, 1.0 / pl.alpha_los) *
           std::pow(r, pl.alpha_nlos / pl.alpha_los);
}

double void_exponent(double r, LinkType link, double lambda_s, const PathLossParams& pl) {
    if (r < 0.0) throw std::invalid_argument("void_exponent: negative distance");
    if (lambda_s < 0.0) throw std::invalid_argument("void_exponent: negative density");
    double lam = lambda_s * 1e-6;  // sites/m^2
    double two_pi_lam = 2.0 * std::numbers::pi * lam;
    double mass = blocked_mass(r, pl.beta);
    if (link == LinkType::los) return two_pi_lam * mass;
    return two_pi_lam * (r * r / 2.0 - mass);
}

double association_pdf(double r, LinkType link, OperatorSet set, const SharingModel& model,
                       const PathLossParams& pl) {
    if (r <= 0.0) return 0.0;
    if (set == OperatorSet::op2_only)
        throw std::invalid_argument("association_pdf: operator-1 UE cannot serve from op2-only");
    auto dens = decompose_densities(model);
    double lam_set = dens.of(set) * 1e-6;
    // every operator-1 process must be void of better candidates, in both link types
    double dcross = exclusion_radius(r, link, pl);
    double expo = void_exponent(r, link, model.lambda_1, pl) +
                  void_exponent(dcross, other(link), model.lambda_1, pl);
    double p_link = link == LinkType::los ? los_probability(r, pl) : 1.0 - los_probability(r, pl);
    return 2.0 * std::numbers::pi * lam_set * r * p_link * std::exp(-expo);
}

std::optional<AssociationOutcome> associate(const Deployment& d,
                                            std::span<const LinkType> link_of_site, int op,
                                            const PathLossParams& pl) {
    if (link_of_site.size() != d.sites.size())
        throw std::invalid_argument("associate: link map size mismatch");
    AssociationOutcome best;
    double best_power = -1.0;
    for (int i = 0; i < static_cast<int>(d.sites.size()); ++i) {
        if (!contains_operator(d.sites[i].operators, op)) continue;
        double r = d.sites[i].distance_to_origin();
        if (r <= 0.0) r = 1e-9;  // site exactly on the UE: treat as epsilon range
        double p = path_loss(r, link_of_site[i], pl);
        if (p > best_power) {
            best_power = p;
            best = {i, link_of_site[i], r, d.sites[i].operators};
        }
    }
    if (best.bs_index < 0) return std::nullopt;
    return best;
}

}  // namespace mmcs
