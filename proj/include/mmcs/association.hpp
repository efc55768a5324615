#pragma once

#include <optional>
#include <span>

#include "mmcs/deployment.hpp"
#include "mmcs/radio.hpp"

namespace mmcs {

struct AssociationOutcome {
    int bs_index = -1;  // site index in the deployment
    LinkType link = LinkType::los;
    double distance = 0.0;  // m
    OperatorSet operator_set = OperatorSet::op1_only;
};

// Radius below which an interferer of the *other* link type would beat the
// serving link's average power: serving LoS at r excludes NLoS sites inside
// D_N(r) = (C_N/C_L)^(1/a_N) r^(a_L/a_N), and symmetrically for NLoS service.
double exclusion_radius(double r, LinkType serving_link, const PathLossParams& pl);

// Expected number of sites of one process, closer in average power than a
// serving link of the given type at range r:
//   LoS:  2 pi lambda (1 - e^(-beta r)(1 + beta r)) / beta^2
//   NLoS: 2 pi lambda (r^2/2 - (1 - e^(-beta r)(1 + beta r)) / beta^2)
// lambda_s is in sites/km^2.
double void_exponent(double r, LinkType link, double lambda_s, const PathLossParams& pl);

// Density (1/m) of the serving distance restricted to a given link type and
// operator set, for an operator-1 UE.
double association_pdf(double r, LinkType link, OperatorSet set, const SharingModel& model,
                       const PathLossParams& pl);

// Strongest average received power among the operator's sites, given each
// site's blocking state. Ties break to the lowest site index. Empty view -> nullopt.
std::optional<AssociationOutcome> associate(const Deployment& d,
                                            std::span<const LinkType> link_of_site, int op,
                                            const PathLossParams& pl);

}  // namespace mmcs
