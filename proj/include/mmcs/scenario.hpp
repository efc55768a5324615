#pragma once

#include "mmcs/deployment.hpp"
#include "mmcs/protocols.hpp"
#include "mmcs/radio.hpp"

namespace mmcs {

// Everything that defines the physical experiment, shared by the analytic and
// Monte Carlo paths.
struct Scenario {
    SharingModel model;
    PathLossParams pl;
    AntennaParams antenna;
    SensingParams sensing;
    NoiseParams noise;
    Protocol protocol = Protocol::non_cs;
    double r_bar_m = 100.0;  // average association distance; contention guard ball for receiver sensing

    // interference and thresholds are normalized by the BS transmit power
    double sigma2() const { return noise_floor_mw(noise) / sensing.p_x_mw; }
    double serving_gain() const {
        return array_gains(antenna.n_bs).mainlobe * array_gains(antenna.n_ue).mainlobe;
    }
};

}  // namespace mmcs
