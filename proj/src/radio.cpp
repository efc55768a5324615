#include "mmcs/radio.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmcs {

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }
double linear_to_db(double v) { return 10.0 * std::log10(v); }
double dbm_to_mw(double dbm) { return std::pow(10.0, dbm / 10.0); }
double mw_to_dbm(double mw) { return 10.0 * std::log10(mw); }

double AntennaParams::omni_penalty() const { return db_to_linear(-omni_penalty_db); }

ArrayGains array_gains(int n_elements) {
    if (n_elements < 1) throw std::invalid_argument("array_gains: need at least one element");
    double n = static_cast<double>(n_elements);
    double s = std::sin(3.0 * std::numbers::pi / (2.0 * std::sqrt(n)));
    return {std::pow(10.0, 0.8) * n, 1.0 / (s * s)};
}

GainDistribution::GainDistribution(std::vector<GainAtom> atoms) {
    double total = 0.0;
    for (const auto& a : atoms) {
        if (a.prob < 0.0) throw std::invalid_argument("GainDistribution: negative probability");
        if (a.prob == 0.0) continue;
        if (a.gain <= 0.0) throw std::invalid_argument("GainDistribution: gain must be positive");
        total += a.prob;
        atoms_.push_back(a);
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw std::invalid_argument("GainDistribution: probabilities must sum to 1");
    if (atoms_.empty()) throw std::invalid_argument("GainDistribution: no atoms");
}

double GainDistribution::mean() const {
    double acc = 0.0;
    for (const auto& a : atoms_) acc += a.prob * a.gain;
    return acc;
}

double GainDistribution::sample(Rng& rng) const {
    double u = rng.uniform();
    double acc = 0.0;
    for (const auto& a : atoms_) {
        acc += a.prob;
        if (u < acc) return a.gain;
    }
    return atoms_.back().gain;
}

double los_probability(double r, const PathLossParams& pl) {
    if (r < 0.0) throw std::invalid_argument("los_probability: negative distance");
    return std::exp(-pl.beta * r);
}

double path_loss(double r, LinkType link, const PathLossParams& pl) {
    if (r <= 0.0) throw std::invalid_argument("path_loss: distance must be positive");
    return pl.intercept(link) * std::pow(r, -pl.exponent(link));
}

double sample_fading(Rng& rng) { return rng.exponential(); }

GainDistribution interferer_gain_distribution(const AntennaParams& ant) {
    auto bs = array_gains(ant.n_bs);
    auto ue = array_gains(ant.n_ue);
    double pb = ant.theta_bs / (2.0 * std::numbers::pi);
    double pu = ant.theta_ue / (2.0 * std::numbers::pi);
    return GainDistribution({{bs.mainlobe * ue.mainlobe, pb * pu},
                             {bs.mainlobe * ue.sidelobe, pb * (1.0 - pu)},
                             {bs.sidelobe * ue.mainlobe, (1.0 - pb) * pu},
                             {bs.sidelobe * ue.sidelobe, (1.0 - pb) * (1.0 - pu)}});
}

double noise_floor_dbm(const NoiseParams& noise) {
    return noise.n0_dbm_per_hz + 10.0 * std::log10(noise.bandwidth_hz) + noise.noise_figure_db;
}

double noise_floor_mw(const NoiseParams& noise) { return dbm_to_mw(noise_floor_dbm(noise)); }

}  // namespace mmcs
