#pragma once

#include <vector>

#include "mmcs/rng.hpp"

namespace mmcs {

enum class LinkType { los, nlos };

inline LinkType other(LinkType t) { return t == LinkType::los ? LinkType::nlos : LinkType::los; }

// Power-law path loss with distinct LoS/NLoS intercepts and exponents, plus the
// exponential blocking model p_LoS(r) = exp(-beta r).
struct PathLossParams {
    double c_los = 1e-6;    // intercept at 1 m, linear (-60 dB)
    double c_nlos = 1e-7;   // -70 dB
    double alpha_los = 2.0;
    double alpha_nlos = 4.0;
    double beta = 0.007;    // blockage density parameter, 1/m

    double intercept(LinkType t) const { return t == LinkType::los ? c_los : c_nlos; }
    double exponent(LinkType t) const { return t == LinkType::los ? alpha_los : alpha_nlos; }
};

// Uniform linear array approximated by a two-level (mainlobe/sidelobe) pattern.
struct AntennaParams {
    int n_bs = 64;
    int n_ue = 16;
    double theta_bs = 0.17453292519943295;  // pi/18
    double theta_ue = 0.5235987755982988;   // pi/6
    double omni_penalty_db = 7.0;           // quasi-omni mode gain backoff

    double omni_penalty() const;  // linear factor, e.g. 10^-0.7
};

struct ArrayGains {
    double mainlobe;
    double sidelobe;
};

// mainlobe 10^0.8 * n, sidelobe 1/sin^2(3 pi / (2 sqrt(n)))
ArrayGains array_gains(int n_elements);

struct GainAtom {
    double gain;
    double prob;
};

// Discrete distribution of an antenna gain product. Zero-probability atoms are
// dropped at construction; probabilities must sum to 1 within 1e-12.
class GainDistribution {
public:
    GainDistribution() = default;
    explicit GainDistribution(std::vector<GainAtom> atoms);

    const std::vector<GainAtom>& atoms() const { return atoms_; }
    double mean() const;
    double sample(Rng& rng) const;

    template <class F>
    double expected(F&& f) const {
        double acc = 0.0;
        for (const auto& a : atoms_) acc += a.prob * f(a.gain);
        return acc;
    }

private:
    std::vector<GainAtom> atoms_;
};

struct NoiseParams {
    double n0_dbm_per_hz = -174.0;
    double bandwidth_hz = 600e6;
    double noise_figure_db = 10.0;
};

double db_to_linear(double db);
double linear_to_db(double v);
double dbm_to_mw(double dbm);
double mw_to_dbm(double mw);

// exp(-beta r); rejects r < 0
double los_probability(double r, const PathLossParams& pl);

// C_tau * r^-alpha_tau; rejects r <= 0
double path_loss(double r, LinkType link, const PathLossParams& pl);

// unit-mean exponential (Rayleigh power fading)
double sample_fading(Rng& rng);

// Gain between an interfering BS and the typical UE: independent two-level
// lobes on both ends, four atoms.
GainDistribution interferer_gain_distribution(const AntennaParams& ant);

double noise_floor_dbm(const NoiseParams& noise);
double noise_floor_mw(const NoiseParams& noise);

}  // namespace mmcs
