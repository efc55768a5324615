#include "mmcs/protocols.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace mmcs {

const char* to_string(Protocol p) {
    switch (p) {
        case Protocol::non_cs: return "non-cs";
        case Protocol::ocst: return "ocst";
        case Protocol::dcst: return "dcst";
        case Protocol::ocsr: return "ocsr";
        case Protocol::dcsr: return "dcsr";
        case Protocol::dcsra: return "dcsra";
    }
    return "?";
}

Protocol protocol_from_string(const std::string& name) {
    if (name == "non-cs") return Protocol::non_cs;
    if (name == "ocst") return Protocol::ocst;
    if (name == "dcst") return Protocol::dcst;
    if (name == "ocsr") return Protocol::ocsr;
    if (name == "dcsr") return Protocol::dcsr;
    if (name == "dcsra") return Protocol::dcsra;
    throw std::invalid_argument("unknown protocol: " + name);
}

bool is_cst(Protocol p) { return p == Protocol::ocst || p == Protocol::dcst; }
bool is_csr(Protocol p) {
    return p == Protocol::ocsr || p == Protocol::dcsr || p == Protocol::dcsra;
}

GainDistribution sensing_gain_distribution(Protocol p, const AntennaParams& ant) {
    auto bs = array_gains(ant.n_bs);
    auto ue = array_gains(ant.n_ue);
    double kappa = ant.omni_penalty();
    double pb = ant.theta_bs / (2.0 * std::numbers::pi);
    switch (p) {
        case Protocol::non_cs:
            throw std::invalid_argument("sensing_gain_distribution: non-cs does not sense");
        case Protocol::ocst:
            // quasi-omni sensor at the transmitter, random contender lobe
            return GainDistribution({{bs.mainlobe * kappa * bs.mainlobe, pb},
                                     {bs.mainlobe * kappa * bs.sidelobe, 1.0 - pb}});
        case Protocol::dcst:
            return GainDistribution({{bs.mainlobe * bs.mainlobe, pb * pb},
                                     {bs.mainlobe * bs.sidelobe, pb * (1.0 - pb)},
                                     {bs.sidelobe * bs.mainlobe, (1.0 - pb) * pb},
                                     {bs.sidelobe * bs.sidelobe, (1.0 - pb) * (1.0 - pb)}});
        case Protocol::ocsr:
            // quasi-omni sensor at the receiver
            return GainDistribution({{ue.mainlobe * kappa * bs.mainlobe, pb},
                                     {ue.mainlobe * kappa * bs.sidelobe, 1.0 - pb}});
        case Protocol::dcsr:
        case Protocol::dcsra:
            // sensing beam equals the data beam: same law as the interference gain
            return interferer_gain_distribution(ant);
    }
    throw std::invalid_argument("sensing_gain_distribution: bad protocol");
}

namespace {

double reach(double ptx_mw, double c, double alpha, double gain, double threshold_mw) {
    return std::pow(ptx_mw * c * gain / threshold_mw, 1.0 / alpha);
}

std::vector<RadiusAtom> reach_atoms(double ptx, const PathLossParams& pl, LinkType link,
                                    double sensor_gain, const ArrayGains& contender,
                                    double prob_main, double threshold) {
    double c = pl.intercept(link);
    double alpha = pl.exponent(link);
    return {{reach(ptx, c, alpha, sensor_gain * contender.mainlobe, threshold), prob_main},
            {reach(ptx, c, alpha, sensor_gain * contender.sidelobe, threshold), 1.0 - prob_main}};
}

}  // namespace

const std::vector<RadiusAtom>& SensingDistanceLaw::atoms(bool mainlobe, LinkType link) const {
    if (mainlobe) return link == LinkType::los ? mainlobe_los : mainlobe_nlos;
    return link == LinkType::los ? sidelobe_los : sidelobe_nlos;
}

SensingDistanceLaw sensing_distance_law(Protocol p, const AntennaParams& ant,
                                        const PathLossParams& pl, const SensingParams& sp) {
    if (p == Protocol::non_cs)
        throw std::invalid_argument("sensing_distance_law: non-cs does not sense");
    if (sp.p_th_mw <= 0.0) throw std::invalid_argument("sensing_distance_law: p_th must be set");
    auto bs = array_gains(ant.n_bs);
    auto ue = array_gains(ant.n_ue);
    double kappa = ant.omni_penalty();
    double pb = ant.theta_bs / (2.0 * std::numbers::pi);

    double main_gain = 0.0, side_gain = 0.0, beam = 0.0;
    switch (p) {
        case Protocol::ocst:
            main_gain = side_gain = bs.mainlobe * kappa;
            beam = 2.0 * std::numbers::pi;
            break;
        case Protocol::dcst:
            main_gain = bs.mainlobe;
            side_gain = bs.sidelobe;
            beam = ant.theta_bs;
            break;
        case Protocol::ocsr:
            main_gain = side_gain = ue.mainlobe * kappa;
            beam = 2.0 * std::numbers::pi;
            break;
        case Protocol::dcsr:
        case Protocol::dcsra:
            main_gain = ue.mainlobe;
            side_gain = ue.sidelobe;
            beam = ant.theta_ue;
            break;
        default:
            throw std::invalid_argument("sensing_distance_law: bad protocol");
    }

    SensingDistanceLaw law;
    law.cs_beamwidth = beam;
    law.mainlobe_los = reach_atoms(sp.p_x_mw, pl, LinkType::los, main_gain, bs, pb, sp.p_th_mw);
    law.mainlobe_nlos = reach_atoms(sp.p_x_mw, pl, LinkType::nlos, main_gain, bs, pb, sp.p_th_mw);
    law.sidelobe_los = reach_atoms(sp.p_x_mw, pl, LinkType::los, side_gain, bs, pb, sp.p_th_mw);
    law.sidelobe_nlos = reach_atoms(sp.p_x_mw, pl, LinkType::nlos, side_gain, bs, pb, sp.p_th_mw);
    return law;
}

AnnouncementRadii announcement_radii(const AntennaParams& ant, const PathLossParams& pl,
                                     const SensingParams& sp) {
    if (sp.p_th_a_mw <= 0.0) throw std::invalid_argument("announcement_radii: p_th_a must be set");
    auto bs = array_gains(ant.n_bs);
    auto ue = array_gains(ant.n_ue);
    double kappa = ant.omni_penalty();  // the UE announces quasi-omni
    AnnouncementRadii r;
    r.main_los = reach(sp.p_u_mw, pl.c_los, pl.alpha_los, bs.mainlobe * ue.mainlobe * kappa,
                       sp.p_th_a_mw);
    r.side_los = reach(sp.p_u_mw, pl.c_los, pl.alpha_los, bs.sidelobe * ue.mainlobe * kappa,
                       sp.p_th_a_mw);
    r.main_nlos = reach(sp.p_u_mw, pl.c_nlos, pl.alpha_nlos, bs.mainlobe * ue.mainlobe * kappa,
                        sp.p_th_a_mw);
    r.side_nlos = reach(sp.p_u_mw, pl.c_nlos, pl.alpha_nlos, bs.sidelobe * ue.mainlobe * kappa,
                        sp.p_th_a_mw);
    return r;
}

bool is_hidden_interferer(double sensing_path_power, double interference_power,
                          const SensingParams& sp, double noise_floor_mw) {
    if (sp.p_th_mw <= 0.0 || sp.p_x_mw <= 0.0)
        throw std::invalid_argument("is_hidden_interferer: thresholds must be positive");
    return sensing_path_power < sp.p_th_mw / sp.p_x_mw &&
           interference_power > noise_floor_mw / sp.p_x_mw;
}

bool is_deaf_interferer(double sensing_path_power, double interference_power,
                        const SensingParams& sp, double noise_floor_mw) {
    return is_hidden_interferer(sensing_path_power, interference_power, sp, noise_floor_mw);
}

}  // namespace mmcs
