#pragma once

#include <string>
#include <vector>

#include "mmcs/radio.hpp"

namespace mmcs {

// Medium access variants: no carrier sensing, carrier sensing at the
// transmitter (omni / directional), carrier sensing at the receiver
// (omni / directional), and directional receiver sensing with announcements.
enum class Protocol { non_cs, ocst, dcst, ocsr, dcsr, dcsra };

const char* to_string(Protocol p);
Protocol protocol_from_string(const std::string& name);
bool is_cst(Protocol p);
bool is_csr(Protocol p);  // includes dcsra

struct SensingParams {
    double p_th_mw = 0.0;    // carrier-sense threshold
    double p_th_a_mw = 0.0;  // announcement detection threshold (dCSRA)
    double p_x_mw = dbm_to_mw(36.0);  // BS transmit power
    double p_u_mw = dbm_to_mw(15.0);  // UE announcement power
};

// Distribution of the combined antenna gain on the sensing path (sensor gain
// times contender gain). Rejects non_cs.
GainDistribution sensing_gain_distribution(Protocol p, const AntennaParams& ant);

struct RadiusAtom {
    double radius;  // m
    double prob;
};

// Carrier-sense reach geometry: within the sensor's sensing beam (width
// cs_beamwidth) the reach follows the mainlobe law, outside it the sidelobe
// law; each law is discrete over the contender's lobe orientation.
struct SensingDistanceLaw {
    std::vector<RadiusAtom> mainlobe_los;
    std::vector<RadiusAtom> mainlobe_nlos;
    std::vector<RadiusAtom> sidelobe_los;
    std::vector<RadiusAtom> sidelobe_nlos;
    double cs_beamwidth = 0.0;  // theta_cs

    const std::vector<RadiusAtom>& atoms(bool mainlobe, LinkType link) const;
};

SensingDistanceLaw sensing_distance_law(Protocol p, const AntennaParams& ant,
                                        const PathLossParams& pl, const SensingParams& sp);

// Reach of a UE announcement at a listening BS, by listener lobe and link type.
struct AnnouncementRadii {
    double main_los = 0.0;
    double side_los = 0.0;
    double main_nlos = 0.0;
    double side_nlos = 0.0;
};

AnnouncementRadii announcement_radii(const AntennaParams& ant, const PathLossParams& pl,
                                     const SensingParams& sp);

// An interferer is hidden when the sensing path stays below the carrier-sense
// threshold while its interference at the UE still clears the noise floor.
// Powers are normalized received powers (C F G d^-alpha, transmit power factored out).
bool is_hidden_interferer(double sensing_path_power, double interference_power,
                          const SensingParams& sp, double noise_floor_mw);

// Same test applied to a node that started sensing after our transmission began.
bool is_deaf_interferer(double sensing_path_power, double interference_power,
                        const SensingParams& sp, double noise_floor_mw);

}  // namespace mmcs
