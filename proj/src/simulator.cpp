#include "mmcs/simulator.hpp"

#include <atomic>
#include <cmath>
#include <fstream>
#include <numbers>
#include <stdexcept>
#include <thread>

#include "json.hpp"
#include "mmcs/analysis.hpp"

namespace mmcs {

std::vector<double> default_z_grid() {
    std::vector<double> z;
    for (int db = -10; db <= 70; db += 5) z.push_back(static_cast<double>(db));
    return z;
}

namespace {

constexpr uint64_t kPhaseTransmission = 1;
constexpr uint64_t kPhaseCoverage = 2;

double reach(double ptx, double c, double alpha, double gain, double thr) {
    return std::pow(ptx * c * gain / thr, 1.0 / alpha);
}

// immutable per-scenario tables used in the iteration hot loop
struct ProtocolTables {
    ArrayGains bs, ue;
    double prob_bs_main, prob_ue_main;
    bool senses = false;
    bool receiver_side = false;   // sensing node is the UE
    bool directional_cs = false;  // sensor lobe matters (dCST/dCSR/dCSRA)
    bool announcements = false;
    // sensing reach by [sensor mainlobe][contender mainlobe][link], meters
    double cs_reach[2][2][2] = {};
    // announcement reach by [listener mainlobe][link]
    double ann_reach[2][2] = {};

    static ProtocolTables make(const Scenario& sc) {
        ProtocolTables t;
        t.bs = array_gains(sc.antenna.n_bs);
        t.ue = array_gains(sc.antenna.n_ue);
        t.prob_bs_main = sc.antenna.theta_bs / (2.0 * std::numbers::pi);
        t.prob_ue_main = sc.antenna.theta_ue / (2.0 * std::numbers::pi);
        if (sc.protocol == Protocol::non_cs) return t;

        t.senses = true;
        t.receiver_side = is_csr(sc.protocol);
        t.directional_cs = sc.protocol == Protocol::dcst || sc.protocol == Protocol::dcsr ||
                           sc.protocol == Protocol::dcsra;
        t.announcements = sc.protocol == Protocol::dcsra;
        double kappa = sc.antenna.omni_penalty();

        double sensor_gain[2];  // [sensor mainlobe? 1 : 0]
        switch (sc.protocol) {
            case Protocol::ocst: sensor_gain[0] = sensor_gain[1] = t.bs.mainlobe * kappa; break;
            case Protocol::dcst: sensor_gain[0] = t.bs.sidelobe; sensor_gain[1] = t.bs.mainlobe; break;
            case Protocol::ocsr: sensor_gain[0] = sensor_gain[1] = t.ue.mainlobe * kappa; break;
            default:             sensor_gain[0] = t.ue.sidelobe; sensor_gain[1] = t.ue.mainlobe; break;
        }
        for (int sm = 0; sm < 2; ++sm)
            for (int cm = 0; cm < 2; ++cm) {
                double g = sensor_gain[sm] * (cm ? t.bs.mainlobe : t.bs.sidelobe);
                t.cs_reach[sm][cm][0] = reach(sc.sensing.p_x_mw, sc.pl.c_nlos, sc.pl.alpha_nlos,
                                              g, sc.sensing.p_th_mw);
                t.cs_reach[sm][cm][1] = reach(sc.sensing.p_x_mw, sc.pl.c_los, sc.pl.alpha_los,
                                              g, sc.sensing.p_th_mw);
            }
        if (t.announcements) {
            auto ar = announcement_radii(sc.antenna, sc.pl, sc.sensing);
            t.ann_reach[1][1] = ar.main_los;
            t.ann_reach[1][0] = ar.main_nlos;
            t.ann_reach[0][1] = ar.side_los;
            t.ann_reach[0][0] = ar.side_nlos;
        }
        return t;
    }
};

struct WorldBs {
    double dist_ue;
    LinkType link_ue;  // blocking of the BS->UE path (also the UE->BS announcement path)
    bool bs_main;      // BS mainlobe covers the typical UE
    bool ue_main;      // BS lies in the UE's data/sensing mainlobe
    int site;
};

// Co-located BSs share one mast, so contention is decided per site: the pair
// is one carrier emission to a sensing node, and a back-off silences both.
struct WorldSite {
    double x, y;
    double dist_ue;
    LinkType link_ue;
    int rep_bs = -1;  // first interfering BS here; carries the site's sensing marks
    bool serving = false;
};

struct World {
    AssociationOutcome assoc;
    double serving_x = 0.0, serving_y = 0.0;
    std::vector<WorldSite> sites;
    std::vector<WorldBs> bs;  // every BS except the serving one
};

// Fixed draw order: per-site blocking, association, then per-BS marks in site
// order (operator 1 before operator 2). Keeps a (seed, scenario) pair fully
// reproducible regardless of scheduling.
std::optional<World> build_world(const Scenario& sc, const Deployment& dep,
                                 const ProtocolTables& tab, Rng& rng,
                                 std::vector<LinkType>& site_link) {
    site_link.clear();
    site_link.reserve(dep.sites.size());
    for (const auto& s : dep.sites) {
        double p = los_probability(std::max(s.distance_to_origin(), 1e-9), sc.pl);
        site_link.push_back(rng.bernoulli(p) ? LinkType::los : LinkType::nlos);
    }
    auto assoc = associate(dep, site_link, 1, sc.pl);
    if (!assoc) return std::nullopt;

    World w;
    w.assoc = *assoc;
    w.serving_x = dep.sites[w.assoc.bs_index].x;
    w.serving_y = dep.sites[w.assoc.bs_index].y;
    w.sites.reserve(dep.sites.size());
    w.bs.reserve(dep.sites.size() * 2);
    for (int i = 0; i < static_cast<int>(dep.sites.size()); ++i) {
        const Site& site = dep.sites[i];
        WorldSite ws;
        ws.x = site.x;
        ws.y = site.y;
        ws.dist_ue = std::max(site.distance_to_origin(), 1e-9);
        ws.link_ue = site_link[i];
        ws.serving = i == w.assoc.bs_index;
        for (int op = 1; op <= 2; ++op) {
            if (!contains_operator(site.operators, op)) continue;
            if (ws.serving && op == 1) continue;
            WorldBs b;
            b.dist_ue = ws.dist_ue;
            b.link_ue = ws.link_ue;
            b.bs_main = rng.bernoulli(tab.prob_bs_main);
            b.ue_main = rng.bernoulli(tab.prob_ue_main);
            b.site = i;
            if (ws.rep_bs < 0) ws.rep_bs = static_cast<int>(w.bs.size());
            w.bs.push_back(b);
        }
        w.sites.push_back(ws);
    }
    return w;
}

// Sensing-contender flags per site; the serving site never contends against
// its own link. Receiver sensing reuses the site's BS->UE marks through the
// representative BS; transmitter sensing draws fresh BS->BS path marks.
void flag_sensing_contenders(const Scenario& sc, const ProtocolTables& tab, const World& w,
                             Rng& rng, std::vector<uint8_t>& out) {
    out.assign(w.sites.size(), 0);
    if (!tab.senses) return;
    for (size_t i = 0; i < w.sites.size(); ++i) {
        const WorldSite& s = w.sites[i];
        if (s.serving) continue;
        double dist;
        int link_is_los, contender_main, sensor_main;
        if (tab.receiver_side) {
            const WorldBs& rep = w.bs[s.rep_bs];
            dist = s.dist_ue;
            link_is_los = s.link_ue == LinkType::los;
            contender_main = rep.bs_main;
            sensor_main = tab.directional_cs ? rep.ue_main : 1;
        } else {
            dist = std::max(std::hypot(s.x - w.serving_x, s.y - w.serving_y), 1e-9);
            link_is_los = rng.bernoulli(los_probability(dist, sc.pl));
            contender_main = rng.bernoulli(tab.prob_bs_main);
            sensor_main = tab.directional_cs ? rng.bernoulli(tab.prob_bs_main) : 1;
        }
        if (dist <= tab.cs_reach[sensor_main][contender_main][link_is_los]) out[i] = 1;
    }
}

// dCSRA: other UEs' announcements heard at the serving BS, one announcing UE
// per BS, proxied by its BS position. Fresh path marks (BS->BS geometry).
void flag_announcement_contenders(const Scenario& sc, const ProtocolTables& tab, const World& w,
                                  Rng& rng, std::vector<uint8_t>& out) {
    out.assign(w.bs.size(), 0);
    if (!tab.announcements) return;
    for (size_t j = 0; j < w.bs.size(); ++j) {
        const WorldSite& s = w.sites[w.bs[j].site];
        if (s.serving) continue;
        double dist = std::max(std::hypot(s.x - w.serving_x, s.y - w.serving_y), 1e-9);
        int link_is_los = rng.bernoulli(los_probability(dist, sc.pl));
        int listener_main = rng.bernoulli(tab.prob_bs_main);
        if (dist <= tab.ann_reach[listener_main][link_is_los]) out[j] = 1;
    }
}

struct IterationScratch {
    std::vector<LinkType> site_link;
    std::vector<uint8_t> sensing, announcement;
};

ContenderCount count_in_world(const Scenario& sc, const ProtocolTables& tab, const World& w,
                              Rng& rng, IterationScratch& scratch) {
    ContenderCount c;
    flag_sensing_contenders(sc, tab, w, rng, scratch.sensing);
    for (uint8_t f : scratch.sensing) c.sensing += f;
    flag_announcement_contenders(sc, tab, w, rng, scratch.announcement);
    for (uint8_t f : scratch.announcement) c.announcement += f;
    return c;
}

template <class PerIteration>
void run_parallel(int iterations, int threads, PerIteration&& body) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 1) {
        for (int i = 0; i < iterations; ++i) body(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    pool.reserve(threads);
    for (int t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (;;) {
                int i = next.fetch_add(1);
                if (i >= iterations) return;
                body(i);
            }
        });
    for (auto& th : pool) th.join();
}

}  // namespace

ContenderCount count_contenders(const Scenario& sc, const Deployment& dep,
                                std::span<const LinkType> site_link, Rng& rng) {
    if (site_link.size() != dep.sites.size())
        throw std::invalid_argument("count_contenders: link map size mismatch");
    auto tab = ProtocolTables::make(sc);
    ContenderCount c;
    if (!tab.senses) return c;
    for (size_t i = 0; i < dep.sites.size(); ++i) {
        const Site& site = dep.sites[i];
        double dist = std::max(site.distance_to_origin(), 1e-9);
        int link_is_los = site_link[i] == LinkType::los;
        int contender_main = rng.bernoulli(tab.prob_bs_main);
        int sensor_main = 1;
        if (tab.directional_cs)
            sensor_main = rng.bernoulli(tab.receiver_side ? tab.prob_ue_main : tab.prob_bs_main);
        bool guarded =
            tab.receiver_side && contains_operator(site.operators, 1) && dist <= sc.r_bar_m;
        if (!guarded && dist <= tab.cs_reach[sensor_main][contender_main][link_is_los])
            ++c.sensing;
        if (tab.announcements) {
            // one announcing UE per BS: a shared site announces twice
            for (int op = 1; op <= 2; ++op) {
                if (!contains_operator(site.operators, op)) continue;
                int ann_los = rng.bernoulli(los_probability(dist, sc.pl));
                int listener_main = rng.bernoulli(tab.prob_bs_main);
                if (dist <= tab.ann_reach[listener_main][ann_los]) ++c.announcement;
            }
        }
    }
    return c;
}

TransmissionEstimate estimate_transmission_probability(const Scenario& sc, const SimConfig& cfg) {
    if (sc.protocol == Protocol::non_cs) return {1.0, 0.0, 0.0, 0};
    if (cfg.iterations_pt <= 0)
        throw std::invalid_argument("estimate_transmission_probability: need iterations");

    std::vector<double> p(cfg.iterations_pt);
    std::vector<int> counts(cfg.iterations_pt);
    std::atomic<int> resampled{0};
    run_parallel(cfg.iterations_pt, cfg.threads, [&](int i) {
        Rng rng = Rng::stream(cfg.master_seed, kPhaseTransmission, static_cast<uint64_t>(i));
        Deployment dep = sample_deployment(sc.model, cfg.region_radius_m, rng);
        resampled += dep.resample_count;
        std::vector<LinkType> site_link;
        site_link.reserve(dep.sites.size());
        for (const auto& s : dep.sites) {
            double pl = los_probability(std::max(s.distance_to_origin(), 1e-9), sc.pl);
            site_link.push_back(rng.bernoulli(pl) ? LinkType::los : LinkType::nlos);
        }
        auto c = count_contenders(sc, dep, site_link, rng);
        counts[i] = c.total();
        p[i] = solve_transmission_probability(static_cast<double>(c.total()));
    });

    TransmissionEstimate est;
    est.resampled_deployments = resampled.load();
    double sum = 0.0, sum2 = 0.0, csum = 0.0;
    for (int i = 0; i < cfg.iterations_pt; ++i) {
        sum += p[i];
        sum2 += p[i] * p[i];
        csum += counts[i];
    }
    double n = static_cast<double>(cfg.iterations_pt);
    est.p_t = sum / n;
    est.mean_contenders = csum / n;
    double var = std::max(0.0, sum2 / n - est.p_t * est.p_t);
    est.std_err = std::sqrt(var / n);
    return est;
}

CoverageCurve simulate_coverage(const Scenario& sc, const SimConfig& cfg, double p_t) {
    if (cfg.iterations_cov <= 0) throw std::invalid_argument("simulate_coverage: need iterations");
    if (p_t < 0.0 || p_t > 1.0) throw std::invalid_argument("simulate_coverage: bad p_t");
    auto tab = ProtocolTables::make(sc);
    double sigma2 = sc.sigma2();
    double serving_gain = sc.serving_gain();

    std::vector<double> sinr(cfg.iterations_cov, 0.0);
    std::vector<uint8_t> blocked_flag(cfg.iterations_cov, 0);
    std::vector<std::string> trace_lines(cfg.trace ? cfg.iterations_cov : 0);
    std::atomic<int> resampled{0};
    run_parallel(cfg.iterations_cov, cfg.threads, [&](int i) {
        Rng rng = Rng::stream(cfg.master_seed, kPhaseCoverage, static_cast<uint64_t>(i));
        IterationScratch scratch;
        std::optional<World> w;
        Deployment dep;
        for (;;) {
            dep = sample_deployment(sc.model, cfg.region_radius_m, rng);
            resampled += dep.resample_count;
            w = build_world(sc, dep, tab, rng, scratch.site_link);
            if (w) break;
            ++resampled;
        }
        auto cont = count_in_world(sc, tab, *w, rng, scratch);

        bool blocked = false;
        for (size_t j = 0; j < w->sites.size() && !blocked; ++j)
            if (scratch.sensing[j] && rng.bernoulli(p_t)) blocked = true;
        if (tab.announcements)
            for (size_t j = 0; j < w->bs.size() && !blocked; ++j)
                if (scratch.announcement[j] && rng.bernoulli(p_t)) blocked = true;
        blocked_flag[i] = blocked;

        double value = 0.0;
        if (!blocked) {
            double interference = 0.0;
            for (size_t j = 0; j < w->bs.size(); ++j) {
                const WorldBs& b = w->bs[j];
                // inactive contenders stay silent: a sensed site as a whole, an
                // announcement-heard UE through its own BS
                if (scratch.sensing[b.site] || (tab.announcements && scratch.announcement[j]))
                    continue;
                bool hidden = rng.bernoulli(0.5);
                if (!rng.bernoulli(p_t)) continue;
                if (tab.announcements && !hidden) {
                    // deaf BS goes quiet if it hears the typical UE's announcement
                    int listener_main = rng.bernoulli(tab.prob_bs_main);
                    int link_is_los = b.link_ue == LinkType::los;
                    if (b.dist_ue <= tab.ann_reach[listener_main][link_is_los]) continue;
                }
                double g = (b.bs_main ? tab.bs.mainlobe : tab.bs.sidelobe) *
                           (b.ue_main ? tab.ue.mainlobe : tab.ue.sidelobe);
                interference += path_loss(b.dist_ue, b.link_ue, sc.pl) * rng.exponential() * g;
            }
            double signal = path_loss(w->assoc.distance, w->assoc.link, sc.pl) *
                            rng.exponential() * serving_gain;
            value = signal / (sigma2 + interference);
        }
        sinr[i] = value;

        if (cfg.trace) {
            nlohmann::json rec = {{"iteration", i},
                                  {"serving_distance_m", w->assoc.distance},
                                  {"serving_link", w->assoc.link == LinkType::los ? "los" : "nlos"},
                                  {"serving_set", to_string(w->assoc.operator_set)},
                                  {"contenders_sensing", cont.sensing},
                                  {"contenders_announcement", cont.announcement},
                                  {"blocked", blocked},
                                  {"sinr", value}};
            trace_lines[i] = rec.dump();
        }
    });

    CoverageCurve curve;
    curve.z_db = cfg.z_grid_db;
    curve.p_t_used = p_t;
    curve.resampled_deployments = resampled.load();
    double n = static_cast<double>(cfg.iterations_cov);
    for (uint8_t f : blocked_flag)
        if (f) ++curve.blocked_iterations;
    curve.p_t_empirical = 1.0 - static_cast<double>(curve.blocked_iterations) / n;
    for (double z_db : curve.z_db) {
        double z = db_to_linear(z_db);
        long hits = 0;
        for (double v : sinr)
            if (v > z) ++hits;
        double p = static_cast<double>(hits) / n;
        curve.p_c.push_back(p);
        curve.std_err.push_back(std::sqrt(std::max(p * (1.0 - p), 0.0) / n));
    }

    if (cfg.trace) {
        std::ofstream out(cfg.trace_path.empty() ? "trace.jsonl" : cfg.trace_path);
        for (const auto& line : trace_lines) out << line << '\n';
    }
    return curve;
}

}  // namespace mmcs
