#include "mmcs/analysis.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace mmcs {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// closed forms of int_a^b t p_tau(t) dt under exponential blocking
struct BlockingKernels {
    double beta;

    double los(double a, double b) const {
        if (!(b > a)) return 0.0;
        if (beta * b < 1e-3) {
            // series branch: exp form cancels catastrophically for small beta t
            auto s = [this](double x) {
                return x * x * (0.5 - beta * x / 3.0 + beta * beta * x * x / 8.0);
            };
            return s(b) - s(a);
        }
        auto antider = [this](double x) {
            return -std::exp(-beta * x) * (1.0 + beta * x) / (beta * beta);
        };
        return antider(b) - antider(a);
    }

    double nlos(double a, double b) const {
        if (!(b > a)) return 0.0;
        return 0.5 * (b * b - a * a) - los(a, b);
    }

    double of(LinkType t, double a, double b) const {
        return t == LinkType::los ? los(a, b) : nlos(a, b);
    }
};

double reach(double ptx, double c, double alpha, double gain, double thr) {
    return std::pow(ptx * c * gain / thr, 1.0 / alpha);
}

// flattened gain atoms for the hot loops
struct UEval {
    double c = 0.0;
    double alpha = 0.0;
    int n = 0;
    std::array<double, 8> gain{};
    std::array<double, 8> prob{};

    static UEval make(const GainDistribution& g, const PathLossParams& pl, LinkType link) {
        UEval u;
        u.c = pl.intercept(link);
        u.alpha = pl.exponent(link);
        for (const auto& a : g.atoms()) {
            u.gain[u.n] = a.gain;
            u.prob[u.n] = a.prob;
            ++u.n;
        }
        return u;
    }

    // 1 - u(s, t): computed from x/(1+x) terms so the far tail, where
    // u approaches 1, keeps full relative precision instead of cancelling.
    double one_minus(double s, double t, double p_t) const {
        double ta = std::pow(t, -alpha);
        double acc = 0.0;
        for (int i = 0; i < n; ++i) {
            double x = s * c * gain[i] * ta;
            acc += prob[i] * x / (1.0 + x);
        }
        return 0.5 * p_t * acc;
    }

    double operator()(double s, double t, double p_t) const {
        return 1.0 - one_minus(s, t, p_t);
    }
};

struct LaplaceEnv {
    double lam = 0.0;  // total site density, 1/m^2
    double a = 0.0;
    double rho = 0.0;
    UEval u_los, u_nlos;
    QuadratureOptions opt;
    double r_max = 0.0;

    const UEval& u(LinkType t) const { return t == LinkType::los ? u_los : u_nlos; }
};

LaplaceEnv make_env(const AnalysisContext& ctx) {
    const auto& sc = ctx.scenario;
    auto dens = decompose_densities(sc.model);
    auto gains = interferer_gain_distribution(sc.antenna);
    LaplaceEnv env;
    env.lam = dens.total * 1e-6;
    env.a = dens.a;
    env.rho = sc.model.rho;
    env.u_los = UEval::make(gains, sc.pl, LinkType::los);
    env.u_nlos = UEval::make(gains, sc.pl, LinkType::nlos);
    env.opt = {ctx.quadrature.rel_tol, ctx.quadrature.abs_tol, 28};
    env.r_max = ctx.quadrature.r_max_m;
    return env;
}

double laplace_impl(double s, double r, LinkType serving_link, OperatorSet serving_set,
                    double p_t, const ExclusionRadii& radii, const AnalysisContext& ctx,
                    const LaplaceEnv& env, bool* ok) {
    const auto& pl = ctx.scenario.pl;
    if (s == 0.0) return 1.0;

    double beta = pl.beta;
    double expo = 0.0;
    for (LinkType link : {serving_link, other(serving_link)}) {
        const UEval& u = env.u(link);
        bool same = link == serving_link;
        double excl = same ? r : exclusion_radius(r, serving_link, pl);
        bool kernel_los = link == LinkType::los;

        auto integrand_open = [&](double t) {
            double omu = u.one_minus(s, t, p_t);
            double k = kernel_los ? t * std::exp(-beta * t) : t * (1.0 - std::exp(-beta * t));
            return omu * k;
        };
        auto integrand_guarded = [&](double t) {
            double omu = u.one_minus(s, t, p_t);
            double k = kernel_los ? t * std::exp(-beta * t) : t * (1.0 - std::exp(-beta * t));
            return omu * (env.a + env.rho * (1.0 - omu)) * k;
        };

        std::vector<double> brk;
        for (int i = 0; i < u.n; ++i)
            brk.push_back(std::pow(s * u.c * u.gain[i], 1.0 / u.alpha));
        if (beta > 0.0) {
            brk.push_back(1.0 / beta);
            brk.push_back(5.0 / beta);
        }

        auto tail = [&](auto&& f, double lo) {
            if (env.r_max > 0.0) {
                auto res = integrate(f, lo, env.r_max, brk, env.opt);
                if (!res.converged && ok) *ok = false;
                return res.value;
            }
            auto res = integrate_to_infinity(f, lo, brk, 0.0, env.opt);
            if (!res.converged && ok) *ok = false;
            return res.value;
        };

        for (double cr : {radii.h(link), radii.d(link)}) {
            expo += (1.0 - env.a) * tail(integrand_open, cr);
            expo += tail(integrand_guarded, std::max(excl, cr));
        }
    }

    double value = std::exp(-kTwoPi * env.lam * expo);
    if (serving_set == OperatorSet::shared) {
        const UEval& us = env.u(serving_link);
        for (double cr : {radii.h(serving_link), radii.d(serving_link)})
            value *= r <= cr ? 1.0 : us(s, r, p_t);
    }
    return value;
}

}  // namespace

double u_function(double s, double t, LinkType link, double p_t, const AnalysisContext& ctx) {
    if (s < 0.0) throw std::invalid_argument("u_function: s must be nonnegative");
    if (t <= 0.0) throw std::invalid_argument("u_function: range must be positive");
    if (p_t < 0.0 || p_t > 1.0) throw std::invalid_argument("u_function: p_t must be in [0,1]");
    auto gains = interferer_gain_distribution(ctx.scenario.antenna);
    return UEval::make(gains, ctx.scenario.pl, link)(s, t, p_t);
}

ExclusionRadii avg_exclusion_radii(const AnalysisContext& ctx) {
    const auto& sc = ctx.scenario;
    if (sc.protocol == Protocol::non_cs) return {};
    if (is_cst(sc.protocol))
        throw std::invalid_argument(
            "avg_exclusion_radii: transmitter-side sensing clears zones around transmitters, "
            "not around the typical UE");
    auto gains = sensing_gain_distribution(sc.protocol, sc.antenna);
    const auto& pl = sc.pl;
    const auto& sp = sc.sensing;
    if (sp.p_th_mw <= 0.0) throw std::invalid_argument("avg_exclusion_radii: p_th must be set");
    ExclusionRadii out;
    out.h_los = gains.expected(
        [&](double g) { return reach(sp.p_x_mw, pl.c_los, pl.alpha_los, g, sp.p_th_mw); });
    out.h_nlos = gains.expected(
        [&](double g) { return reach(sp.p_x_mw, pl.c_nlos, pl.alpha_nlos, g, sp.p_th_mw); });
    if (sc.protocol == Protocol::dcsra) {
        if (sp.p_th_a_mw <= 0.0)
            throw std::invalid_argument("avg_exclusion_radii: p_th_a must be set for dcsra");
        auto bs = array_gains(sc.antenna.n_bs);
        auto ue = array_gains(sc.antenna.n_ue);
        double kappa = sc.antenna.omni_penalty();
        double pb = sc.antenna.theta_bs / kTwoPi;
        GainDistribution listen({{bs.mainlobe * ue.mainlobe * kappa, pb},
                                 {bs.sidelobe * ue.mainlobe * kappa, 1.0 - pb}});
        out.d_los = listen.expected(
            [&](double g) { return reach(sp.p_u_mw, pl.c_los, pl.alpha_los, g, sp.p_th_a_mw); });
        out.d_nlos = listen.expected(
            [&](double g) { return reach(sp.p_u_mw, pl.c_nlos, pl.alpha_nlos, g, sp.p_th_a_mw); });
    }
    return out;
}

double laplace_interference(double s, double r, LinkType serving_link, OperatorSet serving_set,
                            double p_t, const ExclusionRadii& radii, const AnalysisContext& ctx) {
    if (s < 0.0) throw std::invalid_argument("laplace_interference: s must be nonnegative");
    if (r <= 0.0) throw std::invalid_argument("laplace_interference: range must be positive");
    if (p_t < 0.0 || p_t > 1.0)
        throw std::invalid_argument("laplace_interference: p_t must be in [0,1]");
    if (serving_set == OperatorSet::op2_only)
        throw std::invalid_argument("laplace_interference: operator-1 UE cannot serve from op2");
    auto env = make_env(ctx);
    return laplace_impl(s, r, serving_link, serving_set, p_t, radii, ctx, env, nullptr);
}

double avg_contenders(const AnalysisContext& ctx) {
    const auto& sc = ctx.scenario;
    if (sc.protocol == Protocol::non_cs)
        throw std::invalid_argument("avg_contenders: non-cs does not contend");
    auto law = sensing_distance_law(sc.protocol, sc.antenna, sc.pl, sc.sensing);
    auto dens = decompose_densities(sc.model);
    BlockingKernels ker{sc.pl.beta};
    double lam_out = dens.excl_2 * 1e-6;            // sets the UE's operator is not part of
    double lam_in = (dens.excl_1 + dens.shared) * 1e-6;
    double guard = is_csr(sc.protocol) ? ctx.r_bar_m : 0.0;  // interference exclusion proxy
    double tcs = law.cs_beamwidth;

    double total = 0.0;
    for (LinkType link : {LinkType::los, LinkType::nlos}) {
        double main0 = 0.0, side0 = 0.0, main_g = 0.0, side_g = 0.0;
        for (const auto& at : law.atoms(true, link)) {
            main0 += at.prob * ker.of(link, 0.0, at.radius);
            main_g += at.prob * ker.of(link, guard, at.radius);
        }
        for (const auto& at : law.atoms(false, link)) {
            side0 += at.prob * ker.of(link, 0.0, at.radius);
            side_g += at.prob * ker.of(link, guard, at.radius);
        }
        total += lam_out * (tcs * main0 + (kTwoPi - tcs) * side0);
        total += lam_in * (tcs * main_g + (kTwoPi - tcs) * side_g);
    }

    if (sc.protocol == Protocol::dcsra) {
        // announcements from other UEs, heard at the serving BS; UE positions
        // approximated by their BS positions, no exclusion zone at the BS.
        // One announcing UE per BS, so the population is the raw BS density
        // (a shared site announces twice).
        auto ar = announcement_radii(sc.antenna, sc.pl, sc.sensing);
        double lam_all = (sc.model.lambda_1 + sc.model.lambda_2) * 1e-6;
        double tb = sc.antenna.theta_bs;
        total += lam_all * (tb * (ker.los(0.0, ar.main_los) + ker.nlos(0.0, ar.main_nlos)) +
                            (kTwoPi - tb) * (ker.los(0.0, ar.side_los) + ker.nlos(0.0, ar.side_nlos)));
    }
    return total;
}

double solve_transmission_probability(double n_c) {
    if (n_c < 0.0) throw std::invalid_argument("solve_transmission_probability: negative count");
    if (n_c == 0.0) return 1.0;
    double lo = 0.0, hi = 1.0;
    while (hi - lo > 1e-13) {
        double mid = 0.5 * (lo + hi);
        if (mid - std::pow(1.0 - mid, n_c) > 0.0)
            hi = mid;
        else
            lo = mid;
    }
    return 0.5 * (lo + hi);
}

CoverageResult coverage_probability(double z_db, const AnalysisContext& ctx) {
    const auto& sc = ctx.scenario;
    if (is_cst(sc.protocol))
        throw std::invalid_argument(
            "coverage_probability: no analytic form for transmitter-side sensing; simulate it");

    CoverageResult out;
    out.p_t = sc.protocol == Protocol::non_cs
                  ? 1.0
                  : solve_transmission_probability(avg_contenders(ctx));
    auto radii = avg_exclusion_radii(ctx);
    auto dens = decompose_densities(sc.model);
    auto env = make_env(ctx);
    double z = db_to_linear(z_db);
    double sig2 = sc.sigma2();
    double mm = sc.serving_gain();

    bool inner_ok = true;
    auto one_branch = [&](double r, LinkType link, OperatorSet set) {
        double f = association_pdf(r, link, set, sc.model, sc.pl);
        if (f < 1e-18) return 0.0;
        double s = std::pow(r, sc.pl.exponent(link)) * z / (sc.pl.intercept(link) * mm);
        double lap = laplace_impl(s, r, link, set, out.p_t, radii, ctx, env, &inner_ok);
        return std::exp(-sig2 * s) * lap * f;
    };
    auto integrand = [&](double r) {
        if (r <= 0.0) return 0.0;
        double acc = 0.0;
        if (dens.excl_1 > 0.0) {
            acc += one_branch(r, LinkType::los, OperatorSet::op1_only);
            acc += one_branch(r, LinkType::nlos, OperatorSet::op1_only);
        }
        if (dens.shared > 0.0) {
            acc += one_branch(r, LinkType::los, OperatorSet::shared);
            acc += one_branch(r, LinkType::nlos, OperatorSet::shared);
        }
        return acc;
    };

    // outer edge: beyond any plausible serving distance, all branch pdfs are dead
    double r_out = 1000.0;
    auto pdf_total = [&](double r) {
        double acc = 0.0;
        for (LinkType link : {LinkType::los, LinkType::nlos}) {
            if (dens.excl_1 > 0.0) acc += association_pdf(r, link, OperatorSet::op1_only, sc.model, sc.pl);
            if (dens.shared > 0.0) acc += association_pdf(r, link, OperatorSet::shared, sc.model, sc.pl);
        }
        return acc;
    };
    while (pdf_total(r_out) > 1e-14 && r_out < 2e5) r_out *= 2.0;
    if (ctx.quadrature.r_max_m > 0.0) r_out = std::min(r_out, ctx.quadrature.r_max_m);

    std::vector<double> brk = {radii.h_los, radii.h_nlos, radii.d_los, radii.d_nlos,
                               ctx.r_bar_m, 25.0, 50.0, 200.0, 400.0};
    // kink positions where the cross-type exclusion radius meets a sensing ball
    for (double x : {radii.h_nlos, radii.d_nlos})
        if (x > 0.0) brk.push_back(exclusion_radius(x, LinkType::nlos, sc.pl));
    for (double x : {radii.h_los, radii.d_los})
        if (x > 0.0) brk.push_back(exclusion_radius(x, LinkType::los, sc.pl));

    QuadratureOptions outer_opt{ctx.quadrature.rel_tol, ctx.quadrature.abs_tol, 20};
    auto res = integrate(integrand, 0.0, r_out, brk, outer_opt);
    out.p_c = out.p_t * res.value;
    out.converged = res.converged && inner_ok;
    return out;
}

}  // namespace mmcs
