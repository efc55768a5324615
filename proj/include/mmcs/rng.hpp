#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <utility>

namespace mmcs {

// Deterministic random stream. Distribution transforms are done by hand so that
// sequences do not depend on the standard library implementation; streams are
// derived from (master seed, phase, counter) so parallel workers reproduce the
// single-threaded results bit for bit.
class Rng {
public:
    explicit Rng(uint64_t seed) : eng_(mix(seed)) {}

    // Independent stream for one unit of work (e.g. one Monte Carlo iteration).
    static Rng stream(uint64_t master, uint64_t phase, uint64_t counter) {
        uint64_t s = mix(master + 0x9e3779b97f4a7c15ull * (phase + 1));
        return Rng(mix(s + counter));
    }

    uint64_t next() { return eng_(); }

    // uniform on [0,1) with 53-bit resolution
    double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // exponential with mean 1
    double exponential() { return -std::log1p(-uniform()); }

    bool bernoulli(double p) { return uniform() < p; }

    // exact for any mean: count exponential arrivals until the budget is spent
    int poisson(double mean) {
        int k = 0;
        double acc = exponential();
        while (acc < mean) {
            ++k;
            acc += exponential();
        }
        return k;
    }

    // uniform point on a disk of the given radius centered at the origin
    std::pair<double, double> disk_point(double radius) {
        double r = radius * std::sqrt(uniform());
        double ang = 6.283185307179586477 * uniform();
        return {r * std::cos(ang), r * std::sin(ang)};
    }

private:
    static uint64_t mix(uint64_t x) {  // splitmix64 finalizer
        x += 0x9e3779b97f4a7c15ull;
        x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
        x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
        return x ^ (x >> 31);
    }

    std::mt19937_64 eng_;
};

}  // namespace mmcs
