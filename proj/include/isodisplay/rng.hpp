#pragma once

#include <cstdint>
#include <cmath>
#include <vector>

namespace isodisplay {

// Deterministic splitmix64-seeded xoshiro256++. std::mt19937 plus the standard
// distributions are not bit-stable across library implementations; reports
// promise byte-identical output for a fixed seed, so we roll our own mapping.
class Rng {
public:
    explicit Rng(uint64_t seed) {
        uint64_t x = seed;
        for (auto& w : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            w = z ^ (z >> 31);
        }
    }

    uint64_t next_u64() {
        uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0,1)
    double uniform() { return (next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    uint64_t below(uint64_t n) { return next_u64() % n; }

    // standard normal via Box-Muller (uses both values lazily)
    double gauss() {
        if (have_spare_) { have_spare_ = false; return spare_; }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // uniform direction on the euclidean unit sphere in R^dim
    std::vector<double> sphere(int dim) {
        std::vector<double> v(dim);
        double n2 = 0.0;
        do {
            n2 = 0.0;
            for (auto& c : v) { c = gauss(); n2 += c * c; }
        } while (n2 < 1e-30);
        double inv = 1.0 / std::sqrt(n2);
        for (auto& c : v) c *= inv;
        return v;
    }

private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace isodisplay
