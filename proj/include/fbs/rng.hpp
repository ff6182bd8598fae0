#pragma once

#include <cmath>
#include <cstdint>

namespace fbs {

// xorshift64* generator: shifts 12/25/27, multiplier 0x2545F4914F6CDD1D
// (Vigna, "An experimental exploration of Marsaglia's xorshift generators").
// All seeded synthetic instances use this generator so that fixtures can be
// replicated bit-for-bit by other implementations.
class Xorshift64Star {
public:
    explicit Xorshift64Star(std::uint64_t seed)
        // a zero seed would lock the generator at zero
        : state_(seed != 0 ? seed : 0x9E3779B97F4A7C15ull) {}

    std::uint64_t next_u64() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1Dull;
    }

    // Uniform in [0, 1) with 53 random bits.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    // Bounded integer by rejection-free modulo; bias is irrelevant for the
    // small ranges used in tests.
    std::uint64_t next_below(std::uint64_t n) {
        return next_u64() % n;
    }

    // Standard normal via Box-Muller, one spare cached.
    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        double u1 = next_double();
        double u2 = next_double();
        while (u1 <= 0.0) u1 = next_double();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

private:
    std::uint64_t state_;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

} // namespace fbs
