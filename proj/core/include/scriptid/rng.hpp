#ifndef SCRIPTID_RNG_HPP
#define SCRIPTID_RNG_HPP

#include <cstdint>

#include "scriptid/error.hpp"

namespace scriptid {

/**
 * Deterministic xorshift64* generator.
 *
 * Every random draw in the toolkit (weight init, shuffles, the synthetic
 * corpus) goes through this generator so that identical seeds produce
 * bit-identical outputs on every platform. The algorithm is fixed:
 *
 *   state seeding: one splitmix64 step applied to the seed
 *     z = seed + 0x9E3779B97F4A7C15
 *     z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9
 *     z = (z ^ (z >> 27)) * 0x94D049BB133111EB
 *     state = z ^ (z >> 31)          (0x9E3779B97F4A7C15 if that is zero)
 *
 *   next_u64:
 *     state ^= state >> 12; state ^= state << 25; state ^= state >> 27
 *     return state * 0x2545F4914F6CDD1D
 *
 *   next_double: (next_u64() >> 11) * 2^-53, uniform in [0, 1)
 *   next_below(n): unbiased via rejection on the top of the u64 range
 */
class DetRng {
public:
    explicit DetRng(std::uint64_t seed) {
        std::uint64_t z = seed + 0x9E3779B97F4A7C15ULL;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        z ^= z >> 31;
        state_ = z ? z : 0x9E3779B97F4A7C15ULL;
    }

    std::uint64_t next_u64() {
        state_ ^= state_ >> 12;
        state_ ^= state_ << 25;
        state_ ^= state_ >> 27;
        return state_ * 0x2545F4914F6CDD1DULL;
    }

    /// Uniform in [0, 1) with 53 bits of precision.
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    /// Uniform integer in [0, n), unbiased. n must be positive.
    std::uint64_t next_below(std::uint64_t n) {
        if (n == 0) throw ContractError("next_below: n must be positive");
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x = next_u64();
        while (x >= limit) x = next_u64();
        return x % n;
    }

    /// Uniform integer in [lo, hi], inclusive.
    int next_int(int lo, int hi) {
        if (hi < lo) throw ContractError("next_int: empty range");
        return lo + static_cast<int>(next_below(static_cast<std::uint64_t>(hi - lo) + 1));
    }

    /// Uniform real in [lo, hi).
    double next_real(double lo, double hi) {
        return lo + (hi - lo) * next_double();
    }

    bool next_bool(double p_true) { return next_double() < p_true; }

private:
    std::uint64_t state_;
};

} // namespace scriptid

#endif // SCRIPTID_RNG_HPP
