#ifndef GROTHCOVER_RNG_HPP
#define GROTHCOVER_RNG_HPP

#include <cmath>
#include <cstdint>
#include <random>

namespace grothcover {

/// Seedable random stream with a documented splitting rule.
///
/// All randomness in a run flows from a single 64-bit seed. Sub-streams are
/// derived by mixing the base seed with a stage index (and optionally a block
/// index) through SplitMix64, so that stages and fixed-size sample blocks get
/// statistically independent, reproducible streams regardless of threading.
class RngStream {
public:
    explicit RngStream(std::uint64_t seed) : engine_(seed) {}

    /// SplitMix64 finalizer; used both as seed mixer and stream splitter.
    static std::uint64_t mix(std::uint64_t z) {
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Derived stream for (seed, stage): seed of the child engine is
    /// mix(mix(seed) ^ mix(stage)).
    static RngStream derive(std::uint64_t seed, std::uint64_t stage) {
        return RngStream(mix(mix(seed) ^ mix(stage)));
    }

    /// Derived stream for (seed, stage, block); used by block-seeded sampling.
    static RngStream derive(std::uint64_t seed, std::uint64_t stage,
                            std::uint64_t block) {
        return RngStream(mix(mix(mix(seed) ^ mix(stage)) ^ mix(block)));
    }

    std::uint64_t next_u64() { return engine_(); }

    /// Uniform double in [0,1); 53-bit resolution, engine-portable.
    double next_uniform() {
        return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
    }

    /// Standard normal via Box-Muller. std::normal_distribution is not
    /// portable across standard libraries, so the transform is done by hand.
    double next_gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        do {
            u1 = next_uniform();
        } while (u1 <= 0.0);
        const double u2 = next_uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double theta = 2.0 * M_PI * u2;
        spare_ = r * std::sin(theta);
        have_spare_ = true;
        return r * std::cos(theta);
    }

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace grothcover

#endif  // GROTHCOVER_RNG_HPP
