#pragma once

// Counter-based random numbers: every draw is a pure function of
// (master seed, trial, index, purpose), so the stream a trial sees does not
// depend on which worker runs it or in what order.

#include <cstdint>

namespace ocrs {

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
    z += 0x9E3779B97F4A7C15ULL;
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
}

/// Top 53 bits mapped to [0, 1).
inline constexpr double to_unit(std::uint64_t r) { return static_cast<double>(r >> 11) * 0x1.0p-53; }

enum class Purpose : std::uint64_t {
    arrival = 1,
    active = 2,
    coin = 3,
    price = 4,
    vertex_arrival = 5,
};

/// Draws for one trial. Cheap to construct; holds only the mixed key.
class TrialRng {
public:
    constexpr TrialRng(std::uint64_t master_seed, std::uint64_t trial)
        : key_(splitmix64(splitmix64(master_seed) ^ splitmix64(trial + 0x632BE59BD9B4E019ULL))) {}

    constexpr std::uint64_t bits(std::uint64_t index, Purpose p) const {
        return splitmix64(key_ ^ splitmix64((index << 3) | static_cast<std::uint64_t>(p)));
    }

    constexpr double uniform(std::uint64_t index, Purpose p) const { return to_unit(bits(index, p)); }

private:
    std::uint64_t key_;
};

/// Sequential generator for instance construction.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        state_ += 0x9E3779B97F4A7C15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    constexpr double uniform() { return to_unit(next()); }
    constexpr double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

}  // namespace ocrs
