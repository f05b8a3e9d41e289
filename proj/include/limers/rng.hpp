#pragma once

#include <cstdint>
#include <random>
#include <span>
#include <vector>

// Seeding and sampling helpers. Everything here is fully specified by the
// C++ standard (std::mt19937_64 plus arithmetic), so streams are bit-stable
// across platforms and standard libraries; std::*_distribution is avoided
// on purpose.

namespace limers {

// splitmix64 step, used to decorrelate seeds derived from a root seed.
inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
    return splitmix64(splitmix64(a) ^ (0x9E3779B97F4A7C15ull + b));
}

// Uniform double in [0, 1) from the top 53 bits.
inline double next_u01(std::mt19937_64& rng) {
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Uniform integer in [0, n), n >= 1. Modulo bias is below 2^-50 for the
// ranges used here.
inline std::uint64_t next_below(std::mt19937_64& rng, std::uint64_t n) {
    return rng() % n;
}

inline void shuffle_indices(std::span<std::size_t> idx, std::mt19937_64& rng) {
    for (std::size_t i = idx.size(); i > 1; --i) {
        const std::size_t j = static_cast<std::size_t>(next_below(rng, i));
        std::swap(idx[i - 1], idx[j]);
    }
}

// Inverse-CDF sampler over a fixed discrete distribution.
class CategoricalSampler {
public:
    explicit CategoricalSampler(std::span<const double> probs) {
        cum_.reserve(probs.size());
        double acc = 0.0;
        for (double p : probs) {
            acc += p;
            cum_.push_back(acc);
        }
        if (!cum_.empty()) cum_.back() = acc;  // keep exact upper edge
        total_ = acc;
    }

    std::size_t draw(std::mt19937_64& rng) const {
        const double u = next_u01(rng) * total_;
        std::size_t lo = 0, hi = cum_.size();
        while (lo < hi) {
            const std::size_t mid = (lo + hi) / 2;
            if (cum_[mid] <= u) lo = mid + 1; else hi = mid;
        }
        return lo < cum_.size() ? lo : cum_.size() - 1;
    }

private:
    std::vector<double> cum_;
    double total_ = 0.0;
};

}  // namespace limers
