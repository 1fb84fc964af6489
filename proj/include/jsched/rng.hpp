#pragma once

#include <cstdint>
#include <limits>

namespace jsched {

/// Counter-based generator: the n-th draw is a pure function of (key, n),
/// and split() derives an independent stream from a key and a stream id.
class Rng {
public:
    using result_type = std::uint64_t;

    explicit Rng(std::uint64_t seed = 0) : key_(mix(seed ^ 0x6a09e667f3bcc909ULL)) {}

    static constexpr result_type min() { return 0; }
    static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

    result_type operator()() { return mix(key_ + (counter_++) * 0x9e3779b97f4a7c15ULL); }

    /// Uniform integer in [0, n). n must be positive.
    std::uint64_t below(std::uint64_t n) {
        // Lemire's multiply-shift with rejection
        unsigned __int128 m = static_cast<unsigned __int128>((*this)()) * n;
        auto low = static_cast<std::uint64_t>(m);
        if (low < n) {
            const std::uint64_t threshold = (0 - n) % n;
            while (low < threshold) {
                m = static_cast<unsigned __int128>((*this)()) * n;
                low = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

    [[nodiscard]] Rng split(std::uint64_t stream) const {
        Rng child;
        child.key_ = mix(key_ ^ mix(stream + 0x3c6ef372fe94f82bULL));
        return child;
    }

    [[nodiscard]] std::uint64_t draws() const { return counter_; }

private:
    static constexpr std::uint64_t mix(std::uint64_t z) {
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::uint64_t key_{0};
    std::uint64_t counter_{0};
};

template <typename Range>
void shuffle(Range& r, Rng& rng) {
    for (std::size_t i = r.size(); i > 1; --i) {
        auto j = static_cast<std::size_t>(rng.below(i));
        using std::swap;
        swap(r[i - 1], r[j]);
    }
}

} // namespace jsched
