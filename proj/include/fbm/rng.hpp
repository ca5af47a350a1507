#pragma once

// Reproducible random number streams.
//
// Each Monte Carlo sample owns an engine keyed by (seed, stream); estimators
// use stream = sample index.  Because a sample never shares an engine with
// another sample, results are a pure function of (seed, n_samples, grid) and
// are bit-identical no matter how samples are distributed over threads.

#include <cmath>
#include <cstdint>
#include <random>

#include "fbm/types.hpp"

namespace fbm {

// SplitMix64 step; used only to whiten (seed, stream) into engine seeds.
inline std::uint64_t splitmix64(std::uint64_t& state) {
    std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

// Stateless convenience: mix two words into one well-scrambled word.
inline std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
    std::uint64_t s = seed;
    std::uint64_t a = splitmix64(s);
    s ^= 0x100000001b3ULL * (stream + 0x9e3779b97f4a7c15ULL);
    std::uint64_t b = splitmix64(s);
    return a ^ (b + 0x632be59bd9b4e019ULL + (a << 6) + (a >> 2));
}

// mt19937_64 seeded from a full 312-word sequence derived from (seed, stream).
inline std::mt19937_64 make_engine(const RngSpec& spec) {
    std::uint64_t state = mix_seed(spec.seed, spec.stream);
    std::seed_seq seq{static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state)),
                      static_cast<std::uint32_t>(splitmix64(state))};
    return std::mt19937_64(seq);
}

// Standard normal draws in a canonical order.  std::normal_distribution is
// implementation-defined, so we fix the Box-Muller polar method explicitly:
// the draw sequence (and therefore every estimate) depends only on the
// engine, not on the standard library version.
class NormalSource {
public:
    explicit NormalSource(const RngSpec& spec) : engine_(make_engine(spec)) {}

    double operator()() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        const double f = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * f;
        have_spare_ = true;
        return u * f;
    }

private:
    double uniform01() {
        // 53-bit uniform in (0,1); never returns 0 so log() above is safe.
        return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
    }

    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

// Derives the seed for one task cell (one (horizon, grid) combination, say)
// from a master seed.  Cells get decorrelated seeds; samples within a cell
// then use streams 0..m-1.
inline std::uint64_t cell_seed(std::uint64_t master, std::uint64_t cell_index) {
    return mix_seed(master, 0xc3a5c85c97cb3127ULL ^ cell_index);
}

}  // namespace fbm
