#pragma once

// Counter-based RNG: Threefry2x64, 20 rounds.
//
// The generator is a keyed bijection on 128-bit blocks: given a 2x64 counter
// (trial, slot) and a 2x64 key (seed, stream) it returns two independent
// 64-bit words. There is no hidden state, so any draw is addressable and the
// draw order is fully documented by the (trial, slot) layout of the caller.
// Constants: rotation schedule {16,42,12,31,16,32,24,21} and the key-schedule
// parity word 0x1BD11BDAA9FC1A22, with a key injection every 4 rounds.

#include <array>
#include <cmath>
#include <cstdint>

namespace pnpbell {

namespace detail {
inline uint64_t rotl64(uint64_t x, int r) { return (x << r) | (x >> (64 - r)); }
}

struct Threefry {
    static constexpr uint64_t kParity = 0x1BD11BDAA9FC1A22ULL;
    static constexpr int kRounds = 20;
    static constexpr int kRot[8] = {16, 42, 12, 31, 16, 32, 24, 21};

    static std::array<uint64_t, 2> block(uint64_t c0, uint64_t c1, uint64_t k0, uint64_t k1) {
        const uint64_t ks[3] = {k0, k1, kParity ^ k0 ^ k1};
        uint64_t x0 = c0 + ks[0];
        uint64_t x1 = c1 + ks[1];
        for (int j = 1; j <= kRounds; ++j) {
            x0 += x1;
            x1 = detail::rotl64(x1, kRot[(j - 1) % 8]);
            x1 ^= x0;
            if (j % 4 == 0) {
                const uint64_t s = static_cast<uint64_t>(j / 4);
                x0 += ks[s % 3];
                x1 += ks[(s + 1) % 3] + s;
            }
        }
        return {x0, x1};
    }
};

// One keyed stream addressed by (trial, slot). All simulator draws go through
// this, so a run is reproducible from (seed, stream) alone and trials can be
// partitioned across workers without changing results.
class CounterRng {
  public:
    CounterRng(uint64_t seed, uint64_t stream) : seed_(seed), stream_(stream) {}

    uint64_t u64(uint64_t trial, uint64_t slot) const {
        return Threefry::block(trial, slot, seed_, stream_)[0];
    }

    // Unbiased enough for our ranges: multiply-high map of a full 64-bit word.
    uint64_t range(uint64_t trial, uint64_t slot, uint64_t n) const {
        const unsigned __int128 wide = static_cast<unsigned __int128>(u64(trial, slot)) * n;
        return static_cast<uint64_t>(wide >> 64);
    }

    // Uniform in [0,1) from the high 53 bits.
    double real(uint64_t trial, uint64_t slot) const {
        return static_cast<double>(u64(trial, slot) >> 11) * 0x1.0p-53;
    }

    bool bernoulli(uint64_t trial, uint64_t slot, uint64_t threshold) const {
        return u64(trial, slot) < threshold;
    }

    uint64_t seed() const { return seed_; }
    uint64_t stream() const { return stream_; }

  private:
    uint64_t seed_;
    uint64_t stream_;
};

// Click-probability threshold: eta mapped onto the full 64-bit range. eta=1
// must accept every word, which round(eta * 2^64) cannot represent in 64 bits,
// so that case saturates and is handled in bernoulli by u64 < 2^64 never
// firing; we special-case it instead.
inline uint64_t prob_threshold(double p) {
    if (p <= 0.0) return 0;
    if (p >= 1.0) return ~0ULL;
    return static_cast<uint64_t>(std::ldexp(p, 64));
}

inline bool draw_with_prob(const CounterRng& rng, uint64_t trial, uint64_t slot, double p) {
    if (p >= 1.0) return true;
    return rng.bernoulli(trial, slot, prob_threshold(p));
}

// Sequential convenience wrapper for code that just wants a stream of draws
// (seesaw restarts, random test behaviors). Same core generator.
class SequentialRng {
  public:
    explicit SequentialRng(uint64_t seed, uint64_t stream = 0) : rng_(seed, stream), ctr_(0) {}

    uint64_t u64() { return rng_.u64(ctr_++, 0); }
    double real() { return static_cast<double>(u64() >> 11) * 0x1.0p-53; }
    uint64_t range(uint64_t n) {
        const unsigned __int128 wide = static_cast<unsigned __int128>(u64()) * n;
        return static_cast<uint64_t>(wide >> 64);
    }
    // Marsaglia polar would need rejection; Box-Muller keeps the draw count fixed.
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = real();
        double u2 = real();
        if (u1 < 1e-300) u1 = 1e-300;
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

  private:
    CounterRng rng_;
    uint64_t ctr_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pnpbell
