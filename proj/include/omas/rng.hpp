#pragma once

#include <cstdint>
#include <string_view>

namespace omas {

// splitmix64 finalizer. Used both as the generator core and as the stable
// hash for stream derivation, so traces are reproducible across platforms
// and standard-library versions (std::uniform_int_distribution is not
// portable; nothing here goes through <random>).
inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

inline std::uint64_t fnv1a64(std::string_view s) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

// Deterministic PRNG stream. Substreams are pure functions of
// (master seed, purpose label, index); every node and every generator gets
// its own stream, which is what makes round results independent of the
// order nodes are stepped in.
class Rng {
  public:
    Rng() : state_(0x853c49e6748fea9bULL) {}
    explicit Rng(std::uint64_t state) : state_(state) {}

    static Rng stream(std::uint64_t master_seed, std::string_view label, std::uint64_t index = 0) {
        std::uint64_t s = mix64(master_seed ^ fnv1a64(label));
        s = mix64(s + 0x9e3779b97f4a7c15ULL * (index + 1));
        return Rng(s);
    }

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // Unbiased integer in [0, bound). bound == 1 short-circuits without
    // consuming state so degenerate draws (e.g. zero max delay) are free.
    std::uint64_t uniform_below(std::uint64_t bound) {
        if (bound <= 1) return 0;
        std::uint64_t limit = ~std::uint64_t{0} - (~std::uint64_t{0} % bound + 1) % bound;
        std::uint64_t r;
        do {
            r = next_u64();
        } while (r > limit);
        return r % bound;
    }

    std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {  // inclusive bounds
        return lo + (std::int64_t)uniform_below((std::uint64_t)(hi - lo + 1));
    }

    // True with probability num/den, evaluated in exact integer arithmetic.
    bool bernoulli(std::uint64_t num, std::uint64_t den) {
        return uniform_below(den) < num;
    }

  private:
    std::uint64_t state_;
};

}  // namespace omas
