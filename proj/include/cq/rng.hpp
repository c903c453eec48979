#pragma once

#include <cstdint>
#include <string_view>

namespace cq {

// splitmix64, fixed algorithm so seeded runs reproduce across platforms.
// std::mt19937 would be portable too, but the standard distributions are not;
// all bounded draws go through Rng::below.
class Rng {
public:
    explicit Rng(uint64_t seed) : state_(seed) {}

    uint64_t next() {
        uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // unbiased value in [0, n), n >= 1
    uint64_t below(uint64_t n) {
        const uint64_t lim = ~uint64_t(0) - ~uint64_t(0) % n;
        uint64_t x;
        do {
            x = next();
        } while (x >= lim);
        return x % n;
    }

    // independent deterministic stream for a named purpose
    Rng child(std::string_view tag) const {
        uint64_t h = 0xcbf29ce484222325ull;
        for (char c : tag) {
            h ^= static_cast<unsigned char>(c);
            h *= 0x100000001b3ull;
        }
        Rng r(state_ ^ h);
        r.next();
        return r;
    }

private:
    uint64_t state_;
};

} // namespace cq
