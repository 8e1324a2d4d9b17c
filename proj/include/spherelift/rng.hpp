#ifndef SPHERELIFT_RNG_HPP
#define SPHERELIFT_RNG_HPP

#include <cmath>
#include <cstdint>
#include <span>

namespace spherelift {

// Splittable deterministic generator: xoshiro256++ states derived from
// (seed, stream_id) through the splitmix64 finalizer. The same pair yields
// the same draw sequence on every platform; distinct stream ids give
// statistically independent streams, so parallel chains can each own one.
class RngStream {
public:
    explicit RngStream(uint64_t seed, uint64_t stream_id = 0)
        : seed_(seed), stream_id_(stream_id) {
        uint64_t z = mix64(seed ^ 0x2545F4914F6CDD1DULL);
        z = mix64(z ^ mix64(stream_id ^ 0x9E3779B97F4A7C15ULL));
        for (auto& w : s_) {
            z += 0x9E3779B97F4A7C15ULL;
            w = mix64(z);
        }
        if ((s_[0] | s_[1] | s_[2] | s_[3]) == 0) s_[0] = 1;  // cannot seed all-zero
    }

    uint64_t seed() const { return seed_; }
    uint64_t stream_id() const { return stream_id_; }

    uint64_t next_u64() {
        const uint64_t result = rotl(s_[0] + s_[3], 23) + s_[0];
        const uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform on [0, 1) with 53 random bits
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform01(); }

    // standard normal via the polar method; the spare value is cached
    double normal() {
        if (has_spare_) {
            has_spare_ = false;
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
        has_spare_ = true;
        return u * f;
    }

    void normal_fill(std::span<double> out) {
        for (double& x : out) x = normal();
    }

private:
    static uint64_t rotl(uint64_t x, int r) { return (x << r) | (x >> (64 - r)); }

    static uint64_t mix64(uint64_t z) {
        z ^= z >> 30;
        z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27;
        z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    uint64_t seed_, stream_id_;
    uint64_t s_[4];
    double spare_ = 0.0;
    bool has_spare_ = false;
};

}  // namespace spherelift

#endif
