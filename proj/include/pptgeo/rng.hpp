#pragma once

#include <cmath>
#include <cstdint>

namespace pptgeo {

// Philox4x32-10 counter-based generator. Stream identity is (master seed,
// sample id); parallel and serial sample schedules therefore draw identical
// numbers, which the determinism contract relies on.
class SampleRng {
  public:
    SampleRng(std::uint64_t master_seed, std::uint64_t sample_id)
        : k0_(static_cast<std::uint32_t>(master_seed)),
          k1_(static_cast<std::uint32_t>(master_seed >> 32)),
          c0_(static_cast<std::uint32_t>(sample_id)),
          c1_(static_cast<std::uint32_t>(sample_id >> 32)) {}

    std::uint32_t next_u32() {
        if (have_ == 0) {
            fill_block();
            have_ = 4;
        }
        return out_[4 - have_--];
    }

    std::uint64_t next_u64() {
        const std::uint64_t hi = next_u32();
        return (hi << 32) | next_u32();
    }

    // uniform in [0,1) with 53 random bits
    double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    double gaussian() {
        if (has_spare_) {
            has_spare_ = false;
            return spare_;
        }
        const double u1 = (static_cast<double>(next_u64() >> 11) + 1.0) * 0x1.0p-53;  // (0,1]
        const double u2 = uniform();
        const double r = std::sqrt(-2.0 * std::log(u1));
        const double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        has_spare_ = true;
        return r * std::cos(a);
    }

  private:
    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) {
        const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
        hi = static_cast<std::uint32_t>(p >> 32);
        lo = static_cast<std::uint32_t>(p);
    }

    void fill_block() {
        std::uint32_t x0 = c0_, x1 = c1_, x2 = 0, x3 = block_;
        std::uint32_t k0 = k0_, k1 = k1_;
        for (int round = 0; round < 10; ++round) {
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(0xD2511F53u, x0, hi0, lo0);
            mulhilo(0xCD9E8D57u, x2, hi1, lo1);
            const std::uint32_t y0 = hi1 ^ x1 ^ k0;
            const std::uint32_t y1 = lo1;
            const std::uint32_t y2 = hi0 ^ x3 ^ k1;
            const std::uint32_t y3 = lo0;
            x0 = y0;
            x1 = y1;
            x2 = y2;
            x3 = y3;
            k0 += 0x9E3779B9u;
            k1 += 0xBB67AE85u;
        }
        out_[0] = x0;
        out_[1] = x1;
        out_[2] = x2;
        out_[3] = x3;
        ++block_;
    }

    std::uint32_t k0_, k1_, c0_, c1_;
    std::uint32_t block_ = 0;
    std::uint32_t out_[4] = {0, 0, 0, 0};
    int have_ = 0;
    bool has_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace pptgeo
