#include "fjb/rng.hpp"

namespace fjb
{
    namespace
    {
        constexpr std::uint32_t kMul0 = 0xD2511F53u;
        constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
        constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
        constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

        inline void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& hi, std::uint32_t& lo) noexcept
        {
            const std::uint64_t p = static_cast<std::uint64_t>(a) * b;
            hi = static_cast<std::uint32_t>(p >> 32);
            lo = static_cast<std::uint32_t>(p);
        }

        inline double to_unit(std::uint32_t hi, std::uint32_t lo) noexcept
        {
            const std::uint64_t bits = (static_cast<std::uint64_t>(hi) << 32) | lo;
            return static_cast<double>(bits >> 11) * 0x1.0p-53;
        }

        // 16 bits of stage, 4 of stream, 12 of block index.
        inline std::uint32_t pack(RngStream stream, std::uint32_t stage, std::uint32_t block) noexcept
        {
            return (stage << 16) | (static_cast<std::uint32_t>(stream) << 12) | (block & 0xFFFu);
        }
    }

    PhiloxCounter philox4x32_10(PhiloxCounter c, PhiloxKey k) noexcept
    {
        for (int round = 0; round < 10; ++round)
        {
            if (round > 0)
            {
                k[0] += kWeyl0;
                k[1] += kWeyl1;
            }
            std::uint32_t hi0, lo0, hi1, lo1;
            mulhilo(kMul0, c[0], hi0, lo0);
            mulhilo(kMul1, c[2], hi1, lo1);
            c = {hi1 ^ c[1] ^ k[0], lo1, hi0 ^ c[3] ^ k[1], lo0};
        }
        return c;
    }

    CounterRng::CounterRng(std::uint64_t seed) noexcept
        : key_{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32)}
    {
    }

    double CounterRng::uniform(RngStream stream, std::uint64_t job, std::uint32_t task, std::uint32_t stage,
                               std::uint32_t draw) const noexcept
    {
        const PhiloxCounter ctr{static_cast<std::uint32_t>(job), static_cast<std::uint32_t>(job >> 32), task,
                                pack(stream, stage, draw / 2)};
        const auto out = philox4x32_10(ctr, key_);
        return (draw % 2 == 0) ? to_unit(out[0], out[1]) : to_unit(out[2], out[3]);
    }

    void CounterRng::uniforms(RngStream stream, std::uint64_t job, std::uint32_t task, std::uint32_t stage,
                              std::span<double> out) const noexcept
    {
        for (std::size_t i = 0; i < out.size(); i += 2)
        {
            const PhiloxCounter ctr{static_cast<std::uint32_t>(job), static_cast<std::uint32_t>(job >> 32), task,
                                    pack(stream, stage, static_cast<std::uint32_t>(i / 2))};
            const auto block = philox4x32_10(ctr, key_);
            out[i] = to_unit(block[0], block[1]);
            if (i + 1 < out.size())
                out[i + 1] = to_unit(block[2], block[3]);
        }
    }
}
