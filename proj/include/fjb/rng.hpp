#pragma once

#include <array>
#include <cstdint>
#include <span>

namespace fjb
{
    /// Philox4x32-10 counter-based block cipher (Salmon et al., Random123).
    using PhiloxCounter = std::array<std::uint32_t, 4>;
    using PhiloxKey = std::array<std::uint32_t, 2>;

    PhiloxCounter philox4x32_10(PhiloxCounter counter, PhiloxKey key) noexcept;

    enum class RngStream : std::uint32_t
    {
        Arrival = 1,
        Service = 2,
        Assignment = 3,
    };

    /// Stateless uniform source keyed on (seed, stream, job, task, stage, draw).
    ///
    /// Every coordinate maps to its own Philox block, so two systems that read
    /// the same (job, task, stage) see the same service time regardless of the
    /// order in which they consume draws.
    class CounterRng
    {
    public:
        explicit CounterRng(std::uint64_t seed) noexcept;

        /// Uniform in [0, 1) with 53 random bits.
        double uniform(RngStream stream, std::uint64_t job, std::uint32_t task, std::uint32_t stage,
                       std::uint32_t draw = 0) const noexcept;

        /// Fills `out` with draws 0..out.size()-1 of the coordinate.
        void uniforms(RngStream stream, std::uint64_t job, std::uint32_t task, std::uint32_t stage,
                      std::span<double> out) const noexcept;

    private:
        PhiloxKey key_;
    };
}
