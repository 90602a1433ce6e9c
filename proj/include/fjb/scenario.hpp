#pragma once

#include "fjb/config.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fjb
{
    /// One CSV row. Unset optionals are written as empty fields.
    struct ResultRow
    {
        std::string scenario_id;
        std::string system;
        std::string metric;
        int k = 1;
        int h = 1;
        double lambda = 0.0;
        double mu = 0.0;
        double epsilon = 0.0;
        std::optional<double> theta_star;
        std::optional<double> tau_bound;
        std::optional<double> tau_sim;
        std::optional<double> ci_lo;
        std::optional<double> ci_hi;
        std::optional<std::size_t> n_samples;
        std::optional<std::uint64_t> seed;
        std::optional<double> alpha;
        std::optional<double> beta;
        std::optional<double> expected_bound;
        std::string alpha_mode;
        std::optional<bool> violation;
        std::string reason;
    };

    struct RunOptions
    {
        unsigned workers = 1;
    };

    /// Rows in sweep-major, then epsilon, then seed order. Bound-only scenarios
    /// emit one row per (cell, epsilon) without a seed.
    std::vector<ResultRow> run_scenario(const Scenario& scenario, const RunOptions& options = {});
}
