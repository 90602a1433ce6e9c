#pragma once

#include "fjb/simulate.hpp"
#include "fjb/topology.hpp"

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace fjb
{
    enum class Mode
    {
        BoundOnly,
        SimOnly,
        Compare,
    };

    enum class IncrementsChoice
    {
        Auto,
        Independent,
        General,
    };

    struct ThetaPolicy
    {
        bool optimize = true;
        double theta = 0.0;
        bool operator==(const ThetaPolicy&) const = default;
    };

    /// An integer field that may instead track k ("k" in the config).
    struct KLinked
    {
        bool follows_k = false;
        int value = 1;

        int resolve(int k) const { return follows_k ? k : value; }
        bool operator==(const KLinked&) const = default;
    };

    /// Topology as written in a config, before sweep values are applied.
    struct TopologySpec
    {
        SystemKind kind = SystemKind::SingleServer;
        int k = 1;
        int h = 1;
        Assignment assignment = Assignment::RoundRobin;
        std::vector<double> probabilities;
        bool resequencing = false;
        StageService stage_service = StageService::Independent;
        KLinked branches{true, 1};
        KLinked job_tasks{false, 1};
        Distribution arrival = Distribution::exponential(1.0);
        Distribution task_service = Distribution::exponential(1.0);

        Topology instantiate() const;
        bool operator==(const TopologySpec&) const = default;
    };

    struct SweepAxis
    {
        std::string parameter; // k, h, lambda, mu, branches, job_tasks
        std::vector<double> values;
        bool operator==(const SweepAxis&) const = default;
    };

    struct Scenario
    {
        std::string id;
        TopologySpec topology;
        Mode mode = Mode::Compare;
        std::vector<double> epsilons{1e-3};
        std::optional<SweepAxis> sweep;
        std::size_t n_jobs = 10'000'000;
        std::size_t sample_interval = 100;
        std::vector<std::uint64_t> seeds{1};
        ThetaPolicy theta_policy;
        IncrementsChoice increments = IncrementsChoice::Auto;
        Metric metric = Metric::Sojourn;

        /// Throws InvalidSpec when a field is out of range.
        void validate() const;
        /// Topology specs of every sweep cell, in sweep order.
        std::vector<TopologySpec> cells() const;

        bool operator==(const Scenario&) const = default;
    };

    /// Returns `spec` with the swept parameter set to `value`.
    TopologySpec apply_sweep(const TopologySpec& spec, const std::string& parameter, double value);

    /// Parses a scenario document. `path` only labels diagnostics.
    Scenario parse_scenario(const std::string& json_text, const std::string& path = "<string>");
    Scenario load_scenario(const std::string& path);
    std::string serialize_scenario(const Scenario& scenario);
}
