#include "fjb/bounds.hpp"
#include "fjb/config.hpp"
#include "fjb/csv.hpp"
#include "fjb/dispatch.hpp"
#include "fjb/envelope.hpp"
#include "fjb/error.hpp"
#include "fjb/event_engine.hpp"
#include "fjb/oracles.hpp"
#include "fjb/quantile.hpp"
#include "fjb/scenario.hpp"
#include "fjb/simulate.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

namespace
{
    struct TopologyFlags
    {
        std::string system = "single-server";
        int k = 1;
        int h = 1;
        int branches = 0;
        int job_tasks = 1;
        std::string assignment = "round-robin";
        bool resequencing = false;
        std::string stage_service = "independent";
        std::string arrival = "exp:0.5";
        std::string task = "exp:1";

        void add_to(CLI::App& app)
        {
            app.add_option("--system", system, "single-server|fork-join|split-merge|replication|thinned|"
                                               "sq-multiserver|sq-fork-join|multistage")
                ->capture_default_str();
            app.add_option("--k", k, "Number of servers")->capture_default_str();
            app.add_option("--h", h, "Number of stages (multistage)")->capture_default_str();
            app.add_option("--branches", branches, "Thinned: number of branches (default k)");
            app.add_option("--job-tasks", job_tasks, "Task draws summed per job and server")->capture_default_str();
            app.add_option("--assignment", assignment, "round-robin|random")->capture_default_str();
            app.add_flag("--resequencing", resequencing, "Thinned: release jobs in arrival order");
            app.add_option("--stage-service", stage_service, "independent|identical")->capture_default_str();
            app.add_option("--arrival", arrival, "Inter-arrival distribution, e.g. exp:0.5")->capture_default_str();
            app.add_option("--task", task, "Task service distribution, e.g. exp:1")->capture_default_str();
        }

        fjb::Topology build() const
        {
            fjb::Topology t;
            t.kind = fjb::parse_system_kind(system);
            t.k = k;
            t.h = h;
            t.job_tasks = job_tasks;
            t.resequencing = resequencing;
            if (assignment == "random")
                t.assignment = fjb::Assignment::Random;
            else if (assignment != "round-robin")
                throw fjb::InvalidSpec("unknown assignment '" + assignment + "'");
            if (stage_service == "identical")
                t.stage_service = fjb::StageService::Identical;
            else if (stage_service != "independent")
                throw fjb::InvalidSpec("unknown stage service '" + stage_service + "'");
            if (t.kind == fjb::SystemKind::Thinned)
            {
                const int a = branches > 0 ? branches : k;
                if (k % a != 0)
                    throw fjb::InvalidSpec("branches must divide k");
                t.fork_width = k / a;
            }
            t.arrival = fjb::parse_distribution(arrival);
            t.task_service = fjb::parse_distribution(task);
            t.validate();
            return t;
        }
    };

    fjb::Metric parse_metric(const std::string& s)
    {
        if (s == "sojourn")
            return fjb::Metric::Sojourn;
        if (s == "waiting")
            return fjb::Metric::Waiting;
        throw fjb::InvalidSpec("unknown metric '" + s + "'");
    }

    fjb::IncrementsChoice parse_increments(const std::string& s)
    {
        if (s == "auto")
            return fjb::IncrementsChoice::Auto;
        if (s == "independent")
            return fjb::IncrementsChoice::Independent;
        if (s == "general")
            return fjb::IncrementsChoice::General;
        throw fjb::InvalidSpec("unknown increments '" + s + "'");
    }

    std::string describe_bound(const fjb::TailBound& bound)
    {
        std::string out;
        for (const auto& term : bound.terms())
        {
            if (!out.empty())
                out += term.coeff < 0 ? " - " : " + ";
            else if (term.coeff < 0)
                out += "-";
            out += fjb::format_double(std::abs(term.coeff));
            if (term.power == 1)
                out += " tau";
            out += " e^(-" + fjb::format_double(term.decay) + " tau)";
        }
        return out;
    }

    int run_bounds(const TopologyFlags& flags, const std::vector<double>& eps, std::optional<double> theta,
                   const std::string& metric, const std::string& increments)
    {
        const auto t = flags.build();
        std::cout << "system: " << fjb::to_string(t.kind) << " k=" << t.k << " h=" << t.h << "\n"
                  << "arrival: " << t.arrival.describe() << "  task: " << t.task_service.describe() << "\n";
        fjb::ThetaPolicy policy;
        if (theta)
            policy = {false, *theta};
        for (double e : eps)
        {
            const auto out = fjb::compute_bound(t, parse_metric(metric), e, policy, parse_increments(increments));
            std::cout << "epsilon: " << fjb::format_double(e) << "\n";
            if (!out.available)
            {
                std::cout << "  tau: inf (" << out.reason << ")\n";
                continue;
            }
            std::cout << "  mode: " << (out.mode == fjb::Increments::Independent ? "GI" : "GG") << "\n"
                      << "  theta*: " << fjb::format_double(out.theta) << "\n"
                      << "  bound: " << describe_bound(*out.bound) << "\n"
                      << "  tau: " << fjb::format_double(out.tau) << "\n";
            if (out.expected)
                std::cout << "  expected sojourn bound: " << fjb::format_double(*out.expected) << "\n";
        }
        return 0;
    }

    int run_simulate(const TopologyFlags& flags, const std::vector<double>& eps, std::size_t jobs,
                     std::size_t interval, std::uint64_t seed)
    {
        const auto t = flags.build();
        if (!(fjb::utilization(t) < 1.0))
        {
            std::cout << "unstable: utilization " << fjb::format_double(fjb::utilization(t)) << "\n";
            return 1;
        }
        const auto result = fjb::simulate(t, jobs, interval, seed);
        std::cout << "samples: " << result.sojourn.values.size() << "\n";
        for (const auto* set : {&result.sojourn, &result.waiting})
        {
            const char* name = set->metric == fjb::Metric::Sojourn ? "sojourn" : "waiting";
            for (double e : eps)
            {
                try
                {
                    const auto q = fjb::estimate_quantile(*set, 1.0 - e);
                    std::cout << name << " q(" << fjb::format_double(1.0 - e) << "): " << fjb::format_double(q.value)
                              << "  ci68.2: [" << fjb::format_double(q.ci_lo) << ", " << fjb::format_double(q.ci_hi)
                              << "]\n";
                }
                catch (const fjb::InsufficientSamples& err)
                {
                    std::cout << name << " q(" << fjb::format_double(1.0 - e) << "): " << err.what() << "\n";
                }
            }
        }
        return 0;
    }

    int run_config(const std::string& config, const std::string& out_path, bool force_compare,
                   std::optional<std::size_t> jobs, std::optional<std::size_t> interval,
                   std::optional<std::uint64_t> seed, unsigned workers)
    {
        auto scenario = fjb::load_scenario(config);
        if (force_compare)
            scenario.mode = fjb::Mode::Compare;
        if (jobs)
            scenario.n_jobs = *jobs;
        if (interval)
            scenario.sample_interval = *interval;
        if (seed)
            scenario.seeds = {*seed};
        const auto rows = fjb::run_scenario(scenario, {workers});
        if (out_path.empty() || out_path == "-")
            fjb::write_csv(std::cout, rows);
        else
        {
            std::ofstream out(out_path);
            if (!out)
                throw fjb::Error("cannot write " + out_path);
            fjb::write_csv(out, rows);
        }
        std::size_t violations = 0;
        for (const auto& r : rows)
            violations += r.violation.value_or(false) ? 1 : 0;
        if (violations > 0)
        {
            std::cerr << violations << " row(s) with the simulated CI above the bound\n";
            return 1;
        }
        return 0;
    }

    bool check(bool ok, const std::string& what)
    {
        std::printf("%s  %s\n", ok ? "PASS" : "FAIL", what.c_str());
        return ok;
    }

    int run_selftest()
    {
        bool ok = true;

        const auto exp_arrival = fjb::Distribution::exponential(0.5);
        const auto exp_task = fjb::Distribution::exponential(1.0);
        std::vector<fjb::Topology> topologies;
        for (auto kind : {fjb::SystemKind::SingleServer, fjb::SystemKind::ForkJoin, fjb::SystemKind::SplitMerge,
                          fjb::SystemKind::Replication, fjb::SystemKind::Thinned,
                          fjb::SystemKind::SingleQueueMultiServer, fjb::SystemKind::SingleQueueForkJoin,
                          fjb::SystemKind::MultiStage})
        {
            fjb::Topology t;
            t.kind = kind;
            t.k = kind == fjb::SystemKind::SingleServer ? 1 : 4;
            t.h = kind == fjb::SystemKind::MultiStage ? 3 : 1;
            t.resequencing = kind == fjb::SystemKind::Thinned;
            t.arrival = exp_arrival;
            t.task_service = kind == fjb::SystemKind::SplitMerge ? fjb::Distribution::exponential(2.5) : exp_task;
            topologies.push_back(t);
        }
        for (const auto& t : topologies)
            for (std::uint64_t seed : {1, 2, 3})
            {
                const double gap = fjb::crosscheck_engine(t, 10'000, seed);
                ok &= check(gap <= 1e-9, std::string("event engine = recursion: ") + std::string(fjb::to_string(t.kind)) +
                                             " seed " + std::to_string(seed) + " (gap " + fjb::format_double(gap) +
                                             ")");
            }

        {
            const double lambda = 4.0;
            const double mu = 1.0;
            const int k = 8;
            const auto exact = fjb::exact_mmk_waiting(lambda, mu, k);
            const double theta = k * mu - lambda;
            const auto bound = fjb::sq_multiserver_bounds(fjb::gi_arrival_envelope(fjb::Distribution::exponential(lambda)),
                                                          mu, k, theta, fjb::Increments::Independent)
                                   .waiting;
            bool match = true;
            for (double tau : {0.0, 0.5, 1.0, 2.0, 4.0})
                match &= std::abs(bound.evaluate(tau) * exact.p_wait - exact.tail(tau)) <= 1e-12;
            ok &= check(match, "M|M|8 waiting bound = exact tail / Erlang-C (P = " + fjb::format_double(exact.p_wait) + ")");
        }

        {
            const auto exact = fjb::exact_mm1_sojourn(0.5, 1.0);
            const auto bound = fjb::gg1_bounds(fjb::gi_arrival_envelope(exp_arrival), fjb::gi_service_envelope(exp_task),
                                               0.5, fjb::Increments::Independent)
                                   .sojourn;
            bool match = true;
            for (double tau : {0.0, 1.0, 5.0, 10.0, 20.0})
                match &= std::abs(bound.evaluate(tau) - 2.0 * exact.tail(tau)) <= 1e-12 * bound.evaluate(tau);
            ok &= check(match, "M|M|1 sojourn bound = 2 x exact tail");
        }

        std::printf("%s\n", ok ? "selftest passed" : "selftest FAILED");
        return ok ? 0 : 1;
    }
}

int main(int argc, char** argv)
{
    CLI::App app{"Tail bounds and simulation for fork-join and multi-server queueing systems"};
    app.require_subcommand(1);
    // -h would clash with --h.
    app.set_help_flag("--help", "Print this help message and exit");

    TopologyFlags flags;
    std::vector<double> eps{1e-6};
    std::optional<double> theta;
    std::string metric = "sojourn";
    std::string increments = "auto";
    std::size_t jobs = 1'000'000;
    std::size_t interval = 100;
    std::uint64_t seed = 1;
    std::string config;
    std::string out;
    unsigned workers = 1;
    std::optional<std::size_t> jobs_override;
    std::optional<std::size_t> interval_override;
    std::optional<std::uint64_t> seed_override;

    auto* bounds = app.add_subcommand("bounds", "Print the tail bound and quantile for one topology");
    flags.add_to(*bounds);
    bounds->add_option("--eps", eps, "Violation probabilities")->capture_default_str();
    bounds->add_option("--theta", theta, "Fixed theta instead of optimizing");
    bounds->add_option("--metric", metric, "sojourn|waiting")->capture_default_str();
    bounds->add_option("--increments", increments, "auto|independent|general")->capture_default_str();

    auto* simulate = app.add_subcommand("simulate", "Simulate one topology and print quantiles");
    flags.add_to(*simulate);
    simulate->add_option("--eps", eps, "Violation probabilities")->capture_default_str();
    simulate->add_option("--jobs", jobs, "Number of jobs")->capture_default_str();
    simulate->add_option("--interval", interval, "Sampling interval")->capture_default_str();
    simulate->add_option("--seed", seed, "Seed")->capture_default_str();

    CLI::App* config_commands[2];
    config_commands[0] = app.add_subcommand("sweep", "Run a scenario config and write CSV");
    config_commands[1] = app.add_subcommand("compare", "Run a scenario config in compare mode and write CSV");
    for (auto* sub : config_commands)
    {
        sub->add_option("--config", config, "Scenario JSON file")->required();
        sub->add_option("--out", out, "Output CSV (default stdout)");
        sub->add_option("--workers", workers, "Concurrent cells")->capture_default_str();
        sub->add_option("--jobs", jobs_override, "Override n_jobs");
        sub->add_option("--interval", interval_override, "Override sample_interval");
        sub->add_option("--seed", seed_override, "Run a single seed");
    }

    auto* selftest = app.add_subcommand("selftest", "Run oracle cross-checks");

    CLI11_PARSE(app, argc, argv);

    try
    {
        if (bounds->parsed())
            return run_bounds(flags, eps, theta, metric, increments);
        if (simulate->parsed())
            return run_simulate(flags, eps, jobs, interval, seed);
        if (config_commands[0]->parsed())
            return run_config(config, out, false, jobs_override, interval_override, seed_override, workers);
        if (config_commands[1]->parsed())
            return run_config(config, out, true, jobs_override, interval_override, seed_override, workers);
        if (selftest->parsed())
            return run_selftest();
    }
    catch (const fjb::ConfigError& e)
    {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    catch (const std::exception& e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
