// Acceptance checks: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include "fjb/bounds.hpp"
#include "fjb/dispatch.hpp"
#include "fjb/envelope.hpp"
#include "fjb/event_engine.hpp"
#include "fjb/oracles.hpp"
#include "fjb/quantile.hpp"
#include "fjb/recursion.hpp"
#include "fjb/simulate.hpp"
#include "fjb/tail_bound.hpp"
#include "fjb/topology.hpp"
#include "fjb/trace.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

using namespace fjb;

namespace
{
    // Pinned tolerances.
    constexpr double kFormulaTol = 1e-9;
    constexpr double kReductionTol = 1e-12;
    constexpr double kErlangTol = 1e-12;
    constexpr double kEngineTol = 1e-9;
    constexpr double kGamma = 0.682;
    constexpr double kSimEps = 1e-3;
    constexpr std::size_t kSimJobs = 10'000'000;
    constexpr std::size_t kInterval = 100;
    constexpr double kGrowthRatioLimit = 1.5;
    constexpr double kLinearFitR2 = 0.99;
    constexpr double kCriterion1Seconds = 30.0;
    constexpr double kCriterion2Seconds = 10.0;

    struct Outcome
    {
        bool pass;
        std::string detail;
    };

    std::string fmt(double x)
    {
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.6g", x);
        return buf;
    }

    double seconds_since(std::chrono::steady_clock::time_point start)
    {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    }

    Topology make(SystemKind kind, int k, const Distribution& arrival, const Distribution& task)
    {
        Topology t;
        t.kind = kind;
        t.k = k;
        t.arrival = arrival;
        t.task_service = task;
        return t;
    }

    QuantileEstimate sim_quantile(const Topology& t, Metric metric, std::uint64_t seed = 1,
                                  std::size_t jobs = kSimJobs)
    {
        const auto r = simulate(t, jobs, kInterval, seed);
        return estimate_quantile(metric == Metric::Sojourn ? r.sojourn : r.waiting, 1.0 - kSimEps, kGamma);
    }

    // Samples of independent runs concatenated before estimating.
    QuantileEstimate pooled_quantile(const Topology& t, Metric metric, std::initializer_list<std::uint64_t> seeds)
    {
        std::vector<double> values;
        for (auto seed : seeds)
        {
            const auto r = simulate(t, kSimJobs, kInterval, seed);
            const auto& v = (metric == Metric::Sojourn ? r.sojourn : r.waiting).values;
            values.insert(values.end(), v.begin(), v.end());
        }
        return estimate_quantile(values, 1.0 - kSimEps, kGamma);
    }

    std::string ci(const QuantileEstimate& q)
    {
        return fmt(q.value) + " [" + fmt(q.ci_lo) + ", " + fmt(q.ci_hi) + "]";
    }

    bool same_bound(const TailBound& a, const TailBound& b, double tol)
    {
        for (double tau : {0.0, 1.0, 5.0, 10.0, 20.0})
        {
            const double x = a.evaluate(tau);
            const double y = b.evaluate(tau);
            if (std::abs(x - y) > tol * std::max(1.0, std::abs(y)))
                return false;
        }
        return true;
    }

    // 1. M|M|1 sandwich.
    Outcome criterion1()
    {
        const auto arrival = gi_arrival_envelope(Distribution::exponential(0.5));
        const auto service = gi_service_envelope(Distribution::exponential(1.0));
        const auto bound = gg1_bounds(arrival, service, 0.5, Increments::Independent).sojourn;
        const auto exact = exact_mm1_sojourn(0.5, 1.0);
        bool formula = bound.terms().size() == 1 && std::abs(bound.terms()[0].coeff - 2.0) <= kFormulaTol &&
                       std::abs(bound.terms()[0].decay - 0.5) <= kFormulaTol;
        for (double tau : {0.0, 2.0, 10.0, 30.0})
            formula = formula && std::abs(exact.tail(tau) - std::exp(-0.5 * tau)) <= kFormulaTol;

        const double tau_bound = invert_quantile(bound, kSimEps);
        const double tau_exact = exact.quantile(kSimEps);
        const auto start = std::chrono::steady_clock::now();
        const auto q = sim_quantile(make(SystemKind::SingleServer, 1, Distribution::exponential(0.5),
                                         Distribution::exponential(1.0)),
                                    Metric::Sojourn);
        const double elapsed = seconds_since(start);
        const bool sandwich = q.ci_lo <= tau_bound && q.ci_hi >= tau_exact;
        return {formula && sandwich && elapsed < kCriterion1Seconds,
                "bound 2e^{-0.5t}, tau_bound " + fmt(tau_bound) + ", tau_exact " + fmt(tau_exact) + ", sim " + ci(q) +
                    ", " + fmt(elapsed) + " s"};
    }

    // 2. Recursion vs event engine on all kinds.
    Outcome criterion2()
    {
        const auto start = std::chrono::steady_clock::now();
        double worst = 0.0;
        int runs = 0;
        for (auto kind : {SystemKind::SingleServer, SystemKind::ForkJoin, SystemKind::SplitMerge,
                          SystemKind::Replication, SystemKind::Thinned, SystemKind::SingleQueueMultiServer,
                          SystemKind::SingleQueueForkJoin, SystemKind::MultiStage})
        {
            auto t = make(kind, kind == SystemKind::SingleServer ? 1 : 4, Distribution::exponential(0.5),
                          Distribution::exponential(1.0));
            if (kind == SystemKind::SplitMerge)
                t.task_service = Distribution::exponential(2.5);
            if (kind == SystemKind::Thinned)
            {
                t.assignment = Assignment::Random;
                t.resequencing = true;
            }
            if (kind == SystemKind::MultiStage)
                t.h = 3;
            for (std::uint64_t seed : {1, 2, 3})
            {
                worst = std::max(worst, crosscheck_engine(t, 10'000, seed));
                ++runs;
            }
        }
        const double elapsed = seconds_since(start);
        return {worst <= kEngineTol && elapsed < kCriterion2Seconds && runs == 24,
                std::to_string(runs) + " runs, max |D_event - D_recursion| = " + fmt(worst) + ", " + fmt(elapsed) +
                    " s"};
    }

    // 3. ln k growth of fork-join.
    Outcome criterion3()
    {
        const auto arrival_dist = Distribution::exponential(0.5);
        const auto task_dist = Distribution::exponential(1.0);
        const std::vector<int> ks{1, 2, 4, 8, 16};
        std::vector<double> taus;
        bool theta_ok = true;
        for (int k : ks)
        {
            const auto out = compute_bound(make(SystemKind::ForkJoin, k, arrival_dist, task_dist), Metric::Sojourn,
                                           1e-6, {}, IncrementsChoice::Independent);
            theta_ok = theta_ok && out.available && std::abs(out.theta - 0.5) <= 1e-7;
            taus.push_back(out.tau);
        }
        bool steps_ok = true;
        for (std::size_t i = 1; i < taus.size(); ++i)
            steps_ok = steps_ok && std::abs((taus[i] - taus[i - 1]) - std::log(2.0) / 0.5) <= kFormulaTol;

        std::vector<QuantileEstimate> q;
        for (int k : ks)
            q.push_back(pooled_quantile(make(SystemKind::ForkJoin, k, arrival_dist, task_dist), Metric::Sojourn,
                                        {1, 2, 3}));
        bool positive = true;
        for (std::size_t i = 1; i < q.size(); ++i)
            positive = positive && q[i].ci_lo > q[i - 1].ci_hi;
        // Largest late step against smallest early step the CIs allow.
        const double late = q[4].ci_hi - q[3].ci_lo;
        const double early = q[2].ci_lo - q[1].ci_hi;
        const double ratio = early > 0 ? late / early : INFINITY;
        std::string sims;
        for (std::size_t i = 0; i < q.size(); ++i)
            sims += (i ? ", " : "") + ci(q[i]);
        return {theta_ok && steps_ok && positive && ratio < kGrowthRatioLimit,
                "bound steps ln2/0.5, sim (3 seeds pooled) " + sims + ", CI-adjusted step ratio (8->16)/(2->4) = " + fmt(ratio)};
    }

    // 4. O(h ln k) for tandem fork-join networks.
    Outcome criterion4()
    {
        const auto arrival = gi_arrival_envelope(Distribution::exponential(0.5));
        const auto task = gi_service_envelope(Distribution::exponential(1.0));
        std::vector<double> taus;
        for (int h = 1; h <= 4; ++h)
            taus.push_back(invert_quantile(multistage_bounds(arrival, task, 2, h, 0.25), 1e-6));
        bool linear = true;
        for (std::size_t i = 2; i < taus.size(); ++i)
            linear = linear && std::abs(taus[i] - 2 * taus[i - 1] + taus[i - 2]) <= kFormulaTol;
        const auto worked = multistage_bounds(arrival, task, 2, 2, 0.25);
        const bool constant = worked.terms().size() == 1 && std::abs(worked.terms()[0].coeff / 576.0 - 1.0) <= kFormulaTol &&
                              worked.terms()[0].decay == 0.25;

        const std::vector<int> hs{1, 2, 4, 8, 16};
        std::vector<double> y;
        QuantileEstimate independent16{};
        for (int h : hs)
        {
            auto t = make(SystemKind::MultiStage, 2, Distribution::exponential(0.5), Distribution::exponential(1.0));
            t.h = h;
            const auto q = sim_quantile(t, Metric::Sojourn);
            y.push_back(q.value);
            if (h == 16)
                independent16 = q;
        }
        // Least-squares fit of quantile against h.
        double sx = 0, sy = 0, sxx = 0, sxy = 0;
        for (std::size_t i = 0; i < hs.size(); ++i)
        {
            sx += hs[i];
            sy += y[i];
            sxx += double(hs[i]) * hs[i];
            sxy += hs[i] * y[i];
        }
        const double n = static_cast<double>(hs.size());
        const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
        const double icept = (sy - slope * sx) / n;
        double ss_res = 0, ss_tot = 0;
        for (std::size_t i = 0; i < hs.size(); ++i)
        {
            ss_res += std::pow(y[i] - (icept + slope * hs[i]), 2);
            ss_tot += std::pow(y[i] - sy / n, 2);
        }
        const double r2 = 1.0 - ss_res / ss_tot;

        auto identical = make(SystemKind::MultiStage, 2, Distribution::exponential(0.5), Distribution::exponential(1.0));
        identical.h = 16;
        identical.stage_service = StageService::Identical;
        const auto qi = sim_quantile(identical, Metric::Sojourn);
        const bool faster = qi.ci_lo > independent16.ci_hi;
        return {linear && constant && r2 >= kLinearFitR2 && faster,
                "second differences 0, coefficient " + fmt(worked.terms()[0].coeff) + ", independent R^2 " + fmt(r2) +
                    " (slope " + fmt(slope) + "), h=16 independent " + ci(independent16) + " vs identical " + ci(qi)};
    }

    // 5. Thinning.
    Outcome criterion5()
    {
        const auto arrival = gi_arrival_envelope(Distribution::exponential(0.5));
        const auto task = gi_service_envelope(Distribution::exponential(1.0));
        const double theta = 0.5;
        std::vector<double> rr;
        for (int k = 1; k <= 12; ++k)
            rr.push_back(invert_quantile(thinned_multiserver_bounds(arrival, aggregate_service_envelope(task, k), k,
                                                                    RoundRobin{}, theta, false, Increments::Independent)
                                             .sojourn,
                                         1e-6));
        bool affine = true;
        for (std::size_t i = 2; i < rr.size(); ++i)
            affine = affine && std::abs(rr[i] - 2 * rr[i - 1] + rr[i - 2]) <= kFormulaTol;

        bool dominates = true;
        std::string worst_gap;
        double min_gap = INFINITY;
        for (int k = 2; k <= 12; ++k)
        {
            Topology t = make(SystemKind::Thinned, k, Distribution::exponential(0.5), Distribution::exponential(1.0));
            t.job_tasks = k;
            const auto det = compute_bound(t, Metric::Sojourn, 1e-6, {}, IncrementsChoice::Independent);
            t.assignment = Assignment::Random;
            const auto rnd = compute_bound(t, Metric::Sojourn, 1e-6, {}, IncrementsChoice::Independent);
            const double gap = rnd.available ? rnd.tau - det.tau : INFINITY;
            dominates = dominates && det.available && gap >= 0.0;
            min_gap = std::min(min_gap, gap);
        }

        bool reseq = true;
        for (int k = 2; k <= 12; ++k)
        {
            const auto job = aggregate_service_envelope(task, k);
            const double with = invert_quantile(
                thinned_multiserver_bounds(arrival, job, k, RoundRobin{}, theta, true, Increments::Independent).sojourn,
                1e-6);
            const double without = invert_quantile(
                thinned_multiserver_bounds(arrival, job, k, RoundRobin{}, theta, false, Increments::Independent).sojourn,
                1e-6);
            reseq = reseq && std::abs((with - without) - std::log(double(k)) / theta) <= kFormulaTol;
        }
        return {affine && dominates && reseq,
                "round-robin tau(k) affine (step " + fmt(rr[1] - rr[0]) + "), random - round-robin >= " + fmt(min_gap) +
                    ", resequencing adds ln(k)/theta"};
    }

    // 6. M|M|k exactness.
    Outcome criterion6()
    {
        using boost::multiprecision::cpp_rational;
        const int k = 8;
        const cpp_rational a(4);
        cpp_rational term(1);
        cpp_rational below(0);
        for (int j = 0; j < k; ++j)
        {
            below += term;
            term = term * a / (j + 1);
        }
        const cpp_rational top = term * k / (k - a);
        const double p_rational = static_cast<double>(top / (below + top));
        const double p = erlang_c(4.0, k);
        const bool erlang = std::abs(p - p_rational) <= kErlangTol;

        const auto exact = exact_mmk_waiting(4.0, 1.0, k);
        const auto bound = sq_multiserver_bounds(gi_arrival_envelope(Distribution::exponential(4.0)), 1.0, k, 4.0,
                                                 Increments::Independent)
                               .waiting;
        bool ratio = true;
        for (double tau : {0.0, 0.25, 0.5, 1.0, 2.0, 3.0})
            ratio = ratio && std::abs(bound.evaluate(tau) - exact.tail(tau) / p) <= kFormulaTol * bound.evaluate(tau);

        const auto q = sim_quantile(make(SystemKind::SingleQueueMultiServer, k, Distribution::exponential(4.0),
                                         Distribution::exponential(1.0)),
                                    Metric::Waiting);
        const double tau_exact = exact.quantile(kSimEps);
        const double tau_bound = invert_quantile(bound, kSimEps);
        const bool between = q.ci_hi >= tau_exact && q.ci_lo <= tau_bound;
        return {erlang && ratio && between,
                "P_8 = " + fmt(p) + " (rational " + fmt(p_rational) + "), bound = exact/P_8, waiting exact " +
                    fmt(tau_exact) + " <= sim " + ci(q) + " <= bound " + fmt(tau_bound)};
    }

    // 7. G|D|k equivalence of single-queue and round-robin multi-queue.
    Outcome criterion7()
    {
        double worst = 0.0;
        const std::vector<Distribution> arrivals{Distribution::exponential(1.0), Distribution::uniform(0.0, 2.0),
                                                 Distribution::erlang(3, 3.0)};
        for (const auto& arrival : arrivals)
            for (std::uint64_t seed : {1, 2, 3})
            {
                const auto sq = make(SystemKind::SingleQueueMultiServer, 4, arrival, Distribution::deterministic(3.0));
                const auto rr = make(SystemKind::Thinned, 4, arrival, Distribution::deterministic(3.0));
                const auto trace_sq = draw_trace(sq, 10'000, seed);
                const auto trace_rr = draw_trace(rr, 10'000, seed);
                const auto d_sq = maxplus_departures(sq, trace_sq.arrivals, trace_sq.services);
                const auto d_rr = maxplus_departures(rr, trace_rr.arrivals, trace_rr.services);
                for (std::size_t i = 0; i < d_sq.size(); ++i)
                    worst = std::max(worst, std::abs(d_sq[i] - d_rr[i]));
            }
        return {worst <= kEngineTol, "3 arrival laws x 3 seeds, max |D_sq - D_rr| = " + fmt(worst)};
    }

    // 8. Single-queue fork-join.
    Outcome criterion8()
    {
        const bool beta = std::abs(sq_forkjoin_beta(1.0, 2, 0.5) - 7.0 / 3.0) <= 1e-15 * 7.0;
        const std::vector<int> ks{1, 2, 4, 8, 16, 32};
        std::vector<double> taus;
        for (int k : ks)
        {
            const auto out = compute_bound(make(SystemKind::SingleQueueForkJoin, k, Distribution::exponential(0.7),
                                                Distribution::exponential(1.0)),
                                           Metric::Sojourn, kSimEps, {}, IncrementsChoice::Independent);
            taus.push_back(out.available ? out.tau : INFINITY);
        }
        const auto bound_min = std::min_element(taus.begin(), taus.end()) - taus.begin();
        bool bound_shape = bound_min > 0 && bound_min + 1 < static_cast<long>(taus.size());
        for (long i = 1; i <= bound_min; ++i)
            bound_shape = bound_shape && taus[i] < taus[i - 1];
        for (std::size_t i = bound_min + 1; i < taus.size(); ++i)
            bound_shape = bound_shape && taus[i] > taus[i - 1];

        std::vector<QuantileEstimate> q;
        for (int k : ks)
            q.push_back(sim_quantile(make(SystemKind::SingleQueueForkJoin, k, Distribution::exponential(0.7),
                                          Distribution::exponential(1.0)),
                                     Metric::Sojourn));
        std::size_t sim_min = 0;
        for (std::size_t i = 1; i < q.size(); ++i)
            if (q[i].value < q[sim_min].value)
                sim_min = i;
        const bool sim_shape = sim_min >= 1 && sim_min + 1 < q.size() && q[sim_min].ci_hi < q[0].ci_lo;

        std::string b, s;
        for (std::size_t i = 0; i < ks.size(); ++i)
        {
            b += (i ? ", " : "") + fmt(taus[i]);
            s += (i ? ", " : "") + fmt(q[i].value);
        }
        return {beta && bound_shape && sim_shape,
                "beta(2,0.5,1) = 7/3, bound {" + b + "} min at k=" + std::to_string(ks[bound_min]) + ", sim {" + s +
                    "} min at k=" + std::to_string(ks[sim_min]) + " CI-separated from k=1"};
    }

    // 9. Pathwise dominance on coupled traces.
    Outcome criterion9()
    {
        std::size_t sm_below_fj = 0, fj_below_sq = 0, rep_above_single = 0;
        for (std::uint64_t seed : {1, 2, 3})
        {
            const auto arrival = Distribution::exponential(0.3);
            const auto task = Distribution::exponential(1.0);
            const auto sm = make(SystemKind::SplitMerge, 4, arrival, task);
            const auto fj = make(SystemKind::ForkJoin, 4, arrival, task);
            const auto sq = make(SystemKind::SingleQueueForkJoin, 4, arrival, task);
            const auto trace = draw_trace(fj, 10'000, seed);
            const auto d_sm = maxplus_departures(sm, trace.arrivals, trace.services);
            const auto d_fj = maxplus_departures(fj, trace.arrivals, trace.services);
            const auto d_sq = maxplus_departures(sq, trace.arrivals, trace.services);
            for (std::size_t i = 0; i < d_fj.size(); ++i)
            {
                sm_below_fj += d_sm[i] < d_fj[i];
                fj_below_sq += d_fj[i] < d_sq[i];
            }

            const auto rep = make(SystemKind::Replication, 4, Distribution::exponential(0.5), task);
            const auto single = make(SystemKind::SingleServer, 1, Distribution::exponential(0.5), task);
            const auto rt = draw_trace(rep, 10'000, seed);
            const auto st = draw_trace(single, 10'000, seed);
            const auto d_rep = maxplus_departures(rep, rt.arrivals, rt.services);
            const auto d_single = maxplus_departures(single, st.arrivals, st.services);
            for (std::size_t i = 0; i < d_rep.size(); ++i)
                rep_above_single += d_rep[i] > d_single[i];
        }
        return {sm_below_fj + fj_below_sq + rep_above_single == 0,
                "3 seeds x 10^4 jobs, violations: split-merge < fork-join " + std::to_string(sm_below_fj) +
                    ", fork-join < single-queue fork-join " + std::to_string(fj_below_sq) +
                    ", replication > single server " + std::to_string(rep_above_single)};
    }

    // 10. Reduction lattice.
    Outcome criterion10()
    {
        const auto arrival = gi_arrival_envelope(Distribution::exponential(0.5));
        const auto task = gi_service_envelope(Distribution::exponential(1.0));
        int checks = 0;
        bool ok = true;
        for (double theta : {0.05, 0.15, 0.25, 0.35, 0.45})
        {
            for (auto mode : {Increments::Independent, Increments::General})
            {
                const auto parent = gg1_bounds(arrival, task, theta, mode);
                const auto child = forkjoin_bounds(arrival, task, 1, theta, mode);
                ok = ok && same_bound(child.sojourn, parent.sojourn, kReductionTol) &&
                     same_bound(child.waiting, parent.waiting, kReductionTol);
                ++checks;
            }
            ok = ok && same_bound(multistage_bounds(arrival, task, 1, 1, theta),
                                  gg1_bounds(arrival, task, theta, Increments::General).sojourn, kReductionTol);
            ++checks;

            const auto sqfj = sq_forkjoin_bounds(arrival, 1.0, 1, theta, Increments::Independent);
            const auto sqms = sq_multiserver_bounds(arrival, 1.0, 1, theta, Increments::Independent);
            ok = ok && same_bound(sqfj.sojourn, sqms.sojourn, kReductionTol) &&
                 same_bound(sqfj.waiting_per_task.back(), sqms.waiting, kReductionTol);
            ++checks;

            const int k = 4;
            ok = ok && same_bound(hybrid_bounds(arrival, task, k, 1, theta),
                                  forkjoin_bounds(arrival, task, k, theta, Increments::Independent).sojourn,
                                  kReductionTol);
            ok = ok && same_bound(hybrid_bounds(arrival, task, k, k, theta),
                                  thinned_multiserver_bounds(arrival, aggregate_service_envelope(task, k), k,
                                                             RoundRobin{}, theta, false, Increments::Independent)
                                      .sojourn,
                                  kReductionTol);
            checks += 2;
        }
        return {ok, std::to_string(checks) + " reductions on 5 theta values"};
    }
}

int main()
{
    const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
        {"1 M|M|1 sandwich", criterion1},
        {"2 recursion oracle", criterion2},
        {"3 ln k growth", criterion3},
        {"4 O(h ln k)", criterion4},
        {"5 thinning", criterion5},
        {"6 M|M|k exactness", criterion6},
        {"7 G|D|k equivalence", criterion7},
        {"8 single-queue fork-join", criterion8},
        {"9 pathwise dominance", criterion9},
        {"10 reduction lattice", criterion10},
    };
    int failures = 0;
    for (const auto& [name, run] : criteria)
    {
        Outcome out;
        try
        {
            out = run();
        }
        catch (const std::exception& e)
        {
            out = {false, std::string("exception: ") + e.what()};
        }
        failures += out.pass ? 0 : 1;
        std::printf("%s  [%s]  %s\n", out.pass ? "PASS" : "FAIL", name, out.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
