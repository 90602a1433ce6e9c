#include "doctest.h"

#include "fjb/distribution.hpp"
#include "fjb/envelope.hpp"
#include "fjb/error.hpp"
#include "fjb/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <vector>

using namespace fjb;
using doctest::Approx;

namespace
{
    const double ln2 = std::log(2.0);

    double rel(double a, double b) { return std::abs(a - b) / std::max(1.0, std::abs(b)); }
}

TEST_CASE("distribution parameters are validated")
{
    CHECK_THROWS_AS(Distribution::exponential(0.0), InvalidSpec);
    CHECK_THROWS_AS(Distribution::deterministic(-1.0), InvalidSpec);
    CHECK_THROWS_AS(Distribution::erlang(0, 1.0), InvalidSpec);
    CHECK_THROWS_AS(Distribution::weibull(1.0, 0.0), InvalidSpec);
    CHECK_THROWS_AS(Distribution::uniform(2.0, 1.0), InvalidSpec);
    CHECK_THROWS_AS(Distribution::uniform(-1.0, 1.0), InvalidSpec);
    CHECK_NOTHROW(Distribution::uniform(0.0, 1.0));
}

TEST_CASE("distribution text round-trips")
{
    for (const char* text : {"det:2", "exp:0.5", "erlang:4:0.5", "weibull:1.5:1", "uniform:0:2"})
    {
        const auto d = parse_distribution(text);
        CHECK(parse_distribution(d.describe()) == d);
    }
    CHECK_THROWS_AS(parse_distribution("normal:0:1"), InvalidSpec);
    CHECK_THROWS_AS(parse_distribution("exp"), InvalidSpec);
    CHECK_THROWS_AS(parse_distribution("erlang:2.5:1"), InvalidSpec);
}

TEST_CASE("means and survival functions")
{
    CHECK(Distribution::exponential(0.5).mean() == Approx(2.0));
    CHECK(Distribution::erlang(4, 2.0).mean() == Approx(2.0));
    CHECK(Distribution::uniform(1.0, 3.0).mean() == Approx(2.0));
    CHECK(Distribution::weibull(1.0, 2.0).mean() == Approx(2.0));
    CHECK(Distribution::weibull(2.0, 1.0).mean() == Approx(std::sqrt(std::numbers::pi) / 2));
    CHECK(Distribution::exponential(1.0).survival(2.0) == Approx(std::exp(-2.0)));
    // Erlang-2 survival e^{-x}(1 + x).
    CHECK(Distribution::erlang(2, 1.0).survival(1.5) == Approx(std::exp(-1.5) * 2.5));
    CHECK(Distribution::deterministic(2.0).survival(1.999) == 1.0);
    CHECK(Distribution::deterministic(2.0).survival(2.0) == 0.0);
}

TEST_CASE("closed-form log MGFs")
{
    CHECK(Distribution::exponential(1.0).log_mgf(0.5) == Approx(std::log(2.0)));
    CHECK(Distribution::erlang(3, 1.0).log_mgf(0.5) == Approx(3 * std::log(2.0)));
    CHECK(Distribution::deterministic(2.0).log_mgf(700.0) == Approx(1400.0));
    CHECK(Distribution::uniform(0.0, 2.0).log_mgf(1.0) == Approx(std::log((std::exp(2.0) - 1.0) / 2.0)));
    CHECK(Distribution::exponential(1.0).mgf_abscissa() == 1.0);
    CHECK(std::isinf(Distribution::uniform(0.0, 1.0).mgf_abscissa()));
    CHECK(Distribution::weibull(0.5, 1.0).mgf_abscissa() == 0.0);
    CHECK_THROWS_AS(Distribution::exponential(1.0).log_mgf(1.0), DomainError);
}

TEST_CASE("Weibull MGF by quadrature matches the Rayleigh closed form")
{
    // Shape 2, scale s: 1 + theta s (sqrt(pi)/2) e^{theta^2 s^2 / 4} (1 + erf(theta s / 2)).
    const double s = 1.3;
    const auto d = Distribution::weibull(2.0, s);
    for (double theta : {0.1, 0.5, 1.0, 2.0})
    {
        const double x = theta * s;
        const double mgf = 1.0 + x * std::sqrt(std::numbers::pi) / 2 * std::exp(x * x / 4) * (1.0 + std::erf(x / 2));
        CHECK(rel(d.log_mgf(theta), std::log(mgf)) < 1e-9);
    }
}

TEST_CASE("quadrature integrates known decaying integrands")
{
    CHECK(integrate_decaying([](double x) { return std::exp(-x); }, 1.0) == Approx(1.0).epsilon(1e-12));
    CHECK(integrate_decaying([](double x) { return x * x * std::exp(-2 * x); }, 1.0) == Approx(0.25).epsilon(1e-12));
    CHECK(integrate_decaying([](double x) { return x < 3.0 ? 1.0 : 0.0; }, 1.0, 3.0) == Approx(3.0).epsilon(1e-12));
    CHECK_THROWS_AS(integrate_decaying([](double) { return 1.0; }, 1.0), DomainError);
}

TEST_CASE("sampling by inverse transform")
{
    const auto e = Distribution::exponential(2.0);
    CHECK(e.uniforms_per_draw() == 1);
    std::vector<double> u{0.5};
    CHECK(e.sample(u) == Approx(std::log(2.0) / 2.0));
    CHECK(Distribution::erlang(3, 1.0).uniforms_per_draw() == 3);
    CHECK(Distribution::deterministic(1.5).uniforms_per_draw() == 0);
    CHECK(Distribution::deterministic(1.5).sample({}) == 1.5);
    std::vector<double> u2{0.25};
    CHECK(Distribution::uniform(1.0, 3.0).sample(u2) == Approx(1.5));
    CHECK(Distribution::weibull(2.0, 1.0).sample(u2) == Approx(std::sqrt(-std::log(0.75))));
}

TEST_CASE("scaled distributions")
{
    CHECK(Distribution::exponential(2.0).scaled(2.0) == Distribution::exponential(1.0));
    CHECK(Distribution::erlang(3, 3.0).scaled(3.0).mean() == Approx(3.0));
    CHECK(Distribution::uniform(1.0, 2.0).scaled(2.0) == Distribution::uniform(2.0, 4.0));
    CHECK_THROWS_AS(Distribution::exponential(1.0).scaled(0.0), InvalidSpec);
}

TEST_CASE("arrival envelope examples")
{
    CHECK(gi_arrival_envelope(Distribution::exponential(0.5)).rho(0.5) == Approx(2 * ln2));
    CHECK(gi_arrival_envelope(Distribution::deterministic(3.0)).rho(0.7) == Approx(3.0));
    CHECK(gi_arrival_envelope(Distribution::erlang(4, 0.5)).rho(0.5) == Approx(8 * ln2));
    CHECK(gi_arrival_envelope(Distribution::exponential(0.5)).sigma(0.5) == 0.0);
    CHECK(gi_arrival_envelope(Distribution::exponential(0.5)).direction() == EnvelopeDirection::ArrivalLower);
}

TEST_CASE("service envelope examples")
{
    const auto e = gi_service_envelope(Distribution::exponential(1.0));
    CHECK(e.rho(0.5) == Approx(2 * ln2));
    CHECK(gi_service_envelope(Distribution::deterministic(2.5)).rho(4.0) == Approx(2.5));
    CHECK(gi_service_envelope(Distribution::erlang(8, 1.0)).rho(0.5) == Approx(16 * ln2));
    CHECK_THROWS_AS(e.rho(1.0), DomainError);
    CHECK_THROWS_AS(e.rho(0.0), DomainError);
    CHECK_THROWS_AS(gi_service_envelope(Distribution::weibull(0.5, 1.0)), InvalidSpec);
}

TEST_CASE("rho tends to the mean as theta goes to zero")
{
    for (const auto& d : {Distribution::exponential(0.7), Distribution::erlang(3, 2.0), Distribution::deterministic(1.2),
                          Distribution::uniform(0.5, 2.5), Distribution::weibull(1.5, 1.0), Distribution::weibull(2.0, 0.8)})
    {
        CHECK(rel(gi_service_envelope(d).rho(1e-6), d.mean()) < 1e-4);
        CHECK(rel(gi_arrival_envelope(d).rho(1e-6), d.mean()) < 1e-4);
    }
}

TEST_CASE("rho is monotone in theta")
{
    for (const auto& d : {Distribution::exponential(2.0), Distribution::erlang(3, 2.0), Distribution::uniform(0.0, 1.0),
                          Distribution::weibull(1.5, 0.5)})
    {
        const auto svc = gi_service_envelope(d);
        const auto arr = gi_arrival_envelope(d);
        const double hi = std::isinf(d.mgf_abscissa()) ? 10.0 : d.mgf_abscissa();
        double prev_s = svc.rho(hi / 101);
        double prev_a = arr.rho(hi / 101);
        for (int i = 2; i <= 100; ++i)
        {
            const double theta = hi * i / 101;
            const double s = svc.rho(theta);
            const double a = arr.rho(theta);
            CHECK(s >= prev_s - 1e-12);
            CHECK(a <= prev_a + 1e-12);
            prev_s = s;
            prev_a = a;
        }
    }
}

TEST_CASE("stability boundary of M|M at theta = mu - lambda")
{
    const double a = gi_arrival_envelope(Distribution::exponential(0.5)).rho(0.5);
    const double s = gi_service_envelope(Distribution::exponential(1.0)).rho(0.5);
    CHECK(std::abs(a - s) < 1e-14);
}

TEST_CASE("thinned arrival envelopes")
{
    const auto base = gi_arrival_envelope(Distribution::exponential(0.5));
    CHECK(thinned_arrival_envelope(base, 4, RoundRobin{}).rho(0.5) == Approx(4 * 2 * ln2));
    CHECK(thinned_arrival_envelope(base, 4, RandomThinning{0.25}).rho(0.5) == Approx(2 * std::log(5.0)));
    for (double theta : {0.1, 0.5, 1.0, 3.0})
    {
        CHECK(thinned_arrival_envelope(base, 1, RoundRobin{}).rho(theta) == Approx(base.rho(theta)));
        CHECK(thinned_arrival_envelope(base, 1, RandomThinning{1.0}).rho(theta) == Approx(base.rho(theta)));
    }
    CHECK_THROWS_AS(thinned_arrival_envelope(base, 0, RoundRobin{}), InvalidSpec);
    CHECK_THROWS_AS(thinned_arrival_envelope(base, 2, RandomThinning{0.0}), InvalidSpec);
}

TEST_CASE("random thinning of Poisson arrivals is Poisson with rate lambda p")
{
    for (int k : {2, 3, 5, 8})
    {
        const auto thinned =
            thinned_arrival_envelope(gi_arrival_envelope(Distribution::exponential(0.5)), k, RandomThinning{1.0 / k});
        const auto direct = gi_arrival_envelope(Distribution::exponential(0.5 / k));
        for (double theta : {0.05, 0.2, 0.5, 1.0, 2.5})
            CHECK(std::abs(thinned.rho(theta) - direct.rho(theta)) <= 1e-12 * direct.rho(theta));
    }
}

TEST_CASE("thinned envelopes nest")
{
    const auto base = gi_arrival_envelope(Distribution::exponential(0.5));
    const auto twice = thinned_arrival_envelope(thinned_arrival_envelope(base, 2, RoundRobin{}), 3, RoundRobin{});
    CHECK(twice.rho(0.4) == Approx(6 * base.rho(0.4)));
}

TEST_CASE("split-merge service envelope")
{
    const auto task = Distribution::exponential(1.0);
    const auto sm = splitmerge_service_envelope(task, 2);
    CHECK(std::abs(sm.rho(0.5) - 2 * std::log(8.0 / 3.0)) < 1e-12);
    const auto quad = splitmerge_service_envelope(task, 2, MgfMethod::Quadrature);
    CHECK(rel(quad.rho(0.5), 2 * std::log(8.0 / 3.0)) < 1e-9);
    CHECK(splitmerge_rho_upper(task, 2, 0.5) == Approx(2 * std::log(4.0)));
    CHECK(splitmerge_rho_upper(task, 2, 0.5) >= sm.rho(0.5));
    for (double theta : {0.1, 0.4, 0.8})
        CHECK(splitmerge_service_envelope(task, 1).rho(theta) == Approx(gi_service_envelope(task).rho(theta)));
}

TEST_CASE("max and min MGFs: quadrature against closed forms")
{
    // Max of k iid Exp(mu) is a sum of Exp(j mu), j = 1..k.
    const auto e = Distribution::exponential(1.5);
    for (int k : {1, 2, 3, 5, 8})
        for (double theta : {0.2, 0.7, 1.2})
        {
            double closed = 0.0;
            for (int j = 1; j <= k; ++j)
                closed += std::log(j * 1.5 / (j * 1.5 - theta));
            CHECK(rel(log_mgf_of_max(e, k, theta, MgfMethod::Quadrature), closed) < 1e-9);
            CHECK(rel(log_mgf_of_min(e, k, theta, MgfMethod::Quadrature), std::log(k * 1.5 / (k * 1.5 - theta))) <
                  1e-9);
        }
}

TEST_CASE("split-merge rho grows and replication rho shrinks with k")
{
    for (const auto& d : {Distribution::exponential(1.0), Distribution::erlang(2, 2.0), Distribution::uniform(0.0, 2.0),
                          Distribution::weibull(1.5, 1.0)})
        for (double theta : {0.1, 0.3, 0.6})
        {
            double prev_sm = 0.0;
            double prev_rep = INFINITY;
            for (int k = 1; k <= 8; ++k)
            {
                const double sm = splitmerge_service_envelope(d, k).rho(theta);
                const double rep = replication_service_envelope(d, k).rho(theta);
                CHECK(sm >= prev_sm - 1e-12);
                CHECK(rep <= prev_rep + 1e-12);
                prev_sm = sm;
                prev_rep = rep;
            }
        }
}

TEST_CASE("replication service envelope")
{
    const auto r = replication_service_envelope(Distribution::exponential(1.0), 4);
    CHECK(r.rho(0.5) == Approx(2 * std::log(4.0 / 3.5)));
    CHECK(rel(r.rho(0.5), 0.26706) < 1e-4);
    const auto one = replication_service_envelope(Distribution::exponential(1.0), 1);
    const auto two = replication_service_envelope(Distribution::exponential(1.0), 2);
    for (double theta : {0.1, 0.5, 0.9})
    {
        CHECK(one.rho(theta) == Approx(gi_service_envelope(Distribution::exponential(1.0)).rho(theta)));
        CHECK(two.rho(theta) < one.rho(theta));
    }
    // The minimum of two Exp(1) replicas admits theta up to 2.
    CHECK_NOTHROW(two.rho(1.5));
}

TEST_CASE("fork-join service envelope")
{
    const auto task = gi_service_envelope(Distribution::exponential(1.0));
    const auto fj8 = forkjoin_service_envelope(task, 8);
    CHECK(fj8.sigma(0.5) == Approx(std::log(8.0) / 0.5));
    CHECK(fj8.rho(0.5) == Approx(2 * ln2));
    CHECK(forkjoin_service_envelope(task, 1).sigma(0.3) == 0.0);
    for (double theta : {0.1, 0.5, 0.9})
        CHECK(std::abs(forkjoin_service_envelope(task, 16).sigma(theta) - fj8.sigma(theta) - ln2 / theta) < 1e-12);
    CHECK_THROWS_AS(forkjoin_service_envelope(task, 0), InvalidSpec);
    CHECK_THROWS_AS(forkjoin_service_envelope(gi_arrival_envelope(Distribution::exponential(1.0)), 2), InvalidSpec);
}

TEST_CASE("aggregated service envelope scales rho")
{
    const auto task = gi_service_envelope(Distribution::exponential(1.0));
    const auto job = aggregate_service_envelope(task, 4);
    CHECK(job.rho(0.5) == Approx(gi_service_envelope(Distribution::erlang(4, 1.0)).rho(0.5)));
    CHECK(job.mean() == Approx(4.0));
    CHECK(forkjoin_service_envelope(job, 2).sigma(0.5) == Approx(ln2 / 0.5));
}
