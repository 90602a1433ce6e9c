#include "fjb/bounds.hpp"

#include "fjb/error.hpp"

#include <cmath>
#include <string>

namespace fjb
{
    namespace
    {
        struct Constants
        {
            double alpha;
            double slack;
        };

        // Rounding in rho can make an exactly critical theta look infeasible by a few ulps.
        double slack_tolerance(double rho_arrival) { return 1e-12 * std::max(1.0, std::abs(rho_arrival)); }

        /// alpha for one stage given the burst sum sigma_A + sigma_S and the slack.
        Constants stage_constants(double rho_arrival, double rho_service, double sigma_sum, double theta,
                                  Increments mode, int stages = 1)
        {
            const double slack = rho_arrival - rho_service;
            if (mode == Increments::Independent)
            {
                if (slack < -slack_tolerance(rho_arrival))
                {
                    throw InfeasibleTheta("stability violated at theta = " + std::to_string(theta) +
                                              ": slack " + std::to_string(slack),
                                          slack);
                }
                return {1.0, std::max(slack, 0.0)};
            }
            if (!(slack > 0.0))
            {
                throw InfeasibleTheta("strict stability violated at theta = " + std::to_string(theta) + ": slack " +
                                          std::to_string(slack),
                                      slack);
            }
            const double log_alpha = theta * sigma_sum - stages * std::log(-std::expm1(-theta * slack));
            return {std::exp(log_alpha), slack};
        }

        void require_arrival(const Envelope& e)
        {
            if (e.direction() != EnvelopeDirection::ArrivalLower)
                throw InvalidSpec("expected an arrival envelope, got '" + e.label() + "'");
        }

        void require_service(const Envelope& e)
        {
            if (e.direction() != EnvelopeDirection::ServiceUpper)
                throw InvalidSpec("expected a service envelope, got '" + e.label() + "'");
        }

        void require_renewal(Increments mode, const Envelope& a, const Envelope* s = nullptr)
        {
            if (mode == Increments::Independent && (!a.iid_increments() || (s && !s->iid_increments())))
                throw InvalidSpec("independent-increment constants need renewal envelopes");
        }

        void require_positive(int v, const char* name)
        {
            if (v < 1)
                throw InvalidSpec(std::string(name) + " must be >= 1");
        }

        BoundMeta meta_of(const Constants& c, double beta = 1.0)
        {
            BoundMeta m;
            m.alpha = c.alpha;
            m.beta = beta;
            m.stability_slack = c.slack;
            return m;
        }

        /// Sojourn m_s alpha e^{theta rho_S} e^{-theta tau} and waiting m_w alpha e^{-theta tau}.
        BoundPair server_pair(const Envelope& arrival, const Envelope& service, double multiplicity_sojourn,
                              double multiplicity_waiting, double theta, Increments mode)
        {
            require_arrival(arrival);
            require_service(service);
            require_renewal(mode, arrival, &service);
            if (!(theta > 0.0))
                throw DomainError("theta must be positive");
            const double rho_a = arrival.rho(theta);
            const double rho_s = service.rho(theta);
            const double sigma = arrival.sigma(theta) + service.sigma(theta);
            const auto c = stage_constants(rho_a, rho_s, sigma, theta, mode);
            const auto meta = meta_of(c);
            TailBound sojourn({{multiplicity_sojourn * c.alpha * std::exp(theta * rho_s), theta}}, theta, meta);
            TailBound waiting({{multiplicity_waiting * c.alpha, theta}}, theta, meta);
            return {std::move(sojourn), std::move(waiting)};
        }

        void require_sq(const Envelope& arrival, double mu, int k, double theta, Increments mode)
        {
            require_arrival(arrival);
            require_renewal(mode, arrival);
            require_positive(k, "k");
            if (!(mu > 0.0))
                throw InvalidSpec("mu must be positive");
            if (!(theta > 0.0 && theta < k * mu))
                throw DomainError("theta = " + std::to_string(theta) + " outside (0, k mu)");
        }

        /// alpha*beta*mu/(mu-theta) (e^{-theta tau} - e^{-mu tau}) + e^{-mu tau}, with its theta -> mu limit.
        TailBound convolved_sojourn(double alpha_beta, double mu, double theta, const BoundMeta& meta)
        {
            if (std::abs(theta - mu) < 1e-6 * mu)
            {
                return TailBound({{alpha_beta * mu, mu, 1}, {1.0, mu, 0}}, theta, meta);
            }
            const double c = alpha_beta * mu / (mu - theta);
            return TailBound({{c, theta}, {-c, mu}, {1.0, mu}}, theta, meta);
        }
    }

    BoundPair gg1_bounds(const Envelope& arrival, const Envelope& service, double theta, Increments mode)
    {
        return server_pair(arrival, service, 1.0, 1.0, theta, mode);
    }

    BoundPair forkjoin_bounds(const Envelope& arrival, const Envelope& task, int k, double theta, Increments mode)
    {
        require_positive(k, "k");
        return server_pair(arrival, task, k, k, theta, mode);
    }

    double expected_sojourn_bound(const Envelope& arrival, const Envelope& task, int k, double theta,
                                  Increments mode)
    {
        const auto pair = forkjoin_bounds(arrival, task, k, theta, mode);
        return task.rho(theta) + (std::log(static_cast<double>(k)) + std::log(pair.sojourn.meta().alpha) + 1.0) / theta;
    }

    TailBound multistage_bounds(const Envelope& arrival, const Envelope& task, int k, int h, double theta)
    {
        require_arrival(arrival);
        require_service(task);
        require_positive(k, "k");
        require_positive(h, "h");
        if (!(theta > 0.0))
            throw DomainError("theta must be positive");
        const double rho_a = arrival.rho(theta);
        const double rho_q = task.rho(theta);
        const double sigma = arrival.sigma(theta) + h * task.sigma(theta);
        const auto c = stage_constants(rho_a, rho_q, sigma, theta, Increments::General, h);
        const double log_coeff = h * std::log(static_cast<double>(k)) + std::log(c.alpha) + theta * h * rho_q;
        return TailBound({{std::exp(log_coeff), theta}}, theta, meta_of(c));
    }

    BoundPair thinned_forkjoin_bounds(const Envelope& arrival, const Envelope& job, int branches, int fork_width,
                                      const ThinningPolicy& policy, double theta, bool resequencing,
                                      Increments mode)
    {
        require_positive(branches, "branches");
        require_positive(fork_width, "fork width");
        require_arrival(arrival);
        const auto thinned = thinned_arrival_envelope(arrival, branches, policy);
        const double reseq = resequencing ? static_cast<double>(branches) : 1.0;
        return server_pair(thinned, job, reseq * fork_width, fork_width, theta, mode);
    }

    BoundPair thinned_multiserver_bounds(const Envelope& arrival, const Envelope& job, int k,
                                         const ThinningPolicy& policy, double theta, bool resequencing,
                                         Increments mode)
    {
        return thinned_forkjoin_bounds(arrival, job, k, 1, policy, theta, resequencing, mode);
    }

    TailBound hybrid_bounds(const Envelope& arrival, const Envelope& task, int k, int a, double theta,
                            Increments mode)
    {
        require_positive(k, "k");
        require_positive(a, "a");
        if (k % a != 0)
            throw InvalidSpec("hybrid: a = " + std::to_string(a) + " does not divide k = " + std::to_string(k));
        const auto job = aggregate_service_envelope(task, a);
        return thinned_forkjoin_bounds(arrival, job, a, k / a, RoundRobin{}, theta, false, mode).sojourn;
    }

    double rho_idle(double mu, int k, double theta)
    {
        if (!(theta > 0.0 && theta < k * mu))
            throw DomainError("theta = " + std::to_string(theta) + " outside (0, k mu)");
        return -std::log1p(-theta / (k * mu)) / theta;
    }

    double sq_forkjoin_beta(double mu, int k, double theta)
    {
        const double x = theta * rho_idle(mu, k, theta);
        return std::expm1(k * x) / std::expm1(x);
    }

    BoundPair sq_multiserver_bounds(const Envelope& arrival, double mu, int k, double theta, Increments mode)
    {
        require_sq(arrival, mu, k, theta, mode);
        const double rho_a = arrival.rho(theta);
        const double rho_z = rho_idle(mu, k, theta);
        const auto c = stage_constants(rho_a, rho_z, arrival.sigma(theta), theta, mode);
        const auto meta = meta_of(c);
        TailBound waiting({{c.alpha, theta}}, theta, meta);
        return {convolved_sojourn(c.alpha, mu, theta, meta), std::move(waiting)};
    }

    SqForkJoinBounds sq_forkjoin_bounds(const Envelope& arrival, double mu, int k, double theta, Increments mode)
    {
        require_sq(arrival, mu, k, theta, mode);
        const double rho_a = arrival.rho(theta);
        const double rho_z = rho_idle(mu, k, theta);
        const auto c = stage_constants(rho_a, k * rho_z, arrival.sigma(theta), theta, mode);
        const double beta = sq_forkjoin_beta(mu, k, theta);
        const auto meta = meta_of(c, beta);
        std::vector<TailBound> waiting;
        waiting.reserve(static_cast<std::size_t>(k));
        for (int i = 1; i <= k; ++i)
            waiting.emplace_back(std::vector<TailTerm>{{c.alpha * std::exp(theta * (i - 1) * rho_z), theta}}, theta,
                                 meta);
        return {convolved_sojourn(c.alpha * beta, mu, theta, meta), std::move(waiting)};
    }
}
