#include "fjb/envelope.hpp"

#include "fjb/error.hpp"
#include "fjb/quadrature.hpp"

#include <cmath>
#include <string>

namespace fjb
{
    namespace
    {
        std::string fmt_theta(double theta) { return std::to_string(theta); }

        void require_k(int k)
        {
            if (k < 1)
                throw InvalidSpec("k must be >= 1, got " + std::to_string(k));
        }

        double mean_of_extreme(const Distribution& d, int k, bool maximum)
        {
            if (k == 1)
                return d.mean();
            const double end = [&] {
                if (const auto* u = std::get_if<Uniform>(&d.params()))
                    return u->hi;
                if (const auto* c = std::get_if<Deterministic>(&d.params()))
                    return c->value;
                return std::numeric_limits<double>::infinity();
            }();
            auto surv = [&](double x) {
                const double s = d.survival(x);
                if (maximum)
                    return s >= 1.0 ? 1.0 : -std::expm1(k * std::log1p(-s));
                return s <= 0.0 ? 0.0 : std::exp(k * std::log(s));
            };
            return integrate_decaying(surv, d.mean(), end);
        }
    }

    Envelope::Envelope(EnvelopeDirection direction, Fn sigma, Fn rho, ThetaInterval domain, double mean,
                       bool iid_increments, std::string label)
        : direction_(direction),
          sigma_(std::move(sigma)),
          rho_(std::move(rho)),
          domain_(domain),
          mean_(mean),
          iid_(iid_increments),
          label_(std::move(label))
    {
        if (domain_.empty())
            throw InvalidSpec("envelope '" + label_ + "' has an empty theta-domain");
    }

    void Envelope::check(double theta) const
    {
        if (!domain_.contains(theta))
        {
            throw DomainError("theta = " + fmt_theta(theta) + " outside (" + fmt_theta(domain_.lo) + ", " +
                              fmt_theta(domain_.hi) + ") of envelope '" + label_ + "'");
        }
    }

    double Envelope::sigma(double theta) const
    {
        check(theta);
        return sigma_(theta);
    }

    double Envelope::rho(double theta) const
    {
        check(theta);
        return rho_(theta);
    }

    Envelope gi_arrival_envelope(const Distribution& interarrival)
    {
        return Envelope(
            EnvelopeDirection::ArrivalLower, [](double) { return 0.0; },
            [interarrival](double theta) { return -interarrival.log_mgf(-theta) / theta; }, ThetaInterval{},
            interarrival.mean(), true, "arrival " + interarrival.describe());
    }

    Envelope gi_service_envelope(const Distribution& service)
    {
        const double abscissa = service.mgf_abscissa();
        if (!(abscissa > 0.0))
            throw InvalidSpec("service " + service.describe() + " is heavy-tailed; MGF infinite for theta > 0");
        return Envelope(
            EnvelopeDirection::ServiceUpper, [](double) { return 0.0; },
            [service](double theta) { return service.log_mgf(theta) / theta; }, ThetaInterval{0.0, abscissa},
            service.mean(), true, "service " + service.describe());
    }

    Envelope thinned_arrival_envelope(const Envelope& base, int k, const ThinningPolicy& policy)
    {
        require_k(k);
        if (base.direction() != EnvelopeDirection::ArrivalLower || !base.iid_increments())
            throw InvalidSpec("thinning requires a renewal arrival envelope");
        if (const auto* rnd = std::get_if<RandomThinning>(&policy))
        {
            const double p = rnd->p;
            if (!(p > 0.0 && p <= 1.0))
                throw InvalidSpec("random thinning probability must lie in (0, 1]");
            auto rho = [base, p](double theta) {
                // e^{-theta rho_A} is the inter-arrival MGF at -theta
                const double log_m = -theta * base.rho(theta);
                if (!(std::exp(log_m) < 1.0 / (1.0 - p)))
                {
                    throw DomainError("random thinning: E[e^{-theta A}] >= 1/(1-p) at theta = " +
                                      std::to_string(theta));
                }
                const double log_mgf = std::log(p) + log_m - std::log1p(-(1.0 - p) * std::exp(log_m));
                return -log_mgf / theta;
            };
            return Envelope(
                EnvelopeDirection::ArrivalLower, [](double) { return 0.0; }, rho, base.domain(), base.mean() / p,
                true, base.label() + " thinned random p=" + std::to_string(p));
        }
        return Envelope(
            EnvelopeDirection::ArrivalLower, [](double) { return 0.0; },
            [base, k](double theta) { return k * base.rho(theta); }, base.domain(), k * base.mean(), true,
            base.label() + " thinned round-robin k=" + std::to_string(k));
    }

    Envelope splitmerge_service_envelope(const Distribution& task, int k, MgfMethod method)
    {
        require_k(k);
        const double abscissa = task.mgf_abscissa();
        if (!(abscissa > 0.0))
            throw InvalidSpec("task " + task.describe() + " is heavy-tailed; MGF infinite for theta > 0");
        return Envelope(
            EnvelopeDirection::ServiceUpper, [](double) { return 0.0; },
            [task, k, method](double theta) { return log_mgf_of_max(task, k, theta, method) / theta; },
            ThetaInterval{0.0, abscissa}, mean_of_extreme(task, k, true), true,
            "split-merge max of " + std::to_string(k) + " x " + task.describe());
    }

    double splitmerge_rho_upper(const Distribution& task, int k, double theta)
    {
        require_k(k);
        if (!(theta > 0.0))
            throw DomainError("theta must be positive");
        return (std::log(static_cast<double>(k)) + task.log_mgf(theta)) / theta;
    }

    Envelope replication_service_envelope(const Distribution& replica, int k, MgfMethod method)
    {
        require_k(k);
        const double abscissa = mgf_abscissa_of_min(replica, k);
        if (!(abscissa > 0.0))
            throw InvalidSpec("replica " + replica.describe() + " is heavy-tailed; MGF infinite for theta > 0");
        return Envelope(
            EnvelopeDirection::ServiceUpper, [](double) { return 0.0; },
            [replica, k, method](double theta) { return log_mgf_of_min(replica, k, theta, method) / theta; },
            ThetaInterval{0.0, abscissa}, mean_of_extreme(replica, k, false), true,
            "replication min of " + std::to_string(k) + " x " + replica.describe());
    }

    Envelope forkjoin_service_envelope(const Envelope& task, int k)
    {
        require_k(k);
        if (task.direction() != EnvelopeDirection::ServiceUpper)
            throw InvalidSpec("fork-join needs a service envelope");
        const double log_k = std::log(static_cast<double>(k));
        return Envelope(
            EnvelopeDirection::ServiceUpper, [task, log_k](double theta) { return task.sigma(theta) + log_k / theta; },
            [task](double theta) { return task.rho(theta); }, task.domain(), task.mean(), k == 1 && task.iid_increments(),
            "fork-join k=" + std::to_string(k) + " of " + task.label());
    }

    Envelope aggregate_service_envelope(const Envelope& task, int tasks)
    {
        if (tasks < 1)
            throw InvalidSpec("aggregation needs at least one task per job");
        if (task.direction() != EnvelopeDirection::ServiceUpper)
            throw InvalidSpec("aggregation needs a service envelope");
        if (tasks == 1)
            return task;
        return Envelope(
            EnvelopeDirection::ServiceUpper, [task](double theta) { return task.sigma(theta); },
            [task, tasks](double theta) { return tasks * task.rho(theta); }, task.domain(), tasks * task.mean(),
            task.iid_increments(), std::to_string(tasks) + " x " + task.label());
    }
}
