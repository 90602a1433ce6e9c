#include "fjb/distribution.hpp"

#include "fjb/error.hpp"
#include "fjb/quadrature.hpp"

#include <boost/math/special_functions/gamma.hpp>

#include <charconv>
#include <cmath>
#include <limits>
#include <sstream>
#include <vector>

namespace fjb
{
    namespace
    {
        constexpr double kInf = std::numeric_limits<double>::infinity();

        template <class... Ts>
        struct Overloaded : Ts...
        {
            using Ts::operator()...;
        };
        template <class... Ts>
        Overloaded(Ts...) -> Overloaded<Ts...>;

        bool positive(double v) { return std::isfinite(v) && v > 0.0; }

        void validate(const Distribution::Params& p)
        {
            std::visit(Overloaded{
                           [](const Deterministic& d) {
                               if (!positive(d.value))
                                   throw InvalidSpec("deterministic value must be positive");
                           },
                           [](const Exponential& d) {
                               if (!positive(d.rate))
                                   throw InvalidSpec("exponential rate must be positive");
                           },
                           [](const Erlang& d) {
                               if (d.shape < 1 || !positive(d.rate))
                                   throw InvalidSpec("erlang needs shape >= 1 and positive rate");
                           },
                           [](const Weibull& d) {
                               if (!positive(d.shape) || !positive(d.scale))
                                   throw InvalidSpec("weibull shape and scale must be positive");
                           },
                           [](const Uniform& d) {
                               if (!std::isfinite(d.lo) || !std::isfinite(d.hi) || d.lo < 0.0 || !(d.lo < d.hi))
                                   throw InvalidSpec("uniform requires 0 <= lo < hi");
                           },
                       },
                       p);
        }

        double exp_log_mgf(double rate, double theta)
        {
            if (!(theta < rate))
            {
                throw DomainError("theta = " + std::to_string(theta) + " outside MGF domain (rate " +
                                  std::to_string(rate) + ")");
            }
            return -std::log1p(-theta / rate);
        }

        double support_end(const Distribution& d)
        {
            if (const auto* u = std::get_if<Uniform>(&d.params()))
                return u->hi;
            if (const auto* c = std::get_if<Deterministic>(&d.params()))
                return c->value;
            return kInf;
        }

        void check_heavy_tail(const Distribution& d, double theta)
        {
            if (theta > 0.0 && !(theta < d.mgf_abscissa()))
            {
                throw DomainError("theta = " + std::to_string(theta) + " at or above MGF abscissa " +
                                  std::to_string(d.mgf_abscissa()));
            }
        }

        double parse_number(std::string_view s, std::string_view whole)
        {
            double v = 0.0;
            const auto* first = s.data();
            const auto* last = s.data() + s.size();
            auto [ptr, ec] = std::from_chars(first, last, v);
            if (ec != std::errc{} || ptr != last)
            {
                throw InvalidSpec("bad number '" + std::string(s) + "' in distribution '" + std::string(whole) + "'");
            }
            return v;
        }
    }

    Distribution::Distribution(Params params) : params_(params) { validate(params_); }

    double Distribution::mean() const
    {
        return std::visit(Overloaded{
                              [](const Deterministic& d) { return d.value; },
                              [](const Exponential& d) { return 1.0 / d.rate; },
                              [](const Erlang& d) { return d.shape / d.rate; },
                              [](const Weibull& d) { return d.scale * std::tgamma(1.0 + 1.0 / d.shape); },
                              [](const Uniform& d) { return 0.5 * (d.lo + d.hi); },
                          },
                          params_);
    }

    double Distribution::mgf_abscissa() const
    {
        return std::visit(Overloaded{
                              [](const Deterministic&) { return kInf; },
                              [](const Exponential& d) { return d.rate; },
                              [](const Erlang& d) { return d.rate; },
                              [](const Weibull& d) {
                                  if (d.shape > 1.0)
                                      return kInf;
                                  return d.shape == 1.0 ? 1.0 / d.scale : 0.0;
                              },
                              [](const Uniform&) { return kInf; },
                          },
                          params_);
    }

    double Distribution::log_mgf(double theta) const
    {
        if (theta == 0.0)
            return 0.0;
        return std::visit(Overloaded{
                              [&](const Deterministic& d) { return theta * d.value; },
                              [&](const Exponential& d) { return exp_log_mgf(d.rate, theta); },
                              [&](const Erlang& d) { return d.shape * exp_log_mgf(d.rate, theta); },
                              [&](const Weibull& d) {
                                  if (d.shape == 1.0)
                                      return exp_log_mgf(1.0 / d.scale, theta);
                                  check_heavy_tail(*this, theta);
                                  const double m = mgf_from_survival([this](double x) { return survival(x); },
                                                                     theta, d.scale);
                                  return std::log(m);
                              },
                              [&](const Uniform& d) {
                                  const double t = theta * (d.hi - d.lo);
                                  const double log_ratio =
                                      t > 30.0 ? t + std::log1p(-std::exp(-t)) - std::log(t) : std::log(std::expm1(t) / t);
                                  return theta * d.lo + log_ratio;
                              },
                          },
                          params_);
    }

    double Distribution::survival(double x) const
    {
        if (x < 0.0)
            return 1.0;
        return std::visit(Overloaded{
                              [&](const Deterministic& d) { return x < d.value ? 1.0 : 0.0; },
                              [&](const Exponential& d) { return std::exp(-d.rate * x); },
                              [&](const Erlang& d) {
                                  return boost::math::gamma_q(static_cast<double>(d.shape), d.rate * x);
                              },
                              [&](const Weibull& d) { return std::exp(-std::pow(x / d.scale, d.shape)); },
                              [&](const Uniform& d) {
                                  if (x < d.lo)
                                      return 1.0;
                                  if (x >= d.hi)
                                      return 0.0;
                                  return (d.hi - x) / (d.hi - d.lo);
                              },
                          },
                          params_);
    }

    int Distribution::uniforms_per_draw() const
    {
        if (const auto* e = std::get_if<Erlang>(&params_))
            return e->shape;
        if (std::holds_alternative<Deterministic>(params_))
            return 0;
        return 1;
    }

    double Distribution::sample(std::span<const double> u) const
    {
        return std::visit(Overloaded{
                              [&](const Deterministic& d) { return d.value; },
                              [&](const Exponential& d) { return -std::log(1.0 - u[0]) / d.rate; },
                              [&](const Erlang& d) {
                                  double sum = 0.0;
                                  for (int i = 0; i < d.shape; ++i)
                                      sum += -std::log(1.0 - u[static_cast<std::size_t>(i)]);
                                  return sum / d.rate;
                              },
                              [&](const Weibull& d) { return d.scale * std::pow(-std::log1p(-u[0]), 1.0 / d.shape); },
                              [&](const Uniform& d) { return d.lo + u[0] * (d.hi - d.lo); },
                          },
                          params_);
    }

    std::string Distribution::describe() const
    {
        std::ostringstream os;
        os.precision(17);
        std::visit(Overloaded{
                       [&](const Deterministic& d) { os << "det:" << d.value; },
                       [&](const Exponential& d) { os << "exp:" << d.rate; },
                       [&](const Erlang& d) { os << "erlang:" << d.shape << ':' << d.rate; },
                       [&](const Weibull& d) { os << "weibull:" << d.shape << ':' << d.scale; },
                       [&](const Uniform& d) { os << "uniform:" << d.lo << ':' << d.hi; },
                   },
                   params_);
        return os.str();
    }

    Distribution Distribution::scaled(double factor) const
    {
        if (!positive(factor))
            throw InvalidSpec("scale factor must be positive");
        return std::visit(Overloaded{
                              [&](const Deterministic& d) { return Distribution::deterministic(d.value * factor); },
                              [&](const Exponential& d) { return Distribution::exponential(d.rate / factor); },
                              [&](const Erlang& d) { return Distribution::erlang(d.shape, d.rate / factor); },
                              [&](const Weibull& d) { return Distribution::weibull(d.shape, d.scale * factor); },
                              [&](const Uniform& d) { return Distribution::uniform(d.lo * factor, d.hi * factor); },
                          },
                          params_);
    }

    Distribution parse_distribution(std::string_view text)
    {
        std::vector<std::string_view> parts;
        std::size_t start = 0;
        while (true)
        {
            const auto pos = text.find(':', start);
            parts.push_back(text.substr(start, pos == std::string_view::npos ? pos : pos - start));
            if (pos == std::string_view::npos)
                break;
            start = pos + 1;
        }
        const auto kind = parts.front();
        auto arg = [&](std::size_t i) {
            if (i >= parts.size())
                throw InvalidSpec("missing parameter in distribution '" + std::string(text) + "'");
            return parse_number(parts[i], text);
        };
        auto expect = [&](std::size_t n) {
            if (parts.size() != n + 1)
                throw InvalidSpec("distribution '" + std::string(text) + "' expects " + std::to_string(n) +
                                  " parameter(s)");
        };
        if (kind == "det" || kind == "deterministic")
        {
            expect(1);
            return Distribution::deterministic(arg(1));
        }
        if (kind == "exp" || kind == "exponential")
        {
            expect(1);
            return Distribution::exponential(arg(1));
        }
        if (kind == "erlang")
        {
            expect(2);
            const double shape = arg(1);
            if (shape != std::floor(shape))
                throw InvalidSpec("erlang shape must be an integer");
            return Distribution::erlang(static_cast<int>(shape), arg(2));
        }
        if (kind == "weibull")
        {
            expect(2);
            return Distribution::weibull(arg(1), arg(2));
        }
        if (kind == "uniform")
        {
            expect(2);
            return Distribution::uniform(arg(1), arg(2));
        }
        throw InvalidSpec("unknown distribution kind '" + std::string(kind) + "'");
    }

    double log_mgf_of_max(const Distribution& dist, int k, double theta, MgfMethod method)
    {
        if (k < 1)
            throw InvalidSpec("k must be >= 1");
        if (theta == 0.0)
            return 0.0;
        check_heavy_tail(dist, theta);
        if (method == MgfMethod::Auto)
        {
            if (k == 1)
                return dist.log_mgf(theta);
            if (const auto* d = std::get_if<Deterministic>(&dist.params()))
                return theta * d->value;
            if (const auto* e = std::get_if<Exponential>(&dist.params()))
            {
                // max of k iid Exp(mu) is a sum of independent Exp(j mu), j = 1..k
                double sum = 0.0;
                for (int j = 1; j <= k; ++j)
                    sum += exp_log_mgf(j * e->rate, theta);
                return sum;
            }
        }
        auto surv = [&](double x) {
            const double s = dist.survival(x);
            if (s >= 1.0)
                return 1.0;
            return -std::expm1(k * std::log1p(-s));
        };
        return std::log(mgf_from_survival(surv, theta, dist.mean(), support_end(dist)));
    }

    double mgf_abscissa_of_min(const Distribution& dist, int k)
    {
        return std::visit(Overloaded{
                              [&](const Exponential& d) { return k * d.rate; },
                              [&](const Erlang& d) { return k * d.rate; },
                              [&](const Weibull& d) {
                                  if (d.shape == 1.0)
                                      return k / d.scale;
                                  return d.shape > 1.0 ? kInf : 0.0;
                              },
                              [](const auto&) { return kInf; },
                          },
                          dist.params());
    }

    double log_mgf_of_min(const Distribution& dist, int k, double theta, MgfMethod method)
    {
        if (k < 1)
            throw InvalidSpec("k must be >= 1");
        if (theta == 0.0)
            return 0.0;
        if (theta > 0.0 && !(theta < mgf_abscissa_of_min(dist, k)))
        {
            throw DomainError("theta = " + std::to_string(theta) + " at or above MGF abscissa of the minimum");
        }
        if (method == MgfMethod::Auto)
        {
            if (k == 1)
                return dist.log_mgf(theta);
            if (const auto* d = std::get_if<Deterministic>(&dist.params()))
                return theta * d->value;
            if (const auto* e = std::get_if<Exponential>(&dist.params()))
                return exp_log_mgf(k * e->rate, theta);
        }
        auto surv = [&](double x) {
            const double s = dist.survival(x);
            return s <= 0.0 ? 0.0 : std::exp(k * std::log(s));
        };
        return std::log(mgf_from_survival(surv, theta, dist.mean() / k, support_end(dist)));
    }
}
