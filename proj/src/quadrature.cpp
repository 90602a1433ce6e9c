#include "fjb/quadrature.hpp"

#include "fjb/error.hpp"

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include <cmath>
#include <string>

namespace fjb
{
    namespace
    {
        constexpr double kTruncation = 1e-14;
        constexpr double kAbsTolerance = 1e-12;
        constexpr double kMaxSpan = 1e9;
        constexpr double kRelTolerance = 1e-12;
        constexpr double kAcceptRelative = 1e-10;

        double segment(const std::function<double(double)>& f, double a, double b)
        {
            using boost::math::quadrature::gauss_kronrod;
            double error = 0.0;
            double l1 = 0.0;
            const double value = gauss_kronrod<double, 15>::integrate(f, a, b, 15, kRelTolerance, &error, &l1);
            if (!std::isfinite(value) || error > std::max(kAbsTolerance, kAcceptRelative * l1))
            {
                throw DomainError("quadrature did not converge on [" + std::to_string(a) + ", " +
                                  std::to_string(b) + "]");
            }
            return value;
        }
    }

    double integrate_decaying(const std::function<double(double)>& integrand, double scale, double support_end)
    {
        if (!(scale > 0.0))
        {
            throw InvalidSpec("quadrature scale must be positive");
        }
        double total = 0.0;
        double a = 0.0;
        double b = scale;
        while (true)
        {
            const bool last = b >= support_end;
            const double end = last ? support_end : b;
            total += segment(integrand, a, end);
            if (last)
            {
                return total;
            }
            const double tail = integrand(end);
            if (!std::isfinite(tail))
            {
                throw DomainError("integrand overflow at x = " + std::to_string(end));
            }
            if (std::abs(tail) < kTruncation)
            {
                return total;
            }
            if (end > kMaxSpan * scale)
            {
                throw DomainError("integrand does not decay; theta at or above the MGF abscissa");
            }
            a = end;
            b = 2.0 * end;
        }
    }

    double mgf_from_survival(const std::function<double(double)>& survival, double theta, double scale,
                             double support_end)
    {
        if (theta == 0.0)
        {
            return 1.0;
        }
        auto integrand = [&](double x) {
            const double s = survival(x);
            return s == 0.0 ? 0.0 : std::exp(theta * x) * s;
        };
        return 1.0 + theta * integrate_decaying(integrand, scale, support_end);
    }
}
