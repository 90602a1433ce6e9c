#pragma once

#include <functional>
#include <limits>

namespace fjb
{
    /// Integral over [0, inf) of a non-negative integrand that eventually decays.
    ///
    /// The range is cut into doubling segments starting at `scale`; each
    /// segment is integrated by adaptive Gauss-Kronrod (15 points). Integration
    /// stops at the first segment end x* with integrand(x*) < 1e-14, or at
    /// `support_end` when the integrand vanishes beyond it. Throws DomainError if
    /// the integrand has not decayed by 1e9 * scale.
    double integrate_decaying(const std::function<double(double)>& integrand, double scale,
                              double support_end = std::numeric_limits<double>::infinity());

    /// E[e^{theta Y}] = 1 + theta * int_0^inf e^{theta x} P[Y > x] dx for Y >= 0.
    double mgf_from_survival(const std::function<double(double)>& survival, double theta, double scale,
                             double support_end = std::numeric_limits<double>::infinity());
}
