#pragma once

#include <functional>
#include <vector>

namespace impactres {

/// Gauss-Legendre rule on [-1, 1], nodes and weights computed once by
/// Newton iteration on the Legendre polynomial.
struct GaussLegendre {
    std::vector<double> nodes;
    std::vector<double> weights;

    explicit GaussLegendre(int order);

    /// 64-point rule shared by all quadrature in the library.
    static const GaussLegendre& order64();

    double integrate(const std::function<double(double)>& f, double a, double b) const;
};

/// Integrate f over [a, b] split at the interior breakpoints (each piece is
/// assumed analytic; breakpoints typically sit at kappa_psi jump times).
double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breakpoints);

}  // namespace impactres
