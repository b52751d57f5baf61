#include "impactres/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "impactres/errors.hpp"

namespace impactres {

GaussLegendre::GaussLegendre(int order) {
    nodes.resize(order);
    weights.resize(order);
    const int m = (order + 1) / 2;
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_order(x) = 0.
        double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int k = 0; k < order; ++k) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * k + 1.0) * x * p1 - k * p2) / (k + 1.0);
            }
            pp = order * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        nodes[i] = -x;
        nodes[order - 1 - i] = x;
        weights[i] = 2.0 / ((1.0 - x * x) * pp * pp);
        weights[order - 1 - i] = weights[i];
    }
}

const GaussLegendre& GaussLegendre::order64() {
    static const GaussLegendre rule(64);
    return rule;
}

double GaussLegendre::integrate(const std::function<double(double)>& f, double a,
                                double b) const {
    const double mid = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    double sum = 0.0;
    for (std::size_t i = 0; i < nodes.size(); ++i)
        sum += weights[i] * f(mid + half * nodes[i]);
    return half * sum;
}

double integrate_piecewise(const std::function<double(double)>& f, double a, double b,
                           const std::vector<double>& breakpoints) {
    if (!(b > a)) throw NumericalError("integrate_piecewise: empty interval");
    std::vector<double> cuts{a};
    for (double c : breakpoints)
        if (c > a + 1e-14 && c < b - 1e-14) cuts.push_back(c);
    cuts.push_back(b);
    std::sort(cuts.begin(), cuts.end());

    const auto& rule = GaussLegendre::order64();
    double total = 0.0;
    for (std::size_t i = 0; i + 1 < cuts.size(); ++i)
        total += rule.integrate(f, cuts[i], cuts[i + 1]);
    if (!std::isfinite(total))
        throw NumericalError("integrate_piecewise: non-finite quadrature result");
    return total;
}

}  // namespace impactres
