#pragma once

#include <functional>
#include <vector>

namespace hseom {

struct GaussLegendreRule {
    std::vector<double> nodes;   // on (a, b)
    std::vector<double> weights;
};

// n-point Gauss-Legendre rule mapped to [a, b].
GaussLegendreRule gauss_legendre(int n, double a, double b);

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    bool converged = true;
};

// Adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
QuadratureResult integrate_adaptive(const std::function<double(double)>& f,
                                    double a, double b,
                                    double abs_tol = 1e-12,
                                    double rel_tol = 1e-12,
                                    int max_subdivisions = 2000);

} // namespace hseom
