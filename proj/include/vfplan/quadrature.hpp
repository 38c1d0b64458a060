#pragma once

#include <functional>

namespace vfplan {

struct QuadResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int evaluations = 0;
};

/// Globally adaptive Gauss-Kronrod (G7, K15) integration of f over [a, b].
/// Subdivides the interval with the largest error estimate until the total
/// estimate drops below max(abs_tol, rel_tol * |integral|).
/// Throws QuadratureError (carrying the achieved tolerance) if the interval
/// budget is exhausted first.
QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, double rel_tol, int max_intervals = 4000);

}  // namespace vfplan
