#include "vfplan/quadrature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <vector>

#include "vfplan/errors.hpp"

namespace vfplan {

namespace {

// 15-point Kronrod abscissae (positive half) and weights, with the embedded
// 7-point Gauss weights on the odd-indexed nodes.
constexpr double kXgk[8] = {
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144838258730,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000};

constexpr double kWgk[8] = {
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714};

constexpr double kWg[4] = {
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327};

struct Segment {
    double a, b;
    double value;
    double error;
    bool operator<(const Segment& o) const { return error < o.error; }
};

Segment gk15(const std::function<double(double)>& f, double a, double b) {
    const double c = 0.5 * (a + b);
    const double hw = 0.5 * (b - a);
    const double fc = f(c);
    double resk = kWgk[7] * fc;
    double resg = kWg[3] * fc;
    for (int j = 0; j < 7; ++j) {
        const double x = hw * kXgk[j];
        const double f1 = f(c - x);
        const double f2 = f(c + x);
        resk += kWgk[j] * (f1 + f2);
        if (j % 2 == 1) resg += kWg[j / 2] * (f1 + f2);
    }
    Segment s;
    s.a = a;
    s.b = b;
    s.value = resk * hw;
    s.error = std::abs((resk - resg) * hw);
    return s;
}

}  // namespace

QuadResult integrate_adaptive(const std::function<double(double)>& f, double a, double b,
                              double abs_tol, double rel_tol, int max_intervals) {
    QuadResult out;
    if (a == b) return out;

    std::priority_queue<Segment> heap;
    Segment s0 = gk15(f, a, b);
    out.evaluations = 15;
    double total = s0.value;
    double err = s0.error;
    heap.push(s0);

    const double eps = std::numeric_limits<double>::epsilon();
    double parked_value = 0.0;
    double parked_error = 0.0;
    int n = 1;
    while (err > std::max(abs_tol, rel_tol * std::abs(total))) {
        if (n >= max_intervals) {
            throw QuadratureError("adaptive quadrature: interval budget exhausted", err + parked_error);
        }
        if (heap.empty()) break;
        Segment worst = heap.top();
        heap.pop();
        const double mid = 0.5 * (worst.a + worst.b);
        if (worst.b - worst.a < eps * (std::abs(worst.a) + std::abs(worst.b)) || mid <= worst.a ||
            mid >= worst.b) {
            // cannot subdivide further; accept this segment as-is
            err -= worst.error;
            parked_value += worst.value;
            parked_error += worst.error;
            continue;
        }
        Segment left = gk15(f, worst.a, mid);
        Segment right = gk15(f, mid, worst.b);
        out.evaluations += 30;
        total += left.value + right.value - worst.value;
        err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        ++n;
    }

    double sum = parked_value;
    double esum = parked_error;
    while (!heap.empty()) {
        sum += heap.top().value;
        esum += heap.top().error;
        heap.pop();
    }
    out.value = sum;
    out.error_estimate = esum;
    return out;
}

}  // namespace vfplan
