#include "rumorsis/polynomial.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>

namespace rumorsis::poly {

double evaluate(std::span<const double> coeffs, double t)
{
    double acc = 0.0;
    for (double c : coeffs)
        acc = acc * t + c;
    return acc;
}

int sign_changes(std::span<const double> coeffs)
{
    int changes = 0;
    int last = 0;
    for (double c : coeffs) {
        const int s = (c > 0.0) - (c < 0.0);
        if (s == 0)
            continue;
        if (last != 0 && s != last)
            ++changes;
        last = s;
    }
    return changes;
}

namespace {

std::vector<double> real_roots_quadratic(double a, double b, double c)
{
    if (a == 0.0) {
        if (b == 0.0)
            return {};
        return {-c / b};
    }
    const double disc = b * b - 4.0 * a * c;
    if (disc < 0.0)
        return {};
    if (disc == 0.0)
        return {-b / (2.0 * a)};
    // Avoids cancellation between -b and sqrt(disc).
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    std::vector<double> roots{q / a};
    if (q != 0.0)
        roots.push_back(c / q);
    else
        roots.push_back(0.0);
    std::sort(roots.begin(), roots.end());
    return roots;
}

// A few Newton steps, kept only while they shrink the residual.
double polish(const std::array<double, 4>& c, double t)
{
    double ft = std::abs(evaluate(c, t));
    for (int it = 0; it < 4 && ft > 0.0; ++it) {
        const double d = (3.0 * c[0] * t + 2.0 * c[1]) * t + c[2];
        if (d == 0.0)
            break;
        const double next = t - evaluate(c, t) / d;
        const double fn = std::abs(evaluate(c, next));
        if (!(fn < ft))
            break;
        t = next;
        ft = fn;
    }
    return t;
}

} // namespace

std::vector<double> real_roots_cubic(double c3, double c2, double c1, double c0)
{
    if (c3 == 0.0)
        return real_roots_quadratic(c2, c1, c0);

    const double a = c2 / c3;
    const double b = c1 / c3;
    const double c = c0 / c3;

    // t = y - a/3 gives y^3 + p y + q = 0.
    const double shift = a / 3.0;
    const double p = b - a * a / 3.0;
    const double q = 2.0 * a * a * a / 27.0 - a * b / 3.0 + c;
    const double disc = 0.25 * q * q + p * p * p / 27.0;

    std::vector<double> roots;
    if (disc > 0.0) {
        const double u = std::cbrt(-0.5 * q - std::copysign(std::sqrt(disc), q));
        const double y = u != 0.0 ? u - p / (3.0 * u) : 0.0;
        roots.push_back(y - shift);
    } else if (p == 0.0) {
        roots.push_back(-shift);
    } else {
        const double r = std::sqrt(-p / 3.0);
        const double arg = std::clamp(-0.5 * q / (r * r * r), -1.0, 1.0);
        const double phi = std::acos(arg);
        for (int k = 0; k < 3; ++k)
            roots.push_back(2.0 * r * std::cos((phi - 2.0 * std::numbers::pi * k) / 3.0) - shift);
    }

    const std::array<double, 4> coeffs{c3, c2, c1, c0};
    for (double& t : roots)
        t = polish(coeffs, t);
    std::sort(roots.begin(), roots.end());

    std::vector<double> unique;
    for (double t : roots) {
        if (unique.empty() || std::abs(t - unique.back()) > 1e-12 * std::max(1.0, std::abs(t)))
            unique.push_back(t);
    }
    return unique;
}

} // namespace rumorsis::poly
