#include "gam/gauss_hermite.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gam {

namespace {

constexpr int scale_bits = 500;

struct Eval {
    double p;     // orthonormal Hermite polynomial h_n(z), times 2^(-scale_bits * scale)
    double dp;    // its derivative, same scaling
    int scale;
};

// Three-term recurrence for the polynomials orthonormal under exp(-z^2).
Eval hermite(int n, double z) {
    double p1 = 1.0 / std::pow(std::numbers::pi, 0.25), p2 = 0.0;
    int scale = 0;
    for (int j = 1; j <= n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
        if (std::abs(p1) > 0x1p+500) {
            p1 = std::ldexp(p1, -scale_bits);
            p2 = std::ldexp(p2, -scale_bits);
            ++scale;
        }
    }
    return {p1, std::sqrt(2.0 * n) * p2, scale};
}

// Newton from the bracket midpoint, falling back to bisection when a step leaves it.
double polish(int n, double a, double b) {
    double fa = hermite(n, a).p;
    double z = 0.5 * (a + b);
    for (int it = 0; it < 200; ++it) {
        const Eval e = hermite(n, z);
        if (e.p == 0.0) return z;
        if ((e.p < 0) == (fa < 0)) {
            a = z;
            fa = e.p;
        } else {
            b = z;
        }
        double next = z - e.p / e.dp;
        if (!(next > a && next < b)) next = 0.5 * (a + b);
        if (std::abs(next - z) <= 1e-15 * std::max(1.0, std::abs(z)) || b - a <= 4e-16 * std::abs(z)) return next;
        z = next;
    }
    throw std::runtime_error("Gauss-Hermite root iteration did not converge");
}

} // namespace

GaussHermiteRule gauss_hermite(int order) {
    if (order < 1) throw std::domain_error("Gauss-Hermite order must be >= 1, got " + std::to_string(order));
    const int n = order;

    // All roots lie in (-sqrt(2n+1), sqrt(2n+1)) and no two are closer than
    // about pi/sqrt(2n+1), so a scan at an eighth of that spacing brackets each.
    const double edge = std::sqrt(2.0 * n + 1.0);
    const double step = std::numbers::pi / edge / 8.0;
    std::vector<double> positive;
    double a = n % 2 ? step / 2 : 0.0;
    double fa = hermite(n, a).p;
    while (static_cast<int>(positive.size()) < n / 2 && a < edge + 1.0) {
        const double b = a + step;
        const double fb = hermite(n, b).p;
        if ((fa < 0) != (fb < 0)) positive.push_back(polish(n, a, b));
        a = b;
        fa = fb;
    }
    if (static_cast<int>(positive.size()) != n / 2) throw std::runtime_error("Gauss-Hermite root scan lost a root");

    GaussHermiteRule rule;
    auto weight = [n](double z) {
        const Eval e = hermite(n, z);
        return std::ldexp(2.0 / (e.dp * e.dp), -2 * scale_bits * e.scale);
    };
    for (auto it = positive.rbegin(); it != positive.rend(); ++it) {
        rule.nodes.push_back(-*it);
        rule.weights.push_back(weight(*it));
    }
    if (n % 2) {
        rule.nodes.push_back(0.0);
        rule.weights.push_back(weight(0.0));
    }
    for (double z : positive) {
        rule.nodes.push_back(z);
        rule.weights.push_back(weight(z));
    }
    return rule;
}

} // namespace gam
