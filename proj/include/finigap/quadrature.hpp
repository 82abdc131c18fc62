// Quadrature kit: Gauss-Legendre panels on straight segments, adaptive
// bisection, Chebyshev-weighted interval rules for inverse-square-root
// endpoint singularities, periodic trapezoid on the circle, and cosine-series
// fitting with exact partial integrals.

#ifndef FINIGAP_QUADRATURE_HPP
#define FINIGAP_QUADRATURE_HPP

#include <cmath>
#include <functional>
#include <mutex>
#include <map>
#include <vector>

#include "finigap/types.hpp"

namespace finigap {
namespace quad {

struct GLRule {
    std::vector<Real> x; // nodes on [-1, 1]
    std::vector<Real> w;
};

/// Gauss-Legendre nodes/weights by Newton iteration on P_n.
inline const GLRule &gauss_legendre(int n) {
    static std::mutex mtx;
    static std::map<int, GLRule> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto it = cache.find(n);
    if (it != cache.end()) return it->second;
    GLRule r;
    r.x.resize(n);
    r.w.resize(n);
    for (int i = 0; i < n; ++i) {
        Real x = std::cos(pi * (i + 0.75) / (n + 0.5));
        for (int iter = 0; iter < 100; ++iter) {
            Real p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            Real dp = n * (x * p1 - p0) / (x * x - 1.0);
            Real dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-16) break;
        }
        Real p0 = 1.0, p1 = x;
        for (int k = 2; k <= n; ++k) {
            Real p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
            p0 = p1;
            p1 = p2;
        }
        Real dp = n * (x * p1 - p0) / (x * x - 1.0);
        r.x[i] = x;
        r.w[i] = 2.0 / ((1.0 - x * x) * dp * dp);
    }
    return cache.emplace(n, std::move(r)).first->second;
}

/// \int_a^b f(t) dt along the straight segment between complex endpoints.
template <typename F>
Complex gl_segment(F &&f, Complex a, Complex b, int n = 24) {
    const GLRule &r = gauss_legendre(n);
    Complex mid = 0.5 * (a + b), half = 0.5 * (b - a);
    Complex s = 0;
    for (int i = 0; i < n; ++i) s += r.w[i] * f(mid + half * r.x[i]);
    return s * half;
}

/// Adaptive bisection on a straight segment.
template <typename F>
Complex gl_adaptive(F &&f, Complex a, Complex b, Real tol, int depth = 0, int max_depth = 28) {
    Complex whole = gl_segment(f, a, b, 16);
    Complex mid = 0.5 * (a + b);
    Complex two = gl_segment(f, a, mid, 16) + gl_segment(f, mid, b, 16);
    if (std::abs(whole - two) <= tol * std::max<Real>(1.0, std::abs(two)) || depth >= max_depth) {
        if (depth >= max_depth) throw QuadratureFailure("adaptive segment did not converge");
        return two;
    }
    return gl_adaptive(f, a, mid, 0.5 * tol, depth + 1, max_depth) +
           gl_adaptive(f, mid, b, 0.5 * tol, depth + 1, max_depth);
}

/// \int_a^b g(x) / sqrt((x-a)(b-x)) dx via the substitution x = m + h cos(theta)
/// and the midpoint rule in theta, doubling until converged.
template <typename F>
Complex chebyshev_interval(F &&g, Real a, Real b, Real tol = 1e-13, int n0 = 16, int nmax = 1 << 14) {
    Real m = 0.5 * (a + b), h = 0.5 * (b - a);
    Complex prev = 0;
    for (int n = n0; n <= nmax; n *= 2) {
        Complex s = 0;
        for (int k = 0; k < n; ++k) {
            Real th = pi * (k + 0.5) / n;
            s += g(m + h * std::cos(th));
        }
        s *= pi / n;
        if (n > n0 && std::abs(s - prev) <= tol * std::max<Real>(1.0, std::abs(s))) return s;
        prev = s;
    }
    throw QuadratureFailure("chebyshev_interval did not converge");
}

/// Periodic trapezoid (midpoint-offset grid) of f over [0, 2*pi).
template <typename F>
Complex trapezoid_circle(F &&f, int n) {
    Complex s = 0;
    for (int k = 0; k < n; ++k) s += f(2.0 * pi * (k + 0.5) / n);
    return s * (2.0 * pi / n);
}

/// Cosine series c[m] with f(theta) ~ sum_m c[m] cos(m theta) on [0, pi],
/// fitted from samples until the tail drops below tol.
class CosSeries {
  public:
    CosSeries() = default;

    template <typename F>
    static CosSeries fit(F &&f, Real tol = 1e-13, int n0 = 32, int nmax = 1 << 13) {
        for (int n = n0; n <= nmax; n *= 2) {
            // midpoint samples of the even periodic extension
            std::vector<Real> fv(n);
            for (int k = 0; k < n; ++k) fv[k] = f(pi * (k + 0.5) / n);
            CosSeries cs;
            cs.c_.assign(n, 0.0);
            for (int m = 0; m < n; ++m) {
                Real s = 0;
                for (int k = 0; k < n; ++k) s += fv[k] * std::cos(m * pi * (k + 0.5) / n);
                cs.c_[m] = (m == 0 ? 1.0 : 2.0) * s / n;
            }
            Real scale = std::abs(cs.c_[0]) + 1e-300;
            for (const Real v : cs.c_) scale = std::max(scale, std::abs(v));
            Real tail = 0;
            for (int m = n - n / 8; m < n; ++m) tail = std::max(tail, std::abs(cs.c_[m]));
            if (tail <= tol * scale) {
                while (cs.c_.size() > 4 && std::abs(cs.c_.back()) <= 0.1 * tol * scale) cs.c_.pop_back();
                return cs;
            }
        }
        throw QuadratureFailure("CosSeries::fit did not converge");
    }

    Real eval(Real theta) const {
        Real s = 0;
        for (size_t m = 0; m < c_.size(); ++m) s += c_[m] * std::cos(Real(m) * theta);
        return s;
    }

    /// \int_theta^pi f(t) dt, exact termwise.
    Real integral_to_pi(Real theta) const {
        Real s = c_.empty() ? 0.0 : c_[0] * (pi - theta);
        for (size_t m = 1; m < c_.size(); ++m)
            s -= c_[m] * std::sin(Real(m) * theta) / Real(m);
        return s;
    }

    /// \int_0^pi f
    Real total() const { return c_.empty() ? 0.0 : c_[0] * pi; }

    const std::vector<Real> &coeffs() const { return c_; }

  private:
    std::vector<Real> c_;
};

} // namespace quad
} // namespace finigap

#endif
