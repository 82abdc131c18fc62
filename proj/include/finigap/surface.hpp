// Numerics of the hyperelliptic surface: a/b periods and the Riemann matrix,
// the normalized third-kind differential and its gap constants lambda_j, the
// capacity a~ and b~, Abel maps with a fixed path policy, the quasi-momentum
// map w(z) (equilibrium-measure route with an Abelian path cross-check), its
// inverse lambda(w), and the orthogonality weight d_omega on |w| = 1.
//
// Conventions: a_k surrounds gap k, b_j surrounds E_0..E_{2j-1} on the upper
// sheet; cuts lie on the bands. Gap/band integrals use the cos-substitution
// that absorbs the inverse-square-root endpoint singularities.

#ifndef FINIGAP_SURFACE_HPP
#define FINIGAP_SURFACE_HPP

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <optional>
#include <vector>

#include "finigap/curve.hpp"
#include "finigap/quadrature.hpp"
#include "finigap/theta.hpp"
#include "finigap/types.hpp"

namespace finigap {

struct SurfaceOptions {
    Real quad_tol = 1e-13;
    Real theta_tol = 1e-12;
};

struct SlitInfo {
    int gap = 0;        // 1..g
    Real angle = 0;     // pi * M_j, attachment angle of the radial slit
    Real tip_abs = 0;   // |w(lambda_j)|
    Complex tip;        // w(lambda_j) on the upper bank
    Complex attach;     // w(E_{2j-1}) = w(E_{2j}) on the circle
};

class SurfaceData {
  public:
    HyperellipticCurve curve;
    Eigen::MatrixXd C;   // C(r,s) = a_{s+1}-period of z^r dz / R^{1/2}
    Eigen::MatrixXd c;   // c = C^{-1}; row k holds the coefficients of zeta_{k+1}
    Eigen::MatrixXcd tau;
    RiemannTheta theta;
    Eigen::VectorXd lambdas; // lambda_j in gap j (0-based storage)
    Real a_tilde = 0, b_tilde = 0;
    Eigen::VectorXcd xi;         // Riemann constants
    Eigen::VectorXcd A_inf_plus; // Abel map of infinity_+
    std::vector<SlitInfo> slits;

    // diagnostics
    Real mass_err = 0;          // |total equilibrium mass - 1|
    Real a_period_omega_max = 0; // max_j |int_{a_j} omega|

    int genus() const { return curve.genus; }

    // ---- third-kind polynomial -------------------------------------------
    Real Lambda(Real x) const {
        Real p = 1;
        for (int j = 0; j < genus(); ++j) p *= (x - lambdas(j));
        return p;
    }
    Complex Lambda(Complex x) const {
        Complex p = 1;
        for (int j = 0; j < genus(); ++j) p *= (x - lambdas(j));
        return p;
    }

    // ---- equilibrium measure ---------------------------------------------
    /// Mass of band k under the equilibrium measure.
    Real band_mass(int k) const { return band_density_[k].total(); }
    /// M_k = sum of masses of bands below index k (M_0 = 0, M_{g+1} = 1).
    Real cumulative_mass(int k) const { return cum_[static_cast<size_t>(k)]; }

    /// Partial mass of band k from its left edge up to x.
    Real band_partial_mass(int k, Real x) const {
        return band_density_[k].integral_to_pi(band_theta(k, x));
    }

    Real band_theta(int k, Real x) const {
        Real mid = 0.5 * (curve.band_lo(k) + curve.band_hi(k));
        Real hw = 0.5 * (curve.band_hi(k) - curve.band_lo(k));
        Real t = std::clamp((x - mid) / hw, -1.0, 1.0);
        return std::acos(t);
    }

    /// ln|w(x)| for x inside gap j (vanishes at both gap edges).
    Real gap_log_abs_w(int j, Real x) const {
        Real mid = 0.5 * (curve.gap_lo(j) + curve.gap_hi(j));
        Real hw = 0.5 * (curve.gap_hi(j) - curve.gap_lo(j));
        Real t = std::clamp((x - mid) / hw, -1.0, 1.0);
        return gap_logw_[static_cast<size_t>(j - 1)].integral_to_pi(std::acos(t));
    }

    /// ln w on the exterior rays; real for x < E_0, real part for x > E_{2g+1}.
    Real exterior_log_abs_w(Real x) const {
        if (x <= curve.e_min()) {
            Real U = std::sqrt(curve.e_min() - x);
            Real sgn = (genus() % 2 == 0) ? 1.0 : -1.0;
            auto f = [&](Complex u) -> Complex {
                Real uu = u.real();
                Real t = curve.e_min() - uu * uu;
                return Lambda(t) / std::sqrt(curve.abs_prod(t, 0));
            };
            return -2.0 * sgn * dyadic_real(f, U);
        }
        Real U = std::sqrt(x - curve.e_max());
        int last = 2 * genus() + 1;
        auto f = [&](Complex u) -> Complex {
            Real uu = u.real();
            Real t = curve.e_max() + uu * uu;
            return Lambda(t) / std::sqrt(curve.abs_prod(t, last));
        };
        return -2.0 * dyadic_real(f, U);
    }

    // ---- quasi-momentum ----------------------------------------------------
    /// ln w(z); bank selects the limit from above/below for real z on bands
    /// and the slit bank (phase sign) for real z in gaps.
    Complex log_w(Complex z, int bank = +1) const {
        if (z.imag() == 0.0) {
            Real x = z.real();
            if (auto k = curve.band_index(x)) {
                Real phase = pi * (cumulative_mass(*k) + band_partial_mass(*k, x));
                return Complex(0.0, bank * phase);
            }
            int jgap = *curve.gap_index(x);
            if (jgap == 0) return Complex(exterior_log_abs_w(x), 0.0);
            if (jgap == genus() + 1)
                return Complex(exterior_log_abs_w(x), bank * pi * cumulative_mass(genus() + 1));
            return Complex(gap_log_abs_w(jgap, x), bank * pi * cumulative_mass(jgap));
        }
        if (z.imag() < 0) return std::conj(log_w(std::conj(z)));
        if (near_band(z)) return log_w_path(z);
        return log_w_equilibrium(z);
    }

    Complex quasimomentum(Complex z, int bank = +1) const { return std::exp(log_w(z, bank)); }

    /// Path-integral (Abelian) evaluation of ln w, retained as a cross-check.
    Complex quasimomentum_abelian(Complex z) const {
        if (z.imag() < 0) return std::conj(quasimomentum_abelian(std::conj(z)));
        return std::exp(log_w_path(z));
    }

    /// Inverse of the quasi-momentum. Points on a slit need slit_side:
    /// -1 = left half of the gap (below lambda_j), +1 = right half.
    Complex lambda_of_w(Complex w, std::optional<int> slit_side = std::nullopt) const {
        Real aw = std::abs(w);
        if (aw > 1.0 + 1e-10) throw UnsupportedPoint("lambda_of_w: |w| > 1");
        if (std::abs(aw - 1.0) < 1e-12) return band_point_from_phase(std::arg(w));
        if (w.imag() == 0.0 && w.real() > 0.0) return exterior_point(w.real(), /*left=*/true);
        if (w.imag() == 0.0 && w.real() < 0.0) {
            // right exterior unless the total phase pi M_{g+1} deviates from pi
            return exterior_point(-w.real(), /*left=*/false);
        }
        if (auto j = slit_index(w)) {
            if (!slit_side) throw AmbiguousSlit("w lies on a slit; pass slit_side");
            return gap_point(*j, std::log(std::abs(w)), *slit_side);
        }
        return newton_interior(w);
    }

    /// d_omega density against d_phi/(2 pi): prod (lambda-mu_j)/(lambda-lambda_j).
    Real domega_weight(const Eigen::VectorXd &mus, Real lambda) const {
        Real p = 1;
        for (int j = 0; j < genus(); ++j) p *= (lambda - mus(j)) / (lambda - lambdas(j));
        return p;
    }

    // ---- Abel map -----------------------------------------------------------
    /// Abel map of (z, sheet) from p0 = (E_0, 0) with paths kept inside the
    /// half plane of z; hat-normalized (fixed path policy).
    Eigen::VectorXcd abel(const SurfacePoint &p) const {
        if (p.at_infinity) return Real(*p.at_infinity) * A_inf_plus;
        Eigen::VectorXcd v(genus());
        if (p.z.imag() < 0) {
            SurfacePoint q{std::conj(p.z), p.sheet, std::nullopt, p.bank};
            return abel(q).conjugate();
        }
        for (int k = 0; k < genus(); ++k) v(k) = abel_component(p.z, k);
        return Real(p.sheet) * v;
    }

    /// a-cycle loop integral of zeta_{comp+1} around gap j with branch
    /// tracking (cross-check of the period normalization). Orientation
    /// matches the a-period convention C_{jk} = 2 int_gap.
    Complex abel_a_loop(int j, int comp, int nodes = 4096) const {
        Real lo = curve.gap_lo(j), hi = curve.gap_hi(j);
        Real mid = 0.5 * (lo + hi), hw = 0.5 * (hi - lo);
        Real pad = 0.35 * std::min({hw, gap_clearance(j)});
        Real ax = hw + pad, ay = pad;
        Complex sum = 0;
        Real sgn = 1.0;
        Complex prev = sqrt_R(curve, Complex(mid + ax * std::cos(pi / nodes), ay * std::sin(pi / nodes)));
        for (int i = 0; i < nodes; ++i) {
            Real s = -2.0 * pi * (i + 0.5) / nodes; // clockwise in the plane
            Complex t(mid + ax * std::cos(s), ay * std::sin(s));
            if (curve.is_edge(t.real(), 1e-12) && std::abs(t.imag()) < 1e-12)
                throw PathThroughBranchPoint("a-loop node at a branch point");
            Complex r = sqrt_R(curve, t);
            Complex cand = sgn * r;
            if (std::abs(cand - prev) > std::abs(cand + prev)) {
                sgn = -sgn;
                cand = -cand;
            }
            prev = cand;
            Complex dz(ax * std::sin(s), -ay * std::cos(s));
            sum += poly_c(comp, t) / cand * dz * (2.0 * pi / nodes);
        }
        return sum;
    }

    // ---- construction -------------------------------------------------------
    friend SurfaceData make_surface(const HyperellipticCurve &cv, const SurfaceOptions &opt);

  private:
    std::vector<quad::CosSeries> band_density_; // equilibrium density in theta
    std::vector<quad::CosSeries> gap_logw_;     // d(ln|w|) integrand in theta per gap
    std::vector<Real> cum_;                     // cumulative masses, size g+2
    SurfaceOptions opt_;

    // P_k(x): numerator polynomial of zeta_{k+1}
    Complex poly_c(int k, Complex x) const {
        Complex s = 0, xp = 1;
        for (int m = 0; m < genus(); ++m) {
            s += c(k, m) * xp;
            xp *= x;
        }
        return s;
    }

    Real gap_clearance(int j) const {
        Real lo = curve.gap_lo(j), hi = curve.gap_hi(j);
        Real cl = std::min(lo - (j >= 1 ? curve.band_lo(j - 1) : lo - 1.0), curve.band_hi(j) - hi);
        return std::max(cl, 1e-3 * (hi - lo));
    }

    bool near_band(Complex z) const {
        for (int k = 0; k <= genus(); ++k) {
            Real hw = 0.5 * (curve.band_hi(k) - curve.band_lo(k));
            if (z.real() > curve.band_lo(k) - 0.1 * hw && z.real() < curve.band_hi(k) + 0.1 * hw &&
                std::abs(z.imag()) < 0.1 * hw)
                return true;
        }
        return false;
    }

    template <typename F>
    Real dyadic_real(F &&f, Real U) const {
        // integrate f on [0, U] with panels refined toward 0 and doubling length
        Real s = 0;
        Real a = 0, b = std::min<Real>(1.0, U);
        while (a < U) {
            s += quad::gl_adaptive(f, Complex(a, 0), Complex(b, 0), opt_.quad_tol).real();
            a = b;
            b = std::min(U, 2 * b);
        }
        return s;
    }

    Complex omega_integrand(Complex t) const { return Lambda(t) / sqrt_R(curve, t); }

    /// ln w via the third-kind path integral E_0 -> E_0 + iH -> Re z + iH -> z.
    Complex log_w_path(Complex z) const {
        Real H = std::max<Real>(1.0, curve.e_max() - curve.e_min());
        Complex s = rising_leg_omega(H);
        Complex c1(curve.e_min(), H), c2(z.real(), H);
        auto f = [&](Complex t) { return omega_integrand(t); };
        s += quad::gl_adaptive(f, c1, c2, opt_.quad_tol);
        s += quad::gl_adaptive(f, c2, z, opt_.quad_tol);
        return s;
    }

    /// int_{E_0}^{E_0 + iH} omega with the branch-point substitution t = E_0 + i s^2.
    Complex rising_leg_omega(Real H) const {
        const Complex root_i = std::polar<Real>(1.0, pi / 4);
        auto f = [&](Complex sv) -> Complex {
            Real s = sv.real();
            Complex t = Complex(curve.e_min(), s * s);
            Complex S = -1;
            for (size_t j = 1; j < curve.edges.size(); ++j) S *= std::sqrt(t - curve.edges[j]);
            return 2.0 * root_i * Lambda(t) / S;
        };
        return dyadic_complex(f, std::sqrt(H));
    }

    template <typename F>
    Complex dyadic_complex(F &&f, Real U) const {
        Complex s = 0;
        Real a = 0, b = std::min<Real>(1.0, U);
        while (a < U) {
            s += quad::gl_adaptive(f, Complex(a, 0), Complex(b, 0), opt_.quad_tol);
            a = b;
            b = std::min(U, 2 * b);
        }
        return s;
    }

    Complex log_w_equilibrium(Complex z) const {
        Complex s = std::log(a_tilde);
        for (int k = 0; k <= genus(); ++k) {
            Real mid = 0.5 * (curve.band_lo(k) + curve.band_hi(k));
            Real hw = 0.5 * (curve.band_hi(k) - curve.band_lo(k));
            const auto &d = band_density_[static_cast<size_t>(k)];
            Complex prev = 0;
            for (int n = 64; n <= (1 << 13); n *= 2) {
                Complex acc = 0;
                for (int i = 0; i < n; ++i) {
                    Real th = pi * (i + 0.5) / n;
                    Real lam = mid + hw * std::cos(th);
                    acc += std::log(lam - z) * d.eval(th);
                }
                acc *= pi / n;
                if (n > 64 && std::abs(acc - prev) < 1e-13 * std::max<Real>(1.0, std::abs(acc))) {
                    prev = acc;
                    break;
                }
                prev = acc;
            }
            s -= prev;
        }
        return s;
    }

    Complex abel_component(Complex z, int comp) const {
        // leg 1: E_0 -> E_0 + i h0 with t = E_0 + i s^2
        const Complex root_i = std::polar<Real>(1.0, pi / 4);
        Real H = std::max<Real>(1.0, curve.e_max() - curve.e_min());
        auto f1 = [&](Complex sv) -> Complex {
            Real s = sv.real();
            Complex t = Complex(curve.e_min(), s * s);
            Complex S = -1;
            for (size_t j = 1; j < curve.edges.size(); ++j) S *= std::sqrt(t - curve.edges[j]);
            return 2.0 * root_i * poly_c(comp, t) / S;
        };
        auto zf = [&](Complex t) { return poly_c(comp, t) / sqrt_R(curve, t); };
        Complex s = quad::gl_adaptive(f1, Complex(0, 0), Complex(std::sqrt(H), 0), opt_.quad_tol);
        Complex c1(curve.e_min(), H), c2(z.real(), H);
        s += quad::gl_adaptive(zf, c1, c2, opt_.quad_tol);
        s += quad::gl_adaptive(zf, c2, z, opt_.quad_tol);
        return s;
    }

    Eigen::VectorXcd abel_infinity_plus() const {
        Eigen::VectorXcd v(genus());
        const Complex root_i = std::polar<Real>(1.0, pi / 4);
        for (int comp = 0; comp < genus(); ++comp) {
            auto f1 = [&](Complex sv) -> Complex {
                Real s = sv.real();
                Complex t = Complex(curve.e_min(), s * s);
                Complex S = -1;
                for (size_t j = 1; j < curve.edges.size(); ++j) S *= std::sqrt(t - curve.edges[j]);
                return 2.0 * root_i * poly_c(comp, t) / S;
            };
            Complex s = quad::gl_adaptive(f1, Complex(0, 0), Complex(1, 0), opt_.quad_tol);
            // t = E_0 + i/u, u from 1 down to 0; dt = -i/u^2 du
            auto f2 = [&](Complex uv) -> Complex {
                Real u = uv.real();
                Complex t = Complex(curve.e_min(), 1.0 / u);
                return poly_c(comp, t) / sqrt_R(curve, t) * Complex(0, 1) / (u * u);
            };
            s += quad::gl_adaptive(f2, Complex(0, 0), Complex(1, 0), opt_.quad_tol);
            v(comp) = s;
        }
        return v;
    }

    // ---- inverse-map helpers ----------------------------------------------
    Complex band_point_from_phase(Real phi) const {
        int bank = (phi >= 0) ? +1 : -1;
        Real M = std::abs(phi) / pi; // in [0, 1]
        M = std::clamp(M, 0.0, cumulative_mass(genus() + 1));
        int k = 0;
        while (k < genus() && M > cumulative_mass(k + 1)) ++k;
        Real target = M - cumulative_mass(k);
        const auto &d = band_density_[static_cast<size_t>(k)];
        // solve d.integral_to_pi(theta) = target, decreasing in theta
        Real a = 0, b = pi;
        for (int it = 0; it < 200; ++it) {
            Real m = 0.5 * (a + b);
            if (d.integral_to_pi(m) > target)
                a = m;
            else
                b = m;
        }
        Real th = 0.5 * (a + b);
        Real mid = 0.5 * (curve.band_lo(k) + curve.band_hi(k));
        Real hw = 0.5 * (curve.band_hi(k) - curve.band_lo(k));
        (void)bank;
        return Complex(mid + hw * std::cos(th), 0.0);
    }

    Complex exterior_point(Real aw, bool left) const {
        Real target = std::log(aw); // < 0
        Real e = left ? curve.e_min() : curve.e_max();
        Real span = curve.e_max() - curve.e_min();
        Real lo = 0, hi = span; // distance from the edge
        while (exterior_log_abs_w(left ? e - hi : e + hi) > target) {
            hi *= 2;
            if (hi > 1e12) throw NoConvergence("exterior inversion bracket");
        }
        for (int it = 0; it < 200; ++it) {
            Real m = 0.5 * (lo + hi);
            Real v = exterior_log_abs_w(left ? e - m : e + m);
            if (v > target)
                lo = m;
            else
                hi = m;
        }
        Real m = 0.5 * (lo + hi);
        return Complex(left ? e - m : e + m, 0.0);
    }

    std::optional<int> slit_index(Complex w) const {
        Real phi = std::arg(w);
        for (int j = 1; j <= genus(); ++j) {
            Real ang = pi * cumulative_mass(j);
            if (std::abs(std::abs(phi) - ang) < 1e-9 && std::abs(w) >= slits[static_cast<size_t>(j - 1)].tip_abs - 1e-12)
                return j;
        }
        return std::nullopt;
    }

    Complex gap_point(int j, Real target_log, int side) const {
        Real lo = curve.gap_lo(j), hi = curve.gap_hi(j);
        Real lam = lambdas(j - 1);
        Real a = (side < 0) ? lo : lam;
        Real b = (side < 0) ? lam : hi;
        for (int it = 0; it < 200; ++it) {
            Real m = 0.5 * (a + b);
            Real v = gap_log_abs_w(j, m);
            bool go_right = (side < 0) ? (v > target_log) : (v < target_log);
            if (go_right)
                a = m;
            else
                b = m;
        }
        return Complex(0.5 * (a + b), 0.0);
    }

    Complex newton_interior(Complex w) const {
        Complex target = std::log(w);
        Complex z;
        if (std::abs(w) < 0.4) {
            z = -a_tilde / w - b_tilde;
        } else {
            Real phi = std::arg(w);
            Complex zb = band_point_from_phase(phi);
            Real scale = 0.5 * (curve.e_max() - curve.e_min());
            z = zb + Complex(0.0, (phi >= 0 ? 1.0 : -1.0) * (1.0 - std::abs(w)) * scale);
            if (z.imag() == 0.0) z += Complex(0, 1e-8);
        }
        for (int it = 0; it < 80; ++it) {
            Complex F = log_w(z) - target;
            if (std::abs(F) < 1e-14) return z;
            Complex dz = F * sqrt_R(curve, z) / Lambda(z);
            if (z.imag() > 0 && z.imag() - dz.imag() < 0) dz = dz * Real(0.5);
            z -= dz;
            if (z.imag() == 0.0) z += Complex(0, 1e-12);
            if (!std::isfinite(z.real()) || !std::isfinite(z.imag()))
                throw NoConvergence("lambda_of_w Newton diverged");
        }
        if (std::abs(log_w(z) - target) < 1e-11) return z;
        throw NoConvergence("lambda_of_w Newton did not converge");
    }
};

inline SurfaceData make_surface(const HyperellipticCurve &cv, const SurfaceOptions &opt = {}) {
    SurfaceData S;
    S.curve = cv;
    S.opt_ = opt;
    const int g = cv.genus;

    // gap integrals G[j][m] = int_{gap j} x^m / R^{1/2} dx, j = 1..g, m = 0..g
    auto gap_G = [&](int j, int m) -> Real {
        Real lo = cv.gap_lo(j), hi = cv.gap_hi(j);
        Real sgn = ((g - j) % 2 == 0) ? 1.0 : -1.0;
        auto f = [&](Real x) -> Complex {
            return std::pow(x, m) / std::sqrt(cv.abs_prod(x, 2 * j - 1, 2 * j));
        };
        return sgn * quad::chebyshev_interval(f, lo, hi, opt.quad_tol).real();
    };

    S.C.resize(g, g);
    Eigen::MatrixXd G(std::max(g, 1), g + 1);
    for (int j = 1; j <= g; ++j)
        for (int m = 0; m <= g; ++m) G(j - 1, m) = gap_G(j, m);
    for (int r = 0; r < g; ++r)
        for (int s = 0; s < g; ++s) S.C(r, s) = 2.0 * G(s, r);

    if (g > 0) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(S.C);
        if (!lu.isInvertible()) throw SingularCurve("a-period matrix numerically singular");
        S.c = lu.inverse();
    } else {
        S.C.resize(0, 0);
        S.c.resize(0, 0);
    }

    // third kind: solve for the monic Lambda with vanishing a-periods
    S.lambdas.resize(g);
    if (g > 0) {
        Eigen::MatrixXd A(g, g);
        Eigen::VectorXd rhs(g);
        for (int j = 0; j < g; ++j) {
            for (int m = 0; m < g; ++m) A(j, m) = G(j, m);
            rhs(j) = -G(j, g);
        }
        Eigen::VectorXd q = A.fullPivLu().solve(rhs);
        auto Lam = [&](Real x) {
            Real p = std::pow(x, g);
            for (int m = 0; m < g; ++m) p += q(m) * std::pow(x, m);
            return p;
        };
        for (int j = 1; j <= g; ++j) {
            Real a = cv.gap_lo(j) + 1e-14, b = cv.gap_hi(j) - 1e-14;
            Real fa = Lam(a), fb = Lam(b);
            if (fa * fb > 0) throw RootOutsideGap("lambda_j not bracketed by its gap");
            for (int it = 0; it < 200; ++it) {
                Real m = 0.5 * (a + b);
                ((Lam(m) * fa <= 0) ? b : a) = m;
            }
            S.lambdas(j - 1) = 0.5 * (a + b);
        }
    }
    Real sumE = 0;
    for (Real e : cv.edges) sumE += e;
    S.b_tilde = 0.5 * sumE - S.lambdas.sum();

    // Riemann matrix tau_{jk} = -2 sum_{l<j} int_{B_l} P_k / R_+^{1/2}
    S.tau.resize(g, g);
    if (g > 0) {
        Eigen::MatrixXd BI(g + 1, g); // band l, monomial m
        for (int l = 0; l <= g; ++l) {
            Real lo = cv.band_lo(l), hi = cv.band_hi(l);
            for (int m = 0; m < g; ++m) {
                auto f = [&](Real x) -> Complex {
                    return std::pow(x, m) / std::sqrt(cv.abs_prod(x, 2 * l, 2 * l + 1));
                };
                BI(l, m) = quad::chebyshev_interval(f, lo, hi, opt.quad_tol).real();
            }
        }
        for (int jj = 0; jj < g; ++jj)
            for (int kk = 0; kk < g; ++kk) {
                Complex acc = 0;
                for (int l = 0; l <= jj; ++l) {
                    Real sgn = ((g - l) % 2 == 0) ? 1.0 : -1.0;
                    Real integral = 0;
                    for (int m = 0; m < g; ++m) integral += S.c(kk, m) * BI(l, m);
                    acc += Complex(0, 1) * sgn * integral;
                }
                S.tau(jj, kk) = -2.0 * acc;
            }
    }

    // a-period of omega diagnostic
    S.a_period_omega_max = 0;
    for (int j = 1; j <= g; ++j) {
        Real lo = cv.gap_lo(j), hi = cv.gap_hi(j);
        Real sgn = ((g - j) % 2 == 0) ? 1.0 : -1.0;
        auto f = [&](Real x) -> Complex {
            Real p = 1;
            for (int m = 0; m < g; ++m) p *= (x - S.lambdas(m));
            return p / std::sqrt(cv.abs_prod(x, 2 * j - 1, 2 * j));
        };
        Real v = 2.0 * sgn * quad::chebyshev_interval(f, lo, hi, opt.quad_tol).real();
        S.a_period_omega_max = std::max(S.a_period_omega_max, std::abs(v));
    }

    // equilibrium density per band (in theta variables) and cumulative masses
    S.band_density_.resize(static_cast<size_t>(g + 1));
    for (int k = 0; k <= g; ++k) {
        Real mid = 0.5 * (cv.band_lo(k) + cv.band_hi(k));
        Real hw = 0.5 * (cv.band_hi(k) - cv.band_lo(k));
        auto dens = [&](Real th) -> Real {
            Real x = mid + hw * std::cos(th);
            return std::abs(S.Lambda(x)) / (pi * std::sqrt(cv.abs_prod(x, 2 * k, 2 * k + 1)));
        };
        S.band_density_[static_cast<size_t>(k)] = quad::CosSeries::fit(dens, 1e-14);
    }
    S.cum_.assign(static_cast<size_t>(g + 2), 0.0);
    for (int k = 0; k <= g; ++k) S.cum_[static_cast<size_t>(k + 1)] = S.cum_[static_cast<size_t>(k)] + S.band_mass(k);
    S.mass_err = std::abs(S.cum_.back() - 1.0);

    // ln|w| integrand per gap
    S.gap_logw_.resize(static_cast<size_t>(g));
    for (int j = 1; j <= g; ++j) {
        Real mid = 0.5 * (cv.gap_lo(j) + cv.gap_hi(j));
        Real hw = 0.5 * (cv.gap_hi(j) - cv.gap_lo(j));
        Real sgn = ((g - j) % 2 == 0) ? 1.0 : -1.0;
        auto f = [&](Real th) -> Real {
            Real x = mid + hw * std::cos(th);
            return sgn * S.Lambda(x) / std::sqrt(cv.abs_prod(x, 2 * j - 1, 2 * j));
        };
        S.gap_logw_[static_cast<size_t>(j - 1)] = quad::CosSeries::fit(f, 1e-14);
    }

    // capacity via the vertical path asymptotics
    {
        const Real Y = 1e8;
        Complex s = S.rising_leg_omega(Y);
        Real lna = s.real() + 0.5 * std::log(cv.e_min() * cv.e_min() + Y * Y);
        S.a_tilde = std::exp(lna);
    }

    // theta function and Riemann constants
    ThetaParams tp;
    tp.tau = S.tau;
    tp.tol = opt.theta_tol;
    S.theta = RiemannTheta(tp);
    S.xi.resize(g);
    for (int j = 0; j < g; ++j) {
        Complex srow = 0;
        for (int k = 0; k < g; ++k) srow += S.tau(j, k);
        S.xi(j) = (Real(1) - srow) / Real(2);
    }

    S.A_inf_plus = (g > 0) ? S.abel_infinity_plus() : Eigen::VectorXcd(0);

    // slit geometry
    S.slits.clear();
    for (int j = 1; j <= g; ++j) {
        SlitInfo sl;
        sl.gap = j;
        sl.angle = pi * S.cumulative_mass(j);
        sl.tip_abs = std::exp(S.gap_log_abs_w(j, S.lambdas(j - 1)));
        sl.tip = std::polar(sl.tip_abs, sl.angle);
        sl.attach = std::polar<Real>(1.0, sl.angle);
        S.slits.push_back(sl);
    }
    return S;
}

/// Residuals of the period normalizations re-evaluated at a different base
/// resolution: returns (max |c*C2 - I|, max |int_{a_j} omega|).
inline std::pair<Real, Real> verify_periods(const SurfaceData &S) {
    const auto &cv = S.curve;
    int g = cv.genus;
    if (g == 0) return {0.0, 0.0};
    Eigen::MatrixXd C2(g, g);
    for (int j = 1; j <= g; ++j) {
        Real lo = cv.gap_lo(j), hi = cv.gap_hi(j);
        Real sgn = ((g - j) % 2 == 0) ? 1.0 : -1.0;
        for (int r = 0; r < g; ++r) {
            auto f = [&](Real x) -> Complex {
                return std::pow(x, r) / std::sqrt(cv.abs_prod(x, 2 * j - 1, 2 * j));
            };
            C2(r, j - 1) = 2.0 * sgn * quad::chebyshev_interval(f, lo, hi, 1e-14, 48).real();
        }
    }
    Eigen::MatrixXd R = S.c * C2 - Eigen::MatrixXd::Identity(g, g);
    return {R.cwiseAbs().maxCoeff(), S.a_period_omega_max};
}

} // namespace finigap

#endif
