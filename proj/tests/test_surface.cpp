// Surface-module tests: fixed-branch square root, theta oracle values and
// functional identities, periods, third-kind constants, quasi-momentum and
// its inverse, and the orthogonality weight.

#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "finigap/surface.hpp"

using namespace finigap;
using Catch::Approx;

namespace {

HyperellipticCurve free_curve() { return HyperellipticCurve({-1.0, 1.0}); }
HyperellipticCurve sym4() { return HyperellipticCurve({-2.0, -1.0, 1.0, 2.0}); }

// closed form for g = 0: w(z) = sqrt(z-1)sqrt(z+1) - z, principal roots
Complex w_free(Complex z) { return std::sqrt(z - 1.0) * std::sqrt(z + 1.0) - z; }

HyperellipticCurve random_curve(int g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> du(0.15, 1.4);
    std::vector<Real> e;
    Real x = -2.0;
    for (int i = 0; i < 2 * g + 2; ++i) {
        x += du(rng);
        e.push_back(x);
    }
    return HyperellipticCurve(e);
}

} // namespace

TEST_CASE("sqrt_R fixed branch") {
    auto c = free_curve();
    // frozen: g=0, p=(0,+) -> -i
    CHECK(std::abs(sqrt_R(c, Complex(0, 0)) - Complex(0, -1)) < 1e-15);
    // branch point value
    CHECK(std::abs(sqrt_R(c, Complex(-1.0, 0))) < 1e-15);
    // conjugation symmetry off the real axis
    std::mt19937 rng(7);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    auto cs = sym4();
    for (int i = 0; i < 50; ++i) {
        Complex z(d(rng), d(rng));
        if (std::abs(z.imag()) < 1e-3) continue;
        CHECK(std::abs(sqrt_R(cs, std::conj(z)) - std::conj(sqrt_R(cs, z))) < 1e-12);
    }
    // continuity across a gap and matching of the real-axis formula
    for (Real x : {-1.5, 0.0, 1.5, 2.5, -2.5}) {
        Complex above = sqrt_R(cs, Complex(x, 1e-9));
        Complex on = sqrt_R(cs, Complex(x, 0.0), +1);
        CHECK(std::abs(above - on) < 1e-6 * (1.0 + std::abs(on)));
    }
    // bank tag flips the sign on bands
    Complex up = sqrt_R(cs, Complex(1.5, 0.0), +1);
    Complex dn = sqrt_R(cs, Complex(1.5, 0.0), -1);
    CHECK(std::abs(up + dn) < 1e-15);
    CHECK(std::abs(sqrt_R(cs, Complex(1.5, 1e-10)) - up) < 1e-6);
}

TEST_CASE("theta oracle and identities") {
    // frozen oracle: g=1, tau=i, z=0 -> direct lattice sum
    ThetaParams tp;
    tp.tau = Eigen::MatrixXcd::Constant(1, 1, Complex(0, 1));
    RiemannTheta th(tp);
    Eigen::VectorXcd z0 = Eigen::VectorXcd::Zero(1);
    CHECK(std::abs(th.theta(z0) - Complex(1.08643481121330801, 0)) < 1e-13);

    Eigen::VectorXcd z(1);
    z(0) = Complex(0.31, 0.17);
    // lattice shift invariance
    Eigen::VectorXcd zs = z;
    zs(0) += 3.0;
    CHECK(std::abs(th.theta(zs) - th.theta(z)) < 1e-12);
    // evenness
    CHECK(std::abs(th.theta(-z) - th.theta(z)) < 1e-12);
    // quasi-periodicity under a tau shift
    Eigen::VectorXcd zt = z;
    zt(0) += tp.tau(0, 0);
    Complex factor = std::exp(Complex(0, -pi) * tp.tau(0, 0) + Complex(0, -2 * pi) * z(0));
    CHECK(std::abs(th.theta(zt) - factor * th.theta(z)) < 1e-12);
    // log form consistent with plain sum after a big shift
    Eigen::VectorXcd zb = z;
    zb(0) += 5.0 * tp.tau(0, 0);
    Complex ratio = std::exp(th.log_theta(zb) - th.log_theta(z));
    Complex direct = th.theta(zb) / th.theta(z);
    CHECK(std::abs(ratio - direct) < 1e-9 * std::abs(direct));

    ThetaParams bad = tp;
    bad.max_radius = 1;
    RiemannTheta thb(bad);
    Eigen::VectorXcd huge(1);
    huge(0) = Complex(0, 40.0);
    CHECK_THROWS_AS(thb.theta(huge), TruncationTooSmall);
}

TEST_CASE("periods of the symmetric genus-1 curve") {
    auto S = make_surface(sym4());
    // frozen oracle values (independent quadrature)
    CHECK(S.C(0, 0) == Approx(3.37150070962519205).epsilon(1e-11));
    CHECK(std::abs(S.tau(0, 0) - Complex(0, 0.639630785585503233)) < 1e-11);
    CHECK(std::abs(S.tau(0, 0).real()) < 1e-12);
    // third kind: symmetry forces lambda_1 = 0; capacity sqrt(3)/2
    CHECK(std::abs(S.lambdas(0)) < 1e-12);
    CHECK(S.a_tilde == Approx(0.8660254037844386).epsilon(1e-11));
    CHECK(std::abs(S.b_tilde) < 1e-12);
    auto [aper, omper] = verify_periods(S);
    CHECK(aper < 1e-9);
    CHECK(omper < 1e-9);
}

TEST_CASE("tau symmetry and positivity for random curves") {
    for (unsigned seed : {1u, 2u, 3u, 4u, 5u}) {
        for (int g : {1, 2}) {
            auto S = make_surface(random_curve(g, seed + 13 * g));
            Real sym = (S.tau - S.tau.transpose()).cwiseAbs().maxCoeff();
            CHECK(sym < 1e-10);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(S.tau.imag());
            CHECK(es.eigenvalues()(0) > 0);
            auto [aper, omper] = verify_periods(S);
            CHECK(aper < 1e-9);
            CHECK(omper < 1e-9);
            CHECK(S.mass_err < 1e-10);
            // each lambda_j strictly inside its gap
            for (int j = 1; j <= g; ++j) {
                CHECK(S.lambdas(j - 1) > S.curve.gap_lo(j));
                CHECK(S.lambdas(j - 1) < S.curve.gap_hi(j));
            }
        }
    }
}

TEST_CASE("free-case quasi-momentum closed form") {
    auto S = make_surface(free_curve());
    CHECK(S.a_tilde == Approx(0.5).epsilon(1e-12));
    CHECK(std::abs(S.b_tilde) < 1e-14);
    CHECK(std::abs(S.quasimomentum(Complex(-1, 0)) - Complex(1, 0)) < 1e-12);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> d(-4.0, 4.0);
    int checked = 0;
    while (checked < 100) {
        Complex z(d(rng), d(rng));
        if (std::abs(z.imag()) < 0.05 && z.real() > -1.3 && z.real() < 1.3) continue;
        Complex w = S.quasimomentum(z);
        CHECK(std::abs(w - w_free(z)) < 1e-10);
        ++checked;
    }
    // on-band and real-gap values against the closed form limits
    for (Real x : {-0.9, -0.3, 0.4, 0.97}) {
        Complex w = S.quasimomentum(Complex(x, 0), +1);
        Complex wref = w_free(Complex(x, 1e-13));
        CHECK(std::abs(w - wref) < 1e-6);
        CHECK(std::abs(std::abs(w) - 1.0) < 1e-12);
    }
    for (Real x : {-3.0, -1.2, 1.5, 9.0}) {
        Complex w = S.quasimomentum(Complex(x, 0));
        CHECK(std::abs(w - w_free(Complex(x, 0) + Complex(0, 1e-14))) < 1e-9);
    }
}

TEST_CASE("quasi-momentum properties on general curves") {
    auto S = make_surface(sym4());
    // |w| = 1 at every band edge
    for (Real e : S.curve.edges)
        CHECK(std::abs(std::abs(S.quasimomentum(Complex(e, 0))) - 1.0) < 1e-10);
    // asymptotics w ~ -a~/z on the imaginary axis
    {
        Complex z(0, 1e4);
        Complex w = S.quasimomentum(z);
        CHECK(std::abs(w * z / (-S.a_tilde) - 1.0) < 1e-6);
    }
    // |w| < 1 strictly off the spectrum
    std::mt19937 rng(3);
    std::uniform_real_distribution<double> d(-3.0, 3.0);
    for (int i = 0; i < 60; ++i) {
        Complex z(d(rng), d(rng));
        if (std::abs(z.imag()) < 1e-2) continue;
        CHECK(std::abs(S.quasimomentum(z)) < 1.0);
    }
    // equilibrium route agrees with the Abelian path route
    for (Complex z : {Complex(0.3, 0.8), Complex(-2.5, 0.4), Complex(2.2, -1.0), Complex(0.0, 3.0)}) {
        Complex w1 = S.quasimomentum(z);
        Complex w2 = S.quasimomentum_abelian(z);
        CHECK(std::abs(w1 - w2) < 1e-10);
    }
    // gap values: real modulus dips to the slit tip at lambda_j
    Real t0 = S.gap_log_abs_w(1, S.lambdas(0));
    CHECK(t0 < 0);
    CHECK(std::abs(S.gap_log_abs_w(1, S.curve.gap_lo(1))) < 1e-10);
    CHECK(std::abs(S.gap_log_abs_w(1, S.curve.gap_hi(1))) < 1e-10);
}

TEST_CASE("lambda_of_w round trips") {
    auto S = make_surface(sym4());
    // w = 1 -> E_0, band-edge images return the edges
    CHECK(std::abs(S.lambda_of_w(Complex(1, 0)) - Complex(S.curve.e_min(), 0)) < 1e-10);
    for (Real e : S.curve.edges) {
        Complex w = S.quasimomentum(Complex(e, 0));
        CHECK(std::abs(S.lambda_of_w(w) - Complex(e, 0)) < 1e-8);
    }
    // real grid off the spectrum
    int n = 0;
    for (Real x = -3.0; x <= 3.2; x += 0.06) {
        if (S.curve.in_band(x) || S.curve.is_edge(x, 1e-3)) continue;
        Complex w = S.quasimomentum(Complex(x, 0));
        std::optional<int> side;
        if (auto j = S.curve.gap_index(x); j && *j >= 1 && *j <= S.genus())
            side = (x < S.lambdas(*j - 1)) ? -1 : +1;
        Complex back = S.lambda_of_w(w, side);
        CHECK(std::abs(back - Complex(x, 0)) < 1e-10);
        ++n;
    }
    CHECK(n >= 60);
    // on-band points via circle values
    for (Real x : {-1.8, -1.2, 1.1, 1.9}) {
        Complex w = S.quasimomentum(Complex(x, 0), +1);
        CHECK(std::abs(S.lambda_of_w(w) - Complex(x, 0)) < 1e-10);
    }
    // complex interior points
    for (Complex z : {Complex(0.4, 1.2), Complex(-1.6, 0.7), Complex(2.4, -0.5)}) {
        Complex w = S.quasimomentum(z);
        CHECK(std::abs(S.lambda_of_w(w) - z) < 1e-9);
    }
    // slit ambiguity is flagged
    Real xg = 0.5 * (S.curve.gap_lo(1) + S.lambdas(0));
    Complex wslit = S.quasimomentum(Complex(xg, 0), +1);
    CHECK_THROWS_AS(S.lambda_of_w(wslit), AmbiguousSlit);
}

TEST_CASE("abel map basics") {
    auto S = make_surface(sym4());
    // a-loop increments: branch-tracked loop around gap j integrates zeta to e_j
    Complex loop = S.abel_a_loop(1, 0);
    CHECK(std::abs(loop - Complex(1, 0)) < 1e-9);
    // A(inf+) + A(inf-) = 0 for our path policy
    auto ap = S.abel(SurfacePoint::infinity(+1));
    auto am = S.abel(SurfacePoint::infinity(-1));
    CHECK((ap + am).cwiseAbs().maxCoeff() < 1e-12);
    // base point maps to zero
    SurfacePoint p0{Complex(S.curve.e_min(), 0), +1, std::nullopt, +1};
    CHECK(S.abel(p0).cwiseAbs().maxCoeff() < 1e-10);
    // d/dz consistency: abel difference matches local quadrature of zeta
    SurfacePoint pa{Complex(0.2, 1.0), +1, std::nullopt, +1};
    SurfacePoint pb{Complex(0.25, 1.0), +1, std::nullopt, +1};
    Eigen::VectorXcd diff = S.abel(pb) - S.abel(pa);
    Complex direct = quad::gl_segment(
        [&](Complex t) {
            Complex num = S.c(0, 0);
            return num / sqrt_R(S.curve, t);
        },
        pa.z, pb.z, 24);
    CHECK(std::abs(diff(0) - direct) < 1e-11);
}

TEST_CASE("domega weight has unit mass") {
    auto S = make_surface(sym4());
    Eigen::VectorXd mus(1);
    mus(0) = 0.5; // any point strictly inside the gap
    int N = 512;
    Real mass = 0;
    for (int i = 0; i < N; ++i) {
        Real phi = 2 * pi * (i + 0.5) / N;
        Complex lam = S.lambda_of_w(std::polar<Real>(1.0, phi));
        mass += S.domega_weight(mus, lam.real()) / N;
    }
    CHECK(mass == Approx(1.0).margin(1e-10));
}
