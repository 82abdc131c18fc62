// Riemann theta function of the surface: truncated lattice sum with an
// adaptive radius from the Gaussian tail bound, plus a log form with exact
// quasi-periodicity reduction so ratios of theta values at distant arguments
// stay finite.

#ifndef FINIGAP_THETA_HPP
#define FINIGAP_THETA_HPP

#include <Eigen/Dense>
#include <cmath>

#include "finigap/types.hpp"

namespace finigap {

struct ThetaParams {
    Eigen::MatrixXcd tau;
    Real tol = 1e-12;
    int max_radius = 200;
};

class RiemannTheta {
  public:
    RiemannTheta() = default;

    explicit RiemannTheta(ThetaParams params) : p_(std::move(params)) {
        g_ = static_cast<int>(p_.tau.rows());
        if (g_ == 0) return;
        if ((p_.tau - p_.tau.transpose()).norm() > 1e-8 * (1.0 + p_.tau.norm()))
            throw InvalidData("tau must be symmetric");
        Y_ = p_.tau.imag();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Y_);
        lambda_min_ = es.eigenvalues()(0);
        if (lambda_min_ <= 0) throw InvalidData("Im(tau) must be positive definite");
        Yinv_ = Y_.inverse();
    }

    int genus() const { return g_; }
    const ThetaParams &params() const { return p_; }
    Real lambda_min() const { return lambda_min_; }

    /// log(theta(z)) with the quasi-periodicity prefactor handled exactly;
    /// branch of the log is immaterial for the exp-of-differences callers.
    Complex log_theta(const Eigen::VectorXcd &z) const {
        if (g_ == 0) return Complex(0, 0);
        // reduce z = z0 + tau*k + l with Im z0 small
        Eigen::VectorXd y = z.imag();
        Eigen::VectorXd kr = Yinv_ * y;
        Eigen::VectorXi k(g_), l(g_);
        for (int j = 0; j < g_; ++j) k(j) = static_cast<int>(std::lround(kr(j)));
        Eigen::VectorXcd ztk = z;
        for (int j = 0; j < g_; ++j)
            for (int i = 0; i < g_; ++i) ztk(i) -= p_.tau(i, j) * Real(k(j));
        for (int j = 0; j < g_; ++j) l(j) = static_cast<int>(std::lround(ztk(j).real()));
        Eigen::VectorXcd z0 = ztk;
        for (int j = 0; j < g_; ++j) z0(j) -= Real(l(j));
        // theta(z0 + tau k + l) = exp(-pi i k'tau k - 2 pi i k'z0) theta(z0)... inverted:
        Complex pre(0, 0);
        const Complex I(0, 1);
        Complex ktk = 0, kz = 0;
        for (int i = 0; i < g_; ++i) {
            kz += Real(k(i)) * z0(i);
            for (int j = 0; j < g_; ++j) ktk += Real(k(i)) * p_.tau(i, j) * Real(k(j));
        }
        pre = -pi * I * ktk - 2.0 * pi * I * kz;
        return pre + std::log(sum(z0));
    }

    Complex theta(const Eigen::VectorXcd &z) const {
        if (g_ == 0) return Complex(1, 0);
        return std::exp(log_theta(z));
    }

    /// Truncation radius for an argument with Im part y (after reduction).
    int radius_for(const Eigen::VectorXd &y) const {
        Real ay = y.norm();
        for (int R = 2; R <= p_.max_radius; ++R) {
            Real tail = 0;
            for (int r = R + 1; r <= R + 40; ++r) {
                Real shell = 2.0 * g_ * std::pow(2.0 * r + 1.0, g_ - 1);
                tail += shell * std::exp(-pi * lambda_min_ * r * r + 2.0 * pi * r * ay);
            }
            if (tail < p_.tol) return R;
        }
        throw TruncationTooSmall("theta truncation radius exceeds max_radius");
    }

  private:
    Complex sum(const Eigen::VectorXcd &z) const {
        const int R = radius_for(z.imag());
        const Complex I(0, 1);
        Eigen::VectorXi m = Eigen::VectorXi::Constant(g_, -R);
        Complex s = 0;
        while (true) {
            Complex mtm = 0, mz = 0;
            for (int i = 0; i < g_; ++i) {
                mz += Real(m(i)) * z(i);
                for (int j = 0; j < g_; ++j) mtm += Real(m(i)) * p_.tau(i, j) * Real(m(j));
            }
            s += std::exp(pi * I * mtm + 2.0 * pi * I * mz);
            int j = 0;
            for (; j < g_; ++j) {
                if (m(j) < R) {
                    ++m(j);
                    break;
                }
                m(j) = -R;
            }
            if (j == g_) break;
        }
        return s;
    }

    ThetaParams p_;
    int g_ = 0;
    Eigen::MatrixXd Y_, Yinv_;
    Real lambda_min_ = 1.0;
};

} // namespace finigap

#endif
