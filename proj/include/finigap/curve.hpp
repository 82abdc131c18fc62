// Hyperelliptic curve R_{2g+2}(z) = prod (z - E_j) with real branch points and
// the fixed square-root branch R^{1/2}(z) = -prod sqrt(z - E_j).
//
// Branch cuts lie on the spectral bands [E_{2k}, E_{2k+1}]. On the real axis
// the value is assembled from explicit sign rules instead of relying on the
// signed zero of std::sqrt; points on a band carry a bank tag (+1 = limit from
// above, -1 from below).

#ifndef FINIGAP_CURVE_HPP
#define FINIGAP_CURVE_HPP

#include <cmath>
#include <optional>
#include <vector>

#include "finigap/types.hpp"

namespace finigap {

struct HyperellipticCurve {
    std::vector<Real> edges; // E_0 < E_1 < ... < E_{2g+1}
    int genus = 0;

    HyperellipticCurve() = default;
    explicit HyperellipticCurve(std::vector<Real> e) : edges(std::move(e)) {
        if (edges.size() < 2 || edges.size() % 2 != 0)
            throw InvalidCurve("need an even number (>= 2) of band edges");
        for (size_t j = 0; j + 1 < edges.size(); ++j)
            if (!(edges[j + 1] - edges[j] > 1e-8))
                throw InvalidCurve("edges must be strictly increasing (closed gaps rejected)");
        genus = static_cast<int>(edges.size()) / 2 - 1;
    }

    int num_bands() const { return genus + 1; }
    // band k = [E_{2k}, E_{2k+1}], k = 0..g
    Real band_lo(int k) const { return edges[static_cast<size_t>(2 * k)]; }
    Real band_hi(int k) const { return edges[static_cast<size_t>(2 * k + 1)]; }
    // gap j = (E_{2j-1}, E_{2j}), j = 1..g
    Real gap_lo(int j) const { return edges[static_cast<size_t>(2 * j - 1)]; }
    Real gap_hi(int j) const { return edges[static_cast<size_t>(2 * j)]; }

    Real e_min() const { return edges.front(); }
    Real e_max() const { return edges.back(); }

    Complex R(Complex z) const {
        Complex p = 1;
        for (Real e : edges) p *= (z - e);
        return p;
    }

    bool in_band(Real x) const { return band_index(x).has_value(); }

    std::optional<int> band_index(Real x) const {
        for (int k = 0; k <= genus; ++k)
            if (x >= band_lo(k) && x <= band_hi(k)) return k;
        return std::nullopt;
    }

    /// Gap index for real x off the bands: 0 = left exterior (-inf, E_0),
    /// j = open gap j, g+1 = right exterior. nullopt when x is on a band.
    std::optional<int> gap_index(Real x) const {
        if (x < e_min()) return 0;
        if (x > e_max()) return genus + 1;
        for (int j = 1; j <= genus; ++j)
            if (x > gap_lo(j) && x < gap_hi(j)) return j;
        return std::nullopt;
    }

    bool is_edge(Real x, Real tol = 0.0) const {
        for (Real e : edges)
            if (std::abs(x - e) <= tol) return true;
        return false;
    }

    /// prod_{m not skipped} |x - E_m|
    Real abs_prod(Real x, int skip0 = -1, int skip1 = -1) const {
        Real p = 1;
        for (int m = 0; m < static_cast<int>(edges.size()); ++m) {
            if (m == skip0 || m == skip1) continue;
            p *= std::abs(x - edges[static_cast<size_t>(m)]);
        }
        return p;
    }
};

/// Fixed branch R^{1/2}(z) = -prod_j sqrt(z - E_j). For real z on a band the
/// bank selects the limit from above (+1) or below (-1).
inline Complex sqrt_R(const HyperellipticCurve &c, Complex z, int bank = +1) {
    if (z.imag() != 0.0) {
        Complex p = 1;
        for (Real e : c.edges) p *= std::sqrt(z - e);
        return -p;
    }
    const Real x = z.real();
    if (auto k = c.band_index(x)) {
        // -i (-1)^{g-k} |prod|^{1/2} from above, conjugate from below
        Real mag = std::sqrt(c.abs_prod(x));
        Real sgn = ((c.genus - *k) % 2 == 0) ? 1.0 : -1.0;
        return Complex(0.0, -Real(bank) * sgn * mag);
    }
    int nb = *c.gap_index(x); // bands entirely below x
    Real mag = std::sqrt(c.abs_prod(x));
    Real sgn = ((c.genus - nb) % 2 == 0) ? 1.0 : -1.0;
    return sgn * mag;
}

struct SurfacePoint {
    Complex z;
    int sheet = +1; // in {+1, -1}
    std::optional<int> at_infinity; // +1 -> infinity_+, -1 -> infinity_-
    int bank = +1;  // for real z on a band: limit from above/below

    static SurfacePoint infinity(int s) {
        SurfacePoint p;
        p.at_infinity = s;
        return p;
    }
};

inline Complex sqrt_R(const HyperellipticCurve &c, const SurfacePoint &p) {
    if (p.at_infinity) throw UnsupportedPoint("sqrt_R at infinity");
    return Real(p.sheet) * sqrt_R(c, p.z, p.bank);
}

} // namespace finigap

#endif
