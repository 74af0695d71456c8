#include "dynperm/limits.hpp"

#include <algorithm>
#include <cmath>

#include "dynperm/errors.hpp"

namespace dynperm {

namespace {

constexpr double kHalf = 0.5;

double simpson_rec(double a, double b, double fa, double fm, double fb, double whole, double tol,
                   int depth) {
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = 1.0 - std::pow(zeta(lm), 2);
    const double frm = 1.0 - std::pow(zeta(rm), 2);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) return left + right + diff / 15.0;
    return simpson_rec(a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_rec(m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

}  // namespace

double zeta(double u) {
    if (!(u >= 0.0)) throw DomainError("zeta needs u >= 0");
    if (u <= kHalf) return 0.0;
    // f(z) = 1 - z - exp(-2uz) is concave with f(1) < 0, so Newton iterates
    // started at 1 decrease monotonically onto the positive root.
    double z = 1.0;
    for (int i = 0; i < 500; ++i) {
        const double f = -z - std::expm1(-2.0 * u * z);
        const double fp = -1.0 + 2.0 * u * std::exp(-2.0 * u * z);
        if (!(fp < 0.0)) break;
        const double next = z - f / fp;
        if (!(next < z) || !(next > 0.0)) break;
        z = next;
    }
    // Bisection polish: f > 0 below the root, f < 0 above it.
    double lo = 0.0;
    double hi = z;
    if (-hi - std::expm1(-2.0 * u * hi) > 0.0) {
        lo = hi;
        hi = 1.0;
    }
    for (int i = 0; i < 8 && hi - lo > 0.0; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        if (-mid - std::expm1(-2.0 * u * mid) > 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    const double f_lo = std::abs(-lo - std::expm1(-2.0 * u * lo));
    const double f_hi = std::abs(-hi - std::expm1(-2.0 * u * hi));
    return (lo > 0.0 && f_lo < f_hi) ? lo : hi;
}

double zeta_derivative(double u) {
    if (!(u >= 0.0)) throw DomainError("zeta needs u >= 0");
    if (u < kHalf) return 0.0;
    if (u == kHalf) return 4.0;
    const double z = zeta(u);
    return 2.0 * z * (1.0 - z) / (1.0 - 2.0 * u * (1.0 - z));
}

double integrate_one_minus_zeta_sq(double a, double b, double tol) {
    if (!(a >= kHalf) || !(b >= a)) throw DomainError("integration range must lie in [1/2, inf)");
    if (a == b) return 0.0;
    const double fa = 1.0 - std::pow(zeta(a), 2);
    const double fb = 1.0 - std::pow(zeta(b), 2);
    const double fm = 1.0 - std::pow(zeta(0.5 * (a + b)), 2);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    return simpson_rec(a, b, fa, fm, fb, whole, tol, 40);
}

namespace {

// Integral over [1/2, v] split into unit panels.
double phi_excess(double v) {
    double total = 0.0;
    double a = kHalf;
    while (a < v) {
        const double b = std::min(v, a + 1.0);
        total += integrate_one_minus_zeta_sq(a, b, 1e-14);
        a = b;
    }
    return total;
}

}  // namespace

double phi(double v) {
    if (!(v >= 0.0)) throw DomainError("phi needs v >= 0");
    if (v <= kHalf) return v;
    return kHalf + phi_excess(v);
}

double phi_inverse(double w) {
    if (!(w >= 0.0) || !(w < 1.0)) throw DomainError("phi_inverse needs w in [0, 1)");
    if (w <= kHalf) return w;
    double lo = kHalf;
    double phi_lo = kHalf;
    double hi = 1.0;
    double phi_hi = phi_lo + integrate_one_minus_zeta_sq(lo, hi, 1e-14);
    while (phi_hi <= w) {
        lo = hi;
        phi_lo = phi_hi;
        hi = lo + 1.0;
        phi_hi = phi_lo + integrate_one_minus_zeta_sq(lo, hi, 1e-14);
        if (hi > 1e3) throw DomainError("phi_inverse: w too close to 1");
    }
    for (int i = 0; i < 200; ++i) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double phi_mid = phi_lo + integrate_one_minus_zeta_sq(lo, mid, 1e-15);
        if (phi_mid <= w) {
            lo = mid;
            phi_lo = phi_mid;
        } else {
            hi = mid;
        }
        if (hi - lo < 1e-13) break;
    }
    return 0.5 * (lo + hi);
}

double eta(double w) { return zeta(phi_inverse(w)); }

double normalization_coefficient(std::size_t l) {
    const auto dl = static_cast<double>(l);
    double c = -1.0 / (dl + 2.0);
    if (l == 0 || l == 1) c += 1.0;
    if (l >= 2) c += 1.0 / dl;
    return c;
}

LimitTables::LimitTables(double u_max, double step) : u_max_(u_max), h_(step) {
    if (!(step > 0.0) || !(u_max > kHalf)) throw DomainError("table needs step > 0 and u_max > 1/2");
    const auto cells = static_cast<std::size_t>(std::ceil(u_max / step - 1e-9));
    grid_.resize(cells + 1);
    for (std::size_t i = 0; i <= cells; ++i) grid_[i] = std::min(u_max, static_cast<double>(i) * step);
    // 1/2 must be a node so that the kink sits on a cell boundary.
    const auto half_index = static_cast<std::size_t>(std::llround(kHalf / step));
    if (std::abs(static_cast<double>(half_index) * step - kHalf) > 1e-12 * step) {
        throw DomainError("table step must divide 1/2");
    }
    grid_[half_index] = kHalf;

    const std::size_t n = grid_.size();
    zeta_.resize(n);
    dzeta_.resize(n);
    phi_.resize(n);
    dphi_.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double u = grid_[i];
        zeta_[i] = dynperm::zeta(u);
        dzeta_[i] = zeta_derivative(u);
        dphi_[i] = 1.0 - zeta_[i] * zeta_[i];
        if (u <= kHalf) {
            phi_[i] = u;
        } else {
            phi_[i] = phi_[i - 1] + integrate_one_minus_zeta_sq(grid_[i - 1], u, 1e-16);
        }
    }

    // Fritsch-Carlson limiter; a no-op wherever the exact slopes already give
    // a monotone cubic.
    auto limit = [&](std::vector<double>& y, std::vector<double>& d) {
        for (std::size_t i = 0; i + 1 < n; ++i) {
            const double dx = grid_[i + 1] - grid_[i];
            const double secant = (y[i + 1] - y[i]) / dx;
            if (secant == 0.0) {
                if (i + 1 != half_index) d[i] = 0.0;
                d[i + 1] = 0.0;
                continue;
            }
            const double a = d[i] / secant;
            const double b = d[i + 1] / secant;
            const double r = a * a + b * b;
            if (r > 9.0) {
                const double t = 3.0 / std::sqrt(r);
                d[i] = t * a * secant;
                d[i + 1] = t * b * secant;
            }
        }
    };
    limit(zeta_, dzeta_);
    limit(phi_, dphi_);
    // Right derivative at the kink.
    dzeta_[half_index] = zeta_derivative(kHalf);
}

const LimitTables& LimitTables::standard() {
    static const LimitTables tables;
    return tables;
}

std::size_t LimitTables::cell_of(double x) const {
    auto it = std::upper_bound(grid_.begin(), grid_.end(), x);
    std::size_t i = static_cast<std::size_t>(it - grid_.begin());
    if (i == 0) return 0;
    return std::min(i - 1, grid_.size() - 2);
}

namespace {

double hermite(double x0, double x1, double y0, double y1, double d0, double d1, double x) {
    const double h = x1 - x0;
    const double t = (x - x0) / h;
    const double t2 = t * t;
    const double t3 = t2 * t;
    return (2 * t3 - 3 * t2 + 1) * y0 + (t3 - 2 * t2 + t) * h * d0 + (-2 * t3 + 3 * t2) * y1 +
           (t3 - t2) * h * d1;
}

}  // namespace

double LimitTables::zeta(double u) const {
    if (!(u >= 0.0)) throw DomainError("zeta needs u >= 0");
    if (u <= kHalf) return 0.0;
    if (u >= u_max_) return dynperm::zeta(u);
    const std::size_t i = cell_of(u);
    return hermite(grid_[i], grid_[i + 1], zeta_[i], zeta_[i + 1], dzeta_[i], dzeta_[i + 1], u);
}

double LimitTables::phi(double v) const {
    if (!(v >= 0.0)) throw DomainError("phi needs v >= 0");
    if (v <= kHalf) return v;
    if (v >= u_max_) return phi_.back() + integrate_one_minus_zeta_sq(u_max_, v, 1e-16);
    const std::size_t i = cell_of(v);
    return hermite(grid_[i], grid_[i + 1], phi_[i], phi_[i + 1], dphi_[i], dphi_[i + 1], v);
}

double LimitTables::phi_inverse(double w) const {
    if (!(w >= 0.0) || !(w < 1.0)) throw DomainError("phi_inverse needs w in [0, 1)");
    if (w <= kHalf) return w;
    if (w >= phi_.back()) return dynperm::phi_inverse(w);
    auto it = std::upper_bound(phi_.begin(), phi_.end(), w);
    const std::size_t i = static_cast<std::size_t>(it - phi_.begin()) - 1;
    double lo = grid_[i];
    double hi = grid_[i + 1];
    for (int k = 0; k < 100; ++k) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;
        const double val =
            hermite(grid_[i], grid_[i + 1], phi_[i], phi_[i + 1], dphi_[i], dphi_[i + 1], mid);
        if (val <= w) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

double LimitTables::eta(double w) const { return zeta(phi_inverse(w)); }

NormalizationResiduals LimitTables::check_normalization(std::size_t series_terms) const {
    NormalizationResiduals r{};
    const double integral = phi_excess(u_max_);
    r.integral_residual = std::abs(kHalf + integral - 1.0);
    const double zu = dynperm::zeta(u_max_);
    // 1 - zeta^2 <= 2 (1 - zeta) = 2 exp(-2 u zeta(u)) <= 2 exp(-2 u zeta(u_max)) past u_max.
    r.integral_tail_bound = std::exp(-2.0 * u_max_ * zu) / zu;

    const std::size_t L = std::max<std::size_t>(series_terms, 2);
    double tail_sum = 0.0;
    for (std::size_t l = L; l >= 2; --l) {
        tail_sum += normalization_coefficient(l) / (static_cast<double>(l) + 1.0);
    }
    const auto dL = static_cast<double>(L);
    r.series_tail = 1.0 / ((dL + 1.0) * (dL + 2.0));
    const double series = normalization_coefficient(0) + normalization_coefficient(1) / 2.0 +
                          tail_sum + r.series_tail;
    r.series_residual = std::abs(0.5 * series - 0.5);
    return r;
}

}  // namespace dynperm
