#ifndef DYNPERM_LIMITS_HPP
#define DYNPERM_LIMITS_HPP

#include <cstddef>
#include <vector>

namespace dynperm {

// Giant-component fraction: 0 for u <= 1/2, otherwise the root in (0, 1) of
// 1 - z = exp(-2 u z). Throws DomainError for u < 0.
double zeta(double u);

// d zeta / du = 2 zeta (1 - zeta) / (1 - 2u (1 - zeta)). Returns the right
// derivative 4 at u = 1/2 and 0 below.
double zeta_derivative(double u);

// phi(v) = integral of 1 - zeta^2 over [0, v], by adaptive Simpson from 1/2.
double phi(double v);

// Inverse of phi on [0, 1). Throws DomainError outside that range.
double phi_inverse(double w);

// eta = zeta o phi^{-1} on [0, 1).
double eta(double w);

// Adaptive Simpson integral of 1 - zeta^2 over [a, b], a >= 1/2.
double integrate_one_minus_zeta_sq(double a, double b, double tol = 1e-13);

// Coefficient c_l of the power series whose integral over [0, 1] gives the
// normalisation of phi: c_l = [l=0] + [l=1] - 1/(l+2) + [l>=2]/l.
double normalization_coefficient(std::size_t l);

struct NormalizationResiduals {
    double integral_residual;  // |int_{1/2}^{u_max} (1 - zeta^2) + 1/2 - 1|, excluding the tail
    double integral_tail_bound;
    double series_residual;  // |(c0 + c1/2 + sum_{l>=2} c_l/(l+1))/2 - 1/2| with exact tail
    double series_tail;      // analytic tail beyond the truncation
};

/// zeta, phi, phi^{-1} and eta tabulated on [0, u_max] with step h and read
/// back by monotone cubic Hermite interpolation. Values at 1/2 are pinned
/// exactly. Arguments beyond u_max fall back to direct evaluation.
class LimitTables {
public:
    explicit LimitTables(double u_max = 40.0, double step = 1e-3);

    // Shared instance with the default parameters, built on first use.
    static const LimitTables& standard();

    double u_max() const noexcept { return u_max_; }
    double step() const noexcept { return h_; }
    std::size_t node_count() const noexcept { return grid_.size(); }
    double node(std::size_t i) const { return grid_.at(i); }
    double zeta_node(std::size_t i) const { return zeta_.at(i); }
    double phi_node(std::size_t i) const { return phi_.at(i); }

    double zeta(double u) const;
    double phi(double v) const;
    double phi_inverse(double w) const;
    double eta(double w) const;

    // Series truncated after l = series_terms.
    NormalizationResiduals check_normalization(std::size_t series_terms = 1000000) const;

private:
    std::size_t cell_of(double x) const;

    double u_max_;
    double h_;
    std::vector<double> grid_;
    std::vector<double> zeta_;
    std::vector<double> dzeta_;
    std::vector<double> phi_;
    std::vector<double> dphi_;
};

}  // namespace dynperm

#endif  // DYNPERM_LIMITS_HPP
