// Slow, obviously-correct reference implementations used by the tests.
#ifndef DYNPERM_TESTS_ORACLES_HPP
#define DYNPERM_TESTS_ORACLES_HPP

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <queue>
#include <utility>
#include <vector>

namespace oracle {

using Cycles = std::vector<std::vector<std::uint32_t>>;

// Cycles of a successor array, each rotated to start at its minimum, sorted.
inline Cycles cycle_decomposition(const std::vector<std::uint32_t>& succ) {
    std::vector<bool> seen(succ.size(), false);
    Cycles out;
    for (std::uint32_t v = 0; v < succ.size(); ++v) {
        if (seen[v]) continue;
        std::vector<std::uint32_t> c;
        for (std::uint32_t w = v; !seen[w]; w = succ[w]) {
            seen[w] = true;
            c.push_back(w);
        }
        out.push_back(c);  // starts at its minimum since v is the first unseen
    }
    std::sort(out.begin(), out.end());
    return out;
}

inline std::vector<std::size_t> cycle_sizes_of(const std::vector<std::uint32_t>& succ) {
    std::vector<std::size_t> size(succ.size());
    for (const auto& c : cycle_decomposition(succ)) {
        for (auto v : c) size[v] = c.size();
    }
    return size;
}

// Composition (x o y)(v) = x(y(v)) on successor arrays.
inline std::vector<std::uint32_t> compose(const std::vector<std::uint32_t>& x,
                                          const std::vector<std::uint32_t>& y) {
    std::vector<std::uint32_t> out(x.size());
    for (std::size_t v = 0; v < x.size(); ++v) out[v] = x[y[v]];
    return out;
}

// One step of the walk at infinite speed, element by element: each vertex
// receives the average of the old law over its cycle.
inline std::vector<double> isrw_step(const std::vector<double>& mu, const std::vector<std::uint32_t>& succ) {
    std::vector<double> out(mu.size(), 0.0);
    for (const auto& c : cycle_decomposition(succ)) {
        double s = 0.0;
        for (auto v : c) s += mu[v];
        for (auto v : c) out[v] = s / static_cast<double>(c.size());
    }
    return out;
}

inline double tv(const std::vector<double>& p, const std::vector<double>& q) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += std::abs(p[i] - q[i]);
    return s / 2.0;
}

// Component label (smallest vertex) of every vertex, by BFS.
inline std::vector<std::uint32_t> bfs_components(std::size_t n,
                                                 const std::vector<std::pair<std::uint32_t, std::uint32_t>>& edges) {
    std::vector<std::vector<std::uint32_t>> adj(n);
    for (auto [a, b] : edges) {
        adj[a].push_back(b);
        adj[b].push_back(a);
    }
    std::vector<std::uint32_t> comp(n, UINT32_MAX);
    for (std::uint32_t s = 0; s < n; ++s) {
        if (comp[s] != UINT32_MAX) continue;
        std::queue<std::uint32_t> q;
        q.push(s);
        comp[s] = s;
        while (!q.empty()) {
            auto v = q.front();
            q.pop();
            for (auto w : adj[v]) {
                if (comp[w] == UINT32_MAX) {
                    comp[w] = s;
                    q.push(w);
                }
            }
        }
    }
    return comp;
}

inline std::vector<std::size_t> component_sizes(const std::vector<std::uint32_t>& comp) {
    std::vector<std::size_t> count(comp.size(), 0);
    for (auto c : comp) ++count[c];
    std::vector<std::size_t> sizes;
    for (auto c : count) {
        if (c) sizes.push_back(c);
    }
    std::sort(sizes.rbegin(), sizes.rend());
    return sizes;
}

// Plain fixed-point iteration z <- 1 - exp(-2uz) from z = 1.
inline double zeta_fixed_point(double u) {
    if (u <= 0.5) return 0.0;
    double z = 1.0;
    for (int i = 0; i < 200000; ++i) {
        const double next = 1.0 - std::exp(-2.0 * u * z);
        if (std::abs(next - z) < 1e-17) return next;
        z = next;
    }
    return z;
}

// Closed form of the integral of 1 - zeta^2 from 0 to v.
inline double phi_closed_form(double v) {
    if (v <= 0.5) return v;
    const double z = zeta_fixed_point(v);
    return z + v * (1.0 - z) * (1.0 - z);
}

// Law of the largest block of PoiDir(1): P(P1 <= x) = rho(1/x), with the
// Dickman function rho' (u) = -rho(u - 1)/u integrated by the trapezoid rule.
class LargestBlockCdf {
public:
    explicit LargestBlockCdf(double u_max = 200.0, std::size_t per_unit = 10000)
        : h_(1.0 / static_cast<double>(per_unit)), per_unit_(per_unit) {
        const std::size_t total = static_cast<std::size_t>(u_max) * per_unit + 1;
        rho_.assign(total, 1.0);
        for (std::size_t i = per_unit; i + 1 < total; ++i) {
            const double u0 = static_cast<double>(i) * h_;
            const double u1 = u0 + h_;
            const double f0 = rho_[i - per_unit] / u0;
            const double f1 = rho_[i + 1 - per_unit] / u1;
            rho_[i + 1] = rho_[i] - 0.5 * h_ * (f0 + f1);
        }
    }

    double rho(double u) const {
        if (u <= 1.0) return 1.0;
        const double pos = u / h_;
        const auto i = static_cast<std::size_t>(pos);
        if (i + 1 >= rho_.size()) return 0.0;
        const double w = pos - static_cast<double>(i);
        return (1.0 - w) * rho_[i] + w * rho_[i + 1];
    }

    double operator()(double x) const {
        if (x >= 1.0) return 1.0;
        if (x <= 0.0) return 0.0;
        return rho(1.0 / x);
    }

private:
    double h_;
    std::size_t per_unit_;
    std::vector<double> rho_;
};

// Asymptotic Kolmogorov critical value at level 0.01.
inline double ks_critical_99(std::size_t r) { return 1.6276 / std::sqrt(static_cast<double>(r)); }

}  // namespace oracle

#endif  // DYNPERM_TESTS_ORACLES_HPP
