#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace sfwm {

/// Gauss-Legendre nodes and weights on [-1, 1].
class GaussLegendre {
public:
    explicit GaussLegendre(std::size_t n);

    std::size_t size() const noexcept { return nodes_.size(); }
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> weights() const noexcept { return weights_; }

    /// Integral of f over [a, b].
    template <class F>
    double integrate(F&& f, double a, double b) const
    {
        const double half = 0.5 * (b - a);
        const double mid = 0.5 * (b + a);
        double sum = 0.0;
        for (std::size_t i = 0; i < nodes_.size(); ++i) {
            sum += weights_[i] * f(mid + half * nodes_[i]);
        }
        return sum * half;
    }

    /// Composite rule over `panels` equal sub-intervals of [a, b].
    template <class F>
    double integrate(F&& f, double a, double b, std::size_t panels) const
    {
        const double h = (b - a) / static_cast<double>(panels);
        double sum = 0.0;
        for (std::size_t p = 0; p < panels; ++p) {
            sum += integrate(f, a + h * static_cast<double>(p), a + h * static_cast<double>(p + 1));
        }
        return sum;
    }

private:
    std::vector<double> nodes_;
    std::vector<double> weights_;
};

/// Shared rule of the given order, built once per process.
const GaussLegendre& gauss_legendre(std::size_t n);

}  // namespace sfwm
