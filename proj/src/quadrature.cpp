#include "sfwm/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <utility>

#include "sfwm/errors.hpp"
#include "sfwm/units.hpp"

namespace sfwm {

namespace {

// (P_n(x), P_{n-1}(x)) by the three-term recurrence.
std::pair<double, double> legendre(std::size_t n, double x)
{
    double p_prev = 1.0;
    double p = x;
    for (std::size_t k = 2; k <= n; ++k) {
        const double kd = static_cast<double>(k);
        const double next = ((2.0 * kd - 1.0) * x * p - (kd - 1.0) * p_prev) / kd;
        p_prev = p;
        p = next;
    }
    return {p, p_prev};
}

}  // namespace

GaussLegendre::GaussLegendre(std::size_t n) : nodes_(n), weights_(n)
{
    if (n == 0) {
        throw DomainError("Gauss-Legendre rule needs at least one node");
    }
    const double nd = static_cast<double>(n);
    for (std::size_t i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(kPi * (static_cast<double>(i) + 0.75) / (nd + 0.5));
        double derivative = 1.0;
        for (int iter = 0; iter < 100; ++iter) {
            const auto [p, p_prev] = legendre(n, x);
            derivative = nd * (x * p - p_prev) / (x * x - 1.0);
            const double step = p / derivative;
            x -= step;
            if (std::abs(step) < 1e-16) break;
        }
        const auto [p, p_prev] = legendre(n, x);
        derivative = nd * (x * p - p_prev) / (x * x - 1.0);
        const double w = 2.0 / ((1.0 - x * x) * derivative * derivative);
        nodes_[i] = -x;
        nodes_[n - 1 - i] = x;
        weights_[i] = w;
        weights_[n - 1 - i] = w;
    }
    if (n % 2 == 1) {
        nodes_[n / 2] = 0.0;
    }
}

const GaussLegendre& gauss_legendre(std::size_t n)
{
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<GaussLegendre>> rules;
    std::lock_guard lock(mutex);
    auto& slot = rules[n];
    if (!slot) {
        slot = std::make_unique<GaussLegendre>(n);
    }
    return *slot;
}

}  // namespace sfwm
