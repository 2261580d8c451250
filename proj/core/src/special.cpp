#include "boson/special.hpp"

#include "boson/types.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace boson::special {

namespace {

constexpr std::size_t kTableSize = 4096;

const std::vector<double>& log_factorial_table() {
    static const std::vector<double> table = [] {
        std::vector<double> t(kTableSize);
        for (std::size_t k = 0; k < kTableSize; ++k) t[k] = std::lgamma(static_cast<double>(k) + 1.0);
        return t;
    }();
    return table;
}

// Laguerre L_{order}(x) and L_{order-1}(x) by the three-term recurrence.
std::pair<double, double> laguerre_pair(std::size_t order, double x) {
    double prev = 1.0;       // L_0
    double cur = 1.0 - x;    // L_1
    if (order == 0) return {prev, 0.0};
    for (std::size_t k = 1; k < order; ++k) {
        const double kk = static_cast<double>(k);
        const double next = ((2.0 * kk + 1.0 - x) * cur - kk * prev) / (kk + 1.0);
        prev = cur;
        cur = next;
    }
    return {cur, prev};
}

LaguerreRule build_rule(std::size_t order) {
    // Golub-Welsch for the nodes, then Newton polish and the closed-form weight
    //   w_j = x_j / ((N+1)^2 L_{N+1}(x_j)^2).
    const auto n = static_cast<Index>(order);
    Eigen::VectorXd diag(n);
    Eigen::VectorXd sub(n > 1 ? n - 1 : 0);
    for (Index i = 0; i < n; ++i) diag(i) = 2.0 * static_cast<double>(i) + 1.0;
    for (Index i = 0; i + 1 < n; ++i) sub(i) = static_cast<double>(i) + 1.0;

    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver;
    solver.computeFromTridiagonal(diag, sub, Eigen::EigenvaluesOnly);
    Eigen::VectorXd x = solver.eigenvalues();

    LaguerreRule rule;
    rule.nodes.resize(order);
    rule.log_weights.resize(order);
    const double np1 = static_cast<double>(order) + 1.0;
    for (std::size_t j = 0; j < order; ++j) {
        double xj = x(static_cast<Index>(j));
        for (int it = 0; it < 3; ++it) {
            // L_N'(x) = N (L_N - L_{N-1}) / x
            auto [ln, lnm1] = laguerre_pair(order, xj);
            const double deriv = static_cast<double>(order) * (ln - lnm1) / xj;
            const double step = ln / deriv;
            xj -= step;
            if (std::abs(step) <= 1e-15 * xj) break;
        }
        const double l_next = laguerre_pair(order + 1, xj).first;
        rule.nodes[j] = xj;
        rule.log_weights[j] = std::log(xj) - 2.0 * std::log(np1) - 2.0 * std::log(std::abs(l_next));
    }
    return rule;
}

}  // namespace

double log_factorial(std::size_t k) {
    if (k < kTableSize) return log_factorial_table()[k];
    return std::lgamma(static_cast<double>(k) + 1.0);
}

double log_binomial(std::size_t n, std::size_t k) {
    return log_factorial(n) - log_factorial(k) - log_factorial(n - k);
}

const LaguerreRule& gauss_laguerre(std::size_t order) {
    if (order == 0) throw DomainError("gauss_laguerre: order must be positive");
    static std::mutex mutex;
    static std::map<std::size_t, std::unique_ptr<LaguerreRule>> cache;
    std::lock_guard<std::mutex> lock(mutex);
    auto& slot = cache[order];
    if (!slot) slot = std::make_unique<LaguerreRule>(build_rule(order));
    return *slot;
}

}  // namespace boson::special
