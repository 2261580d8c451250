#pragma once

#include <cstddef>
#include <vector>

namespace boson::special {

// ln(k!) from a lazily built table (lgamma based, thread-safe initialization).
double log_factorial(std::size_t k);

// ln C(n, k); requires k <= n.
double log_binomial(std::size_t n, std::size_t k);

// Gauss-Laguerre rule for  int_0^inf e^{-x} f(x) dx.
// Nodes ascending; log_weights carries ln(w_j) so that tiny weights keep full relative precision.
struct LaguerreRule {
    std::vector<double> nodes;
    std::vector<double> log_weights;
};

// Shared read-only rule with `order` nodes (cached per order).
const LaguerreRule& gauss_laguerre(std::size_t order);

}  // namespace boson::special
