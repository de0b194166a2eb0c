#ifndef GAM_GAUSS_HERMITE_HPP
#define GAM_GAUSS_HERMITE_HPP

#include <vector>

namespace gam {

/// Nodes and weights for the integral of exp(-t^2) f(t) over the real line.
struct GaussHermiteRule {
    std::vector<double> nodes;   // ascending
    std::vector<double> weights; // sum to sqrt(pi)
};

/// Newton iteration on orthonormal Hermite polynomials. Accurate well past
/// order 100.
GaussHermiteRule gauss_hermite(int order);

} // namespace gam

#endif
