#pragma once

#include <functional>
#include <vector>

namespace smd {

// Gauss-Hermite rule for integrals against exp(-t^2). Nodes by Newton
// iteration on the orthonormal recurrence; stable for a few hundred nodes.
struct GaussHermite {
    std::vector<double> nodes;
    std::vector<double> weights;
    explicit GaussHermite(int n);
};

// E[g(X)] for X ~ N(mean, sd^2): sum_i w_i / sqrt(pi) * g(mean + sqrt(2) sd t_i)
double gh_expect(const GaussHermite& rule, double mean, double sd,
                 const std::function<double(double)>& g);

}  // namespace smd
