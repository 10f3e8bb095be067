#include "smd/quadrature.hpp"

#include <cmath>
#include <stdexcept>

namespace smd {

GaussHermite::GaussHermite(int n) {
    if (n < 1) throw std::invalid_argument("GaussHermite: need at least one node");
    nodes.assign(n, 0.0);
    weights.assign(n, 0.0);

    const double eps = 1e-14;
    const int m = (n + 1) / 2;
    double z = 0.0;
    for (int i = 0; i < m; ++i) {
        // initial guesses, largest root first
        if (i == 0)
            z = std::sqrt(2.0 * n + 1.0) - 1.85575 * std::pow(2.0 * n + 1.0, -1.0 / 6.0);
        else if (i == 1)
            z -= 1.14 * std::pow(double(n), 0.426) / z;
        else if (i == 2)
            z = 1.86 * z - 0.86 * nodes[0];
        else if (i == 3)
            z = 1.91 * z - 0.91 * nodes[1];
        else
            z = 2.0 * z - nodes[i - 2];

        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            // orthonormal Hermite recurrence
            double p1 = 0.7511255444649425;  // pi^{-1/4}
            double p2 = 0.0;
            for (int j = 1; j <= n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = z * std::sqrt(2.0 / j) * p2 - std::sqrt((j - 1.0) / j) * p3;
            }
            pp = std::sqrt(2.0 * n) * p2;
            double dz = p1 / pp;
            z -= dz;
            if (std::abs(dz) <= eps) break;
        }
        nodes[i] = z;
        nodes[n - 1 - i] = -z;
        weights[i] = 2.0 / (pp * pp);
        weights[n - 1 - i] = weights[i];
    }
    if (n % 2 == 1) nodes[n / 2] = 0.0;
}

double gh_expect(const GaussHermite& rule, double mean, double sd,
                 const std::function<double(double)>& g) {
    const double inv_sqrt_pi = 0.5641895835477563;
    const double s = std::sqrt(2.0) * sd;
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i)
        acc += rule.weights[i] * g(mean + s * rule.nodes[i]);
    return acc * inv_sqrt_pi;
}

}  // namespace smd
