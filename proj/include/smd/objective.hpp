#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "smd/common.hpp"
#include "smd/mirror.hpp"
#include "smd/rng.hpp"

namespace smd {

// Opaque sample token. Finite families index their atom list; continuous
// families carry the realized draw, so that one draw can be reused across
// coupled evaluations.
struct SampleId {
    std::int64_t index = -1;  // >= 0 for finite support
    double draw = 0.0;        // realized scalar for continuous support

    bool finite() const { return index >= 0; }
};

/// A stochastic objective family {f_xi} with expectation f = E f_xi.
/// Relative smoothness/strong convexity constants are declared, not
/// estimated; relative_smoothness_check below is a falsifier only.
struct StochasticObjective {
    std::string name;
    int dim = 0;

    std::function<SampleId(Rng&)> sample;
    std::function<double(const SampleId&, const Vec&)> value_at;
    std::function<Vec(const SampleId&, const Vec&)> grad_at;
    std::function<double(const Vec&)> mean_value;  // null when unknown
    std::function<Vec(const Vec&)> mean_grad;      // null when unknown

    double rel_L = 1.0;   // 0 means "no finite constant needed" (linear family)
    double rel_mu = 0.0;

    std::optional<Vec> opt;  // x_star when known
    std::function<std::optional<Vec>(const SampleId&)> per_sample_opt;  // null when unknown

    // Nonempty => finite support with these atoms and probabilities.
    std::vector<std::pair<SampleId, double>> support;
    // Deterministic quadrature rule over the sample space (continuous
    // families only): n nodes -> (sample, weight) pairs summing to 1.
    std::function<std::vector<std::pair<SampleId, double>>(int)> quad_rule;

    bool finite_support() const { return !support.empty(); }
    double inv_L() const;  // 1/rel_L, +inf when rel_L == 0
};

// f_xi(x) = ||x - xi||^2 / 2, xi drawn from a finite list. Pairs with the
// Euclidean mirror; L = mu = 1; optimum is the weighted atom mean.
StochasticObjective finite_quadratic(std::vector<Vec> atoms, std::vector<double> probs = {});

// Negative log-likelihood family of a scalar Gaussian in natural
// coordinates: f_X(theta) = A(theta) - <theta, (X, X^2)>, X ~ N(m, var).
// Pairs with gaussian_log_partition; L = mu = 1; optimum theta(m, var).
StochasticObjective gaussian_nll(double m_star, double var_star);

// f_xi(x) = <xi, x> with xi drawn from a finite list of cost vectors.
// Linear, so relative constants are trivial; used with the entropy mirror
// through the proximal path (simplex constraint).
StochasticObjective finite_linear_simplex(std::vector<Vec> costs, std::vector<double> probs = {});

// Exact expectation of g over a finite support.
double expect_finite(const StochasticObjective& obj,
                     const std::function<double(const SampleId&)>& g);

struct SmoothnessReport {
    bool pass = true;
    double max_upper_violation = 0.0;  // D_f - L D_h above tolerance
    double max_lower_violation = 0.0;  // mu D_h - D_f above tolerance
    long pairs_checked = 0;
};

// Samples random interior pairs (x, y) and a sample xi per pair, and checks
// mu D_h(x,y) <= D_{f_xi}(x,y) <= L D_h(x,y) within 1e-8 (1 + D_h).
SmoothnessReport relative_smoothness_check(const StochasticObjective& obj, const MirrorMap& map,
                                           long n_pairs, Rng& rng,
                                           const std::function<Vec(Rng&)>& sampler = nullptr);

}  // namespace smd
