#pragma once

#include <functional>
#include <string>

#include "smd/common.hpp"
#include "smd/rng.hpp"

namespace smd {

/// A mirror map h together with everything the iteration and the divergence
/// computations need: value, gradient, Hessian, the conjugate pieces and the
/// domain predicates. All instances are strictly convex and twice
/// continuously differentiable on the interior of their domain, and the
/// conjugate gradient inverts the gradient exactly (closed form).
struct MirrorMap {
    std::string name;
    int dim = 0;

    std::function<double(const Vec&)> value;      // h(x)
    std::function<Vec(const Vec&)> grad;          // grad h
    std::function<Mat(const Vec&)> hess;          // Hessian of h, SPD on int C
    std::function<double(const Vec&)> conj_value; // h*(y)
    std::function<Vec(const Vec&)> conj_grad;     // grad h*, inverse of grad h

    std::function<bool(const Vec&)> in_domain;     // strict interior, margin eps_dom
    std::function<bool(const Vec&)> in_closure;    // closure of C (first Bregman argument)
    std::function<bool(const Vec&)> in_dual_range; // range of grad h
    // Distance-like slack to the domain boundary; +inf when C = R^d.
    std::function<double(const Vec&)> interior_margin;
    // Random interior point, used by checks and property tests.
    std::function<Vec(Rng&)> sample_interior;

    double eps_dom = 1e-12;
};

// h = (1/2)||.||^2 on R^d
MirrorMap euclidean(int dim);

// h(x) = sum_i x_i log x_i on the positive orthant
MirrorMap neg_entropy(int dim);

// Log-partition of a one-dimensional Gaussian with unknown mean and
// variance, in natural coordinates theta = (m/var, -1/(2 var)); d = 2.
MirrorMap gaussian_log_partition();

// D_h(x, y) = h(x) - h(y) - <grad h(y), x - y>. Nonnegative; tiny negative
// values from cancellation are clamped to zero.
double bregman(const MirrorMap& map, const Vec& x, const Vec& y);

// D_{h*}(p, q), evaluated through the primal as D_h(conj_grad(q), conj_grad(p)).
double bregman_dual(const MirrorMap& map, const Vec& p, const Vec& q);

// <grad h(x) - grad h(y), x - y> = D_h(x, y) + D_h(y, x)
double symmetrized_bregman(const MirrorMap& map, const Vec& x, const Vec& y);

}  // namespace smd
