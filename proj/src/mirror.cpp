#include "smd/mirror.hpp"

#include <cmath>
#include <limits>

#include "smd/errors.hpp"

namespace smd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

double xlogx(double x) { return x > 0.0 ? x * std::log(x) : 0.0; }

void require_dim(const MirrorMap& map, const Vec& v, const char* who) {
    if (static_cast<int>(v.size()) != map.dim)
        throw DomainError(std::string(who) + ": dimension mismatch for mirror " + map.name);
}

}  // namespace

MirrorMap euclidean(int dim) {
    MirrorMap m;
    m.name = "euclidean";
    m.dim = dim;
    m.value = [](const Vec& x) { return 0.5 * dot(x, x); };
    m.grad = [](const Vec& x) { return x; };
    m.hess = [dim](const Vec&) {
        Mat h(dim);
        for (int i = 0; i < dim; ++i) h(i, i) = 1.0;
        return h;
    };
    m.conj_value = [](const Vec& y) { return 0.5 * dot(y, y); };
    m.conj_grad = [](const Vec& y) { return y; };
    m.in_domain = [](const Vec& x) { return all_finite(x); };
    m.in_closure = m.in_domain;
    m.in_dual_range = [](const Vec& y) { return all_finite(y); };
    m.interior_margin = [](const Vec&) { return kInf; };
    m.sample_interior = [dim](Rng& rng) {
        Vec x(dim);
        for (auto& v : x) v = rng.normal();
        return x;
    };
    return m;
}

MirrorMap neg_entropy(int dim) {
    MirrorMap m;
    m.name = "neg_entropy";
    m.dim = dim;
    m.eps_dom = 1e-12;
    m.value = [](const Vec& x) {
        double s = 0.0;
        for (double v : x) s += xlogx(v);
        return s;
    };
    m.grad = [](const Vec& x) {
        Vec g(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) g[i] = 1.0 + std::log(x[i]);
        return g;
    };
    m.hess = [dim](const Vec& x) {
        Mat h(dim);
        for (int i = 0; i < dim; ++i) h(i, i) = 1.0 / x[i];
        return h;
    };
    m.conj_value = [](const Vec& y) {
        double s = 0.0;
        for (double v : y) s += std::exp(v - 1.0);
        return s;
    };
    m.conj_grad = [](const Vec& y) {
        Vec x(y.size());
        for (std::size_t i = 0; i < y.size(); ++i) x[i] = std::exp(y[i] - 1.0);
        return x;
    };
    double eps = m.eps_dom;
    m.in_domain = [eps](const Vec& x) {
        for (double v : x)
            if (!(v > eps) || !std::isfinite(v)) return false;
        return true;
    };
    m.in_closure = [](const Vec& x) {
        for (double v : x)
            if (!(v >= 0.0) || !std::isfinite(v)) return false;
        return true;
    };
    m.in_dual_range = [](const Vec& y) { return all_finite(y); };
    m.interior_margin = [](const Vec& x) {
        double mm = kInf;
        for (double v : x) mm = std::min(mm, v);
        return mm;
    };
    m.sample_interior = [dim](Rng& rng) {
        Vec x(dim);
        for (auto& v : x) v = std::exp(rng.uniform(-1.5, 1.0));
        return x;
    };
    return m;
}

MirrorMap gaussian_log_partition() {
    MirrorMap m;
    m.name = "gaussian_log_partition";
    m.dim = 2;
    m.eps_dom = 1e-12;
    // A(theta) = -log(-theta2)/2 - theta1^2/(4 theta2)
    m.value = [](const Vec& t) {
        return -0.5 * std::log(-t[1]) - t[0] * t[0] / (4.0 * t[1]);
    };
    // grad A = mean parameters (m, m^2 + var)
    m.grad = [](const Vec& t) {
        double var = -1.0 / (2.0 * t[1]);
        double mean = t[0] * var;
        return Vec{mean, mean * mean + var};
    };
    m.hess = [](const Vec& t) {
        double var = -1.0 / (2.0 * t[1]);
        double mean = t[0] * var;
        Mat h(2);
        h(0, 0) = var;
        h(0, 1) = h(1, 0) = 2.0 * mean * var;
        h(1, 1) = 4.0 * mean * mean * var + 2.0 * var * var;
        return h;
    };
    // Exact conjugate, constants included, so the Fenchel identity
    // A*(grad A(t)) + A(t) = <t, grad A(t)> holds.
    m.conj_value = [](const Vec& mu) {
        double var = mu[1] - mu[0] * mu[0];
        return -0.5 - 0.5 * std::log(2.0 * var);
    };
    m.conj_grad = [](const Vec& mu) {
        double var = mu[1] - mu[0] * mu[0];
        return Vec{mu[0] / var, -1.0 / (2.0 * var)};
    };
    double eps = m.eps_dom;
    m.in_domain = [eps](const Vec& t) {
        return std::isfinite(t[0]) && std::isfinite(t[1]) && t[1] < -eps;
    };
    m.in_closure = m.in_domain;
    m.in_dual_range = [eps](const Vec& mu) {
        return all_finite(mu) && mu[1] - mu[0] * mu[0] > eps;
    };
    m.interior_margin = [](const Vec& t) { return -t[1]; };
    m.sample_interior = [](Rng& rng) {
        double mean = rng.uniform(-2.0, 2.0);
        double var = rng.uniform(0.3, 3.0);
        return Vec{mean / var, -1.0 / (2.0 * var)};
    };
    return m;
}

double bregman(const MirrorMap& map, const Vec& x, const Vec& y) {
    require_dim(map, x, "bregman");
    require_dim(map, y, "bregman");
    if (!map.in_closure(x)) throw DomainError("bregman: x outside domain of " + map.name);
    if (!map.in_domain(y)) throw DomainError("bregman: y outside interior of " + map.name);
    // value terms first, inner product last
    double hx = map.value(x);
    double hy = map.value(y);
    double d = (hx - hy) - dot(map.grad(y), sub(x, y));
    if (!std::isfinite(d)) throw NonFinite("bregman: non-finite divergence");
    if (d < 0.0) {
        double tol = 1e-12 * std::max(1.0, std::max(std::abs(hx), std::abs(hy)));
        if (d < -tol) throw NonFinite("bregman: negative divergence beyond tolerance");
        d = 0.0;
    }
    return d;
}

double bregman_dual(const MirrorMap& map, const Vec& p, const Vec& q) {
    require_dim(map, p, "bregman_dual");
    require_dim(map, q, "bregman_dual");
    if (!map.in_dual_range(p))
        throw DualRangeError("bregman_dual: p outside range of grad " + map.name);
    if (!map.in_dual_range(q))
        throw DualRangeError("bregman_dual: q outside range of grad " + map.name);
    return bregman(map, map.conj_grad(q), map.conj_grad(p));
}

double symmetrized_bregman(const MirrorMap& map, const Vec& x, const Vec& y) {
    require_dim(map, x, "symmetrized_bregman");
    require_dim(map, y, "symmetrized_bregman");
    if (!map.in_domain(x) || !map.in_domain(y))
        throw DomainError("symmetrized_bregman: point outside interior of " + map.name);
    double s = dot(sub(map.grad(x), map.grad(y)), sub(x, y));
    if (!std::isfinite(s)) throw NonFinite("symmetrized_bregman: non-finite value");
    return s < 0.0 ? 0.0 : s;
}

Vec solve_spd(const Mat& m, const Vec& b) {
    const std::size_t n = m.n;
    Mat l(n);
    for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j <= i; ++j) {
            double s = m(i, j);
            for (std::size_t k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
            if (i == j) {
                if (s <= 0.0 || !std::isfinite(s))
                    throw std::runtime_error("solve_spd: matrix not positive definite");
                l(i, i) = std::sqrt(s);
            } else {
                l(i, j) = s / l(j, j);
            }
        }
    }
    Vec y(n), x(n);
    for (std::size_t i = 0; i < n; ++i) {
        double s = b[i];
        for (std::size_t k = 0; k < i; ++k) s -= l(i, k) * y[k];
        y[i] = s / l(i, i);
    }
    for (std::size_t ii = n; ii-- > 0;) {
        double s = y[ii];
        for (std::size_t k = ii + 1; k < n; ++k) s -= l(k, ii) * x[k];
        x[ii] = s / l(ii, ii);
    }
    return x;
}

Vec matvec(const Mat& m, const Vec& x) {
    Vec r(m.n, 0.0);
    for (std::size_t i = 0; i < m.n; ++i)
        for (std::size_t j = 0; j < m.n; ++j) r[i] += m(i, j) * x[j];
    return r;
}

}  // namespace smd
