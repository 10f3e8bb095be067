#include "smd/objective.hpp"

#include <cmath>
#include <limits>
#include <numeric>

#include "smd/errors.hpp"
#include "smd/quadrature.hpp"

namespace smd {

double StochasticObjective::inv_L() const {
    return rel_L > 0.0 ? 1.0 / rel_L : std::numeric_limits<double>::infinity();
}

namespace {

std::vector<double> normalize_probs(std::size_t n, std::vector<double> probs) {
    if (probs.empty()) probs.assign(n, 1.0 / double(n));
    if (probs.size() != n) throw DomainError("support probabilities do not match atom count");
    double s = std::accumulate(probs.begin(), probs.end(), 0.0);
    if (std::abs(s - 1.0) > 1e-12) throw DomainError("support probabilities do not sum to 1");
    return probs;
}

}  // namespace

StochasticObjective finite_quadratic(std::vector<Vec> atoms, std::vector<double> probs) {
    if (atoms.empty()) throw DomainError("finite_quadratic: empty atom list");
    const int dim = static_cast<int>(atoms[0].size());
    probs = normalize_probs(atoms.size(), std::move(probs));

    Vec mean_atom(dim, 0.0);
    double mean_sq = 0.0;  // E ||xi||^2
    for (std::size_t j = 0; j < atoms.size(); ++j) {
        mean_atom = axpy(probs[j], atoms[j], mean_atom);
        mean_sq += probs[j] * dot(atoms[j], atoms[j]);
    }

    StochasticObjective obj;
    obj.name = "finite_quadratic";
    obj.dim = dim;
    obj.rel_L = 1.0;
    obj.rel_mu = 1.0;
    obj.opt = mean_atom;

    auto atoms_p = std::make_shared<std::vector<Vec>>(std::move(atoms));
    auto probs_p = std::make_shared<std::vector<double>>(std::move(probs));
    for (std::size_t j = 0; j < atoms_p->size(); ++j)
        obj.support.push_back({SampleId{std::int64_t(j), 0.0}, (*probs_p)[j]});

    obj.sample = [probs_p](Rng& rng) {
        double u = rng.next_double(), acc = 0.0;
        for (std::size_t j = 0; j < probs_p->size(); ++j) {
            acc += (*probs_p)[j];
            if (u < acc) return SampleId{std::int64_t(j), 0.0};
        }
        return SampleId{std::int64_t(probs_p->size() - 1), 0.0};
    };
    obj.value_at = [atoms_p](const SampleId& id, const Vec& x) {
        const Vec& a = (*atoms_p)[std::size_t(id.index)];
        Vec d = sub(x, a);
        return 0.5 * dot(d, d);
    };
    obj.grad_at = [atoms_p](const SampleId& id, const Vec& x) {
        return sub(x, (*atoms_p)[std::size_t(id.index)]);
    };
    obj.mean_value = [mean_atom, mean_sq](const Vec& x) {
        return 0.5 * dot(x, x) - dot(x, mean_atom) + 0.5 * mean_sq;
    };
    obj.mean_grad = [mean_atom](const Vec& x) { return sub(x, mean_atom); };
    obj.per_sample_opt = [atoms_p](const SampleId& id) {
        return std::optional<Vec>((*atoms_p)[std::size_t(id.index)]);
    };
    return obj;
}

StochasticObjective gaussian_nll(double m_star, double var_star) {
    if (!(var_star > 0.0)) throw DomainError("gaussian_nll: var_star must be positive");

    StochasticObjective obj;
    obj.name = "gaussian_nll";
    obj.dim = 2;
    obj.rel_L = 1.0;
    obj.rel_mu = 1.0;
    obj.opt = Vec{m_star / var_star, -1.0 / (2.0 * var_star)};

    const Vec mu_star{m_star, m_star * m_star + var_star};
    const double sd = std::sqrt(var_star);

    auto a_value = [](const Vec& t) { return -0.5 * std::log(-t[1]) - t[0] * t[0] / (4.0 * t[1]); };
    auto a_grad = [](const Vec& t) {
        double var = -1.0 / (2.0 * t[1]);
        double mean = t[0] * var;
        return Vec{mean, mean * mean + var};
    };

    obj.sample = [m_star, sd](Rng& rng) { return SampleId{-1, rng.normal(m_star, sd)}; };
    obj.value_at = [a_value](const SampleId& id, const Vec& t) {
        double x = id.draw;
        return a_value(t) - (t[0] * x + t[1] * x * x);
    };
    obj.grad_at = [a_grad](const SampleId& id, const Vec& t) {
        Vec mu = a_grad(t);
        return Vec{mu[0] - id.draw, mu[1] - id.draw * id.draw};
    };
    obj.mean_value = [a_value, mu_star](const Vec& t) {
        return a_value(t) - (t[0] * mu_star[0] + t[1] * mu_star[1]);
    };
    obj.mean_grad = [a_grad, mu_star](const Vec& t) {
        Vec mu = a_grad(t);
        return Vec{mu[0] - mu_star[0], mu[1] - mu_star[1]};
    };
    // per-sample optimum sits on the boundary (zero variance): unknown
    obj.per_sample_opt = nullptr;
    obj.quad_rule = [m_star, sd](int n_nodes) {
        GaussHermite rule(n_nodes);
        std::vector<std::pair<SampleId, double>> nodes;
        nodes.reserve(rule.nodes.size());
        for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
            double x = m_star + std::sqrt(2.0) * sd * rule.nodes[i];
            nodes.push_back({SampleId{-1, x}, rule.weights[i] / std::sqrt(M_PI)});
        }
        return nodes;
    };
    return obj;
}

StochasticObjective finite_linear_simplex(std::vector<Vec> costs, std::vector<double> probs) {
    if (costs.empty()) throw DomainError("finite_linear_simplex: empty cost list");
    const int dim = static_cast<int>(costs[0].size());
    probs = normalize_probs(costs.size(), std::move(probs));

    Vec mean_cost(dim, 0.0);
    for (std::size_t j = 0; j < costs.size(); ++j) mean_cost = axpy(probs[j], costs[j], mean_cost);

    StochasticObjective obj;
    obj.name = "finite_linear_simplex";
    obj.dim = dim;
    obj.rel_L = 0.0;  // D_{f_xi} = 0 for linear f_xi
    obj.rel_mu = 0.0;

    auto costs_p = std::make_shared<std::vector<Vec>>(std::move(costs));
    auto probs_p = std::make_shared<std::vector<double>>(std::move(probs));
    for (std::size_t j = 0; j < costs_p->size(); ++j)
        obj.support.push_back({SampleId{std::int64_t(j), 0.0}, (*probs_p)[j]});

    obj.sample = [probs_p](Rng& rng) {
        double u = rng.next_double(), acc = 0.0;
        for (std::size_t j = 0; j < probs_p->size(); ++j) {
            acc += (*probs_p)[j];
            if (u < acc) return SampleId{std::int64_t(j), 0.0};
        }
        return SampleId{std::int64_t(probs_p->size() - 1), 0.0};
    };
    obj.value_at = [costs_p](const SampleId& id, const Vec& x) {
        return dot((*costs_p)[std::size_t(id.index)], x);
    };
    obj.grad_at = [costs_p](const SampleId& id, const Vec&) {
        return (*costs_p)[std::size_t(id.index)];
    };
    obj.mean_value = [mean_cost](const Vec& x) { return dot(mean_cost, x); };
    obj.mean_grad = [mean_cost](const Vec&) { return mean_cost; };
    // unconstrained per-sample optima do not exist; the constrained ones live
    // on simplex vertices, outside the entropy interior
    obj.per_sample_opt = nullptr;
    return obj;
}

double expect_finite(const StochasticObjective& obj,
                     const std::function<double(const SampleId&)>& g) {
    if (!obj.finite_support()) throw DomainError("expect_finite: support is not finite");
    double s = 0.0;
    for (const auto& [id, p] : obj.support) s += p * g(id);
    return s;
}

SmoothnessReport relative_smoothness_check(const StochasticObjective& obj, const MirrorMap& map,
                                           long n_pairs, Rng& rng,
                                           const std::function<Vec(Rng&)>& sampler) {
    if (n_pairs < 1) throw DomainError("relative_smoothness_check: n_pairs must be >= 1");
    auto draw = sampler ? sampler : map.sample_interior;

    SmoothnessReport rep;
    rep.pairs_checked = n_pairs;
    for (long i = 0; i < n_pairs; ++i) {
        Vec x, y;
        int tries = 0;
        do {
            x = draw(rng);
            y = draw(rng);
            if (++tries > 100) throw DomainError("relative_smoothness_check: sampling failed");
        } while (!map.in_domain(x) || !map.in_domain(y));
        SampleId xi = obj.sample(rng);

        double dh = bregman(map, x, y);
        double df = obj.value_at(xi, x) - obj.value_at(xi, y) - dot(obj.grad_at(xi, y), sub(x, y));
        double tol = 1e-8 * (1.0 + dh);
        double up = df - obj.rel_L * dh;
        double lo = obj.rel_mu * dh - df;
        if (up > tol) {
            rep.pass = false;
            rep.max_upper_violation = std::max(rep.max_upper_violation, up);
        }
        if (lo > tol) {
            rep.pass = false;
            rep.max_lower_violation = std::max(rep.max_lower_violation, lo);
        }
    }
    return rep;
}

}  // namespace smd
