#include "smd/variance.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "smd/csvio.hpp"
#include "smd/engine.hpp"
#include "smd/errors.hpp"
#include "smd/pattern_search.hpp"
#include "smd/rng.hpp"
#include "smd/stats.hpp"

namespace smd {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct McAcc {
    MeanVar mv;
    long skipped = 0;
};

ValueWithError mc_expect(const FEtaEstimator& est, const StochasticObjective& obj,
                         const std::function<double(const SampleId&)>& g) {
    if (est.n_samples < 100) throw DomainError("estimator: Monte Carlo needs n_samples >= 100");
    McAcc total = block_reduce(
        std::size_t(est.n_samples), 4096, est.exec, McAcc{},
        [&](std::size_t begin, std::size_t end, McAcc& acc) {
            for (std::size_t i = begin; i < end; ++i) {
                Rng stream(split_seed(est.seed, i));
                SampleId xi = obj.sample(stream);
                try {
                    acc.mv.add(g(xi));
                } catch (const DualRangeError&) {
                    ++acc.skipped;
                }
            }
        },
        [](McAcc a, const McAcc& b) {
            a.mv.merge(b.mv);
            a.skipped += b.skipped;
            return a;
        });
    return {total.mv.mean, total.mv.stderr_mean(), total.skipped};
}

Vec default_start(const MirrorMap& map, const StochasticObjective& obj) {
    if (obj.opt) return *obj.opt;
    Rng rng(12345);
    return map.sample_interior(rng);
}

}  // namespace

ValueWithError expect_over_samples(const FEtaEstimator& est, const StochasticObjective& obj,
                                   const std::function<double(const SampleId&)>& g) {
    switch (est.mode) {
        case EstimatorMode::ExactFinite: {
            if (!obj.finite_support())
                throw DomainError("estimator: exact mode needs finite support");
            return {expect_finite(obj, g), 0.0, 0};
        }
        case EstimatorMode::Quadrature: {
            if (!obj.quad_rule)
                throw DomainError("estimator: " + obj.name + " has no quadrature rule");
            if (est.n_nodes < 8) throw DomainError("estimator: quadrature needs n_nodes >= 8");
            double s = 0.0;
            for (const auto& [id, w] : obj.quad_rule(est.n_nodes)) s += w * g(id);
            return {s, 0.0, 0};
        }
        case EstimatorMode::MonteCarlo:
            return mc_expect(est, obj, g);
    }
    return {};
}

ValueWithError f_eta_at(const FEtaEstimator& est, const MirrorMap& map,
                        const StochasticObjective& obj, const Vec& x) {
    if (!map.in_domain(x)) throw DomainError("f_eta_at: x outside interior of " + map.name);
    if (!obj.mean_value) throw DomainError("f_eta_at: " + obj.name + " has no mean value");
    const double eta = est.eta;
    if (!(eta > 0.0)) throw DomainError("f_eta_at: eta must be positive");
    ValueWithError penalty = expect_over_samples(est, obj, [&](const SampleId& xi) {
        return bregman(map, x, smd_step(map, obj, x, eta, xi));
    });
    return {obj.mean_value(x) - penalty.value / eta, penalty.stderr_ / eta, penalty.skipped};
}

MinimizeFEtaResult minimize_f_eta(const FEtaEstimator& est, const MirrorMap& map,
                                  const StochasticObjective& obj, const Vec& x_init, double tol) {
    if (map.dim > 8) throw DomainError("minimize_f_eta: desk-scale dimensions only (d <= 8)");
    if (!(tol > 0.0)) throw DomainError("minimize_f_eta: tol must be positive");

    auto objective = [&](const Vec& x) -> double {
        try {
            return f_eta_at(est, map, obj, x).value;
        } catch (const DualRangeError&) {
            return kInf;
        } catch (const DomainError&) {
            return kInf;
        }
    };

    std::vector<Vec> starts{x_init};
    if (obj.opt && *obj.opt != x_init) starts.push_back(*obj.opt);

    PatternSearchOptions opt;
    opt.tol = tol;
    opt.max_evals = 100000;
    PatternSearchResult best =
        pattern_search_multi(objective, starts, opt, [&](const Vec& x) { return map.in_domain(x); });

    MinimizeFEtaResult res;
    res.x_eta = best.x;
    res.converged = best.converged;
    res.evals = best.evals;
    ValueWithError at_min = f_eta_at(est, map, obj, res.x_eta);
    res.f_eta_star = at_min.value;
    res.stderr_ = at_min.stderr_;
    double margin = map.interior_margin(res.x_eta);
    res.hit_boundary = margin <= std::max(map.eps_dom, 10.0 * tol);
    return res;
}

SigmaStarResult sigma_star_sq(const MirrorMap& map, const StochasticObjective& obj, double eta,
                              const FEtaEstimator& est_in, const MinimizerSettings& settings) {
    if (!obj.opt || !obj.mean_value)
        throw DomainError("sigma_star_sq: needs a known optimum and mean value");
    FEtaEstimator est = est_in;
    est.eta = eta;
    Vec start = settings.x_init ? *settings.x_init : default_start(map, obj);
    MinimizeFEtaResult m = minimize_f_eta(est, map, obj, start, settings.tol);
    SigmaStarResult res;
    res.value = (obj.mean_value(*obj.opt) - m.f_eta_star) / eta;
    res.stderr_ = m.stderr_ / eta;
    res.x_eta = m.x_eta;
    res.hit_boundary = m.hit_boundary;
    return res;
}

ValueWithError bound_maml(const MirrorMap& map, const StochasticObjective& obj, double eta,
                          const FEtaEstimator& est_in, const MinimizerSettings& settings) {
    if (eta > obj.inv_L())
        throw StepSizeTooLarge("bound_maml: eta exceeds 1/L for " + obj.name);
    if (!obj.opt || !obj.mean_value)
        throw DomainError("bound_maml: needs a known optimum and mean value");
    FEtaEstimator est = est_in;
    est.eta = eta;

    // x -> E f_xi(x+) with the same expectation machinery as f_eta
    double last_stderr = 0.0;
    auto after_step = [&](const Vec& x) -> double {
        try {
            ValueWithError v = expect_over_samples(est, obj, [&](const SampleId& xi) {
                return obj.value_at(xi, smd_step(map, obj, x, eta, xi));
            });
            last_stderr = v.stderr_;
            return v.value;
        } catch (const DualRangeError&) {
            return kInf;
        } catch (const DomainError&) {
            return kInf;
        }
    };

    std::vector<Vec> starts;
    if (settings.x_init) starts.push_back(*settings.x_init);
    starts.push_back(*obj.opt);
    PatternSearchOptions opt;
    opt.tol = settings.tol;
    opt.max_evals = settings.max_evals;
    PatternSearchResult best =
        pattern_search_multi(after_step, starts, opt, [&](const Vec& x) { return map.in_domain(x); });

    double f_plus_star = after_step(best.x);
    return {(obj.mean_value(*obj.opt) - f_plus_star) / eta, last_stderr / eta, 0};
}

double bound_function_diff(const StochasticObjective& obj, double eta) {
    if (!obj.per_sample_opt)
        throw UnknownPerSampleOpt("bound_function_diff: " + obj.name +
                                  " has no per-sample optima");
    if (!obj.finite_support() || !obj.opt || !obj.mean_value)
        throw DomainError("bound_function_diff: needs finite support with known optimum");
    if (eta > obj.inv_L())
        throw StepSizeTooLarge("bound_function_diff: eta exceeds 1/L");
    double mean_best = expect_finite(obj, [&](const SampleId& xi) {
        std::optional<Vec> xs = obj.per_sample_opt(xi);
        if (!xs) throw UnknownPerSampleOpt("bound_function_diff: missing per-sample optimum");
        return obj.value_at(xi, *xs);
    });
    return (obj.mean_value(*obj.opt) - mean_best) / eta;
}

ValueWithError bound_grad_at_opt(const MirrorMap& map, const StochasticObjective& obj, double eta,
                                 const Vec& x_eta, const FEtaEstimator& est_in) {
    if (eta > obj.inv_L())
        throw StepSizeTooLarge("bound_grad_at_opt: eta exceeds 1/L");
    if (!obj.mean_grad)
        throw UnknownMeanGradient("bound_grad_at_opt: " + obj.name + " has no mean gradient");
    FEtaEstimator est = est_in;
    est.eta = eta;
    Vec det = det_step(map, obj, x_eta, eta);
    ValueWithError e = expect_over_samples(est, obj, [&](const SampleId& xi) {
        return bregman(map, det, smd_step(map, obj, x_eta, eta, xi));
    });
    double s = 1.0 / (eta * eta);
    return {s * e.value, s * e.stderr_, e.skipped};
}

ValueWithError bound_deh(const MirrorMap& map, const StochasticObjective& obj, double eta,
                         const Vec& x_eta, const FEtaEstimator& est_in) {
    if (obj.rel_L > 0.0 && !(eta < 0.5 / obj.rel_L))
        throw StepSizeTooLarge("bound_deh: needs eta < 1/(2L)");
    if (!obj.opt) throw DomainError("bound_deh: needs a known optimum");
    FEtaEstimator est = est_in;
    est.eta = eta;
    Vec h_at = map.grad(x_eta);
    const Vec& xs = *obj.opt;
    ValueWithError e = expect_over_samples(est, obj, [&](const SampleId& xi) {
        Vec g = obj.grad_at(xi, xs);
        Vec p = h_at;
        for (std::size_t i = 0; i < p.size(); ++i) p[i] -= 2.0 * eta * g[i];
        if (!map.in_dual_range(p))
            throw DualRangeError("bound_deh: 2-eta dual point left the range", eta);
        return bregman_dual(map, p, h_at);
    });
    double s = 0.5 / (eta * eta);
    return {s * e.value, s * e.stderr_, e.skipped};
}

ValueWithError sigma_sym_on_grid(const MirrorMap& map, const StochasticObjective& obj, double eta,
                                 const std::vector<Vec>& grid, const FEtaEstimator& est_in) {
    if (grid.empty()) throw DomainError("sigma_sym_on_grid: empty grid");
    if (!obj.mean_grad)
        throw UnknownMeanGradient("sigma_sym_on_grid: " + obj.name + " has no mean gradient");
    FEtaEstimator est = est_in;
    est.eta = eta;
    ValueWithError best{-kInf, 0.0, 0};
    for (const Vec& x : grid) {
        if (!map.in_domain(x)) throw DomainError("sigma_sym_on_grid: grid point outside domain");
        Vec det = det_step(map, obj, x, eta);
        ValueWithError e = expect_over_samples(est, obj, [&](const SampleId& xi) {
            Vec plus = smd_step(map, obj, x, eta, xi);
            return bregman(map, plus, det) + bregman(map, det, plus);
        });
        double v = e.value / (eta * eta);
        if (v > best.value) best = {v, e.stderr_ / (eta * eta), e.skipped};
    }
    return best;
}

ValueWithError sigma_tilde_on_grid(const MirrorMap& map, const StochasticObjective& obj,
                                   double eta, const std::vector<Vec>& grid,
                                   const FEtaEstimator& est_in) {
    if (grid.empty()) throw DomainError("sigma_tilde_on_grid: empty grid");
    if (!obj.opt || !obj.mean_value || !obj.mean_grad)
        throw DomainError("sigma_tilde_on_grid: needs optimum, mean value and mean gradient");
    FEtaEstimator est = est_in;
    est.eta = eta;
    const Vec& xs = *obj.opt;
    ValueWithError best{-kInf, 0.0, 0};
    for (const Vec& x : grid) {
        ValueWithError e = expect_over_samples(est, obj, [&](const SampleId& xi) {
            return bregman(map, x, smd_step(map, obj, x, eta, xi));
        });
        // D_f(x_star, x) from the mean function
        double df = obj.mean_value(xs) - obj.mean_value(x) - dot(obj.mean_grad(x), sub(xs, x));
        double v = (e.value / eta - df) / eta;
        if (v > best.value) best = {v, e.stderr_ / (eta * eta), e.skipped};
    }
    return best;
}

ValueWithError limit_variance(const MirrorMap& map, const StochasticObjective& obj,
                              const FEtaEstimator& est) {
    if (!obj.opt) throw DomainError("limit_variance: needs a known optimum");
    const Vec& xs = *obj.opt;
    if (!map.in_domain(xs)) throw DomainError("limit_variance: optimum not interior");
    Mat hess = map.hess(xs);
    ValueWithError e = expect_over_samples(est, obj, [&](const SampleId& xi) {
        Vec g = obj.grad_at(xi, xs);
        Vec sol;
        try {
            sol = solve_spd(hess, g);
        } catch (const std::runtime_error&) {
            throw SingularHessian("limit_variance: Hessian of " + map.name +
                                  " is singular at the optimum");
        }
        return 0.5 * dot(g, sol);
    });
    return e;
}

PhiReport phi_monotonicity_check(const MirrorMap& map, const StochasticObjective& obj,
                                 const Vec& x, const SampleId& xi,
                                 const std::vector<double>& eta_list, double slope_rel_tol) {
    if (eta_list.size() < 2) throw DomainError("phi_monotonicity_check: need at least two etas");
    for (std::size_t i = 1; i < eta_list.size(); ++i)
        if (!(eta_list[i] > eta_list[i - 1]))
            throw DomainError("phi_monotonicity_check: eta list must be increasing");

    auto phi = [&](double eta) {
        return bregman(map, x, smd_step(map, obj, x, eta, xi)) / eta;
    };

    PhiReport rep;
    std::vector<double> vals(eta_list.size());
    for (std::size_t i = 0; i < eta_list.size(); ++i) vals[i] = phi(eta_list[i]);

    for (std::size_t i = 0; i + 1 < eta_list.size(); ++i) {
        double drop = vals[i] - vals[i + 1];
        double tol = 1e-12 * (1.0 + std::abs(vals[i]));
        if (drop > tol) {
            rep.monotone = false;
            rep.max_drop = std::max(rep.max_drop, drop);
        }
        double mid = 0.5 * (eta_list[i] + eta_list[i + 1]);
        double slope = (vals[i + 1] - vals[i]) / (eta_list[i + 1] - eta_list[i]);
        Vec plus_mid = smd_step(map, obj, x, mid, xi);
        double predicted = bregman(map, plus_mid, x) / (mid * mid);
        double denom = std::max(std::abs(predicted), 1e-14);
        double rel = std::abs(slope - predicted) / denom;
        if (std::abs(slope) < 1e-14 && std::abs(predicted) < 1e-14) rel = 0.0;
        rep.max_slope_rel_err = std::max(rep.max_slope_rel_err, rel);
    }
    rep.slope_ok = rep.max_slope_rel_err <= slope_rel_tol;
    return rep;
}

VarianceReport build_variance_report(const MirrorMap& map, const StochasticObjective& obj,
                                     const std::vector<double>& etas, FEtaEstimator est,
                                     const MinimizerSettings& settings,
                                     const std::vector<Vec>& grid) {
    VarianceReport rep;
    const char* mode_flag = est.mode == EstimatorMode::ExactFinite
                                ? "exact"
                                : (est.mode == EstimatorMode::MonteCarlo ? "mc" : "quadrature");

    ValueWithError limit = limit_variance(map, obj, est);
    for (double eta : etas) {
        est.eta = eta;
        SigmaStarResult sig = sigma_star_sq(map, obj, eta, est, settings);
        rep.rows.push_back({eta, "sigma_star_sq", sig.value, sig.stderr_,
                            sig.hit_boundary ? "boundary-hit" : mode_flag});
        for (std::size_t i = 0; i < sig.x_eta.size(); ++i)
            rep.rows.push_back({eta, "x_eta_" + std::to_string(i), sig.x_eta[i], 0.0,
                                sig.hit_boundary ? "boundary-hit" : mode_flag});

        if (eta <= obj.inv_L()) {
            ValueWithError m = bound_maml(map, obj, eta, est, settings);
            rep.rows.push_back({eta, "maml", m.value, m.stderr_, mode_flag});
        }
        if (obj.per_sample_opt && obj.finite_support() && eta <= obj.inv_L())
            rep.rows.push_back({eta, "function_diff", bound_function_diff(obj, eta), 0.0, "exact"});
        if (eta <= obj.inv_L()) {
            ValueWithError g = bound_grad_at_opt(map, obj, eta, sig.x_eta, est);
            rep.rows.push_back({eta, "grad_at_opt", g.value, g.stderr_, mode_flag});
        }
        if (obj.rel_L == 0.0 || eta < 0.5 / obj.rel_L) {
            ValueWithError d = bound_deh(map, obj, eta, sig.x_eta, est);
            rep.rows.push_back({eta, "deh", d.value, d.stderr_, mode_flag});
        }
        rep.rows.push_back({eta, "limit_rhs", limit.value, limit.stderr_, mode_flag});

        std::vector<Vec> g2 = grid;
        g2.push_back(sig.x_eta);
        ValueWithError sym = sigma_sym_on_grid(map, obj, eta, g2, est);
        rep.rows.push_back({eta, "sym_on_grid", sym.value, sym.stderr_, "grid-lower-bound"});
        ValueWithError tld = sigma_tilde_on_grid(map, obj, eta, g2, est);
        rep.rows.push_back({eta, "tilde_on_grid", tld.value, tld.stderr_, "grid-lower-bound"});
    }
    return rep;
}

void write_variance_csv(const VarianceReport& report, std::ostream& out) {
    out << "eta,quantity,value,stderr,flag\n";
    for (const auto& r : report.rows)
        out << format_double(r.eta) << ',' << r.quantity << ',' << format_double(r.value) << ','
            << format_double(r.stderr_) << ',' << r.flag << '\n';
}

}  // namespace smd
