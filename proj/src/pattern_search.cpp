#include "smd/pattern_search.hpp"

#include <cmath>
#include <limits>

namespace smd {

PatternSearchResult pattern_search(const std::function<double(const Vec&)>& f, Vec x0,
                                   const PatternSearchOptions& opt,
                                   const std::function<bool(const Vec&)>& feasible) {
    const std::size_t d = x0.size();
    PatternSearchResult res;
    res.x = std::move(x0);

    auto ok = [&](const Vec& x) { return !feasible || feasible(x); };
    auto eval = [&](const Vec& x) {
        ++res.evals;
        double v = f(x);
        return std::isfinite(v) ? v : std::numeric_limits<double>::infinity();
    };

    if (!ok(res.x)) {
        res.f = std::numeric_limits<double>::infinity();
        return res;
    }
    res.f = eval(res.x);

    // per-coordinate scale so the radius is meaningful for mixed magnitudes
    Vec step(d);
    for (std::size_t i = 0; i < d; ++i) step[i] = opt.initial_step * (1.0 + std::abs(res.x[i]));

    double radius = 1.0;
    while (radius > opt.tol && res.evals < opt.max_evals) {
        bool improved = false;
        for (std::size_t i = 0; i < d && res.evals < opt.max_evals; ++i) {
            for (double sgn : {+1.0, -1.0}) {
                Vec cand = res.x;
                cand[i] += sgn * radius * step[i];
                if (!ok(cand)) continue;
                double v = eval(cand);
                if (v < res.f) {
                    res.x = std::move(cand);
                    res.f = v;
                    improved = true;
                    break;
                }
            }
        }
        if (!improved) radius *= opt.shrink;
    }
    res.converged = radius <= opt.tol;
    return res;
}

PatternSearchResult pattern_search_multi(const std::function<double(const Vec&)>& f,
                                         const std::vector<Vec>& starts,
                                         const PatternSearchOptions& opt,
                                         const std::function<bool(const Vec&)>& feasible) {
    PatternSearchResult best;
    best.f = std::numeric_limits<double>::infinity();
    bool first = true;
    long total = 0;
    long per = std::max<long>(1, opt.max_evals / long(std::max<std::size_t>(1, starts.size())));
    for (const Vec& s : starts) {
        PatternSearchOptions o = opt;
        o.max_evals = per;
        PatternSearchResult r = pattern_search(f, s, o, feasible);
        total += r.evals;
        if (first || r.f < best.f) {
            best = std::move(r);
            first = false;
        }
    }
    best.evals = total;
    return best;
}

}  // namespace smd
