#pragma once

#include <functional>

#include "smd/common.hpp"

namespace smd {

struct PatternSearchOptions {
    double tol = 1e-7;          // stop when the poll radius falls below this
    long max_evals = 100000;    // total objective evaluation budget
    double initial_step = 0.25;
    double shrink = 0.5;
};

struct PatternSearchResult {
    Vec x;
    double f = 0.0;
    bool converged = false;
    long evals = 0;
};

// Compass (coordinate pattern) search with shrinking radius. Points where
// feasible() is false are skipped. Suitable for smooth objectives in a
// handful of dimensions; no gradients required.
PatternSearchResult pattern_search(const std::function<double(const Vec&)>& f, Vec x0,
                                   const PatternSearchOptions& opt,
                                   const std::function<bool(const Vec&)>& feasible = nullptr);

// Runs pattern_search from each start and returns the best result; the
// evaluation budget is shared across starts.
PatternSearchResult pattern_search_multi(const std::function<double(const Vec&)>& f,
                                         const std::vector<Vec>& starts,
                                         const PatternSearchOptions& opt,
                                         const std::function<bool(const Vec&)>& feasible = nullptr);

}  // namespace smd
