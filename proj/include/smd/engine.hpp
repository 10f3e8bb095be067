#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smd/common.hpp"
#include "smd/mirror.hpp"
#include "smd/objective.hpp"

namespace smd {

// Step-size schedules. Steps are 1-indexed: at(k) is the step size used to
// produce iterate k from iterate k-1.
struct StepSchedule {
    enum class Kind { Constant, Map, Halving };
    Kind kind = Kind::Constant;
    double eta = 0.1;  // Constant
    long n0 = 1;       // Map: eta_k = 1/(k + n0)
    long k0 = 1;       // Halving: eta_k = 2/(k0 + k), global index starts at k0

    static StepSchedule constant(double eta);
    static StepSchedule map(long n0);
    static StepSchedule halving(long k0);

    double at(long k) const;
};

// Composite-term specification for the proximal step. Only pairs with a
// closed-form solution under the matching mirror are supported.
struct ProxSpec {
    enum class Kind { None, Box, L1, Simplex };
    Kind kind = Kind::None;
    double lo = 0.0, hi = 0.0;  // Box
    double lambda = 0.0;        // L1

    static ProxSpec none() { return {}; }
    static ProxSpec box(double lo, double hi);
    static ProxSpec l1(double lambda);
    static ProxSpec simplex();
};

struct RunConfig {
    const MirrorMap* mirror = nullptr;
    const StochasticObjective* objective = nullptr;
    StepSchedule schedule;
    long horizon = 0;
    std::uint64_t seed = 0;
    Vec x0;
    long record_every = 1;
    ProxSpec prox;
};

struct TraceRow {
    long k = 0;
    std::optional<double> eta;
    std::optional<SampleId> sample;
    Vec x;
    std::optional<double> bregman_to_opt;  // D_h(x_star, x_k)
    std::optional<double> f_gap;           // f(x_k) - f(x_star)
};

struct Trace {
    std::vector<TraceRow> rows;
    bool aborted = false;
    long abort_step = -1;
    std::string abort_reason;
    // Mean-coordinate view per recorded row (gaussian mirror only).
    std::vector<Vec> mean_coords;
};

// One stochastic step: grad h(x+) = grad h(x) - eta grad f_xi(x).
Vec smd_step(const MirrorMap& map, const StochasticObjective& obj, const Vec& x, double eta,
             const SampleId& xi);

// Deterministic step with the mean gradient.
Vec det_step(const MirrorMap& map, const StochasticObjective& obj, const Vec& x, double eta);

struct ProxStepResult {
    Vec x;
    Vec omega;  // realized subgradient of the regularizer at x
};

// Proximal step: minimizes eta [<grad f_xi(x), u> + g(u)] + D_h(u, x).
// Returns the new point and the subgradient omega in dg(x+) satisfying
// grad h(x+) + eta omega = grad h(x) - eta grad f_xi(x).
ProxStepResult prox_smd_step(const MirrorMap& map, const StochasticObjective& obj,
                             const ProxSpec& prox, const Vec& x, double eta, const SampleId& xi);

// Runs the iteration, recording every record_every steps (step 0 and the
// final step always). Deterministic given the seed. A DualRangeError stops
// the run cleanly with the partial trace.
Trace run(const RunConfig& config);

// CSV: k,eta,sample,x_0..x_{d-1},bregman_to_opt,f_gap with empty fields for
// unknown quantities; doubles round-trip exactly.
void write_trace_csv(const Trace& trace, int dim, std::ostream& out);

}  // namespace smd
