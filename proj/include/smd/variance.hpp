#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "smd/common.hpp"
#include "smd/exec.hpp"
#include "smd/mirror.hpp"
#include "smd/objective.hpp"

namespace smd {

enum class EstimatorMode { ExactFinite, MonteCarlo, Quadrature };

// How expectations over the sample variable are evaluated. Monte Carlo uses
// per-sample streams split from `seed`, so draws are shared across step
// sizes and across coupled evaluations (common random numbers).
struct FEtaEstimator {
    EstimatorMode mode = EstimatorMode::ExactFinite;
    double eta = 0.1;
    long n_samples = 10000;  // MonteCarlo; >= 100
    int n_nodes = 64;        // Quadrature; >= 8
    std::uint64_t seed = 0;
    ExecPolicy exec = ExecPolicy::Serial;
};

struct ValueWithError {
    double value = 0.0;
    double stderr_ = 0.0;  // zero for exact and quadrature modes
    long skipped = 0;      // Monte Carlo samples dropped on dual-range failures
};

// E_xi g(xi) under the estimator mode.
ValueWithError expect_over_samples(const FEtaEstimator& est, const StochasticObjective& obj,
                                   const std::function<double(const SampleId&)>& g);

// f_eta(x) = f(x) - (1/eta) E D_h(x, x+(eta, xi))
ValueWithError f_eta_at(const FEtaEstimator& est, const MirrorMap& map,
                        const StochasticObjective& obj, const Vec& x);

struct MinimizerSettings {
    double tol = 1e-7;
    long max_evals = 100000;
    std::optional<Vec> x_init;  // defaults to the objective optimum
};

struct MinimizeFEtaResult {
    Vec x_eta;
    double f_eta_star = 0.0;
    double stderr_ = 0.0;
    bool hit_boundary = false;
    bool converged = false;
    long evals = 0;
};

// Derivative-free minimization of f_eta, restarted from x_init and from the
// optimum when known. Desk-scale dimensions only (d <= 8).
MinimizeFEtaResult minimize_f_eta(const FEtaEstimator& est, const MirrorMap& map,
                                  const StochasticObjective& obj, const Vec& x_init, double tol);

struct SigmaStarResult {
    double value = 0.0;   // (f(x_star) - f_eta_star) / eta
    double stderr_ = 0.0;
    Vec x_eta;
    bool hit_boundary = false;
};

SigmaStarResult sigma_star_sq(const MirrorMap& map, const StochasticObjective& obj, double eta,
                              const FEtaEstimator& est, const MinimizerSettings& settings);

// (1/eta) (f(x_star) - min_x E f_xi(x+)); requires eta <= 1/L.
ValueWithError bound_maml(const MirrorMap& map, const StochasticObjective& obj, double eta,
                          const FEtaEstimator& est, const MinimizerSettings& settings);

// (f(x_star) - E f_xi(x_star^xi)) / eta; finite support with known
// per-sample optima.
double bound_function_diff(const StochasticObjective& obj, double eta);

// (1/eta^2) E D_h(det step at x_eta, stochastic step at x_eta), coupled on
// the same sample.
ValueWithError bound_grad_at_opt(const MirrorMap& map, const StochasticObjective& obj, double eta,
                                 const Vec& x_eta, const FEtaEstimator& est);

// (1/(2 eta^2)) E D_{h*}(grad h(x_eta) - 2 eta grad f_xi(x_star), grad h(x_eta));
// requires eta < 1/(2L).
ValueWithError bound_deh(const MirrorMap& map, const StochasticObjective& obj, double eta,
                         const Vec& x_eta, const FEtaEstimator& est);

// max over the grid of (1/eta^2) E [D_h(x+, det) + D_h(det, x+)]; a lower
// bound of the supremum, which is typically infinite.
ValueWithError sigma_sym_on_grid(const MirrorMap& map, const StochasticObjective& obj, double eta,
                                 const std::vector<Vec>& grid, const FEtaEstimator& est);

// (1/eta) max over the grid of { (1/eta) E D_h(x, x+) - D_f(x_star, x) }.
ValueWithError sigma_tilde_on_grid(const MirrorMap& map, const StochasticObjective& obj,
                                   double eta, const std::vector<Vec>& grid,
                                   const FEtaEstimator& est);

// (1/2) E || grad f_xi(x_star) ||^2 in the metric inverse-Hessian of h at
// x_star: the small-step limit of sigma_star_sq.
ValueWithError limit_variance(const MirrorMap& map, const StochasticObjective& obj,
                              const FEtaEstimator& est);

struct PhiReport {
    bool monotone = true;
    double max_drop = 0.0;           // largest decrease between consecutive etas
    double max_slope_rel_err = 0.0;  // finite differences vs (1/eta^2) D_h(x+, x)
    bool slope_ok = true;
    bool pass() const { return monotone && slope_ok; }
};

// phi(eta) = D_h(x, x+(eta, xi)) / eta along an increasing eta list.
PhiReport phi_monotonicity_check(const MirrorMap& map, const StochasticObjective& obj,
                                 const Vec& x, const SampleId& xi,
                                 const std::vector<double>& eta_list,
                                 double slope_rel_tol = 1e-4);

struct VarianceReportRow {
    double eta = 0.0;
    std::string quantity;
    double value = 0.0;
    double stderr_ = 0.0;
    std::string flag;  // exact | mc | quadrature | grid-lower-bound | boundary-hit
};

struct VarianceReport {
    std::vector<VarianceReportRow> rows;
};

// Runs sigma_star_sq and every applicable bound for each step size.
VarianceReport build_variance_report(const MirrorMap& map, const StochasticObjective& obj,
                                     const std::vector<double>& etas, FEtaEstimator est,
                                     const MinimizerSettings& settings,
                                     const std::vector<Vec>& grid);

// CSV: eta,quantity,value,stderr,flag
void write_variance_csv(const VarianceReport& report, std::ostream& out);

}  // namespace smd
