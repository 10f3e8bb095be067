#include "smd/engine.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "smd/csvio.hpp"
#include "smd/errors.hpp"
#include "smd/rng.hpp"

namespace smd {

StepSchedule StepSchedule::constant(double eta) {
    if (!(eta > 0.0) || eta > 1.0) throw DomainError("schedule: constant eta must be in (0,1]");
    StepSchedule s;
    s.kind = Kind::Constant;
    s.eta = eta;
    return s;
}

StepSchedule StepSchedule::map(long n0) {
    if (n0 < 1) throw DomainError("schedule: map requires n0 >= 1");
    StepSchedule s;
    s.kind = Kind::Map;
    s.n0 = n0;
    return s;
}

StepSchedule StepSchedule::halving(long k0) {
    if (k0 < 1) throw DomainError("schedule: halving requires k0 >= 1");
    StepSchedule s;
    s.kind = Kind::Halving;
    s.k0 = k0;
    return s;
}

double StepSchedule::at(long k) const {
    switch (kind) {
        case Kind::Constant:
            return eta;
        case Kind::Map:
            return 1.0 / double(k + n0);
        case Kind::Halving:
            return 2.0 / double(k0 + k);
    }
    return eta;
}

ProxSpec ProxSpec::box(double lo, double hi) {
    if (!(lo < hi)) throw DomainError("prox: box requires lo < hi");
    ProxSpec p;
    p.kind = Kind::Box;
    p.lo = lo;
    p.hi = hi;
    return p;
}

ProxSpec ProxSpec::l1(double lambda) {
    if (!(lambda > 0.0)) throw DomainError("prox: l1 requires lambda > 0");
    ProxSpec p;
    p.kind = Kind::L1;
    p.lambda = lambda;
    return p;
}

ProxSpec ProxSpec::simplex() {
    ProxSpec p;
    p.kind = Kind::Simplex;
    return p;
}

namespace {

Vec dual_point(const MirrorMap& map, const Vec& x, double eta, const Vec& g) {
    Vec p = map.grad(x);
    for (std::size_t i = 0; i < p.size(); ++i) p[i] -= eta * g[i];
    return p;
}

Vec pull_back(const MirrorMap& map, const Vec& p, double eta) {
    if (!map.in_dual_range(p))
        throw DualRangeError("step left the range of grad " + map.name +
                                 " (eta = " + format_double(eta) + ")",
                             eta);
    Vec next = map.conj_grad(p);
    if (!all_finite(next)) throw NonFinite("step produced a non-finite iterate");
    return next;
}

}  // namespace

Vec smd_step(const MirrorMap& map, const StochasticObjective& obj, const Vec& x, double eta,
             const SampleId& xi) {
    if (!(eta > 0.0)) throw DomainError("smd_step: eta must be positive");
    if (!map.in_domain(x)) throw DomainError("smd_step: x outside interior of " + map.name);
    return pull_back(map, dual_point(map, x, eta, obj.grad_at(xi, x)), eta);
}

Vec det_step(const MirrorMap& map, const StochasticObjective& obj, const Vec& x, double eta) {
    if (!obj.mean_grad) throw UnknownMeanGradient("det_step: " + obj.name + " has no mean gradient");
    if (!map.in_domain(x)) throw DomainError("det_step: x outside interior of " + map.name);
    return pull_back(map, dual_point(map, x, eta, obj.mean_grad(x)), eta);
}

ProxStepResult prox_smd_step(const MirrorMap& map, const StochasticObjective& obj,
                             const ProxSpec& prox, const Vec& x, double eta, const SampleId& xi) {
    if (prox.kind == ProxSpec::Kind::None)
        return {smd_step(map, obj, x, eta, xi), Vec(x.size(), 0.0)};

    const bool euclid = map.name == "euclidean";
    const bool entropy = map.name == "neg_entropy";
    if (!((euclid && (prox.kind == ProxSpec::Kind::Box || prox.kind == ProxSpec::Kind::L1)) ||
          (entropy && prox.kind == ProxSpec::Kind::Simplex)))
        throw UnsupportedProxPair("prox_smd_step: unsupported (mirror, regularizer) pair for " +
                                  map.name);

    Vec g = obj.grad_at(xi, x);
    Vec p = dual_point(map, x, eta, g);  // grad h(x) - eta grad f_xi(x)
    Vec next(x.size());

    switch (prox.kind) {
        case ProxSpec::Kind::Box:
            for (std::size_t i = 0; i < next.size(); ++i)
                next[i] = std::clamp(p[i], prox.lo, prox.hi);
            break;
        case ProxSpec::Kind::L1:
            for (std::size_t i = 0; i < next.size(); ++i) {
                double t = eta * prox.lambda;
                next[i] = p[i] > t ? p[i] - t : (p[i] < -t ? p[i] + t : 0.0);
            }
            break;
        case ProxSpec::Kind::Simplex: {
            // multiplicative weights: x+_i proportional to x_i exp(-eta g_i)
            double mx = *std::max_element(p.begin(), p.end());
            double z = 0.0;
            for (std::size_t i = 0; i < next.size(); ++i) {
                next[i] = std::exp(p[i] - mx);
                z += next[i];
            }
            for (auto& v : next) v /= z;
            break;
        }
        case ProxSpec::Kind::None:
            break;
    }
    if (!all_finite(next)) throw NonFinite("prox_smd_step: non-finite iterate");

    // omega from the dual identity grad h(x+) + eta omega = p
    Vec hn = map.grad(next);
    Vec omega(next.size());
    for (std::size_t i = 0; i < omega.size(); ++i) omega[i] = (p[i] - hn[i]) / eta;
    return {std::move(next), std::move(omega)};
}

Trace run(const RunConfig& config) {
    const MirrorMap& map = *config.mirror;
    const StochasticObjective& obj = *config.objective;
    if (config.horizon < 0) throw DomainError("run: horizon must be >= 0");
    if (static_cast<int>(config.x0.size()) != map.dim) throw DomainError("run: x0 dimension mismatch");
    if (!map.in_domain(config.x0)) throw DomainError("run: x0 outside interior of " + map.name);
    const long every = std::max<long>(1, config.record_every);
    const bool gaussian = map.name == "gaussian_log_partition";

    Trace trace;
    Rng rng(config.seed);

    auto record = [&](long k, const Vec& x, std::optional<double> eta,
                      std::optional<SampleId> sample) {
        TraceRow row;
        row.k = k;
        row.eta = eta;
        row.sample = sample;
        row.x = x;
        if (obj.opt) row.bregman_to_opt = bregman(map, *obj.opt, x);
        if (obj.opt && obj.mean_value) row.f_gap = obj.mean_value(x) - obj.mean_value(*obj.opt);
        trace.rows.push_back(std::move(row));
        if (gaussian) trace.mean_coords.push_back(map.grad(x));
    };

    Vec x = config.x0;
    record(0, x, std::nullopt, std::nullopt);
    for (long k = 1; k <= config.horizon; ++k) {
        SampleId xi = obj.sample(rng);
        double eta = config.schedule.at(k);
        try {
            if (config.prox.kind == ProxSpec::Kind::None)
                x = smd_step(map, obj, x, eta, xi);
            else
                x = prox_smd_step(map, obj, config.prox, x, eta, xi).x;
        } catch (const DualRangeError& e) {
            trace.aborted = true;
            trace.abort_step = k;
            trace.abort_reason = e.what();
            break;
        }
        if (k % every == 0 || k == config.horizon) record(k, x, eta, xi);
    }
    // final accepted iterate is always recorded, aborted runs included
    if (trace.aborted && trace.rows.back().k < trace.abort_step - 1)
        record(trace.abort_step - 1, x, std::nullopt, std::nullopt);
    return trace;
}

void write_trace_csv(const Trace& trace, int dim, std::ostream& out) {
    out << "k,eta,sample";
    for (int i = 0; i < dim; ++i) out << ",x_" << i;
    out << ",bregman_to_opt,f_gap\n";
    for (const TraceRow& row : trace.rows) {
        out << row.k << ',';
        if (row.eta) out << format_double(*row.eta);
        out << ',';
        if (row.sample) {
            if (row.sample->finite())
                out << row.sample->index;
            else
                out << format_double(row.sample->draw);
        }
        for (int i = 0; i < dim; ++i) out << ',' << format_double(row.x[std::size_t(i)]);
        out << ',';
        if (row.bregman_to_opt) out << format_double(*row.bregman_to_opt);
        out << ',';
        if (row.f_gap) out << format_double(*row.f_gap);
        out << '\n';
    }
}

}  // namespace smd
