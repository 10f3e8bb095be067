#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace smd {

// Streaming mean/variance (Welford) with order-deterministic merging.
struct MeanVar {
    long long n = 0;
    double mean = 0.0;
    double m2 = 0.0;

    void add(double x) {
        ++n;
        double d = x - mean;
        mean += d / double(n);
        m2 += d * (x - mean);
    }

    void merge(const MeanVar& o) {
        if (o.n == 0) return;
        if (n == 0) {
            *this = o;
            return;
        }
        double d = o.mean - mean;
        long long nn = n + o.n;
        mean += d * double(o.n) / double(nn);
        m2 += o.m2 + d * d * double(n) * double(o.n) / double(nn);
        n = nn;
    }

    double variance() const { return n > 1 ? m2 / double(n - 1) : 0.0; }
    double stderr_mean() const { return n > 1 ? std::sqrt(variance() / double(n)) : 0.0; }
};

// Least-squares slope of log(y) against log(x); ignores non-positive pairs.
inline double loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    std::size_t m = 0;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) continue;
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
        ++m;
    }
    if (m < 2) return 0.0;
    double denom = double(m) * sxx - sx * sx;
    return denom != 0.0 ? (double(m) * sxy - sx * sy) / denom : 0.0;
}

}  // namespace smd
