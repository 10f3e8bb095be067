#pragma once

#include <stdexcept>
#include <string>

namespace smd {

struct DomainError : std::runtime_error {
    explicit DomainError(const std::string& what) : std::runtime_error(what) {}
};

struct DualRangeError : std::runtime_error {
    double eta = 0.0;
    explicit DualRangeError(const std::string& what, double eta_ = 0.0)
        : std::runtime_error(what), eta(eta_) {}
};

struct NonFinite : std::runtime_error {
    explicit NonFinite(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownMeanGradient : std::runtime_error {
    explicit UnknownMeanGradient(const std::string& what) : std::runtime_error(what) {}
};

struct UnknownPerSampleOpt : std::runtime_error {
    explicit UnknownPerSampleOpt(const std::string& what) : std::runtime_error(what) {}
};

struct UnsupportedProxPair : std::runtime_error {
    explicit UnsupportedProxPair(const std::string& what) : std::runtime_error(what) {}
};

struct StepSizeTooLarge : std::runtime_error {
    explicit StepSizeTooLarge(const std::string& what) : std::runtime_error(what) {}
};

struct SingularHessian : std::runtime_error {
    explicit SingularHessian(const std::string& what) : std::runtime_error(what) {}
};

struct DegenerateVariance : std::runtime_error {
    explicit DegenerateVariance(const std::string& what) : std::runtime_error(what) {}
};

struct QuadratureUnderflow : std::runtime_error {
    explicit QuadratureUnderflow(const std::string& what) : std::runtime_error(what) {}
};

struct ConfigError : std::runtime_error {
    int line = 0;
    std::string field;
    ConfigError(const std::string& what, int line_ = 0, std::string field_ = "")
        : std::runtime_error(what), line(line_), field(std::move(field_)) {}
};

}  // namespace smd
