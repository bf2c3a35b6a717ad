#pragma once

#include <stdexcept>
#include <string>

namespace liecov {

struct DimensionMismatch : std::invalid_argument {
    explicit DimensionMismatch(const std::string& what) : std::invalid_argument(what) {}
};

struct MalformedInput : std::runtime_error {
    explicit MalformedInput(const std::string& what) : std::runtime_error(what) {}
};

struct SamplingExhausted : std::runtime_error {
    explicit SamplingExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct DegreeBoundExceeded : std::runtime_error {
    explicit DegreeBoundExceeded(const std::string& what) : std::runtime_error(what) {}
};

struct RankMismatch : std::logic_error {
    explicit RankMismatch(const std::string& what) : std::logic_error(what) {}
};

struct NotRegular : std::invalid_argument {
    explicit NotRegular(const std::string& what) : std::invalid_argument(what) {}
};

struct NotCovariant : std::invalid_argument {
    explicit NotCovariant(const std::string& what) : std::invalid_argument(what) {}
};

struct NotInModule : std::logic_error {
    explicit NotInModule(const std::string& what) : std::logic_error(what) {}
};

struct NotTangent : std::invalid_argument {
    std::string defect_component;  // text form of the first nonzero delta-component
    NotTangent(const std::string& what, std::string defect)
        : std::invalid_argument(what), defect_component(std::move(defect)) {}
};

struct NotPointwiseFixed : std::invalid_argument {
    explicit NotPointwiseFixed(const std::string& what) : std::invalid_argument(what) {}
};

struct NotExpressible : std::runtime_error {
    explicit NotExpressible(const std::string& what) : std::runtime_error(what) {}
};

struct ConsistencyFailure : std::logic_error {
    explicit ConsistencyFailure(const std::string& what) : std::logic_error(what) {}
};

struct RetryBudgetExhausted : std::runtime_error {
    explicit RetryBudgetExhausted(const std::string& what) : std::runtime_error(what) {}
};

struct NoFactorization : std::runtime_error {
    explicit NoFactorization(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace liecov
