#pragma once

#include <stdexcept>
#include <string>

namespace resnmtf {

/// Broad failure category; the CLI maps these onto exit codes.
enum class ErrorCategory { usage, data, numerical };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory category, const std::string& what)
        : std::runtime_error(what), category_(category) {}

    ErrorCategory category() const noexcept { return category_; }

private:
    ErrorCategory category_;
};

#define RESNMTF_DEFINE_ERROR(Name, Category)                                  \
    class Name : public Error {                                               \
    public:                                                                   \
        explicit Name(const std::string& what)                                \
            : Error(ErrorCategory::Category, #Name ": " + what) {}            \
    };

// data errors
RESNMTF_DEFINE_ERROR(NegativeEntry, data)
RESNMTF_DEFINE_ERROR(EmptyView, data)
RESNMTF_DEFINE_ERROR(RankDeficient, data)
RESNMTF_DEFINE_ERROR(DimensionMismatch, data)
RESNMTF_DEFINE_ERROR(InvalidWeights, data)
RESNMTF_DEFINE_ERROR(ZeroNormView, data)
RESNMTF_DEFINE_ERROR(ParseError, data)
RESNMTF_DEFINE_ERROR(RaggedRows, data)
RESNMTF_DEFINE_ERROR(InfeasibleSplit, data)
RESNMTF_DEFINE_ERROR(LengthMismatch, data)
RESNMTF_DEFINE_ERROR(EmptySample, data)
RESNMTF_DEFINE_ERROR(EmptyBicluster, data)
RESNMTF_DEFINE_ERROR(DegenerateClustering, data)
RESNMTF_DEFINE_ERROR(DegenerateSubsample, data)
RESNMTF_DEFINE_ERROR(InsufficientRepetitions, data)

// configuration errors
RESNMTF_DEFINE_ERROR(InvalidConfig, usage)

// numerical failures
RESNMTF_DEFINE_ERROR(NonFinite, numerical)

#undef RESNMTF_DEFINE_ERROR

}  // namespace resnmtf
