#pragma once

#include <Eigen/Dense>

#include <cstddef>
#include <stdexcept>
#include <string>
#include <vector>

namespace toric {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

enum class ErrorCode {
    Parse,
    InvalidArgument,
    DimensionMismatch,
    NotWeaklyReversible,
    NotReversible,
    RateOutOfBand,
    StepSizeUnderflow,
    InvalidHorizon,
    EmptyTrajectory,
    SingularSystem,
    NoComplexBalance,
    NewtonDivergence,
    DimensionTooLarge,
    CoincidentVertices,
    TieOnProjection,
    OrderingMismatch,
    BandsOverlap,
    InfeasibleAdjustment,
};

const char* to_string(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

class ParseError : public Error {
public:
    enum class Kind { Syntax, UnknownSpecies, NonpositiveRate, DuplicateDefinition };

    ParseError(Kind kind, std::size_t line, std::size_t column, const std::string& msg)
        : Error(ErrorCode::Parse, "line " + std::to_string(line) + ", column " +
                                      std::to_string(column) + ": " + msg),
          kind_(kind), line_(line), column_(column) {}

    Kind kind() const noexcept { return kind_; }
    std::size_t line() const noexcept { return line_; }
    std::size_t column() const noexcept { return column_; }

private:
    Kind kind_;
    std::size_t line_;
    std::size_t column_;
};

inline void require_dimension(Eigen::Index got, Eigen::Index want, const char* what)
{
    if (got != want) {
        throw Error(ErrorCode::DimensionMismatch, std::string(what) + ": expected " +
                                                      std::to_string(want) + ", got " +
                                                      std::to_string(got));
    }
}

inline Vector to_vector(const std::vector<double>& v)
{
    return Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
}

inline std::vector<double> to_std(const Vector& v)
{
    return {v.data(), v.data() + v.size()};
}

} // namespace toric
