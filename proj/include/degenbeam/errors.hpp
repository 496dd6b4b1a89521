#ifndef DEGENBEAM_ERRORS_HPP
#define DEGENBEAM_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace degenbeam
{
    enum class ErrorCode
    {
        DegeneracyOutOfRange,
        InvalidProfile,
        GridTooCoarse,
        SingularAtOrigin,
        TimeGridMismatch,
        ZeroEnergyData,
        TooManyModes,
        ControlSynthesisFailed,
        InternalSolverFailure,
        ConfigError,
    };

    /// Errors from bad inputs exit the CLI with code 2, numerical failures with 3.
    enum class ErrorKind
    {
        Validation,
        Numerical,
    };

    constexpr ErrorKind kind_of(ErrorCode code)
    {
        switch (code)
        {
            case ErrorCode::ControlSynthesisFailed:
            case ErrorCode::InternalSolverFailure:
                return ErrorKind::Numerical;
            default:
                return ErrorKind::Validation;
        }
    }

    constexpr const char * name_of(ErrorCode code)
    {
        switch (code)
        {
            case ErrorCode::DegeneracyOutOfRange: return "DegeneracyOutOfRange";
            case ErrorCode::InvalidProfile: return "InvalidProfile";
            case ErrorCode::GridTooCoarse: return "GridTooCoarse";
            case ErrorCode::SingularAtOrigin: return "SingularAtOrigin";
            case ErrorCode::TimeGridMismatch: return "TimeGridMismatch";
            case ErrorCode::ZeroEnergyData: return "ZeroEnergyData";
            case ErrorCode::TooManyModes: return "TooManyModes";
            case ErrorCode::ControlSynthesisFailed: return "ControlSynthesisFailed";
            case ErrorCode::InternalSolverFailure: return "InternalSolverFailure";
            case ErrorCode::ConfigError: return "ConfigError";
        }
        return "UnknownError";
    }

    class Error : public std::runtime_error
    {
    public:
        Error(ErrorCode code, const std::string & what)
            : std::runtime_error(std::string(name_of(code)) + ": " + what), _code(code)
        {
        }

        ErrorCode code() const { return _code; }
        ErrorKind kind() const { return kind_of(_code); }

    private:
        ErrorCode _code;
    };
} // namespace degenbeam

#endif
