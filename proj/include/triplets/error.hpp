#ifndef TRIPLETS_ERROR_HPP
#define TRIPLETS_ERROR_HPP

#include <stdexcept>
#include <string>

namespace triplets
{

enum class ErrorCode
{
    InvalidArgument,
    OutOfRange,
    NonHermitianInput,
    NegativeRadicand,
    InvalidLength,
    ZeroDispersion,
    NoSignChange,
    ZeroKernel,
    EmptyFilter,
    InvalidDensity,
    GridMismatch,
    NotNormalized,
    ConfigError,
    IoError,
};

const char *error_code_name(ErrorCode code);

// Every failure raised by the library carries one of the codes above so the
// C API can map it onto a status value without string matching.
class Error : public std::runtime_error
{
public:
    Error(ErrorCode code, const std::string &what)
        : std::runtime_error(std::string(error_code_name(code)) + ": " + what), code_(code)
    {
    }

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace triplets

#endif // TRIPLETS_ERROR_HPP
