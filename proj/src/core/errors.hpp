#pragma once

#include <stdexcept>
#include <string>

namespace lf {

enum class Status {
    Ok = 0,
    InvalidArgument,
    DegenerateData,
    OutsideBigCell,
    NotInSu2,
    NotUnitary,
    SingularLoop,
    OrderTooLow,
    WrongStratum,
    NotSingular,
    Overflow,
    Io,
    ZeroTransverseDerivative,
    NotOnCurve,
    SingularPoint,
    FocalDistance,
};

const char* status_name(Status s);

class Error : public std::runtime_error {
public:
    Error(Status code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    Status code() const { return code_; }

private:
    Status code_;
};

}  // namespace lf
