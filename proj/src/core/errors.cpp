#include "errors.hpp"

namespace lf {

const char* status_name(Status s) {
    switch (s) {
    case Status::Ok: return "Ok";
    case Status::InvalidArgument: return "InvalidArgument";
    case Status::DegenerateData: return "DegenerateData";
    case Status::OutsideBigCell: return "OutsideBigCell";
    case Status::NotInSu2: return "NotInSu2";
    case Status::NotUnitary: return "NotUnitary";
    case Status::SingularLoop: return "SingularLoop";
    case Status::OrderTooLow: return "OrderTooLow";
    case Status::WrongStratum: return "WrongStratum";
    case Status::NotSingular: return "NotSingular";
    case Status::Overflow: return "Overflow";
    case Status::Io: return "Io";
    case Status::ZeroTransverseDerivative: return "ZeroTransverseDerivative";
    case Status::NotOnCurve: return "NotOnCurve";
    case Status::SingularPoint: return "SingularPoint";
    case Status::FocalDistance: return "FocalDistance";
    }
    return "Unknown";
}

}  // namespace lf
