#include "realdyn/error.hpp"

namespace realdyn {

std::string_view to_string(ErrorCode code)
{
    switch (code) {
    case ErrorCode::InvalidParameter: return "InvalidParameter";
    case ErrorCode::Unsupported: return "Unsupported";
    case ErrorCode::EndpointDegenerate: return "EndpointDegenerate";
    case ErrorCode::RootFindingFailed: return "RootFindingFailed";
    case ErrorCode::RefinementFailed: return "RefinementFailed";
    case ErrorCode::InvalidDegree: return "InvalidDegree";
    case ErrorCode::KindMismatch: return "KindMismatch";
    case ErrorCode::InvalidMarking: return "InvalidMarking";
    case ErrorCode::SpecError: return "SpecError";
    case ErrorCode::ParseError: return "ParseError";
    }
    return "Unknown";
}

bool is_validation_error(ErrorCode code)
{
    return code != ErrorCode::RootFindingFailed && code != ErrorCode::RefinementFailed;
}

Error::Error(ErrorCode code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code)
{
}

}  // namespace realdyn
