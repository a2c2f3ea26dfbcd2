#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace realdyn {

enum class ErrorCode {
    InvalidParameter,
    Unsupported,
    EndpointDegenerate,
    RootFindingFailed,
    RefinementFailed,
    InvalidDegree,
    KindMismatch,
    InvalidMarking,
    SpecError,
    ParseError,
};

std::string_view to_string(ErrorCode code);

/// Validation errors are caller mistakes; everything else is a numerical failure.
bool is_validation_error(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what);
    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace realdyn
