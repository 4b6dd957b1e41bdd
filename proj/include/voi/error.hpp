#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace voi {

enum class ErrorCode {
    invalid_model,      // model fails validation or a model file is malformed
    unknown_variable,
    unknown_outcome,
    already_observed,
    invalid_argument,
    impossible_evidence,  // observations with zero probability under both hypotheses
    limit_exceeded,
    domain_error,         // e.g. certain equivalent outside the utility range
};

std::string_view error_code_name(ErrorCode code) noexcept;

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

} // namespace voi
