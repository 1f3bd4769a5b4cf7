#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace vizblend {

enum class ErrorCode {
    malformed_csv,
    duplicate_attribute_name,
    unknown_attribute,
    invalid_spec,
    missing_axes,
    illegal_change,
    stale_revision,
    unknown_rule,
    out_of_domain,
    wrong_vis_type,
    channel_unbound,
    required_channel,
    empty_selection,
    invalid_demonstration,
    unknown_category,
    unknown_recommendation,
    expired,
    nothing_to_undo,
    nothing_to_redo,
    unknown_session,
    invalid_request,
    script_error,
};

// Wire name, e.g. "StaleRevision".
std::string_view to_string(ErrorCode code);
// Inverse of to_string; InvalidRequest for unknown names.
ErrorCode parse_error_code(std::string_view name);
// 404 unknown ids, 409 StaleRevision, 400 malformed requests, 422 otherwise.
int http_status(ErrorCode code);

class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    ErrorCode code() const noexcept { return code_; }

private:
    ErrorCode code_;
};

}  // namespace vizblend
