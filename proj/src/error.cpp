#include "vizblend/error.hpp"

namespace vizblend {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::malformed_csv: return "MalformedCsv";
        case ErrorCode::duplicate_attribute_name: return "DuplicateAttributeName";
        case ErrorCode::unknown_attribute: return "UnknownAttribute";
        case ErrorCode::invalid_spec: return "InvalidSpec";
        case ErrorCode::missing_axes: return "MissingAxes";
        case ErrorCode::illegal_change: return "IllegalChange";
        case ErrorCode::stale_revision: return "StaleRevision";
        case ErrorCode::unknown_rule: return "UnknownRule";
        case ErrorCode::out_of_domain: return "OutOfDomain";
        case ErrorCode::wrong_vis_type: return "WrongVisType";
        case ErrorCode::channel_unbound: return "ChannelUnbound";
        case ErrorCode::required_channel: return "RequiredChannel";
        case ErrorCode::empty_selection: return "EmptySelection";
        case ErrorCode::invalid_demonstration: return "InvalidDemonstration";
        case ErrorCode::unknown_category: return "UnknownCategory";
        case ErrorCode::unknown_recommendation: return "UnknownRecommendation";
        case ErrorCode::expired: return "Expired";
        case ErrorCode::nothing_to_undo: return "NothingToUndo";
        case ErrorCode::nothing_to_redo: return "NothingToRedo";
        case ErrorCode::unknown_session: return "UnknownSession";
        case ErrorCode::invalid_request: return "InvalidRequest";
        case ErrorCode::script_error: return "ScriptError";
    }
    return "Unknown";
}

ErrorCode parse_error_code(std::string_view name) {
    for (int i = 0; i <= static_cast<int>(ErrorCode::script_error); ++i) {
        const auto code = static_cast<ErrorCode>(i);
        if (to_string(code) == name) return code;
    }
    return ErrorCode::invalid_request;
}

int http_status(ErrorCode code) {
    switch (code) {
        case ErrorCode::unknown_session:
        case ErrorCode::unknown_recommendation:
        case ErrorCode::unknown_rule:
            return 404;
        case ErrorCode::stale_revision: return 409;
        case ErrorCode::invalid_request:
        case ErrorCode::malformed_csv:
            return 400;
        default: return 422;
    }
}

}  // namespace vizblend
