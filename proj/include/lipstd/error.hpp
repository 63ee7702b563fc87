#pragma once

#include <stdexcept>
#include <string>

namespace lipstd {

enum class errc {
    invalid_parameter,
    support,
    invalid_scale,
    unsupported_family,
    degenerate_column,
    degenerate_range,
    degenerate_normalization,
    infeasible_target,
    no_root,
    step_underflow,
    invalid_category,
    invalid_count,
    parse,
    metadata_mismatch,
    divergence,
    io,
    usage,
};

/// All recoverable failures surface as Error; the code drives CLI exit status.
class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& msg) : std::runtime_error(msg), code_(code) {}
    errc code() const noexcept { return code_; }

private:
    errc code_;
};

/// Process exit classes: 1 usage, 2 data, 3 numeric.
inline int exit_class(errc c) {
    switch (c) {
        case errc::usage:
            return 1;
        case errc::invalid_scale:
        case errc::infeasible_target:
        case errc::no_root:
        case errc::step_underflow:
        case errc::divergence:
            return 3;
        default:
            return 2;
    }
}

}  // namespace lipstd
