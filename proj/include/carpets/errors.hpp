#pragma once

#include <stdexcept>
#include <string>

namespace carpets {

// Error categories. The CLI maps these onto exit codes: configuration
// problems (bad inputs that define the model) exit 2, precondition and
// resource-cap violations exit 3, everything else exit 1.
enum class errc {
    bad_grid,
    bad_digits,
    bad_weights,
    bad_config,
    bad_scale,
    bad_scales,
    bad_range,
    code_too_short,
    too_deep,
    not_in_set,
    bad_epsilon,
    bad_delta,
    lambda_out_of_range,
    window_empty,
    state_space_too_large,
    degenerate_sigma,
    io_error,
    internal,
};

class Error : public std::runtime_error {
public:
    Error(errc code, const std::string& message)
        : std::runtime_error(message), code_(code) {}

    errc code() const noexcept { return code_; }

    /// true for errors caused by an invalid model definition (config-level)
    bool is_config() const noexcept {
        switch (code_) {
        case errc::bad_grid:
        case errc::bad_digits:
        case errc::bad_weights:
        case errc::bad_config:
            return true;
        default:
            return false;
        }
    }

    /// true for violated operation preconditions or resource caps
    bool is_precondition() const noexcept {
        switch (code_) {
        case errc::bad_scale:
        case errc::bad_scales:
        case errc::bad_range:
        case errc::code_too_short:
        case errc::too_deep:
        case errc::not_in_set:
        case errc::bad_epsilon:
        case errc::bad_delta:
        case errc::lambda_out_of_range:
        case errc::window_empty:
        case errc::state_space_too_large:
        case errc::degenerate_sigma:
            return true;
        default:
            return false;
        }
    }

private:
    errc code_;
};

[[noreturn]] inline void raise(errc code, const std::string& message) {
    throw Error(code, message);
}

} // namespace carpets
