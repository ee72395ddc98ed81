#pragma once

#include <stdexcept>
#include <string>

namespace mcam {

enum class Errc {
    unsupported_precision,
    invalid_range,
    level_out_of_range,
    symbol_out_of_range,
    width_mismatch,
    topology_mismatch,
    length_mismatch,
    row_out_of_range,
    empty_scenario,
    invalid_geometry,
    invalid_constants,
    calibration_failure,
    degenerate_vector,
    dimension_mismatch,
    empty_class,
    untrained_model,
    malformed_input,
    unknown_label,
    io_error,
    config_error,
};

const char* to_string(Errc code) noexcept;

// Every failure raised by the library carries one of the codes above so
// callers (and the CLI exit-code mapping) can dispatch without parsing text.
class Error : public std::runtime_error {
public:
    Error(Errc code, const std::string& what)
        : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

    Errc code() const noexcept { return code_; }

private:
    Errc code_;
};

}  // namespace mcam
