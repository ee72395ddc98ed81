#include "mcam/error.hpp"

namespace mcam {

const char* to_string(Errc code) noexcept {
    switch (code) {
        case Errc::unsupported_precision: return "unsupported precision";
        case Errc::invalid_range: return "invalid range";
        case Errc::level_out_of_range: return "level out of range";
        case Errc::symbol_out_of_range: return "symbol out of range";
        case Errc::width_mismatch: return "bit-width mismatch";
        case Errc::topology_mismatch: return "topology mismatch";
        case Errc::length_mismatch: return "length mismatch";
        case Errc::row_out_of_range: return "row out of range";
        case Errc::empty_scenario: return "empty scenario";
        case Errc::invalid_geometry: return "invalid geometry";
        case Errc::invalid_constants: return "invalid constants";
        case Errc::calibration_failure: return "calibration failure";
        case Errc::degenerate_vector: return "degenerate vector";
        case Errc::dimension_mismatch: return "dimension mismatch";
        case Errc::empty_class: return "empty class";
        case Errc::untrained_model: return "untrained model";
        case Errc::malformed_input: return "malformed input";
        case Errc::unknown_label: return "unknown label";
        case Errc::io_error: return "i/o error";
        case Errc::config_error: return "configuration error";
    }
    return "unknown error";
}

}  // namespace mcam
