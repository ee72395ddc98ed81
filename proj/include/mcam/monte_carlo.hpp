#pragma once

#include <cstdint>
#include <vector>

#include "mcam/array.hpp"
#include "mcam/device.hpp"

namespace mcam {

struct McScenario {
    std::vector<int> stored;
    std::vector<int> query;
    bool expected_match = false;
};

// Hardest word-level decision: a full-width word whose query differs from the
// stored word in exactly one cell, and only by one level, so the lone
// conducting device sees half a level spacing of overdrive.
McScenario worst_case_scenario(const ThresholdLadder& ladder, std::size_t cols);
// Full-width exact match; every device must stay off.
McScenario exact_match_scenario(const ThresholdLadder& ladder, std::size_t cols);

struct McConfig {
    Topology topology = Topology::nor_1t;
    ThresholdLadder ladder;
    McScenario scenario;
};

struct McSummary {
    int trials = 0;
    int decision_errors = 0;     // trials whose reported match != expected
    double error_rate = 0.0;
    std::int64_t device_flips = 0;  // devices whose on/off state differs from nominal
    std::int64_t devices = 0;
    double device_flip_rate = 0.0;
    double min_margin = 0.0;
    double mean_margin = 0.0;
    double margin_stddev = 0.0;
    std::vector<double> margins;  // per trial, in trial order
};

// Each trial re-programs every device from its own seed stream derived from
// (variation.seed, trial index), so trials are independent of execution order.
McSummary run_monte_carlo(const McConfig& config, const VariationModel& variation, int trials);

}  // namespace mcam
