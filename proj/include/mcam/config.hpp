#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <string>

#include "mcam/array.hpp"
#include "mcam/energy.hpp"

namespace mcam {

// Run configuration, persisted as INI-style text:
//
//   [ladder]       bits, vth_min, vth_max, v_sl
//   [variation]    sigma_vth, seed
//   [array]        topology, rows, cols
//   [capacitance]  c_d_p, c_fefet, c_nmos, c_parasitic
//   [timing]       v_dd, v_ref, r_discharge, t_precharge, t_stage,
//                  e_sl_per_on_cell, t_sense
//   [priors]       v_dd, v_ref, c_d_p, c_fefet, c_nmos, t_precharge, t_sense
//   [montecarlo]   trials, cols, scenario (worst_case | exact_match)
//   [sweep]        rows, cells, topology, queries, workload (random | one_mismatch)
//   [hdc]          dataset, data_dir, bits, dim, epochs, learning_rate,
//                  similarity, topology
//   [run]          seed
//
// Units are SI (V, F, ohm, s, J). Unknown sections or keys are rejected.
// Every section is optional; missing keys keep their defaults.
struct RunConfig {
    struct Ladder {
        int bits = LadderDefaults::bits;
        double vth_min = LadderDefaults::vth_min;
        double vth_max = LadderDefaults::vth_max;
        double v_sl = LadderDefaults::v_sl;
    } ladder;

    VariationModel variation{0.054, 1};

    struct Array {
        Topology topology = Topology::nor_1t;
        std::size_t rows = 1;
        std::size_t cols = 32;
    } array;

    Calibration constants = default_calibration();
    CalibrationPriors priors;

    struct MonteCarlo {
        int trials = 100;
        std::size_t cols = 32;
        std::string scenario = "worst_case";
    } montecarlo;

    struct Sweep {
        std::string rows = "16:128";
        std::string cells = "32";
        Topology topology = Topology::nor_1t;
        int queries = 64;
        std::string workload = "random";
    } sweep;

    struct Hdc {
        std::string dataset = "isolet";
        std::string data_dir = "data/isolet";
        int bits = 3;
        int dim = 1024;
        int epochs = 20;
        double learning_rate = 0.03;
        std::string similarity = "all";
        Topology topology = Topology::nor_1t;
    } hdc;

    std::uint64_t seed = 1;

    ThresholdLadder make_ladder() const;
    // Throws Error(config_error) describing the first invalid field.
    void validate() const;
};

RunConfig read_config(std::istream& in);
RunConfig read_config_file(const std::filesystem::path& path);
void write_config(std::ostream& out, const RunConfig& config);

// Only the [capacitance] and [timing] sections, for calibration output.
void write_constants_section(std::ostream& out, const Calibration& constants);

// Environment variable naming a default config file.
inline constexpr const char* kConfigEnvVar = "MCAM_CONFIG";

}  // namespace mcam
