#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcam/array.hpp"

namespace mcam {

// Matchline capacitance components (F).
struct CapacitanceSet {
    double c_d_p = 0.0;        // precharge PMOS drain
    double c_fefet = 0.0;      // FeFET drain
    double c_nmos = 0.0;       // access NMOS drain
    double c_parasitic = 0.0;  // ML wiring, per cell

    void validate() const;
};

struct TimingSet {
    double v_dd = 1.0;              // V
    double v_ref = 0.5;             // sense threshold, V
    double r_discharge = 0.0;       // effective ML pull-down, ohm
    double t_precharge = 0.0;       // s
    double t_stage = 0.0;           // NAND stage delay, s
    double e_sl_per_on_cell = 0.0;  // SL load per conducting cell per search, J
    double t_sense = 0.0;           // s

    void validate() const;
};

// Capacitance of a matchline with both FeFET drains attached per cell.
double cml_fecam(int n, const CapacitanceSet& caps);
// Capacitance of a matchline isolated from the FeFETs by one access NMOS per cell.
double cml_nor(int n, const CapacitanceSet& caps);
// One NAND stage node: inverter drains plus one cell of wiring.
double nand_stage_capacitance(const CapacitanceSet& caps);

// Event counts driving the cost model. Real-valued so expected counts can be
// fed in as well as tallies from a search.
struct EventCounts {
    double precharge_events = 0.0;
    double conducting_cells = 0.0;
};

EventCounts counts_of(const SearchReport& r);

struct SearchCost {
    double energy_j = 0.0;
    double latency_s = 0.0;
};

SearchCost nor_search_cost(const EventCounts& events, int n, const CapacitanceSet& caps, const TimingSet& timing);
SearchCost nand_search_cost(const EventCounts& events, int n, const CapacitanceSet& caps, const TimingSet& timing);
SearchCost search_cost(Topology topology, const EventCounts& events, int n, const CapacitanceSet& caps,
                       const TimingSet& timing);

// Fills report.energy_j / report.latency_s from its own event tallies.
void apply_cost(SearchReport& report, Topology topology, int n, const CapacitanceSet& caps, const TimingSet& timing);

// Word energy normalised by the n * bits stored bits it searched.
inline double energy_per_bit(double word_energy_j, int n, int bits) { return word_energy_j / (n * bits); }

// Expected per-word events in steady state when stored words and successive
// queries are independent and uniform over the 2^bits symbols.
EventCounts steady_state_counts(Topology topology, int n, int bits);

struct CalibrationTarget {
    Topology topology = Topology::nor_1t;
    int cells = 32;
    int bits = 3;
    double energy_per_bit_j = 0.0;
    double latency_s = 0.0;
    EventCounts events;  // per word search
};

// Constants the fit does not solve for.
struct CalibrationPriors {
    double v_dd = 1.0;
    double v_ref = 0.5;
    double c_d_p = 0.2e-15;
    double c_fefet = 0.05e-15;
    double c_nmos = 0.03e-15;
    double t_precharge = 120e-12;
    double t_sense = 40e-12;
};

struct Calibration {
    CapacitanceSet caps;
    TimingSet timing;
};

// Reference 32-cell, 3-bit endpoints with steady-state event counts.
std::vector<CalibrationTarget> reference_targets();

// Solves c_parasitic, e_sl_per_on_cell, t_stage and r_discharge in closed
// form from the first NOR and the first NAND target:
//   1. t_stage from the NAND latency,
//   2. (c_parasitic, e_sl_per_on_cell) from the two energy targets (2x2),
//   3. r_discharge from the NOR latency, which needs the solved C_ML.
// Throws Error(calibration_failure) when a solved constant comes out negative
// or the energy system is singular.
Calibration calibrate(std::span<const CalibrationTarget> targets, const CalibrationPriors& priors = {});
Calibration default_calibration();

// Row of the reference design comparison, kept verbatim for reports.
struct ReferenceDesign {
    std::string design;
    std::string device;
    std::string cell;
    std::string type;
    double energy_fj_per_bit;
    std::optional<double> latency_ps;
    double area_um2_per_bit;
    std::string node_nm;
};

const std::vector<ReferenceDesign>& reference_designs();

struct SweepWorkload {
    enum class Kind { random, one_mismatch };
    Kind kind = Kind::random;
    int queries = 64;
    std::uint64_t seed = 1;
};

struct SweepSpec {
    std::vector<std::size_t> rows;
    std::vector<std::size_t> cells;
    Topology topology = Topology::nor_1t;
    int bits = 3;
    SweepWorkload workload;
    Calibration constants;
};

struct SweepRecord {
    Topology topology = Topology::nor_1t;
    std::size_t rows = 0;
    std::size_t cells = 0;
    int bits = 0;
    double energy_j = 0.0;  // mean whole-array energy per search
    double energy_fj_per_bit = 0.0;
    double latency_ps = 0.0;
    std::int64_t precharge_events = 0;  // summed over the measured searches
    std::int64_t sl_events = 0;         // conducting cells, summed likewise
};

// One record per (rows, cells) point, ordered by rows then cells. Each point
// draws its workload from a seed derived from (workload.seed, rows, cells),
// and runs one unmeasured warm-up search so the counts are steady-state.
std::vector<SweepRecord> sweep(const SweepSpec& spec);
SweepRecord sweep_point(const SweepSpec& spec, std::size_t rows, std::size_t cells);

inline constexpr const char* kSweepCsvHeader =
    "topology,rows,cells,bits,energy_fj_per_bit,latency_ps,precharge_events,sl_events";
void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records);

// Parses "16:128" (doubling), "8,16,32" or a single value.
std::vector<std::size_t> parse_geometry_range(const std::string& text);

// Coefficient of determination of the least-squares line through (x, y).
double r_squared(std::span<const double> x, std::span<const double> y);
// (max - min) / mean.
double relative_spread(std::span<const double> values);

// Fixed-precision formatting shared by every CSV/JSON emitter.
std::string format_number(double value);

}  // namespace mcam
