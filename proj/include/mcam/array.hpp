#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "mcam/device.hpp"
#include "mcam/mibo.hpp"

namespace mcam {

enum class Topology {
    nor_1t,   // 2FeFET-1T cells on a precharged NOR matchline
    nand_2t,  // 2FeFET-2T cells chained into a precharge-free NAND matchline
};

const char* to_string(Topology t) noexcept;
Topology parse_topology(const std::string& name);

// Persistent matchline levels carried between searches.
//   NOR:  one flag per row, set when the last search discharged the ML.
//   NAND: one level per stage ML_1..ML_N per row (ML_0 is the supply rail).
// A fresh state has every NOR ML discharged and every NAND stage low, so the
// first search pays the full charging cost.
struct MatchlineState {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::uint8_t> nor_discharged;
    std::vector<std::uint8_t> nand_levels;  // row-major, rows x cols

    MatchlineState() = default;
    MatchlineState(std::size_t rows, std::size_t cols);
    void reset();
    bool nand_level(std::size_t row, std::size_t stage) const { return nand_levels[row * cols + stage] != 0; }
};

struct SearchReport {
    std::vector<std::uint8_t> match;        // per row
    std::vector<int> match_count;           // per row, cells whose D stays low
    std::vector<int> conducting_cells;      // per row, cells whose D is charged from SL
    std::vector<int> row_precharge_events;  // per row
    std::int64_t precharge_events = 0;
    std::int64_t discharge_events = 0;
    std::int64_t conducting_cells_total = 0;
    double energy_j = 0.0;
    double latency_s = 0.0;

    std::size_t rows() const noexcept { return match.size(); }
};

// Event totals summed across many searches (or across parallel workers).
struct EventTotals {
    std::int64_t searches = 0;
    std::int64_t precharge_events = 0;
    std::int64_t discharge_events = 0;
    std::int64_t conducting_cells = 0;
    double energy_j = 0.0;
    double latency_s = 0.0;

    void add(const SearchReport& r);
    void merge(const EventTotals& other);
};

class CamArray {
public:
    CamArray(Topology topology, ThresholdLadder ladder, std::size_t rows, std::size_t cols);

    Topology topology() const noexcept { return topology_; }
    const ThresholdLadder& ladder() const noexcept { return ladder_; }
    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }

    const MibCell& cell(std::size_t row, std::size_t col) const { return cells_[row * cols_ + col]; }

    // Only the addressed row is re-encoded; every other row keeps its devices
    // bit-for-bit (write inhibition).
    void write_word(std::size_t row, std::span<const int> symbols, VariationSampler* variation = nullptr);
    std::vector<int> read_word(std::size_t row) const;

    // Re-program every device with its current symbol and fresh offsets.
    void reprogram(VariationSampler* variation);

    MatchlineState& ml_state() noexcept { return ml_; }
    const MatchlineState& ml_state() const noexcept { return ml_; }

private:
    Topology topology_;
    ThresholdLadder ladder_;
    std::size_t rows_;
    std::size_t cols_;
    std::vector<MibCell> cells_;
    MatchlineState ml_;
};

// Per-cell D levels of one row; pure, so workers may share one array.
std::vector<DLevel> evaluate_row(const CamArray& array, std::size_t row, std::span<const QueryDrive> drives);
std::vector<QueryDrive> encode_query_word(const CamArray& array, std::span<const int> query);

// The state-explicit overloads let parallel workers search a shared,
// read-only array, each with its own matchline state.
SearchReport search_nor(const CamArray& array, MatchlineState& state, std::span<const int> query);
SearchReport search_nand(const CamArray& array, MatchlineState& state, std::span<const int> query);
SearchReport search_nor(CamArray& array, std::span<const int> query);
SearchReport search_nand(CamArray& array, std::span<const int> query);
// Dispatches on the array topology.
SearchReport search(CamArray& array, std::span<const int> query);

// Contents interchange: one word per line, comma-separated symbols, no header.
void write_contents_csv(std::ostream& out, const CamArray& array);
std::vector<std::vector<int>> read_contents_csv(std::istream& in);

}  // namespace mcam
