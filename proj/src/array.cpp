#include "mcam/array.hpp"

#include <istream>
#include <ostream>
#include <sstream>

#include "mcam/error.hpp"

namespace mcam {

const char* to_string(Topology t) noexcept {
    switch (t) {
        case Topology::nor_1t: return "nor";
        case Topology::nand_2t: return "nand";
    }
    return "?";
}

Topology parse_topology(const std::string& name) {
    if (name == "nor" || name == "nor_1t" || name == "NOR_1T") return Topology::nor_1t;
    if (name == "nand" || name == "nand_2t" || name == "NAND_2T") return Topology::nand_2t;
    throw Error(Errc::config_error, "unknown topology '" + name + "' (expected nor or nand)");
}

MatchlineState::MatchlineState(std::size_t r, std::size_t c) : rows(r), cols(c) { reset(); }

void MatchlineState::reset() {
    nor_discharged.assign(rows, 1);
    nand_levels.assign(rows * cols, 0);
}

void EventTotals::add(const SearchReport& r) {
    ++searches;
    precharge_events += r.precharge_events;
    discharge_events += r.discharge_events;
    conducting_cells += r.conducting_cells_total;
    energy_j += r.energy_j;
    latency_s += r.latency_s;
}

void EventTotals::merge(const EventTotals& other) {
    searches += other.searches;
    precharge_events += other.precharge_events;
    discharge_events += other.discharge_events;
    conducting_cells += other.conducting_cells;
    energy_j += other.energy_j;
    latency_s += other.latency_s;
}

CamArray::CamArray(Topology topology, ThresholdLadder ladder, std::size_t rows, std::size_t cols)
    : topology_(topology), ladder_(std::move(ladder)), rows_(rows), cols_(cols), ml_(rows, cols) {
    if (rows == 0 || cols == 0) throw Error(Errc::invalid_geometry, "array needs at least one row and one column");
    ladder_.validate();
    cells_.assign(rows * cols, encode_store(0, ladder_));
}

void CamArray::write_word(std::size_t row, std::span<const int> symbols, VariationSampler* variation) {
    if (row >= rows_)
        throw Error(Errc::row_out_of_range, "row " + std::to_string(row) + " of " + std::to_string(rows_));
    if (symbols.size() != cols_)
        throw Error(Errc::length_mismatch,
                    "word has " + std::to_string(symbols.size()) + " symbols, array has " + std::to_string(cols_) + " cells");
    // Encode into a scratch word first so a bad symbol leaves the row untouched.
    std::vector<MibCell> word;
    word.reserve(cols_);
    for (int s : symbols) word.push_back(encode_store(s, ladder_, variation));
    std::copy(word.begin(), word.end(), cells_.begin() + static_cast<std::ptrdiff_t>(row * cols_));
}

std::vector<int> CamArray::read_word(std::size_t row) const {
    if (row >= rows_)
        throw Error(Errc::row_out_of_range, "row " + std::to_string(row) + " of " + std::to_string(rows_));
    std::vector<int> out(cols_);
    for (std::size_t c = 0; c < cols_; ++c) out[c] = cell(row, c).stored_symbol;
    return out;
}

void CamArray::reprogram(VariationSampler* variation) {
    for (auto& c : cells_) c = encode_store(c.stored_symbol, ladder_, variation);
}

std::vector<QueryDrive> encode_query_word(const CamArray& array, std::span<const int> query) {
    if (query.size() != array.cols())
        throw Error(Errc::length_mismatch,
                    "query has " + std::to_string(query.size()) + " symbols, array has " + std::to_string(array.cols()) +
                        " cells");
    std::vector<QueryDrive> drives;
    drives.reserve(query.size());
    for (int q : query) drives.push_back(encode_query(q, array.ladder()));
    return drives;
}

std::vector<DLevel> evaluate_row(const CamArray& array, std::size_t row, std::span<const QueryDrive> drives) {
    std::vector<DLevel> d(array.cols());
    for (std::size_t c = 0; c < array.cols(); ++c) d[c] = evaluate(array.cell(row, c), drives[c]);
    return d;
}

namespace {

SearchReport empty_report(std::size_t rows) {
    SearchReport r;
    r.match.assign(rows, 0);
    r.match_count.assign(rows, 0);
    r.conducting_cells.assign(rows, 0);
    r.row_precharge_events.assign(rows, 0);
    return r;
}

void check_state(const CamArray& array, MatchlineState& state) {
    if (state.rows != array.rows() || state.cols != array.cols()) state = MatchlineState(array.rows(), array.cols());
}

}  // namespace

SearchReport search_nor(const CamArray& array, MatchlineState& state, std::span<const int> query) {
    if (array.topology() != Topology::nor_1t) throw Error(Errc::topology_mismatch, "search_nor on a NAND array");
    const auto drives = encode_query_word(array, query);
    check_state(array, state);

    SearchReport report = empty_report(array.rows());
    const int n = static_cast<int>(array.cols());
    for (std::size_t r = 0; r < array.rows(); ++r) {
        // Rows still holding charge from the last search need no precharge.
        if (state.nor_discharged[r]) {
            report.row_precharge_events[r] = 1;
            ++report.precharge_events;
        }
        int low = 0;
        for (std::size_t c = 0; c < array.cols(); ++c)
            if (evaluate(array.cell(r, c), drives[c]) == DLevel::Low) ++low;
        report.match_count[r] = low;
        report.conducting_cells[r] = n - low;
        report.conducting_cells_total += n - low;
        const bool matched = (low == n);
        report.match[r] = matched ? 1 : 0;
        if (!matched) ++report.discharge_events;
        state.nor_discharged[r] = matched ? 0 : 1;
    }
    return report;
}

SearchReport search_nand(const CamArray& array, MatchlineState& state, std::span<const int> query) {
    if (array.topology() != Topology::nand_2t) throw Error(Errc::topology_mismatch, "search_nand on a NOR array");
    const auto drives = encode_query_word(array, query);
    check_state(array, state);

    SearchReport report = empty_report(array.rows());
    const std::size_t n = array.cols();
    for (std::size_t r = 0; r < array.rows(); ++r) {
        std::uint8_t* ml = state.nand_levels.data() + r * n;
        bool supply = true;           // ML_{i-1} after this search; ML_0 is VDD
        bool supply_before = true;    // ML_{i-1} before this search
        int low = 0;
        int events = 0;
        for (std::size_t i = 0; i < n; ++i) {
            const bool d_high = evaluate(array.cell(r, i), drives[i]) == DLevel::High;
            if (!d_high) ++low;
            // Stage i charges only when its supply rail rises this search;
            // a risen ML_{i-1} already implies every earlier stage matches.
            if (!supply_before && supply) ++events;
            const bool before = ml[i] != 0;
            const bool after = supply && !d_high;  // ML_i = ML_{i-1} * not(D)
            ml[i] = after ? 1 : 0;
            supply_before = before;
            supply = after;
        }
        report.match_count[r] = low;
        report.conducting_cells[r] = static_cast<int>(n) - low;
        report.conducting_cells_total += static_cast<int>(n) - low;
        report.match[r] = supply ? 1 : 0;
        if (!supply) ++report.discharge_events;
        report.row_precharge_events[r] = events;
        report.precharge_events += events;
    }
    return report;
}

SearchReport search_nor(CamArray& array, std::span<const int> query) { return search_nor(array, array.ml_state(), query); }

SearchReport search_nand(CamArray& array, std::span<const int> query) {
    return search_nand(array, array.ml_state(), query);
}

SearchReport search(CamArray& array, std::span<const int> query) {
    return array.topology() == Topology::nor_1t ? search_nor(array, query) : search_nand(array, query);
}

void write_contents_csv(std::ostream& out, const CamArray& array) {
    for (std::size_t r = 0; r < array.rows(); ++r) {
        for (std::size_t c = 0; c < array.cols(); ++c) {
            if (c) out << ',';
            out << array.cell(r, c).stored_symbol;
        }
        out << '\n';
    }
}

std::vector<std::vector<int>> read_contents_csv(std::istream& in) {
    std::vector<std::vector<int>> words;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        std::vector<int> word;
        std::stringstream ss(line);
        std::string field;
        while (std::getline(ss, field, ',')) {
            try {
                std::size_t used = 0;
                const int v = std::stoi(field, &used);
                if (field.find_first_not_of(" \t", used) != std::string::npos) throw std::invalid_argument(field);
                word.push_back(v);
            } catch (const std::exception&) {
                throw Error(Errc::malformed_input, "line " + std::to_string(lineno) + ": bad symbol '" + field + "'");
            }
        }
        if (!words.empty() && word.size() != words.front().size())
            throw Error(Errc::length_mismatch, "line " + std::to_string(lineno) + ": word length differs");
        words.push_back(std::move(word));
    }
    return words;
}

}  // namespace mcam
