#include "mcam/monte_carlo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>

#include "mcam/error.hpp"

namespace mcam {

McScenario worst_case_scenario(const ThresholdLadder& ladder, std::size_t cols) {
    if (cols == 0) throw Error(Errc::empty_scenario, "scenario needs at least one cell");
    const int levels = ladder.level_count();
    McScenario s;
    s.stored.resize(cols);
    for (std::size_t c = 0; c < cols; ++c) s.stored[c] = static_cast<int>(c % static_cast<std::size_t>(levels));
    s.query = s.stored;
    int& last = s.query.back();
    last = (last + 1 < levels) ? last + 1 : last - 1;
    s.expected_match = false;
    return s;
}

McScenario exact_match_scenario(const ThresholdLadder& ladder, std::size_t cols) {
    McScenario s = worst_case_scenario(ladder, cols);
    s.query = s.stored;
    s.expected_match = true;
    return s;
}

McSummary run_monte_carlo(const McConfig& config, const VariationModel& variation, int trials) {
    const auto& sc = config.scenario;
    if (sc.stored.empty() || sc.query.empty()) throw Error(Errc::empty_scenario, "stored word and query are required");
    if (sc.stored.size() != sc.query.size()) throw Error(Errc::length_mismatch, "stored word and query differ in length");
    if (trials < 1) throw Error(Errc::invalid_range, "trials must be >= 1");
    if (!(variation.sigma_vth >= 0.0)) throw Error(Errc::invalid_range, "sigma_vth must be >= 0");

    const std::size_t cols = sc.stored.size();
    CamArray array(config.topology, config.ladder, 1, cols);
    array.write_word(0, sc.stored);
    const auto drives = encode_query_word(array, sc.query);

    McSummary out;
    out.trials = trials;
    out.margins.reserve(static_cast<std::size_t>(trials));
    out.min_margin = std::numeric_limits<double>::infinity();

    const auto seed_lo = static_cast<std::uint32_t>(variation.seed & 0xffffffffu);
    const auto seed_hi = static_cast<std::uint32_t>(variation.seed >> 32);
    for (int t = 0; t < trials; ++t) {
        std::seed_seq seq{seed_lo, seed_hi, static_cast<std::uint32_t>(t)};
        VariationSampler sampler(variation.sigma_vth, seq);
        array.reprogram(&sampler);

        MatchlineState state(1, cols);
        const SearchReport r = config.topology == Topology::nor_1t ? search_nor(array, state, sc.query)
                                                                   : search_nand(array, state, sc.query);
        if ((r.match[0] != 0) != sc.expected_match) ++out.decision_errors;

        double margin = std::numeric_limits<double>::infinity();
        for (std::size_t c = 0; c < cols; ++c) {
            const MibCell& cell = array.cell(0, c);
            margin = std::min(margin, cell_margin(cell, drives[c]));
            const CellConduction on = conduction(cell, drives[c]);
            if (on.f1_on != (sc.query[c] > sc.stored[c])) ++out.device_flips;
            if (on.f2_on != (sc.query[c] < sc.stored[c])) ++out.device_flips;
        }
        out.margins.push_back(margin);
        out.min_margin = std::min(out.min_margin, margin);
    }

    out.devices = static_cast<std::int64_t>(2 * cols) * trials;
    out.error_rate = static_cast<double>(out.decision_errors) / trials;
    out.device_flip_rate = static_cast<double>(out.device_flips) / static_cast<double>(out.devices);
    double sum = 0.0;
    for (double m : out.margins) sum += m;
    out.mean_margin = sum / trials;
    double ss = 0.0;
    for (double m : out.margins) ss += (m - out.mean_margin) * (m - out.mean_margin);
    out.margin_stddev = trials > 1 ? std::sqrt(ss / (trials - 1)) : 0.0;
    return out;
}

}  // namespace mcam
