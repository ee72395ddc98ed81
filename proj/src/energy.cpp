#include "mcam/energy.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <random>
#include <sstream>

#include "mcam/error.hpp"

namespace mcam {

namespace {

void check_cells(int n) {
    if (n < 1) throw Error(Errc::invalid_geometry, "cells per word must be >= 1, got " + std::to_string(n));
}

void check_non_negative(double v, const char* name) {
    if (!(v >= 0.0) || !std::isfinite(v))
        throw Error(Errc::invalid_constants, std::string(name) + " must be finite and >= 0");
}

}  // namespace

void CapacitanceSet::validate() const {
    check_non_negative(c_d_p, "c_d_p");
    check_non_negative(c_fefet, "c_fefet");
    check_non_negative(c_nmos, "c_nmos");
    check_non_negative(c_parasitic, "c_parasitic");
}

void TimingSet::validate() const {
    if (!(v_ref > 0.0) || !(v_ref < v_dd)) throw Error(Errc::invalid_constants, "need 0 < v_ref < v_dd");
    check_non_negative(r_discharge, "r_discharge");
    check_non_negative(t_precharge, "t_precharge");
    check_non_negative(t_stage, "t_stage");
    check_non_negative(e_sl_per_on_cell, "e_sl_per_on_cell");
    check_non_negative(t_sense, "t_sense");
}

double cml_fecam(int n, const CapacitanceSet& caps) {
    check_cells(n);
    return caps.c_d_p + n * (2.0 * caps.c_fefet + caps.c_parasitic);
}

double cml_nor(int n, const CapacitanceSet& caps) {
    check_cells(n);
    return caps.c_d_p + n * (caps.c_nmos + caps.c_parasitic);
}

double nand_stage_capacitance(const CapacitanceSet& caps) { return caps.c_d_p + caps.c_nmos + caps.c_parasitic; }

EventCounts counts_of(const SearchReport& r) {
    return {static_cast<double>(r.precharge_events), static_cast<double>(r.conducting_cells_total)};
}

SearchCost nor_search_cost(const EventCounts& events, int n, const CapacitanceSet& caps, const TimingSet& timing) {
    timing.validate();
    const double c_ml = cml_nor(n, caps);
    const double v2 = timing.v_dd * timing.v_dd;
    SearchCost cost;
    cost.energy_j = events.precharge_events * c_ml * v2 + events.conducting_cells * timing.e_sl_per_on_cell;
    cost.latency_s =
        timing.t_precharge + timing.r_discharge * c_ml * std::log(timing.v_dd / timing.v_ref) + timing.t_sense;
    return cost;
}

SearchCost nand_search_cost(const EventCounts& events, int n, const CapacitanceSet& caps, const TimingSet& timing) {
    check_cells(n);
    timing.validate();
    const double v2 = timing.v_dd * timing.v_dd;
    SearchCost cost;
    cost.energy_j =
        events.precharge_events * nand_stage_capacitance(caps) * v2 + events.conducting_cells * timing.e_sl_per_on_cell;
    cost.latency_s = n * timing.t_stage + timing.t_sense;
    return cost;
}

SearchCost search_cost(Topology topology, const EventCounts& events, int n, const CapacitanceSet& caps,
                       const TimingSet& timing) {
    return topology == Topology::nor_1t ? nor_search_cost(events, n, caps, timing)
                                        : nand_search_cost(events, n, caps, timing);
}

void apply_cost(SearchReport& report, Topology topology, int n, const CapacitanceSet& caps, const TimingSet& timing) {
    const SearchCost c = search_cost(topology, counts_of(report), n, caps, timing);
    report.energy_j = c.energy_j;
    report.latency_s = c.latency_s;
}

EventCounts steady_state_counts(Topology topology, int n, int bits) {
    check_cells(n);
    if (bits < kMinBits || bits > kMaxBits) throw Error(Errc::unsupported_precision, "bits must be 1..3");
    const double p = 1.0 / static_cast<double>(1 << bits);  // per-cell match probability
    EventCounts e;
    e.conducting_cells = n * (1.0 - p);
    if (topology == Topology::nor_1t) {
        // Precharge is paid whenever the previous search discharged the ML.
        e.precharge_events = 1.0 - std::pow(p, n);
    } else {
        // Stage j+1 charges when the j-cell prefix matches now but did not before.
        double sum = 0.0;
        for (int j = 1; j < n; ++j) {
            const double pj = std::pow(p, j);
            sum += pj * (1.0 - pj);
        }
        e.precharge_events = sum;
    }
    return e;
}

std::vector<CalibrationTarget> reference_targets() {
    CalibrationTarget nor;
    nor.topology = Topology::nor_1t;
    nor.energy_per_bit_j = 0.06e-15;
    nor.latency_s = 371.8e-12;
    nor.events = steady_state_counts(Topology::nor_1t, nor.cells, nor.bits);

    CalibrationTarget nand;
    nand.topology = Topology::nand_2t;
    nand.energy_per_bit_j = 0.039e-15;
    nand.latency_s = 2040e-12;
    nand.events = steady_state_counts(Topology::nand_2t, nand.cells, nand.bits);
    return {nor, nand};
}

Calibration calibrate(std::span<const CalibrationTarget> targets, const CalibrationPriors& priors) {
    const CalibrationTarget* nor = nullptr;
    const CalibrationTarget* nand = nullptr;
    for (const auto& t : targets) {
        if (t.topology == Topology::nor_1t && !nor) nor = &t;
        if (t.topology == Topology::nand_2t && !nand) nand = &t;
    }
    if (!nor || !nand) throw Error(Errc::calibration_failure, "need one NOR and one NAND target");
    for (const auto* t : {nor, nand}) {
        check_cells(t->cells);
        if (t->bits < kMinBits || t->bits > kMaxBits) throw Error(Errc::unsupported_precision, "target bits must be 1..3");
    }

    Calibration out;
    out.caps.c_d_p = priors.c_d_p;
    out.caps.c_fefet = priors.c_fefet;
    out.caps.c_nmos = priors.c_nmos;
    out.timing.v_dd = priors.v_dd;
    out.timing.v_ref = priors.v_ref;
    out.timing.t_precharge = priors.t_precharge;
    out.timing.t_sense = priors.t_sense;
    out.caps.validate();
    out.timing.validate();

    auto fail = [](const std::string& what, double value) {
        std::ostringstream msg;
        msg << what << " solved to " << value << " (must be >= 0); targets are inconsistent with the priors";
        throw Error(Errc::calibration_failure, msg.str());
    };

    // NAND latency: n * t_stage + t_sense.
    const double t_stage = (nand->latency_s - priors.t_sense) / nand->cells;
    if (!(t_stage >= 0.0)) fail("t_stage", t_stage);
    out.timing.t_stage = t_stage;

    // Energy targets, linear in (c_parasitic, e_sl_per_on_cell):
    //   E_nor  = p_nor  * V^2 * (c_d_p + n_nor*(c_nmos + c_par)) + x_nor  * e_sl
    //   E_nand = p_nand * V^2 * (c_d_p + c_nmos + c_par)         + x_nand * e_sl
    const double v2 = priors.v_dd * priors.v_dd;
    const double e_nor = nor->energy_per_bit_j * nor->cells * nor->bits;
    const double e_nand = nand->energy_per_bit_j * nand->cells * nand->bits;
    const double a11 = nor->events.precharge_events * v2 * nor->cells;
    const double a12 = nor->events.conducting_cells;
    const double a21 = nand->events.precharge_events * v2;
    const double a22 = nand->events.conducting_cells;
    const double b1 = e_nor - nor->events.precharge_events * v2 * (priors.c_d_p + nor->cells * priors.c_nmos);
    const double b2 = e_nand - nand->events.precharge_events * v2 * (priors.c_d_p + priors.c_nmos);
    const double det = a11 * a22 - a12 * a21;
    const double scale = std::abs(a11 * a22) + std::abs(a12 * a21);
    if (!(std::abs(det) > 1e-12 * scale))
        throw Error(Errc::calibration_failure, "energy targets do not determine c_parasitic and e_sl_per_on_cell");
    const double c_par = (b1 * a22 - a12 * b2) / det;
    const double e_sl = (a11 * b2 - a21 * b1) / det;
    if (!(c_par >= 0.0)) fail("c_parasitic", c_par);
    if (!(e_sl >= 0.0)) fail("e_sl_per_on_cell", e_sl);
    out.caps.c_parasitic = c_par;
    out.timing.e_sl_per_on_cell = e_sl;

    // NOR latency: t_precharge + r * C_ML * ln(v_dd / v_ref) + t_sense.
    const double rc_term = cml_nor(nor->cells, out.caps) * std::log(priors.v_dd / priors.v_ref);
    const double r = (nor->latency_s - priors.t_precharge - priors.t_sense) / rc_term;
    if (!(r >= 0.0)) fail("r_discharge", r);
    out.timing.r_discharge = r;
    return out;
}

Calibration default_calibration() {
    const auto targets = reference_targets();
    return calibrate(targets);
}

const std::vector<ReferenceDesign>& reference_designs() {
    static const std::vector<ReferenceDesign> table = {
        {"16T CMOS", "CMOS", "16T", "BCAM", 0.59, 582.4, 1.12, "-/45"},
        {"2T-1FeFET", "FeFET", "2T-1FeFET", "BCAM", 0.116, 401.4, 0.36, "45/45"},
        {"2FeFET TCAM", "FeFET", "2FeFET", "TCAM", 0.40, 360.0, 0.15, "45/-"},
        {"2FeFET-1T TCAM (precharge)", "FeFET", "2FeFET-1T", "TCAM", 0.195, 252.8, 0.36, "45/45"},
        {"2FeFET-2T TCAM (precharge-free)", "FeFET", "2FeFET-2T", "TCAM", 0.073, 1430.0, 0.44, "45/45"},
        {"2T-2R", "PCM", "2T-2R", "TCAM", 0.55, 350.6, 0.41, "90/90"},
        {"6T-2R", "ReRAM", "6T-2R", "ACAM", 0.52, 110.0, 0.51, "50/180"},
        {"2FeFET MCAM", "FeFET", "2FeFET", "MCAM", 0.182, std::nullopt, 0.05, "45/45"},
        {"2FeFET-1T dual-branch MCAM", "FeFET", "2FeFET-1T", "MCAM", 0.292, 422.0, 0.03, "28/-"},
        {"2FeFET-1T MCAM (NOR)", "FeFET", "2FeFET-1T", "MCAM", 0.06, 371.8, 0.12, "45/40"},
        {"2FeFET-2T MCAM (NAND, precharge-free)", "FeFET", "2FeFET-2T", "MCAM", 0.039, 2040.0, 0.146, "45/40"},
    };
    return table;
}

SweepRecord sweep_point(const SweepSpec& spec, std::size_t rows, std::size_t cells) {
    if (rows == 0 || cells == 0) throw Error(Errc::invalid_geometry, "sweep geometry must be positive");
    if (spec.workload.queries < 1) throw Error(Errc::invalid_range, "workload needs at least one query");

    const ThresholdLadder ladder = build_ladder(spec.bits, LadderDefaults::vth_min, LadderDefaults::vth_max);
    const int levels = ladder.level_count();
    CamArray array(spec.topology, ladder, rows, cells);

    std::seed_seq seq{static_cast<std::uint32_t>(spec.workload.seed & 0xffffffffu),
                      static_cast<std::uint32_t>(spec.workload.seed >> 32), static_cast<std::uint32_t>(rows),
                      static_cast<std::uint32_t>(cells)};
    std::mt19937_64 rng(seq);
    std::uniform_int_distribution<int> symbol(0, levels - 1);
    std::uniform_int_distribution<std::size_t> column(0, cells - 1);
    auto random_word = [&] {
        std::vector<int> w(cells);
        for (int& s : w) s = symbol(rng);
        return w;
    };

    const bool one_mismatch = spec.workload.kind == SweepWorkload::Kind::one_mismatch;
    const std::vector<int> shared = random_word();
    for (std::size_t r = 0; r < rows; ++r) {
        const auto w = one_mismatch ? shared : random_word();
        array.write_word(r, w);
    }
    auto next_query = [&] {
        if (!one_mismatch) return random_word();
        std::vector<int> q = shared;
        int& s = q[column(rng)];
        s = (s + 1 < levels) ? s + 1 : s - 1;
        return q;
    };

    const int n = static_cast<int>(cells);
    {
        const auto warm = next_query();
        search(array, warm);
    }
    EventTotals totals;
    for (int i = 0; i < spec.workload.queries; ++i) {
        const auto q = next_query();
        SearchReport rep = search(array, q);
        apply_cost(rep, spec.topology, n, spec.constants.caps, spec.constants.timing);
        totals.add(rep);
    }

    SweepRecord rec;
    rec.topology = spec.topology;
    rec.rows = rows;
    rec.cells = cells;
    rec.bits = spec.bits;
    rec.energy_j = totals.energy_j / static_cast<double>(totals.searches);
    rec.energy_fj_per_bit = rec.energy_j / (static_cast<double>(rows) * n * spec.bits) * 1e15;
    rec.latency_ps = totals.latency_s / static_cast<double>(totals.searches) * 1e12;
    rec.precharge_events = totals.precharge_events;
    rec.sl_events = totals.conducting_cells;
    return rec;
}

std::vector<SweepRecord> sweep(const SweepSpec& spec) {
    if (spec.rows.empty() || spec.cells.empty()) throw Error(Errc::invalid_geometry, "sweep ranges must be non-empty");
    std::vector<SweepRecord> out;
    for (std::size_t r : spec.rows)
        for (std::size_t c : spec.cells) out.push_back(sweep_point(spec, r, c));
    return out;
}

double r_squared(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) throw Error(Errc::length_mismatch, "r_squared needs >= 2 paired points");
    const double n = static_cast<double>(x.size());
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) throw Error(Errc::invalid_range, "r_squared needs distinct x values");
    if (syy == 0.0) return 1.0;
    return (sxy * sxy) / (sxx * syy);
}

double relative_spread(std::span<const double> values) {
    if (values.empty()) throw Error(Errc::length_mismatch, "relative_spread of an empty set");
    double lo = values[0], hi = values[0], sum = 0.0;
    for (double v : values) {
        lo = std::min(lo, v);
        hi = std::max(hi, v);
        sum += v;
    }
    const double mean = sum / static_cast<double>(values.size());
    return mean == 0.0 ? 0.0 : (hi - lo) / mean;
}

std::string format_number(double value) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.10g", value);
    return buf;
}

void write_sweep_csv(std::ostream& out, std::span<const SweepRecord> records) {
    out << kSweepCsvHeader << '\n';
    for (const auto& r : records) {
        out << to_string(r.topology) << ',' << r.rows << ',' << r.cells << ',' << r.bits << ','
            << format_number(r.energy_fj_per_bit) << ',' << format_number(r.latency_ps) << ',' << r.precharge_events
            << ',' << r.sl_events << '\n';
    }
}

std::vector<std::size_t> parse_geometry_range(const std::string& text) {
    auto parse_one = [&](const std::string& s) -> std::size_t {
        try {
            std::size_t used = 0;
            const long long v = std::stoll(s, &used);
            if (used != s.size() || v < 1) throw std::invalid_argument(s);
            return static_cast<std::size_t>(v);
        } catch (const std::exception&) {
            throw Error(Errc::config_error, "bad geometry value '" + s + "' in '" + text + "'");
        }
    };
    std::vector<std::size_t> out;
    if (const auto colon = text.find(':'); colon != std::string::npos) {
        const std::size_t lo = parse_one(text.substr(0, colon));
        const std::size_t hi = parse_one(text.substr(colon + 1));
        if (lo > hi) throw Error(Errc::config_error, "empty geometry range '" + text + "'");
        for (std::size_t v = lo; v <= hi; v *= 2) out.push_back(v);
        return out;
    }
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) out.push_back(parse_one(item));
    if (out.empty()) throw Error(Errc::config_error, "empty geometry list");
    return out;
}

}  // namespace mcam
