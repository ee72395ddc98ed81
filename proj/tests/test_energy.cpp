#include <doctest.h>

#include <cmath>
#include <sstream>
#include <tuple>
#include <vector>

#include "mcam/energy.hpp"
#include "mcam/error.hpp"

using namespace mcam;

namespace {

CapacitanceSet caps(double par) {
    CapacitanceSet c;
    c.c_d_p = 0.2e-15;
    c.c_fefet = 0.05e-15;
    c.c_nmos = 0.03e-15;
    c.c_parasitic = par;
    return c;
}

TimingSet timing() {
    TimingSet t;
    t.v_dd = 0.8;
    t.v_ref = 0.4;
    t.r_discharge = 10e3;
    t.t_precharge = 100e-12;
    t.t_stage = 50e-12;
    t.e_sl_per_on_cell = 0.1e-15;
    t.t_sense = 30e-12;
    return t;
}

bool close(double a, double b, double rel) { return std::abs(a - b) <= rel * std::abs(b); }

// Exhaustive average of per-search events over every (stored, previous
// query, query) triple with uniform symbols, using symbol comparisons only.
EventCounts enumerate_counts(Topology t, int n, int bits) {
    const int L = 1 << bits;
    int total = 1;
    for (int i = 0; i < n; ++i) total *= L;
    auto word = [&](int code) {
        std::vector<int> w(n);
        for (int i = 0; i < n; ++i, code /= L) w[i] = code % L;
        return w;
    };
    double pre = 0.0, on = 0.0, count = 0.0;
    for (int s = 0; s < total; ++s)
        for (int p = 0; p < total; ++p)
            for (int q = 0; q < total; ++q) {
                const auto ws = word(s), wp = word(p), wq = word(q);
                for (int i = 0; i < n; ++i) on += ws[i] != wq[i];
                if (t == Topology::nor_1t) {
                    pre += ws != wp;
                } else {
                    bool prev_prefix = true, now_prefix = true;
                    for (int i = 0; i + 1 < n; ++i) {
                        prev_prefix = prev_prefix && ws[i] == wp[i];
                        now_prefix = now_prefix && ws[i] == wq[i];
                        pre += !prev_prefix && now_prefix;
                    }
                }
                count += 1.0;
            }
    return {pre / count, on / count};
}

}  // namespace

TEST_CASE("matchline capacitance formulas") {
    const CapacitanceSet c = caps(0.01e-15);
    CHECK(cml_fecam(32, c) == doctest::Approx(0.2e-15 + 32 * 0.11e-15));
    CHECK(cml_nor(32, c) == doctest::Approx(0.2e-15 + 32 * 0.04e-15));
    CHECK(nand_stage_capacitance(c) == doctest::Approx(0.24e-15));
    CHECK(cml_nor(64, c) > cml_nor(32, c));
    CHECK_THROWS_AS(cml_nor(0, c), Error);
    CHECK_THROWS_AS(cml_fecam(-1, c), Error);
}

TEST_CASE("NOR and NAND cost formulas") {
    const CapacitanceSet c = caps(0.01e-15);
    const TimingSet t = timing();
    const EventCounts ev{0.75, 20.0};
    const SearchCost nor = nor_search_cost(ev, 16, c, t);
    const double cml = 0.2e-15 + 16 * 0.04e-15;
    CHECK(close(nor.energy_j, 0.75 * cml * 0.64 + 20 * 0.1e-15, 1e-12));
    CHECK(close(nor.latency_s, 100e-12 + 10e3 * cml * std::log(2.0) + 30e-12, 1e-12));

    const SearchCost nand = nand_search_cost(ev, 16, c, t);
    CHECK(close(nand.energy_j, 0.75 * 0.24e-15 * 0.64 + 20 * 0.1e-15, 1e-12));
    CHECK(close(nand.latency_s, 16 * 50e-12 + 30e-12, 1e-12));

    CHECK(energy_per_bit(3e-15, 32, 3) == doctest::Approx(3e-15 / 96));
}

TEST_CASE("cost rejects invalid constants") {
    TimingSet t = timing();
    t.v_ref = t.v_dd;
    CHECK_THROWS_AS(nor_search_cost({1, 1}, 8, caps(0), t), Error);
    t = timing();
    t.r_discharge = -1;
    CHECK_THROWS_AS(nor_search_cost({1, 1}, 8, caps(0), t), Error);
    CHECK_THROWS_AS(caps(-1e-15).validate(), Error);
}

TEST_CASE("steady-state counts equal exhaustive enumeration") {
    for (Topology t : {Topology::nor_1t, Topology::nand_2t})
        for (auto [n, bits] : {std::pair{1, 1}, {2, 1}, {3, 1}, {4, 1}, {2, 2}, {3, 2}}) {
            const EventCounts e = enumerate_counts(t, n, bits);
            const EventCounts f = steady_state_counts(t, n, bits);
            CHECK(f.precharge_events == doctest::Approx(e.precharge_events).epsilon(1e-12));
            CHECK(f.conducting_cells == doctest::Approx(e.conducting_cells).epsilon(1e-12));
        }
}

TEST_CASE("calibration reproduces the reference endpoints") {
    const Calibration k = default_calibration();
    for (const auto& t : reference_targets()) {
        const SearchCost c = search_cost(t.topology, t.events, t.cells, k.caps, k.timing);
        CHECK(close(energy_per_bit(c.energy_j, t.cells, t.bits), t.energy_per_bit_j, 0.05));
        CHECK(close(c.latency_s, t.latency_s, 0.05));
    }
    CHECK(k.timing.t_stage == doctest::Approx(62.5e-12));
    CHECK(k.caps.c_parasitic > 0);
    CHECK(k.timing.e_sl_per_on_cell > 0);
    CHECK(k.timing.r_discharge > 0);
}

TEST_CASE("calibration recovers known constants") {
    CalibrationPriors priors;
    priors.v_dd = 0.9;
    priors.v_ref = 0.45;
    Calibration truth;
    truth.caps.c_d_p = priors.c_d_p;
    truth.caps.c_fefet = priors.c_fefet;
    truth.caps.c_nmos = priors.c_nmos;
    truth.caps.c_parasitic = 0.017e-15;
    truth.timing.v_dd = priors.v_dd;
    truth.timing.v_ref = priors.v_ref;
    truth.timing.t_precharge = priors.t_precharge;
    truth.timing.t_sense = priors.t_sense;
    truth.timing.r_discharge = 85e3;
    truth.timing.t_stage = 33e-12;
    truth.timing.e_sl_per_on_cell = 0.07e-15;

    std::vector<CalibrationTarget> targets;
    for (auto [topo, n, bits] : {std::tuple<Topology, int, int>{Topology::nor_1t, 24, 2}, {Topology::nand_2t, 40, 3}}) {
        CalibrationTarget t;
        t.topology = topo;
        t.cells = n;
        t.bits = bits;
        t.events = steady_state_counts(topo, n, bits);
        const SearchCost c = search_cost(topo, t.events, n, truth.caps, truth.timing);
        t.energy_per_bit_j = energy_per_bit(c.energy_j, n, bits);
        t.latency_s = c.latency_s;
        targets.push_back(t);
    }
    const Calibration k = calibrate(targets, priors);
    CHECK(close(k.caps.c_parasitic, truth.caps.c_parasitic, 1e-9));
    CHECK(close(k.timing.e_sl_per_on_cell, truth.timing.e_sl_per_on_cell, 1e-9));
    CHECK(close(k.timing.r_discharge, truth.timing.r_discharge, 1e-9));
    CHECK(close(k.timing.t_stage, truth.timing.t_stage, 1e-9));
}

TEST_CASE("calibration rejects inconsistent targets") {
    auto targets = reference_targets();
    targets[0].energy_per_bit_j = 1e-20;
    try {
        calibrate(targets);
        FAIL("negative constant accepted");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::calibration_failure);
    }
    targets = reference_targets();
    targets.pop_back();
    CHECK_THROWS_AS(calibrate(targets), Error);
    targets = reference_targets();
    targets[1].latency_s = 1e-12;
    CHECK_THROWS_AS(calibrate(targets), Error);
}

TEST_CASE("reference design table") {
    const auto& rows = reference_designs();
    REQUIRE(rows.size() >= 2);
    bool nor = false, nand = false;
    for (const auto& r : rows) {
        if (r.energy_fj_per_bit == 0.06 && r.latency_ps == 371.8) nor = true;
        if (r.energy_fj_per_bit == 0.039 && r.latency_ps == 2040.0) nand = true;
    }
    CHECK(nor);
    CHECK(nand);
}

TEST_CASE("geometry range parsing") {
    CHECK(parse_geometry_range("16:128") == std::vector<std::size_t>{16, 32, 64, 128});
    CHECK(parse_geometry_range("8:64") == std::vector<std::size_t>{8, 16, 32, 64});
    CHECK(parse_geometry_range("3,5,9") == std::vector<std::size_t>{3, 5, 9});
    CHECK(parse_geometry_range("32") == std::vector<std::size_t>{32});
    for (const char* bad : {"", "0", "a:b", "64:16", "4,x", "-3"}) CHECK_THROWS_AS(parse_geometry_range(bad), Error);
}

TEST_CASE("regression helpers") {
    const std::vector<double> x{1, 2, 3}, y{1, 2, 2};
    CHECK(r_squared(x, y) == doctest::Approx(0.75));
    const std::vector<double> line{3, 5, 7};
    CHECK(r_squared(x, line) == doctest::Approx(1.0));
    CHECK(relative_spread(std::vector<double>{9, 10, 11}) == doctest::Approx(0.2));
    CHECK_THROWS_AS(r_squared(std::vector<double>{1}, std::vector<double>{1}), Error);
}

TEST_CASE("row sweep is linear in energy and flat in latency") {
    SweepSpec spec;
    spec.rows = {16, 32, 64, 128};
    spec.cells = {32};
    spec.constants = default_calibration();
    for (Topology t : {Topology::nor_1t, Topology::nand_2t}) {
        spec.topology = t;
        const auto rec = sweep(spec);
        REQUIRE(rec.size() == 4);
        std::vector<double> x, e, l;
        for (const auto& r : rec) {
            x.push_back(double(r.rows));
            e.push_back(r.energy_j);
            l.push_back(r.latency_ps);
            CHECK(r.cells == 32);
            CHECK(r.energy_fj_per_bit == doctest::Approx(r.energy_j / (r.rows * 32.0 * 3) * 1e15));
        }
        CHECK(r_squared(x, e) > 0.99);
        CHECK(relative_spread(l) < 0.05);
    }
}

TEST_CASE("cell sweep raises energy and latency") {
    SweepSpec spec;
    spec.rows = {16};
    spec.cells = {8, 16, 32, 64};
    spec.constants = default_calibration();
    for (auto kind : {SweepWorkload::Kind::random, SweepWorkload::Kind::one_mismatch})
        for (Topology t : {Topology::nor_1t, Topology::nand_2t}) {
            spec.topology = t;
            spec.workload.kind = kind;
            const auto rec = sweep(spec);
            for (std::size_t i = 1; i < rec.size(); ++i) {
                CHECK(rec[i].latency_ps > rec[i - 1].latency_ps);
                CHECK(rec[i].energy_j > rec[i - 1].energy_j);
            }
        }
}

TEST_CASE("one-mismatch workload keeps NAND charging rare") {
    SweepSpec spec;
    spec.rows = {8};
    spec.cells = {32};
    spec.topology = Topology::nand_2t;
    spec.workload.kind = SweepWorkload::Kind::one_mismatch;
    spec.workload.queries = 50;
    spec.constants = default_calibration();
    const SweepRecord r = sweep(spec).front();
    // Every query mismatches exactly one cell in every row.
    CHECK(r.sl_events == 8 * 50);
    CHECK(r.precharge_events <= 8 * 50 * 31);
}

TEST_CASE("sweep output is deterministic and has the fixed header") {
    SweepSpec spec;
    spec.rows = {16, 32};
    spec.cells = {8, 16};
    spec.workload.seed = 11;
    spec.constants = default_calibration();
    std::ostringstream a, b;
    write_sweep_csv(a, sweep(spec));
    write_sweep_csv(b, sweep(spec));
    CHECK(a.str() == b.str());
    std::istringstream in(a.str());
    std::string header;
    std::getline(in, header);
    CHECK(header == kSweepCsvHeader);
    int lines = 0;
    for (std::string line; std::getline(in, line);) ++lines;
    CHECK(lines == 4);

    spec.workload.seed = 12;
    std::ostringstream c;
    write_sweep_csv(c, sweep(spec));
    CHECK(c.str() != a.str());
}
