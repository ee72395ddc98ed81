#include <doctest.h>

#include <sstream>

#include "mcam/config.hpp"
#include "mcam/error.hpp"

using namespace mcam;

namespace {

Errc read_error(const std::string& text) {
    std::istringstream in(text);
    try {
        read_config(in);
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("config accepted: " << text);
    return Errc::io_error;
}

RunConfig parse(const std::string& text) {
    std::istringstream in(text);
    return read_config(in);
}

std::string dump(const RunConfig& c) {
    std::ostringstream out;
    write_config(out, c);
    return out.str();
}

}  // namespace

TEST_CASE("empty config keeps every default") {
    const RunConfig c = parse("");
    const RunConfig d;
    CHECK(dump(c) == dump(d));
    CHECK(c.variation.sigma_vth == 0.054);
    CHECK(c.montecarlo.trials == 100);
    CHECK(c.sweep.rows == "16:128");
}

TEST_CASE("config round trips through text") {
    RunConfig c;
    c.ladder.bits = 2;
    c.ladder.vth_min = 0.1;
    c.ladder.v_sl = 0.3;
    c.variation = {0.0123456789012345, 77};
    c.array.topology = Topology::nand_2t;
    c.array.rows = 64;
    c.constants.timing.r_discharge = 1.0 / 3.0 * 1e5;
    c.constants.caps.c_parasitic = 2.7772908366533888e-17;
    c.montecarlo.scenario = "exact_match";
    c.sweep.cells = "8,16,32";
    c.sweep.workload = "one_mismatch";
    c.hdc.dataset = "ucihar";
    c.hdc.data_dir = "some dir/with spaces";
    c.hdc.learning_rate = 0.05;
    c.hdc.similarity = "cam";
    c.seed = 18446744073709551615ull;
    const std::string text = dump(c);
    const RunConfig back = parse(text);
    CHECK(dump(back) == text);
    CHECK(back.constants.timing.r_discharge == c.constants.timing.r_discharge);
    CHECK(back.variation.sigma_vth == c.variation.sigma_vth);
    CHECK(back.hdc.data_dir == c.hdc.data_dir);
    CHECK(back.seed == c.seed);
}

TEST_CASE("partial sections override only their keys") {
    const RunConfig c = parse("[array]\ntopology = nand   ; or nor\n\n; comment\n# another\n[run]\nseed = 9\t# trailing\n");
    CHECK(c.array.topology == Topology::nand_2t);
    CHECK(c.array.cols == 32);
    CHECK(c.seed == 9);
}

TEST_CASE("invalid configs are rejected as configuration errors") {
    CHECK(read_error("[array]\ncolumns = 3\n") == Errc::config_error);
    CHECK(read_error("[arrays]\nrows = 3\n") == Errc::config_error);
    CHECK(read_error("rows = 3\n") == Errc::config_error);
    CHECK(read_error("[array]\nrows = three\n") == Errc::config_error);
    CHECK(read_error("[array]\nrows = -1\n") == Errc::config_error);
    CHECK(read_error("[array]\nrows = 0\n") == Errc::config_error);
    CHECK(read_error("[ladder]\nbits = 4294967299\n") == Errc::config_error);
    CHECK(read_error("[run]\nseed = -1\n") == Errc::config_error);
    CHECK(read_error("[array]\ntopology = xor\n") == Errc::config_error);
    CHECK(read_error("[ladder]\nbits = 4\n") == Errc::config_error);
    CHECK(read_error("[ladder]\nvth_min = 3.0\n") == Errc::config_error);
    CHECK(read_error("[variation]\nsigma_vth = -0.1\n") == Errc::config_error);
    CHECK(read_error("[variation]\nsigma_vth = nan\n") == Errc::config_error);
    CHECK(read_error("[timing]\nv_ref = 2.0\n") == Errc::config_error);
    CHECK(read_error("[capacitance]\nc_nmos = -1e-15\n") == Errc::config_error);
    CHECK(read_error("[montecarlo]\nscenario = best_case\n") == Errc::config_error);
    CHECK(read_error("[sweep]\nrows = 128:16\n") == Errc::config_error);
    CHECK(read_error("[hdc]\ndataset = mnist\n") == Errc::config_error);
    CHECK(read_error("[hdc]\nsimilarity = l2\n") == Errc::config_error);
    CHECK(read_error("[array\nrows = 1\n") == Errc::config_error);
}

TEST_CASE("constants section reads back as a config") {
    std::ostringstream out;
    Calibration k = default_calibration();
    write_constants_section(out, k);
    const std::string text = out.str();
    CHECK(text.find("[capacitance]") != std::string::npos);
    CHECK(text.find("[timing]") != std::string::npos);
    CHECK(text.find("[ladder]") == std::string::npos);
    const RunConfig c = parse(text);
    CHECK(c.constants.caps.c_parasitic == k.caps.c_parasitic);
    CHECK(c.constants.timing.e_sl_per_on_cell == k.timing.e_sl_per_on_cell);
    CHECK(c.constants.timing.r_discharge == k.timing.r_discharge);
}

TEST_CASE("missing config file is a configuration error") {
    try {
        read_config_file("/nonexistent/mcam.ini");
        FAIL("no error");
    } catch (const Error& e) {
        CHECK(e.code() == Errc::config_error);
    }
}
