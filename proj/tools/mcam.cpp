// mcam: command-line front end for the multi-bit CAM simulator.
//
// Exit codes: 0 success, 1 simulation failure, 2 configuration error,
// 3 --check threshold violated.

#include <CLI11.hpp>

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"
#include "mcam/array.hpp"
#include "mcam/config.hpp"
#include "mcam/energy.hpp"
#include "mcam/error.hpp"
#include "mcam/hdc.hpp"
#include "mcam/monte_carlo.hpp"

namespace {

using json = nlohmann::json;
using namespace mcam;

constexpr int kExitOk = 0;
constexpr int kExitSimulation = 1;
constexpr int kExitConfig = 2;
constexpr int kExitCheck = 3;

struct Common {
    std::string config;
    std::optional<std::uint64_t> seed;
    std::string emit_csv;
    std::string emit_json;
    bool check = false;
};

void add_common(CLI::App* cmd, Common& c) {
    cmd->add_option("--config", c.config, "Config file (default: $MCAM_CONFIG if set)");
    cmd->add_option("--seed", c.seed, "Random seed");
    cmd->add_option("--emit-csv", c.emit_csv, "Write CSV results to this path");
    cmd->add_option("--emit-json", c.emit_json, "Write a JSON summary to this path");
    cmd->add_flag("--check", c.check, "Exit 3 if an acceptance threshold is violated");
}

RunConfig load_config(const Common& c) {
    RunConfig cfg;
    std::string path = c.config;
    if (path.empty()) {
        if (const char* env = std::getenv(kConfigEnvVar)) path = env;
    }
    if (!path.empty()) cfg = read_config_file(path);
    if (c.seed) {
        cfg.seed = *c.seed;
        cfg.variation.seed = *c.seed;
    }
    return cfg;
}

template <class T>
void override(T& target, const std::optional<T>& value) {
    if (value) target = *value;
}

std::vector<int> parse_word(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            const int v = std::stoi(item, &used);
            if (used != item.size()) throw std::invalid_argument(item);
            out.push_back(v);
        } catch (const std::exception&) {
            throw Error(Errc::config_error, "bad symbol '" + item + "' in word '" + text + "'");
        }
    }
    if (out.empty()) throw Error(Errc::config_error, "empty word");
    return out;
}

std::ofstream open_output(const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(Errc::config_error, "cannot write " + path);
    return out;
}

void emit_json(const Common& c, const json& summary) {
    if (c.emit_json.empty()) return;
    auto out = open_output(c.emit_json);
    out << summary.dump(2) << '\n';
}

json constants_json(const Calibration& k) {
    return {{"c_d_p", k.caps.c_d_p},
            {"c_fefet", k.caps.c_fefet},
            {"c_nmos", k.caps.c_nmos},
            {"c_parasitic", k.caps.c_parasitic},
            {"v_dd", k.timing.v_dd},
            {"v_ref", k.timing.v_ref},
            {"r_discharge", k.timing.r_discharge},
            {"t_precharge", k.timing.t_precharge},
            {"t_stage", k.timing.t_stage},
            {"e_sl_per_on_cell", k.timing.e_sl_per_on_cell},
            {"t_sense", k.timing.t_sense}};
}

int report_check(const std::vector<std::pair<std::string, bool>>& checks) {
    bool ok = true;
    for (const auto& [name, pass] : checks) {
        std::cout << "check " << name << ": " << (pass ? "pass" : "FAIL") << '\n';
        ok = ok && pass;
    }
    return ok ? kExitOk : kExitCheck;
}

// --- search -----------------------------------------------------------------

struct SearchArgs {
    Common common;
    std::optional<Topology> topology;
    std::optional<int> bits;
    std::vector<std::string> words;
    std::string contents;
    std::string query;
    std::optional<double> sigma;
};

int run_search(const SearchArgs& a) {
    RunConfig cfg = load_config(a.common);
    override(cfg.array.topology, a.topology);
    override(cfg.ladder.bits, a.bits);
    cfg.validate();

    std::vector<std::vector<int>> words;
    if (!a.contents.empty()) {
        std::ifstream in(a.contents);
        if (!in) throw Error(Errc::config_error, "cannot open contents file " + a.contents);
        words = read_contents_csv(in);
    }
    for (const auto& w : a.words) words.push_back(parse_word(w));
    if (words.empty()) throw Error(Errc::config_error, "give at least one --word or --contents");
    if (a.query.empty()) throw Error(Errc::config_error, "--query is required");
    const std::vector<int> query = parse_word(a.query);

    const ThresholdLadder ladder = cfg.make_ladder();
    CamArray array(cfg.array.topology, ladder, words.size(), query.size());
    std::optional<VariationSampler> sampler;
    if (a.sigma) {
        if (!(*a.sigma >= 0.0)) throw Error(Errc::config_error, "--sigma must be >= 0");
        sampler.emplace(VariationModel{*a.sigma, cfg.variation.seed});
    }
    for (std::size_t r = 0; r < words.size(); ++r) {
        if (words[r].size() != query.size())
            throw Error(Errc::config_error, "word " + std::to_string(r) + " width differs from the query width");
        array.write_word(r, words[r], sampler ? &*sampler : nullptr);
    }

    SearchReport report = search(array, query);
    apply_cost(report, array.topology(), static_cast<int>(array.cols()), cfg.constants.caps, cfg.constants.timing);

    int matches = 0;
    json rows = json::array();
    std::cout << "topology " << to_string(array.topology()) << "\n";
    for (std::size_t r = 0; r < report.rows(); ++r) {
        matches += report.match[r];
        std::cout << "row " << r << ": " << (report.match[r] ? "match" : "mismatch") << " (" << report.match_count[r]
                  << "/" << array.cols() << " cells)\n";
        rows.push_back({{"row", r},
                        {"match", report.match[r] != 0},
                        {"match_count", report.match_count[r]},
                        {"conducting_cells", report.conducting_cells[r]},
                        {"precharge_events", report.row_precharge_events[r]}});
    }
    std::cout << "matches " << matches << "\n"
              << "energy_fj " << format_number(report.energy_j * 1e15) << "\n"
              << "latency_ps " << format_number(report.latency_s * 1e12) << "\n";

    if (!a.common.emit_csv.empty()) {
        auto out = open_output(a.common.emit_csv);
        out << "row,match,match_count,conducting_cells,precharge_events\n";
        for (std::size_t r = 0; r < report.rows(); ++r)
            out << r << ',' << int(report.match[r]) << ',' << report.match_count[r] << ','
                << report.conducting_cells[r] << ',' << report.row_precharge_events[r] << '\n';
    }
    emit_json(a.common, {{"command", "search"},
                         {"topology", to_string(array.topology())},
                         {"bits", ladder.bits},
                         {"rows", rows},
                         {"matches", matches},
                         {"precharge_events", report.precharge_events},
                         {"discharge_events", report.discharge_events},
                         {"conducting_cells", report.conducting_cells_total},
                         {"energy_j", report.energy_j},
                         {"latency_s", report.latency_s}});
    return kExitOk;
}

// --- sweep ------------------------------------------------------------------

struct SweepArgs {
    Common common;
    std::optional<std::string> rows;
    std::optional<std::string> cells;
    std::optional<Topology> topology;
    std::optional<int> bits;
    std::optional<int> queries;
    std::optional<std::string> workload;
};

int run_sweep(const SweepArgs& a) {
    RunConfig cfg = load_config(a.common);
    override(cfg.sweep.rows, a.rows);
    override(cfg.sweep.cells, a.cells);
    override(cfg.sweep.topology, a.topology);
    override(cfg.ladder.bits, a.bits);
    override(cfg.sweep.queries, a.queries);
    override(cfg.sweep.workload, a.workload);
    cfg.validate();

    SweepSpec spec;
    spec.rows = parse_geometry_range(cfg.sweep.rows);
    spec.cells = parse_geometry_range(cfg.sweep.cells);
    spec.topology = cfg.sweep.topology;
    spec.bits = cfg.ladder.bits;
    spec.workload.kind =
        cfg.sweep.workload == "one_mismatch" ? SweepWorkload::Kind::one_mismatch : SweepWorkload::Kind::random;
    spec.workload.queries = cfg.sweep.queries;
    spec.workload.seed = cfg.seed;
    spec.constants = cfg.constants;

    const std::vector<SweepRecord> records = sweep(spec);
    write_sweep_csv(std::cout, records);
    if (!a.common.emit_csv.empty()) {
        auto out = open_output(a.common.emit_csv);
        write_sweep_csv(out, records);
    }

    std::vector<std::pair<std::string, bool>> checks;
    json trends = json::object();
    if (spec.rows.size() >= 2) {
        for (std::size_t cells : spec.cells) {
            std::vector<double> x, energy, latency;
            for (const auto& r : records)
                if (r.cells == cells) {
                    x.push_back(static_cast<double>(r.rows));
                    energy.push_back(r.energy_j);
                    latency.push_back(r.latency_ps);
                }
            const double r2 = r_squared(x, energy);
            const double spread = relative_spread(latency);
            const std::string tag = "cells=" + std::to_string(cells);
            std::cout << tag << " energy_vs_rows_r2 " << format_number(r2) << " latency_spread "
                      << format_number(spread) << "\n";
            trends[tag] = {{"energy_vs_rows_r2", r2}, {"latency_spread", spread}};
            checks.emplace_back(tag + " energy linear in rows (r2 > 0.99)", r2 > 0.99);
            checks.emplace_back(tag + " latency spread < 5%", spread < 0.05);
        }
    }
    if (spec.cells.size() >= 2) {
        for (std::size_t rows : spec.rows) {
            std::vector<const SweepRecord*> line;
            for (const auto& r : records)
                if (r.rows == rows) line.push_back(&r);
            bool rising = true;
            for (std::size_t i = 1; i < line.size(); ++i)
                rising = rising && line[i]->latency_ps > line[i - 1]->latency_ps &&
                         line[i]->energy_j > line[i - 1]->energy_j;
            const std::string tag = "rows=" + std::to_string(rows);
            trends[tag] = {{"increasing_with_cells", rising}};
            checks.emplace_back(tag + " latency and energy increase with cells", rising);
        }
    }

    json points = json::array();
    for (const auto& r : records)
        points.push_back({{"rows", r.rows},
                          {"cells", r.cells},
                          {"energy_j", r.energy_j},
                          {"energy_fj_per_bit", r.energy_fj_per_bit},
                          {"latency_ps", r.latency_ps},
                          {"precharge_events", r.precharge_events},
                          {"sl_events", r.sl_events}});
    emit_json(a.common, {{"command", "sweep"},
                         {"topology", to_string(spec.topology)},
                         {"bits", spec.bits},
                         {"workload", cfg.sweep.workload},
                         {"queries", spec.workload.queries},
                         {"seed", cfg.seed},
                         {"points", points},
                         {"trends", trends}});
    return a.common.check ? report_check(checks) : kExitOk;
}

// --- montecarlo -------------------------------------------------------------

struct McArgs {
    Common common;
    std::optional<double> sigma;
    std::optional<int> trials;
    std::optional<std::size_t> cols;
    std::optional<int> bits;
    std::optional<Topology> topology;
    std::optional<std::string> scenario;
};

int run_mc(const McArgs& a) {
    RunConfig cfg = load_config(a.common);
    override(cfg.variation.sigma_vth, a.sigma);
    override(cfg.montecarlo.trials, a.trials);
    override(cfg.montecarlo.cols, a.cols);
    override(cfg.ladder.bits, a.bits);
    override(cfg.array.topology, a.topology);
    override(cfg.montecarlo.scenario, a.scenario);
    cfg.validate();

    McConfig mc;
    mc.topology = cfg.array.topology;
    mc.ladder = cfg.make_ladder();
    mc.scenario = cfg.montecarlo.scenario == "exact_match" ? exact_match_scenario(mc.ladder, cfg.montecarlo.cols)
                                                           : worst_case_scenario(mc.ladder, cfg.montecarlo.cols);
    const McSummary s = run_monte_carlo(mc, cfg.variation, cfg.montecarlo.trials);

    std::cout << "topology " << to_string(mc.topology) << "\n"
              << "scenario " << cfg.montecarlo.scenario << "\n"
              << "sigma_vth " << format_number(cfg.variation.sigma_vth) << "\n"
              << "trials " << s.trials << "\n"
              << "decision_errors " << s.decision_errors << "\n"
              << "error_rate " << format_number(s.error_rate) << "\n"
              << "device_flip_rate " << format_number(s.device_flip_rate) << "\n"
              << "min_margin_v " << format_number(s.min_margin) << "\n"
              << "mean_margin_v " << format_number(s.mean_margin) << "\n";

    if (!a.common.emit_csv.empty()) {
        auto out = open_output(a.common.emit_csv);
        out << "trial,margin_v\n";
        for (std::size_t i = 0; i < s.margins.size(); ++i) out << i << ',' << format_number(s.margins[i]) << '\n';
    }
    emit_json(a.common, {{"command", "montecarlo"},
                         {"topology", to_string(mc.topology)},
                         {"scenario", cfg.montecarlo.scenario},
                         {"bits", mc.ladder.bits},
                         {"cols", cfg.montecarlo.cols},
                         {"sigma_vth", cfg.variation.sigma_vth},
                         {"seed", cfg.variation.seed},
                         {"trials", s.trials},
                         {"decision_errors", s.decision_errors},
                         {"error_rate", s.error_rate},
                         {"device_flips", s.device_flips},
                         {"device_flip_rate", s.device_flip_rate},
                         {"min_margin", s.min_margin},
                         {"mean_margin", s.mean_margin},
                         {"margin_stddev", s.margin_stddev}});
    return a.common.check ? report_check({{"zero decision errors", s.decision_errors == 0}}) : kExitOk;
}

// --- calibrate --------------------------------------------------------------

struct CalibrateArgs {
    Common common;
    std::string emit_config;
    std::optional<double> nor_energy;   // fJ/bit
    std::optional<double> nor_latency;  // ps
    std::optional<double> nand_energy;
    std::optional<double> nand_latency;
};

int run_calibrate(const CalibrateArgs& a) {
    RunConfig cfg = load_config(a.common);
    cfg.validate();

    std::vector<CalibrationTarget> targets = reference_targets();
    for (auto& t : targets) {
        const bool nor = t.topology == Topology::nor_1t;
        if (const auto& e = nor ? a.nor_energy : a.nand_energy) t.energy_per_bit_j = *e * 1e-15;
        if (const auto& l = nor ? a.nor_latency : a.nand_latency) t.latency_s = *l * 1e-12;
    }
    const Calibration k = calibrate(targets, cfg.priors);

    write_constants_section(std::cout, k);
    if (!a.emit_config.empty()) {
        auto out = open_output(a.emit_config);
        write_constants_section(out, k);
    }

    std::vector<std::pair<std::string, bool>> checks;
    json fit = json::array();
    std::ostringstream csv;
    csv << "topology,cells,bits,target_energy_fj_per_bit,model_energy_fj_per_bit,target_latency_ps,model_latency_ps\n";
    for (const auto& t : targets) {
        const SearchCost c = search_cost(t.topology, t.events, t.cells, k.caps, k.timing);
        const double e = energy_per_bit(c.energy_j, t.cells, t.bits);
        const double e_err = std::abs(e - t.energy_per_bit_j) / t.energy_per_bit_j;
        const double l_err = std::abs(c.latency_s - t.latency_s) / t.latency_s;
        const std::string name = to_string(t.topology);
        checks.emplace_back(name + " energy within 5%", e_err < 0.05);
        checks.emplace_back(name + " latency within 5%", l_err < 0.05);
        csv << name << ',' << t.cells << ',' << t.bits << ',' << format_number(t.energy_per_bit_j * 1e15) << ','
            << format_number(e * 1e15) << ',' << format_number(t.latency_s * 1e12) << ','
            << format_number(c.latency_s * 1e12) << '\n';
        fit.push_back({{"topology", name},
                       {"cells", t.cells},
                       {"bits", t.bits},
                       {"target_energy_j_per_bit", t.energy_per_bit_j},
                       {"model_energy_j_per_bit", e},
                       {"target_latency_s", t.latency_s},
                       {"model_latency_s", c.latency_s}});
    }
    if (!a.common.emit_csv.empty()) {
        auto out = open_output(a.common.emit_csv);
        out << csv.str();
    }
    emit_json(a.common, {{"command", "calibrate"}, {"constants", constants_json(k)}, {"fit", fit}});
    return a.common.check ? report_check(checks) : kExitOk;
}

// --- hdc --------------------------------------------------------------------

struct HdcArgs {
    Common common;
    std::optional<std::string> dataset;
    std::optional<std::string> data_dir;
    std::optional<int> bits;
    std::optional<int> dim;
    std::optional<int> epochs;
    std::optional<double> lr;
    std::optional<std::string> similarity;
    std::optional<Topology> topology;
    std::string model_out;
};

int run_hdc(const HdcArgs& a) {
    RunConfig cfg = load_config(a.common);
    override(cfg.hdc.dataset, a.dataset);
    override(cfg.hdc.data_dir, a.data_dir);
    override(cfg.hdc.bits, a.bits);
    override(cfg.hdc.dim, a.dim);
    override(cfg.hdc.epochs, a.epochs);
    override(cfg.hdc.learning_rate, a.lr);
    override(cfg.hdc.similarity, a.similarity);
    override(cfg.hdc.topology, a.topology);
    cfg.validate();

    hdc::DatasetSplit data;
    if (cfg.hdc.dataset == "synthetic") {
        data = hdc::synthetic_dataset(64, 8, 40, 20, 0.5, cfg.seed);
    } else {
        try {
            data = hdc::load_dataset(cfg.hdc.data_dir, hdc::parse_dataset_format(cfg.hdc.dataset));
        } catch (const Error& e) {
            if (e.code() == Errc::io_error) throw Error(Errc::config_error, e.what());
            throw;
        }
    }

    std::vector<hdc::Similarity> sims;
    if (cfg.hdc.similarity == "all")
        sims = {hdc::Similarity::cosine_full, hdc::Similarity::cosine_quantized, hdc::Similarity::cam_match_count};
    else
        sims = {hdc::parse_similarity(cfg.hdc.similarity)};

    hdc::TrainOptions opt;
    opt.bits = cfg.hdc.bits;
    opt.dim = cfg.hdc.dim;
    opt.epochs = cfg.hdc.epochs;
    opt.learning_rate = cfg.hdc.learning_rate;
    opt.seed = cfg.seed;
    opt.topology = cfg.hdc.topology;

    hdc::TrainResult trained = hdc::train_model(data.train, opt);
    std::vector<hdc::EvalResult> evals;
    for (auto s : sims) evals.push_back(hdc::evaluate(trained.model, data.test, s, cfg.constants));

    std::cout << "dataset " << cfg.hdc.dataset << "\n"
              << "train " << data.train.size() << " test " << data.test.size() << " features "
              << data.train.feature_dim() << " classes " << data.train.num_classes << "\n"
              << "bits " << opt.bits << " dim " << opt.dim << " epochs_run " << trained.epochs_run << "\n";
    json results = json::array();
    std::ostringstream csv;
    csv << "similarity,correct,total,accuracy,energy_fj_per_inference,latency_ps_per_inference\n";
    for (const auto& e : evals) {
        std::cout << to_string(e.similarity) << " accuracy " << format_number(e.accuracy);
        if (e.similarity == hdc::Similarity::cam_match_count)
            std::cout << " energy_fj_per_inference " << format_number(e.energy_per_inference_j * 1e15)
                      << " latency_ps_per_inference " << format_number(e.latency_per_inference_s * 1e12);
        std::cout << "\n";
        csv << to_string(e.similarity) << ',' << e.correct << ',' << e.total << ',' << format_number(e.accuracy) << ','
            << format_number(e.energy_per_inference_j * 1e15) << ',' << format_number(e.latency_per_inference_s * 1e12)
            << '\n';
        results.push_back({{"similarity", to_string(e.similarity)},
                           {"correct", e.correct},
                           {"total", e.total},
                           {"accuracy", e.accuracy},
                           {"energy_per_inference_j", e.energy_per_inference_j},
                           {"latency_per_inference_s", e.latency_per_inference_s}});
    }
    if (!a.common.emit_csv.empty()) {
        auto out = open_output(a.common.emit_csv);
        out << csv.str();
    }
    if (!a.model_out.empty()) {
        auto out = open_output(a.model_out);
        hdc::save_model(out, trained.model);
    }
    emit_json(a.common, {{"command", "hdc"},
                         {"dataset", cfg.hdc.dataset},
                         {"bits", opt.bits},
                         {"dim", opt.dim},
                         {"epochs_run", trained.epochs_run},
                         {"mispredictions", trained.mispredictions},
                         {"seed", opt.seed},
                         {"topology", to_string(opt.topology)},
                         {"results", results}});

    if (!a.common.check) return kExitOk;
    const hdc::EvalResult* qcos = nullptr;
    const hdc::EvalResult* cam = nullptr;
    for (const auto& e : evals) {
        if (e.similarity == hdc::Similarity::cosine_quantized) qcos = &e;
        if (e.similarity == hdc::Similarity::cam_match_count) cam = &e;
    }
    std::vector<std::pair<std::string, bool>> checks;
    if (qcos) checks.emplace_back("quantized cosine accuracy >= 0.85", qcos->accuracy >= 0.85);
    if (qcos && cam)
        checks.emplace_back("cam accuracy within 5 points of quantized cosine",
                            std::abs(cam->accuracy - qcos->accuracy) <= 0.05);
    if (checks.empty()) checks.emplace_back("similarity set includes cosine_quantized", false);
    return report_check(checks);
}

int classify(const Error& e) {
    switch (e.code()) {
        case Errc::config_error:
        case Errc::io_error:
            return kExitConfig;
        default:
            return kExitSimulation;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Behavioural simulator for multi-bit FeFET content-addressable memories"};
    app.require_subcommand(1);

    const std::map<std::string, Topology> topologies{{"nor", Topology::nor_1t}, {"nand", Topology::nand_2t}};

    SearchArgs search_args;
    auto* search_cmd = app.add_subcommand("search", "Search one query against a small array");
    add_common(search_cmd, search_args.common);
    search_cmd->add_option("--topology", search_args.topology)->transform(CLI::CheckedTransformer(topologies));
    search_cmd->add_option("--bits", search_args.bits, "Bits per cell (1..3)");
    search_cmd->add_option("--word", search_args.words, "Stored word, comma-separated symbols (repeat for rows)");
    search_cmd->add_option("--contents", search_args.contents, "CSV file of stored words, one per line");
    search_cmd->add_option("--query", search_args.query, "Query word, comma-separated symbols");
    search_cmd->add_option("--sigma", search_args.sigma, "Program with this threshold sigma (V)");

    SweepArgs sweep_args;
    auto* sweep_cmd = app.add_subcommand("sweep", "Energy/latency sweep over array geometry");
    add_common(sweep_cmd, sweep_args.common);
    sweep_cmd->add_option("--rows", sweep_args.rows, "Rows: lo:hi (doubling), list or single value");
    sweep_cmd->add_option("--cells", sweep_args.cells, "Cells per word: lo:hi, list or single value");
    sweep_cmd->add_option("--topology", sweep_args.topology)->transform(CLI::CheckedTransformer(topologies));
    sweep_cmd->add_option("--bits", sweep_args.bits);
    sweep_cmd->add_option("--queries", sweep_args.queries, "Measured searches per point");
    sweep_cmd->add_option("--workload", sweep_args.workload, "random | one_mismatch");

    McArgs mc_args;
    auto* mc_cmd = app.add_subcommand("montecarlo", "Threshold-variation Monte Carlo");
    add_common(mc_cmd, mc_args.common);
    mc_cmd->add_option("--sigma", mc_args.sigma, "Threshold sigma (V)");
    mc_cmd->add_option("--trials", mc_args.trials);
    mc_cmd->add_option("--cols", mc_args.cols, "Cells per word");
    mc_cmd->add_option("--bits", mc_args.bits);
    mc_cmd->add_option("--topology", mc_args.topology)->transform(CLI::CheckedTransformer(topologies));
    mc_cmd->add_option("--scenario", mc_args.scenario, "worst_case | exact_match");

    CalibrateArgs cal_args;
    auto* cal_cmd = app.add_subcommand("calibrate", "Fit capacitance/timing constants to the reference endpoints");
    add_common(cal_cmd, cal_args.common);
    cal_cmd->add_option("--emit-config", cal_args.emit_config, "Write the [capacitance]/[timing] sections here");
    cal_cmd->add_option("--nor-energy", cal_args.nor_energy, "NOR target energy (fJ/bit)");
    cal_cmd->add_option("--nor-latency", cal_args.nor_latency, "NOR target latency (ps)");
    cal_cmd->add_option("--nand-energy", cal_args.nand_energy, "NAND target energy (fJ/bit)");
    cal_cmd->add_option("--nand-latency", cal_args.nand_latency, "NAND target latency (ps)");

    HdcArgs hdc_args;
    auto* hdc_cmd = app.add_subcommand("hdc", "Train and evaluate a hyperdimensional classifier");
    add_common(hdc_cmd, hdc_args.common);
    hdc_cmd->add_option("--dataset", hdc_args.dataset, "isolet | ucihar | generic | synthetic");
    hdc_cmd->add_option("--data-dir", hdc_args.data_dir);
    hdc_cmd->add_option("--bits", hdc_args.bits);
    hdc_cmd->add_option("--dim", hdc_args.dim, "Hypervector dimension");
    hdc_cmd->add_option("--epochs", hdc_args.epochs, "Retraining epochs");
    hdc_cmd->add_option("--lr", hdc_args.lr, "Retraining learning rate");
    hdc_cmd->add_option("--similarity", hdc_args.similarity, "all | cam | cosine | cosine_quantized");
    hdc_cmd->add_option("--topology", hdc_args.topology)->transform(CLI::CheckedTransformer(topologies));
    hdc_cmd->add_option("--model-out", hdc_args.model_out, "Write the trained model (JSON)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitConfig;
    }

    try {
        if (*search_cmd) return run_search(search_args);
        if (*sweep_cmd) return run_sweep(sweep_args);
        if (*mc_cmd) return run_mc(mc_args);
        if (*cal_cmd) return run_calibrate(cal_args);
        if (*hdc_cmd) return run_hdc(hdc_args);
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << '\n';
        return classify(e);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitSimulation;
    }
    return kExitSimulation;
}
