#include "mcam/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <ostream>
#include <sstream>
#include <type_traits>
#include <vector>

#include "mcam/error.hpp"
#include "mcam/hdc.hpp"

namespace mcam {

namespace {

std::string exact(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

double to_double(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const double v = std::stod(text, &used);
        if (used != text.size() || !std::isfinite(v)) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw Error(Errc::config_error, key + ": expected a number, got '" + text + "'");
    }
}

long long to_integer(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        const long long v = std::stoll(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw Error(Errc::config_error, key + ": expected an integer, got '" + text + "'");
    }
}

unsigned long long to_unsigned(const std::string& key, const std::string& text) {
    try {
        std::size_t used = 0;
        if (text.find('-') != std::string::npos) throw std::invalid_argument(text);
        const unsigned long long v = std::stoull(text, &used);
        if (used != text.size()) throw std::invalid_argument(text);
        return v;
    } catch (const std::exception&) {
        throw Error(Errc::config_error, key + ": expected an integer >= 0, got '" + text + "'");
    }
}

struct Field {
    const char* section;
    const char* key;
    std::function<void(const std::string&)> set;
    std::function<std::string()> get;
};

std::vector<Field> fields(RunConfig& c) {
    std::vector<Field> f;
    auto real = [&f](const char* s, const char* k, double& v) {
        const std::string name = std::string(s) + "." + k;
        f.push_back({s, k, [&v, name](const std::string& t) { v = to_double(name, t); }, [&v] { return exact(v); }});
    };
    auto integer = [&f](const char* s, const char* k, auto& v) {
        const std::string name = std::string(s) + "." + k;
        f.push_back({s, k,
                     [&v, name](const std::string& t) {
                         using T = std::remove_reference_t<decltype(v)>;
                         if constexpr (std::is_unsigned_v<T>)
                             v = static_cast<T>(to_unsigned(name, t));
                         else {
                             const long long x = to_integer(name, t);
                             if (x < std::numeric_limits<T>::min() || x > std::numeric_limits<T>::max())
                                 throw Error(Errc::config_error, name + ": out of range");
                             v = static_cast<T>(x);
                         }
                     },
                     [&v] { return std::to_string(v); }});
    };
    auto text = [&f](const char* s, const char* k, std::string& v) {
        f.push_back({s, k, [&v](const std::string& t) { v = t; }, [&v] { return v; }});
    };
    auto topology = [&f](const char* s, const char* k, Topology& v) {
        f.push_back({s, k, [&v](const std::string& t) { v = parse_topology(t); }, [&v] { return std::string(to_string(v)); }});
    };

    integer("ladder", "bits", c.ladder.bits);
    real("ladder", "vth_min", c.ladder.vth_min);
    real("ladder", "vth_max", c.ladder.vth_max);
    real("ladder", "v_sl", c.ladder.v_sl);

    real("variation", "sigma_vth", c.variation.sigma_vth);
    integer("variation", "seed", c.variation.seed);

    topology("array", "topology", c.array.topology);
    integer("array", "rows", c.array.rows);
    integer("array", "cols", c.array.cols);

    real("capacitance", "c_d_p", c.constants.caps.c_d_p);
    real("capacitance", "c_fefet", c.constants.caps.c_fefet);
    real("capacitance", "c_nmos", c.constants.caps.c_nmos);
    real("capacitance", "c_parasitic", c.constants.caps.c_parasitic);

    real("timing", "v_dd", c.constants.timing.v_dd);
    real("timing", "v_ref", c.constants.timing.v_ref);
    real("timing", "r_discharge", c.constants.timing.r_discharge);
    real("timing", "t_precharge", c.constants.timing.t_precharge);
    real("timing", "t_stage", c.constants.timing.t_stage);
    real("timing", "e_sl_per_on_cell", c.constants.timing.e_sl_per_on_cell);
    real("timing", "t_sense", c.constants.timing.t_sense);

    real("priors", "v_dd", c.priors.v_dd);
    real("priors", "v_ref", c.priors.v_ref);
    real("priors", "c_d_p", c.priors.c_d_p);
    real("priors", "c_fefet", c.priors.c_fefet);
    real("priors", "c_nmos", c.priors.c_nmos);
    real("priors", "t_precharge", c.priors.t_precharge);
    real("priors", "t_sense", c.priors.t_sense);

    integer("montecarlo", "trials", c.montecarlo.trials);
    integer("montecarlo", "cols", c.montecarlo.cols);
    text("montecarlo", "scenario", c.montecarlo.scenario);

    text("sweep", "rows", c.sweep.rows);
    text("sweep", "cells", c.sweep.cells);
    topology("sweep", "topology", c.sweep.topology);
    integer("sweep", "queries", c.sweep.queries);
    text("sweep", "workload", c.sweep.workload);

    text("hdc", "dataset", c.hdc.dataset);
    text("hdc", "data_dir", c.hdc.data_dir);
    integer("hdc", "bits", c.hdc.bits);
    integer("hdc", "dim", c.hdc.dim);
    integer("hdc", "epochs", c.hdc.epochs);
    real("hdc", "learning_rate", c.hdc.learning_rate);
    text("hdc", "similarity", c.hdc.similarity);
    topology("hdc", "topology", c.hdc.topology);

    integer("run", "seed", c.seed);
    return f;
}

}  // namespace

ThresholdLadder RunConfig::make_ladder() const {
    return build_ladder(ladder.bits, ladder.vth_min, ladder.vth_max, ladder.v_sl);
}

void RunConfig::validate() const {
    try {
        make_ladder();
        if (!(variation.sigma_vth >= 0.0)) throw Error(Errc::config_error, "variation.sigma_vth must be >= 0");
        if (array.rows < 1 || array.cols < 1) throw Error(Errc::config_error, "array.rows and array.cols must be >= 1");
        constants.caps.validate();
        constants.timing.validate();
        if (!(priors.v_ref > 0.0 && priors.v_ref < priors.v_dd))
            throw Error(Errc::config_error, "priors need 0 < v_ref < v_dd");
        if (montecarlo.trials < 1) throw Error(Errc::config_error, "montecarlo.trials must be >= 1");
        if (montecarlo.cols < 1) throw Error(Errc::config_error, "montecarlo.cols must be >= 1");
        if (montecarlo.scenario != "worst_case" && montecarlo.scenario != "exact_match")
            throw Error(Errc::config_error, "montecarlo.scenario must be worst_case or exact_match");
        parse_geometry_range(sweep.rows);
        parse_geometry_range(sweep.cells);
        if (sweep.queries < 1) throw Error(Errc::config_error, "sweep.queries must be >= 1");
        if (sweep.workload != "random" && sweep.workload != "one_mismatch")
            throw Error(Errc::config_error, "sweep.workload must be random or one_mismatch");
        if (hdc.dataset != "synthetic") hdc::parse_dataset_format(hdc.dataset);
        if (hdc.bits < kMinBits || hdc.bits > kMaxBits) throw Error(Errc::config_error, "hdc.bits must be 1..3");
        if (hdc.dim < 1) throw Error(Errc::config_error, "hdc.dim must be >= 1");
        if (hdc.epochs < 0) throw Error(Errc::config_error, "hdc.epochs must be >= 0");
        if (!(hdc.learning_rate > 0.0)) throw Error(Errc::config_error, "hdc.learning_rate must be > 0");
        if (hdc.similarity != "all") hdc::parse_similarity(hdc.similarity);
    } catch (const Error& e) {
        if (e.code() == Errc::config_error) throw;
        throw Error(Errc::config_error, e.what());
    }
}

RunConfig read_config(std::istream& in) {
    namespace pt = boost::property_tree;
    // Trailing "; ..." or "# ..." after whitespace is a comment.
    std::stringstream clean;
    for (std::string line; std::getline(in, line);) {
        for (std::size_t i = 1; i < line.size(); ++i)
            if ((line[i] == ';' || line[i] == '#') && (line[i - 1] == ' ' || line[i - 1] == '\t')) {
                line.erase(i);
                break;
            }
        clean << line << '\n';
    }
    pt::ptree tree;
    try {
        pt::read_ini(clean, tree);
    } catch (const pt::ini_parser_error& e) {
        throw Error(Errc::config_error, e.what());
    }
    RunConfig config;
    auto table = fields(config);
    for (const auto& [section, body] : tree) {
        if (body.empty())
            throw Error(Errc::config_error, "key '" + section + "' is outside any section");
        for (const auto& [key, value] : body) {
            auto it = std::find_if(table.begin(), table.end(),
                                   [&](const Field& f) { return section == f.section && key == f.key; });
            if (it == table.end()) throw Error(Errc::config_error, "unknown key '" + section + "." + key + "'");
            it->set(value.get_value<std::string>());
        }
    }
    config.validate();
    return config;
}

RunConfig read_config_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error(Errc::config_error, "cannot open config file " + path.string());
    return read_config(in);
}

void write_config(std::ostream& out, const RunConfig& config) {
    RunConfig copy = config;
    const auto table = fields(copy);
    std::string current;
    for (const auto& f : table) {
        if (current != f.section) {
            if (!current.empty()) out << '\n';
            current = f.section;
            out << '[' << current << "]\n";
        }
        out << f.key << " = " << f.get() << '\n';
    }
}

void write_constants_section(std::ostream& out, const Calibration& constants) {
    RunConfig copy;
    copy.constants = constants;
    const auto table = fields(copy);
    std::string current;
    for (const auto& f : table) {
        const std::string s = f.section;
        if (s != "capacitance" && s != "timing") continue;
        if (current != s) {
            if (!current.empty()) out << '\n';
            current = s;
            out << '[' << current << "]\n";
        }
        out << f.key << " = " << f.get() << '\n';
    }
}

}  // namespace mcam
