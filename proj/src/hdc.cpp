#include "mcam/hdc.hpp"

#include <algorithm>
#include <boost/math/distributions/normal.hpp>
#include <cmath>
#include <fstream>
#include <limits>
#include <map>
#include "json.hpp"
#include <numbers>
#include <random>
#include <sstream>

#include "mcam/error.hpp"

namespace mcam::hdc {

using nlohmann::json;

EncoderConfig EncoderConfig::make(int feature_dim, int hyper_dim, std::uint64_t seed) {
    if (feature_dim < 1 || hyper_dim < 1)
        throw Error(Errc::dimension_mismatch, "encoder needs feature_dim >= 1 and hyper_dim >= 1");
    EncoderConfig enc;
    enc.feature_dim = feature_dim;
    enc.hyper_dim = hyper_dim;
    enc.seed = seed;
    enc.projection.resize(feature_dim, hyper_dim);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    for (int i = 0; i < feature_dim; ++i)
        for (int j = 0; j < hyper_dim; ++j) enc.projection(i, j) = normal(rng);
    return enc;
}

Vector encode(std::span<const double> features, const EncoderConfig& encoder) {
    if (static_cast<int>(features.size()) != encoder.feature_dim)
        throw Error(Errc::dimension_mismatch, "expected " + std::to_string(encoder.feature_dim) + " features, got " +
                                                  std::to_string(features.size()));
    const Eigen::Map<const Eigen::RowVectorXd> f(features.data(), static_cast<Eigen::Index>(features.size()));
    return (f * encoder.projection).transpose();
}

Matrix encode_batch(const Matrix& features, const EncoderConfig& encoder) {
    if (features.cols() != encoder.feature_dim)
        throw Error(Errc::dimension_mismatch, "expected " + std::to_string(encoder.feature_dim) + " features, got " +
                                                  std::to_string(features.cols()));
    return features * encoder.projection;
}

double cosine(const Vector& a, const Vector& b) {
    const double na = a.norm();
    const double nb = b.norm();
    if (na == 0.0 || nb == 0.0) return 0.0;
    return a.dot(b) / (na * nb);
}

int predict_cosine(const std::vector<ClassPrototype>& prototypes, const Vector& query) {
    int best = -1;
    double best_sim = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < prototypes.size(); ++k) {
        const double s = cosine(prototypes[k].vector, query);
        if (s > best_sim) {
            best_sim = s;
            best = static_cast<int>(k);
        }
    }
    return best;
}

std::vector<ClassPrototype> train_single_pass(const Matrix& encoded, std::span<const int> labels, int num_classes) {
    if (static_cast<std::size_t>(encoded.rows()) != labels.size())
        throw Error(Errc::dimension_mismatch, "sample and label counts differ");
    if (num_classes < 1) throw Error(Errc::empty_class, "need at least one class");
    std::vector<ClassPrototype> protos(static_cast<std::size_t>(num_classes));
    std::vector<int> seen(static_cast<std::size_t>(num_classes), 0);
    for (int k = 0; k < num_classes; ++k) {
        protos[static_cast<std::size_t>(k)].label = k;
        protos[static_cast<std::size_t>(k)].vector = Vector::Zero(encoded.cols());
    }
    for (Eigen::Index i = 0; i < encoded.rows(); ++i) {
        const int l = labels[static_cast<std::size_t>(i)];
        if (l < 0 || l >= num_classes) throw Error(Errc::unknown_label, "label " + std::to_string(l));
        protos[static_cast<std::size_t>(l)].vector += encoded.row(i).transpose();
        ++seen[static_cast<std::size_t>(l)];
    }
    for (int k = 0; k < num_classes; ++k)
        if (seen[static_cast<std::size_t>(k)] == 0)
            throw Error(Errc::empty_class, "class " + std::to_string(k) + " has no training samples");
    return protos;
}

double cosine_confidence(const Vector& query, const Vector& true_prototype) {
    return std::clamp(cosine(query, true_prototype), 0.0, 1.0);
}

int retrain_epoch(std::vector<ClassPrototype>& prototypes, const Matrix& encoded, std::span<const int> labels,
                  double learning_rate, const ConfidenceFn& confidence) {
    if (prototypes.empty()) throw Error(Errc::untrained_model, "prototypes are not initialised");
    if (static_cast<std::size_t>(encoded.rows()) != labels.size())
        throw Error(Errc::dimension_mismatch, "sample and label counts differ");
    int wrong = 0;
    Vector q;
    for (Eigen::Index i = 0; i < encoded.rows(); ++i) {
        q = encoded.row(i).transpose();
        const int truth = labels[static_cast<std::size_t>(i)];
        if (truth < 0 || truth >= static_cast<int>(prototypes.size()))
            throw Error(Errc::unknown_label, "label " + std::to_string(truth));
        const int guess = predict_cosine(prototypes, q);
        if (guess == truth) continue;
        ++wrong;
        auto& c_true = prototypes[static_cast<std::size_t>(truth)].vector;
        auto& c_wrong = prototypes[static_cast<std::size_t>(guess)].vector;
        const double step = learning_rate * (1.0 - confidence(q, c_true));
        c_true += step * q;
        c_wrong -= step * q;
    }
    return wrong;
}

QuantScheme QuantScheme::make(int bits) {
    if (bits < kMinBits || bits > kMaxBits) throw Error(Errc::unsupported_precision, "quantizer bits must be 1..3");
    QuantScheme s;
    s.bits = bits;
    const int levels = 1 << bits;
    s.boundaries.assign(static_cast<std::size_t>(levels - 1), 0.0);
    const boost::math::normal_distribution<double> unit;
    // Lower half from the quantile function, upper half mirrored so the
    // boundaries are exactly antisymmetric and the median is exactly 0.
    for (int k = 1; k < levels / 2; ++k) {
        const double q = boost::math::quantile(unit, static_cast<double>(k) / levels);
        s.boundaries[static_cast<std::size_t>(k - 1)] = q;
        s.boundaries[static_cast<std::size_t>(levels - k - 1)] = -q;
    }
    s.boundaries[static_cast<std::size_t>(levels / 2 - 1)] = 0.0;
    return s;
}

int quantize_z(double z, const QuantScheme& scheme) {
    return static_cast<int>(std::upper_bound(scheme.boundaries.begin(), scheme.boundaries.end(), z) -
                            scheme.boundaries.begin());
}

std::vector<int> quantize(std::span<const double> values, const QuantScheme& scheme) {
    if (values.empty()) throw Error(Errc::degenerate_vector, "empty vector");
    double mean = 0.0;
    for (double v : values) mean += v;
    mean /= static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) ss += (v - mean) * (v - mean);
    const double sigma = std::sqrt(ss / static_cast<double>(values.size()));
    if (!(sigma > 0.0)) throw Error(Errc::degenerate_vector, "vector has zero standard deviation");
    std::vector<int> out(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) out[i] = quantize_z((values[i] - mean) / sigma, scheme);
    return out;
}

std::vector<int> quantize(const Vector& values, const QuantScheme& scheme) {
    return quantize(std::span<const double>(values.data(), static_cast<std::size_t>(values.size())), scheme);
}

std::vector<double> bin_centroids(const QuantScheme& scheme) {
    const int levels = scheme.levels();
    auto pdf = [](double z) { return std::isinf(z) ? 0.0 : std::exp(-0.5 * z * z) / std::sqrt(2.0 * std::numbers::pi); };
    std::vector<double> c(static_cast<std::size_t>(levels));
    for (int k = 0; k < levels; ++k) {
        const double lo = k == 0 ? -std::numeric_limits<double>::infinity() : scheme.boundaries[static_cast<std::size_t>(k - 1)];
        const double hi = k == levels - 1 ? std::numeric_limits<double>::infinity()
                                          : scheme.boundaries[static_cast<std::size_t>(k)];
        c[static_cast<std::size_t>(k)] = (pdf(lo) - pdf(hi)) * levels;
    }
    return c;
}

void program_associative_memory(HdcModel& model, Topology topology) {
    if (model.prototypes.empty()) throw Error(Errc::untrained_model, "no prototypes to store");
    const ThresholdLadder ladder = build_ladder(model.quant.bits, LadderDefaults::vth_min, LadderDefaults::vth_max);
    CamArray am(topology, ladder, model.prototypes.size(), static_cast<std::size_t>(model.encoder.hyper_dim));
    for (std::size_t r = 0; r < model.prototypes.size(); ++r) {
        const auto symbols = quantize(model.prototypes[r].vector, model.quant);
        am.write_word(r, symbols);
    }
    model.am.emplace(std::move(am));
}

Inference infer_encoded(HdcModel& model, const Vector& hypervector) {
    if (!model.am) throw Error(Errc::untrained_model, "associative memory is not programmed");
    if (hypervector.size() != model.encoder.hyper_dim)
        throw Error(Errc::dimension_mismatch, "hypervector length differs from the model dimension");
    const auto symbols = quantize(hypervector, model.quant);
    Inference out;
    out.report = search(*model.am, symbols);
    for (std::size_t r = 0; r < out.report.rows(); ++r) {
        if (out.label < 0 || out.report.match_count[r] > out.match_count) {
            out.label = model.prototypes[r].label;
            out.match_count = out.report.match_count[r];
        }
    }
    return out;
}

Inference infer(HdcModel& model, std::span<const double> features) {
    if (!model.am) throw Error(Errc::untrained_model, "associative memory is not programmed");
    return infer_encoded(model, encode(features, model.encoder));
}

// ---------------------------------------------------------------------------
// Datasets

DatasetFormat parse_dataset_format(const std::string& name) {
    if (name == "isolet" || name == "isolet_csv") return DatasetFormat::isolet_csv;
    if (name == "ucihar" || name == "ucihar_txt") return DatasetFormat::ucihar_txt;
    if (name == "generic" || name == "generic_csv") return DatasetFormat::generic_csv;
    throw Error(Errc::config_error, "unknown dataset format '" + name + "'");
}

namespace {

struct RawSet {
    std::vector<std::vector<double>> rows;
    std::vector<long> labels;  // as read from file
};

double parse_double(const std::string& field, const std::filesystem::path& file, std::size_t lineno) {
    try {
        std::size_t used = 0;
        const double v = std::stod(field, &used);
        if (field.find_first_not_of(" \t\r", used) != std::string::npos || !std::isfinite(v))
            throw std::invalid_argument(field);
        return v;
    } catch (const std::exception&) {
        throw Error(Errc::malformed_input,
                    file.string() + ":" + std::to_string(lineno) + ": not a number '" + field + "'");
    }
}

long parse_label(const std::string& field, const std::filesystem::path& file, std::size_t lineno) {
    const double v = parse_double(field, file, lineno);
    if (v != std::floor(v))
        throw Error(Errc::malformed_input, file.string() + ":" + std::to_string(lineno) + ": non-integer label");
    return static_cast<long>(v);
}

std::ifstream open_input(const std::filesystem::path& file) {
    std::ifstream in(file);
    if (!in) throw Error(Errc::io_error, "cannot open " + file.string());
    return in;
}

bool blank(const std::string& line) { return line.find_first_not_of(" \t\r") == std::string::npos; }

void check_width(RawSet& set, const std::vector<double>& row, const std::filesystem::path& file, std::size_t lineno) {
    if (!set.rows.empty() && row.size() != set.rows.front().size())
        throw Error(Errc::dimension_mismatch, file.string() + ":" + std::to_string(lineno) + ": expected " +
                                                  std::to_string(set.rows.front().size()) + " features, got " +
                                                  std::to_string(row.size()));
}

RawSet read_isolet(const std::filesystem::path& file) {
    auto in = open_input(file);
    RawSet set;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() < 2)
            throw Error(Errc::malformed_input, file.string() + ":" + std::to_string(lineno) + ": too few fields");
        std::vector<double> row;
        row.reserve(fields.size() - 1);
        for (std::size_t i = 0; i + 1 < fields.size(); ++i) row.push_back(parse_double(fields[i], file, lineno));
        check_width(set, row, file, lineno);
        set.labels.push_back(parse_label(fields.back(), file, lineno));
        set.rows.push_back(std::move(row));
    }
    return set;
}

RawSet read_whitespace_pair(const std::filesystem::path& x_file, const std::filesystem::path& y_file) {
    RawSet set;
    {
        auto in = open_input(x_file);
        std::string line;
        std::size_t lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            if (blank(line)) continue;
            std::stringstream ss(line);
            std::vector<double> row;
            std::string f;
            while (ss >> f) row.push_back(parse_double(f, x_file, lineno));
            check_width(set, row, x_file, lineno);
            set.rows.push_back(std::move(row));
        }
    }
    auto in = open_input(y_file);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        std::stringstream ss(line);
        std::string f;
        ss >> f;
        set.labels.push_back(parse_label(f, y_file, lineno));
    }
    if (set.labels.size() != set.rows.size())
        throw Error(Errc::malformed_input, y_file.string() + ": " + std::to_string(set.labels.size()) +
                                               " labels for " + std::to_string(set.rows.size()) + " samples");
    return set;
}

RawSet read_generic(const std::filesystem::path& file) {
    auto in = open_input(file);
    std::string header;
    if (!std::getline(in, header)) throw Error(Errc::malformed_input, file.string() + ": missing header");
    if (!header.empty() && header.back() == '\r') header.pop_back();
    std::vector<std::string> names;
    {
        std::stringstream ss(header);
        std::string f;
        while (std::getline(ss, f, ',')) names.push_back(f);
    }
    const auto it = std::find(names.begin(), names.end(), "label");
    if (it == names.end()) throw Error(Errc::malformed_input, file.string() + ": header has no 'label' column");
    const auto label_col = static_cast<std::size_t>(it - names.begin());

    RawSet set;
    std::string line;
    std::size_t lineno = 1;
    while (std::getline(in, line)) {
        ++lineno;
        if (blank(line)) continue;
        std::vector<std::string> fields;
        std::stringstream ss(line);
        std::string f;
        while (std::getline(ss, f, ',')) fields.push_back(f);
        if (fields.size() != names.size())
            throw Error(Errc::malformed_input, file.string() + ":" + std::to_string(lineno) + ": expected " +
                                                   std::to_string(names.size()) + " fields");
        std::vector<double> row;
        for (std::size_t i = 0; i < fields.size(); ++i) {
            if (i == label_col)
                set.labels.push_back(parse_label(fields[i], file, lineno));
            else
                row.push_back(parse_double(fields[i], file, lineno));
        }
        set.rows.push_back(std::move(row));
    }
    return set;
}

DatasetSplit assemble(const RawSet& train, const RawSet& test, const std::filesystem::path& where) {
    if (train.rows.empty()) throw Error(Errc::malformed_input, where.string() + ": empty training set");
    if (test.rows.empty()) throw Error(Errc::malformed_input, where.string() + ": empty test set");
    const std::size_t n = train.rows.front().size();
    if (test.rows.front().size() != n)
        throw Error(Errc::dimension_mismatch, where.string() + ": train has " + std::to_string(n) +
                                                  " features, test has " + std::to_string(test.rows.front().size()));

    std::map<long, int> index;
    for (long l : train.labels) index.emplace(l, 0);
    int next = 0;
    for (auto& [label, idx] : index) idx = next++;

    auto fill = [&](const RawSet& raw, Dataset& out, const char* which) {
        out.features.resize(static_cast<Eigen::Index>(raw.rows.size()), static_cast<Eigen::Index>(n));
        out.labels.resize(raw.rows.size());
        for (std::size_t i = 0; i < raw.rows.size(); ++i) {
            for (std::size_t j = 0; j < n; ++j)
                out.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = raw.rows[i][j];
            const auto found = index.find(raw.labels[i]);
            if (found == index.end())
                throw Error(Errc::unknown_label,
                            std::string(which) + " label " + std::to_string(raw.labels[i]) + " never seen in training");
            out.labels[i] = found->second;
        }
        out.num_classes = static_cast<int>(index.size());
    };
    DatasetSplit split;
    fill(train, split.train, "train");
    fill(test, split.test, "test");
    normalize_min_max(split);
    return split;
}

std::filesystem::path first_existing(std::initializer_list<std::filesystem::path> candidates) {
    for (const auto& p : candidates)
        if (std::filesystem::exists(p)) return p;
    return *candidates.begin();
}

}  // namespace

void normalize_min_max(DatasetSplit& split) {
    const Eigen::Index n = split.train.features.cols();
    for (Eigen::Index j = 0; j < n; ++j) {
        const double lo = split.train.features.col(j).minCoeff();
        const double hi = split.train.features.col(j).maxCoeff();
        const double range = hi - lo;
        for (Dataset* d : {&split.train, &split.test}) {
            auto col = d->features.col(j);
            if (range > 0.0)
                col = (col.array() - lo) / range;
            else
                col.setZero();
        }
    }
}

DatasetSplit load_dataset(const std::filesystem::path& path, DatasetFormat format) {
    namespace fs = std::filesystem;
    switch (format) {
        case DatasetFormat::isolet_csv:
            return assemble(read_isolet(path / "isolet1+2+3+4.data"), read_isolet(path / "isolet5.data"), path);
        case DatasetFormat::ucihar_txt: {
            const fs::path train_dir = first_existing({path / "Train", path / "train", path});
            const fs::path test_dir = first_existing({path / "Test", path / "test", path});
            return assemble(read_whitespace_pair(train_dir / "X_train.txt", train_dir / "y_train.txt"),
                            read_whitespace_pair(test_dir / "X_test.txt", test_dir / "y_test.txt"), path);
        }
        case DatasetFormat::generic_csv:
            return assemble(read_generic(path / "train.csv"), read_generic(path / "test.csv"), path);
    }
    throw Error(Errc::config_error, "unknown dataset format");
}

void write_generic_csv(std::ostream& out, const Dataset& data) {
    for (Eigen::Index j = 0; j < data.features.cols(); ++j) out << 'f' << j << ',';
    out << "label\n";
    for (Eigen::Index i = 0; i < data.features.rows(); ++i) {
        for (Eigen::Index j = 0; j < data.features.cols(); ++j) out << format_number(data.features(i, j)) << ',';
        out << data.labels[static_cast<std::size_t>(i)] << '\n';
    }
}

DatasetSplit synthetic_dataset(int feature_dim, int num_classes, int train_per_class, int test_per_class,
                               double noise, std::uint64_t seed) {
    if (feature_dim < 1 || num_classes < 1 || train_per_class < 1 || test_per_class < 1)
        throw Error(Errc::invalid_range, "synthetic dataset needs positive sizes");
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> uniform(0.0, 1.0);
    std::normal_distribution<double> normal(0.0, 1.0);
    Matrix centres(num_classes, feature_dim);
    for (int k = 0; k < num_classes; ++k)
        for (int j = 0; j < feature_dim; ++j) centres(k, j) = uniform(rng);

    auto draw = [&](int per_class, Dataset& d) {
        const int total = per_class * num_classes;
        d.features.resize(total, feature_dim);
        d.labels.resize(static_cast<std::size_t>(total));
        d.num_classes = num_classes;
        for (int i = 0; i < total; ++i) {
            const int k = i % num_classes;
            d.labels[static_cast<std::size_t>(i)] = k;
            for (int j = 0; j < feature_dim; ++j) d.features(i, j) = centres(k, j) + noise * normal(rng);
        }
    };
    DatasetSplit split;
    draw(train_per_class, split.train);
    draw(test_per_class, split.test);
    normalize_min_max(split);
    return split;
}

// ---------------------------------------------------------------------------
// Training, evaluation, benchmarking

const char* to_string(Similarity s) noexcept {
    switch (s) {
        case Similarity::cam_match_count: return "cam_match_count";
        case Similarity::cosine_full: return "cosine_full";
        case Similarity::cosine_quantized: return "cosine_quantized";
    }
    return "?";
}

Similarity parse_similarity(const std::string& name) {
    if (name == "cam" || name == "cam_match_count") return Similarity::cam_match_count;
    if (name == "cosine" || name == "cosine_full") return Similarity::cosine_full;
    if (name == "cosine_quantized" || name == "qcosine") return Similarity::cosine_quantized;
    throw Error(Errc::config_error, "unknown similarity '" + name + "'");
}

TrainResult train_model(const Dataset& train, const TrainOptions& options) {
    if (train.size() == 0) throw Error(Errc::empty_class, "empty training set");
    if (options.epochs < 0) throw Error(Errc::invalid_range, "epochs must be >= 0");
    TrainResult out;
    HdcModel& model = out.model;
    model.encoder = EncoderConfig::make(train.feature_dim(), options.dim, options.seed);
    model.learning_rate = options.learning_rate;
    model.quant = QuantScheme::make(options.bits);

    const Matrix encoded = encode_batch(train.features, model.encoder);
    model.prototypes = train_single_pass(encoded, train.labels, train.num_classes);
    for (int e = 0; e < options.epochs; ++e) {
        const int wrong = retrain_epoch(model.prototypes, encoded, train.labels, options.learning_rate);
        out.mispredictions.push_back(wrong);
        ++out.epochs_run;
        if (wrong == 0) break;
    }
    program_associative_memory(model, options.topology);
    return out;
}

EvalResult evaluate(HdcModel& model, const Dataset& test, Similarity similarity, const Calibration& constants) {
    if (!model.am || model.prototypes.empty()) throw Error(Errc::untrained_model, "model has not been trained");
    const Matrix encoded = encode_batch(test.features, model.encoder);

    EvalResult r;
    r.similarity = similarity;
    r.total = test.size();
    r.predictions.resize(static_cast<std::size_t>(test.size()));

    std::vector<Vector> dequantized;
    std::vector<double> centroids;
    if (similarity == Similarity::cosine_quantized) {
        centroids = bin_centroids(model.quant);
        for (const auto& p : model.prototypes) {
            const auto sym = quantize(p.vector, model.quant);
            Vector v(static_cast<Eigen::Index>(sym.size()));
            for (std::size_t i = 0; i < sym.size(); ++i) v(static_cast<Eigen::Index>(i)) = centroids[static_cast<std::size_t>(sym[i])];
            dequantized.push_back(std::move(v));
        }
    }

    model.am->ml_state().reset();
    const int n = model.encoder.hyper_dim;
    Vector h;
    for (Eigen::Index i = 0; i < encoded.rows(); ++i) {
        h = encoded.row(i).transpose();
        int label = -1;
        switch (similarity) {
            case Similarity::cosine_full: label = model.prototypes[static_cast<std::size_t>(predict_cosine(model.prototypes, h))].label; break;
            case Similarity::cosine_quantized: {
                const auto sym = quantize(h, model.quant);
                Vector q(static_cast<Eigen::Index>(sym.size()));
                for (std::size_t j = 0; j < sym.size(); ++j) q(static_cast<Eigen::Index>(j)) = centroids[static_cast<std::size_t>(sym[j])];
                double best = -std::numeric_limits<double>::infinity();
                for (std::size_t k = 0; k < dequantized.size(); ++k) {
                    const double s = cosine(dequantized[k], q);
                    if (s > best) {
                        best = s;
                        label = model.prototypes[k].label;
                    }
                }
                break;
            }
            case Similarity::cam_match_count: {
                Inference inf = infer_encoded(model, h);
                apply_cost(inf.report, model.am->topology(), n, constants.caps, constants.timing);
                r.events.add(inf.report);
                label = inf.label;
                break;
            }
        }
        r.predictions[static_cast<std::size_t>(i)] = label;
        if (label == test.labels[static_cast<std::size_t>(i)]) ++r.correct;
    }
    r.accuracy = r.total ? static_cast<double>(r.correct) / r.total : 0.0;
    if (r.events.searches > 0) {
        r.energy_per_inference_j = r.events.energy_j / static_cast<double>(r.events.searches);
        r.latency_per_inference_s = r.events.latency_s / static_cast<double>(r.events.searches);
    }
    return r;
}

BenchmarkResult run_benchmark(const DatasetSplit& data, const TrainOptions& options,
                              std::span<const Similarity> similarities, const Calibration& constants) {
    if (data.test.feature_dim() != data.train.feature_dim())
        throw Error(Errc::dimension_mismatch, "train and test feature counts differ");
    TrainResult trained = train_model(data.train, options);
    BenchmarkResult out;
    out.options = options;
    out.epochs_run = trained.epochs_run;
    out.feature_dim = data.train.feature_dim();
    out.num_classes = data.train.num_classes;
    for (Similarity s : similarities) out.evaluations.push_back(evaluate(trained.model, data.test, s, constants));
    return out;
}

// ---------------------------------------------------------------------------
// Persistence

void save_model(std::ostream& out, const HdcModel& model) {
    json j;
    j["format"] = "mcam-hdc-model";
    j["version"] = 1;
    j["encoder"] = {{"feature_dim", model.encoder.feature_dim},
                    {"hyper_dim", model.encoder.hyper_dim},
                    {"seed", model.encoder.seed},
                    {"projection", "normal(0,1), mt19937_64(seed), row-major"}};
    j["learning_rate"] = model.learning_rate;
    j["quantizer"] = {{"bits", model.quant.bits}, {"boundaries", model.quant.boundaries}};
    j["topology"] = model.am ? to_string(model.am->topology()) : "nor";
    json classes = json::array();
    for (std::size_t r = 0; r < model.prototypes.size(); ++r) {
        const auto& p = model.prototypes[r];
        json c;
        c["label"] = p.label;
        c["prototype"] = std::vector<double>(p.vector.data(), p.vector.data() + p.vector.size());
        c["symbols"] = model.am ? model.am->read_word(r) : quantize(p.vector, model.quant);
        classes.push_back(std::move(c));
    }
    j["classes"] = std::move(classes);
    out << j.dump(1) << '\n';
}

HdcModel load_model(std::istream& in) {
    json j;
    try {
        in >> j;
    } catch (const json::exception& e) {
        throw Error(Errc::malformed_input, std::string("model file: ") + e.what());
    }
    try {
        if (j.at("format").get<std::string>() != "mcam-hdc-model" || j.at("version").get<int>() != 1)
            throw Error(Errc::malformed_input, "model file: unsupported format or version");
        HdcModel m;
        const auto& enc = j.at("encoder");
        m.encoder = EncoderConfig::make(enc.at("feature_dim").get<int>(), enc.at("hyper_dim").get<int>(),
                                        enc.at("seed").get<std::uint64_t>());
        m.learning_rate = j.at("learning_rate").get<double>();
        m.quant = QuantScheme::make(j.at("quantizer").at("bits").get<int>());
        m.quant.boundaries = j.at("quantizer").at("boundaries").get<std::vector<double>>();
        if (static_cast<int>(m.quant.boundaries.size()) != m.quant.levels() - 1)
            throw Error(Errc::malformed_input, "model file: boundary count does not match bits");
        const Topology topo = parse_topology(j.at("topology").get<std::string>());
        const auto& classes = j.at("classes");
        if (classes.empty()) throw Error(Errc::untrained_model, "model file has no classes");
        const ThresholdLadder ladder = build_ladder(m.quant.bits, LadderDefaults::vth_min, LadderDefaults::vth_max);
        CamArray am(topo, ladder, classes.size(), static_cast<std::size_t>(m.encoder.hyper_dim));
        for (std::size_t r = 0; r < classes.size(); ++r) {
            const auto& c = classes[r];
            ClassPrototype p;
            p.label = c.at("label").get<int>();
            const auto v = c.at("prototype").get<std::vector<double>>();
            if (static_cast<int>(v.size()) != m.encoder.hyper_dim)
                throw Error(Errc::dimension_mismatch, "model file: prototype length differs from hyper_dim");
            p.vector = Eigen::Map<const Vector>(v.data(), static_cast<Eigen::Index>(v.size()));
            m.prototypes.push_back(std::move(p));
            am.write_word(r, c.at("symbols").get<std::vector<int>>());
        }
        m.am.emplace(std::move(am));
        return m;
    } catch (const json::exception& e) {
        throw Error(Errc::malformed_input, std::string("model file: ") + e.what());
    }
}

}  // namespace mcam::hdc
