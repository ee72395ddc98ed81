#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "mcam/array.hpp"
#include "mcam/energy.hpp"

namespace mcam::hdc {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Random projection encoder: H = F * B with B an n x D matrix of i.i.d.
// N(0, 1) entries drawn row by row from mt19937_64(seed).
struct EncoderConfig {
    int feature_dim = 0;
    int hyper_dim = 0;
    std::uint64_t seed = 1;
    Matrix projection;

    static EncoderConfig make(int feature_dim, int hyper_dim, std::uint64_t seed);
};

Vector encode(std::span<const double> features, const EncoderConfig& encoder);
// Rows of `features` are samples; returns one hypervector per row.
Matrix encode_batch(const Matrix& features, const EncoderConfig& encoder);

struct ClassPrototype {
    int label = 0;
    Vector vector;
};

// Cosine similarity; zero when either vector has zero norm.
double cosine(const Vector& a, const Vector& b);
// Index of the most similar prototype, lowest index on ties.
int predict_cosine(const std::vector<ClassPrototype>& prototypes, const Vector& query);

std::vector<ClassPrototype> train_single_pass(const Matrix& encoded, std::span<const int> labels, int num_classes);

// Confidence term of the retraining update, given the encoded sample and the
// prototype of its true class.
using ConfidenceFn = std::function<double(const Vector& query, const Vector& true_prototype)>;
// cos(query, true_prototype) clamped to [0, 1].
double cosine_confidence(const Vector& query, const Vector& true_prototype);

// One pass over the samples in order. For each sample predicted as l' != l:
//   C_l  += lr * (1 - delta) * Q
//   C_l' -= lr * (1 - delta) * Q
// Returns the number of mispredicted samples.
int retrain_epoch(std::vector<ClassPrototype>& prototypes, const Matrix& encoded, std::span<const int> labels,
                  double learning_rate, const ConfidenceFn& confidence = cosine_confidence);

// Equal-probability bins of the standard normal: boundary k is the k/L
// quantile, k = 1..L-1. Bins are right-open.
struct QuantScheme {
    int bits = 3;
    std::vector<double> boundaries;

    int levels() const noexcept { return 1 << bits; }
    static QuantScheme make(int bits);
};

int quantize_z(double z, const QuantScheme& scheme);
// Z-scores against the vector's own mean and (population) standard deviation.
std::vector<int> quantize(std::span<const double> values, const QuantScheme& scheme);
std::vector<int> quantize(const Vector& values, const QuantScheme& scheme);
// E[Z | Z in bin k] for each bin, used to de-quantize for cosine scoring.
std::vector<double> bin_centroids(const QuantScheme& scheme);

struct HdcModel {
    EncoderConfig encoder;
    std::vector<ClassPrototype> prototypes;
    QuantScheme quant;
    double learning_rate = 0.03;
    std::optional<CamArray> am;  // one row per class, quantized prototypes
};

// (Re)writes the associative memory from the current prototypes.
void program_associative_memory(HdcModel& model, Topology topology = Topology::nor_1t);

struct Inference {
    int label = -1;
    int match_count = 0;
    SearchReport report;
};

// encode -> quantize -> search -> argmax of per-row match count.
Inference infer(HdcModel& model, std::span<const double> features);
Inference infer_encoded(HdcModel& model, const Vector& hypervector);

struct Dataset {
    Matrix features;  // samples x features
    std::vector<int> labels;
    int num_classes = 0;

    int size() const noexcept { return static_cast<int>(labels.size()); }
    int feature_dim() const noexcept { return static_cast<int>(features.cols()); }
};

struct DatasetSplit {
    Dataset train;
    Dataset test;
};

enum class DatasetFormat { isolet_csv, ucihar_txt, generic_csv };
DatasetFormat parse_dataset_format(const std::string& name);

// Reads the train/test pair under `path` and min-max normalises every feature
// to [0, 1] with train-set statistics (constant features map to 0).
//   isolet_csv:  isolet1+2+3+4.data, isolet5.data (617 floats + 1-based label)
//   ucihar_txt:  X_train.txt / y_train.txt / X_test.txt / y_test.txt, directly
//                under path or under Train/ Test/ (or train/ test/)
//   generic_csv: train.csv, test.csv with a header row holding a `label` column
DatasetSplit load_dataset(const std::filesystem::path& path, DatasetFormat format);

void normalize_min_max(DatasetSplit& split);
void write_generic_csv(std::ostream& out, const Dataset& data);

// Gaussian class clusters around uniform random centres, already normalised.
DatasetSplit synthetic_dataset(int feature_dim, int num_classes, int train_per_class, int test_per_class,
                               double noise, std::uint64_t seed);

enum class Similarity { cam_match_count, cosine_full, cosine_quantized };
const char* to_string(Similarity s) noexcept;
Similarity parse_similarity(const std::string& name);

struct TrainOptions {
    int bits = 3;
    int dim = 1024;
    int epochs = 20;  // early stop on a clean epoch
    double learning_rate = 0.03;
    std::uint64_t seed = 1;
    Topology topology = Topology::nor_1t;
};

struct TrainResult {
    HdcModel model;
    int epochs_run = 0;
    std::vector<int> mispredictions;  // per epoch
};

TrainResult train_model(const Dataset& train, const TrainOptions& options);

struct EvalResult {
    Similarity similarity = Similarity::cosine_full;
    int correct = 0;
    int total = 0;
    double accuracy = 0.0;
    std::vector<int> predictions;
    EventTotals events;  // cam_match_count only
    double energy_per_inference_j = 0.0;
    double latency_per_inference_s = 0.0;
};

EvalResult evaluate(HdcModel& model, const Dataset& test, Similarity similarity,
                    const Calibration& constants = default_calibration());

struct BenchmarkResult {
    TrainOptions options;
    int epochs_run = 0;
    int feature_dim = 0;
    int num_classes = 0;
    std::vector<EvalResult> evaluations;
};

BenchmarkResult run_benchmark(const DatasetSplit& data, const TrainOptions& options,
                              std::span<const Similarity> similarities,
                              const Calibration& constants = default_calibration());

// Self-describing JSON: encoder seed and shape (the projection is regenerated
// from the seed), learning rate, quantizer, prototypes and stored symbols.
void save_model(std::ostream& out, const HdcModel& model);
HdcModel load_model(std::istream& in);

}  // namespace mcam::hdc
