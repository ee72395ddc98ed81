#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace mcam {

// Nominal threshold levels of a multi-level FeFET plus the search gate
// voltages interleaved between them:
//   wl[0] < vth[0] < wl[1] < vth[1] < ... < wl[L-1] < vth[L-1]
// Level and search indices are 1-based in the accessors to match the
// usual V_TH1..V_THL naming; the vectors themselves are 0-based.
struct ThresholdLadder {
    int bits = 3;
    std::vector<double> levels;         // V_TH1..V_THL (V)
    std::vector<double> search_levels;  // V_WL1..V_WLL (V)
    double v_sl = 0.0;                  // sourceline bias (V)

    int level_count() const noexcept { return static_cast<int>(levels.size()); }
    double vth(int level_index) const { return levels.at(static_cast<std::size_t>(level_index - 1)); }
    double wl(int search_index) const { return search_levels.at(static_cast<std::size_t>(search_index - 1)); }
    double spacing() const noexcept;

    // Throws Error if the interleaving invariant is broken.
    void validate() const;
};

inline constexpr int kMinBits = 1;
inline constexpr int kMaxBits = 3;

struct LadderDefaults {
    static constexpr int bits = 3;
    static constexpr double vth_min = 0.4;
    static constexpr double vth_max = 2.5;
    static constexpr double v_sl = 0.0;
};

ThresholdLadder build_ladder(int bits, double vth_min, double vth_max, double v_sl = 0.0);
ThresholdLadder default_ladder();

struct VariationModel {
    double sigma_vth = 0.0;  // V
    std::uint64_t seed = 1;
};

// Gaussian threshold offsets. Each draw is sigma * z with z ~ N(0, 1), so two
// samplers with the same seed but different sigma produce offsets that differ
// only by scale. One sampler per thread; never shared.
class VariationSampler {
public:
    explicit VariationSampler(const VariationModel& model);
    VariationSampler(double sigma_vth, std::seed_seq& seq);

    double sigma() const noexcept { return sigma_; }
    double draw();

private:
    double sigma_;
    std::mt19937_64 rng_;
    std::normal_distribution<double> unit_{0.0, 1.0};
};

struct FefetInstance {
    int level_index = 1;  // 1..L
    double vth_offset = 0.0;
    double effective_vth = 0.0;
};

FefetInstance program(const ThresholdLadder& ladder, int level_index, VariationSampler* variation = nullptr);
FefetInstance program_with_offset(const ThresholdLadder& ladder, int level_index, double vth_offset);

// Hard threshold switch on the gate-to-source voltage.
inline bool conducts(const FefetInstance& f, double gate_source_voltage) noexcept {
    return gate_source_voltage > f.effective_vth;
}

}  // namespace mcam
