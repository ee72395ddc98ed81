#include "mcam/device.hpp"

#include <cmath>
#include <string>

#include "mcam/error.hpp"

namespace mcam {

double ThresholdLadder::spacing() const noexcept {
    if (levels.size() < 2) return 2.0 * (levels.front() - search_levels.front());
    return (levels.back() - levels.front()) / static_cast<double>(levels.size() - 1);
}

void ThresholdLadder::validate() const {
    if (bits < kMinBits || bits > kMaxBits)
        throw Error(Errc::unsupported_precision, "bits=" + std::to_string(bits) + " (supported 1..3)");
    const std::size_t n = std::size_t{1} << bits;
    if (levels.size() != n || search_levels.size() != n)
        throw Error(Errc::invalid_range, "ladder needs " + std::to_string(n) + " levels and search levels");
    for (std::size_t k = 0; k < n; ++k) {
        if (!(search_levels[k] < levels[k]))
            throw Error(Errc::invalid_range, "V_WL" + std::to_string(k + 1) + " must lie below V_TH" + std::to_string(k + 1));
        if (k + 1 < n && !(levels[k] < search_levels[k + 1]))
            throw Error(Errc::invalid_range, "V_TH" + std::to_string(k + 1) + " must lie below V_WL" + std::to_string(k + 2));
    }
}

ThresholdLadder build_ladder(int bits, double vth_min, double vth_max, double v_sl) {
    if (bits < kMinBits || bits > kMaxBits)
        throw Error(Errc::unsupported_precision, "bits=" + std::to_string(bits) + " (supported 1..3)");
    if (!(vth_min < vth_max) || !std::isfinite(vth_min) || !std::isfinite(vth_max))
        throw Error(Errc::invalid_range, "vth_min must be below vth_max");

    ThresholdLadder ladder;
    ladder.bits = bits;
    ladder.v_sl = v_sl;
    const int count = 1 << bits;
    const double step = (vth_max - vth_min) / static_cast<double>(count - 1);
    ladder.levels.resize(static_cast<std::size_t>(count));
    ladder.search_levels.resize(static_cast<std::size_t>(count));
    for (int k = 0; k < count; ++k) {
        // Endpoint pinned so levels.back() == vth_max exactly.
        ladder.levels[static_cast<std::size_t>(k)] = (k == count - 1) ? vth_max : vth_min + step * k;
        ladder.search_levels[static_cast<std::size_t>(k)] = vth_min + step * (k - 0.5);
    }
    ladder.validate();
    return ladder;
}

ThresholdLadder default_ladder() {
    return build_ladder(LadderDefaults::bits, LadderDefaults::vth_min, LadderDefaults::vth_max, LadderDefaults::v_sl);
}

VariationSampler::VariationSampler(const VariationModel& model) : sigma_(model.sigma_vth), rng_(model.seed) {
    if (!(model.sigma_vth >= 0.0)) throw Error(Errc::invalid_range, "sigma_vth must be >= 0");
}

VariationSampler::VariationSampler(double sigma_vth, std::seed_seq& seq) : sigma_(sigma_vth), rng_(seq) {
    if (!(sigma_vth >= 0.0)) throw Error(Errc::invalid_range, "sigma_vth must be >= 0");
}

double VariationSampler::draw() { return sigma_ * unit_(rng_); }

FefetInstance program_with_offset(const ThresholdLadder& ladder, int level_index, double vth_offset) {
    if (level_index < 1 || level_index > ladder.level_count())
        throw Error(Errc::level_out_of_range,
                    "level " + std::to_string(level_index) + " not in 1.." + std::to_string(ladder.level_count()));
    return FefetInstance{level_index, vth_offset, ladder.vth(level_index) + vth_offset};
}

FefetInstance program(const ThresholdLadder& ladder, int level_index, VariationSampler* variation) {
    if (level_index < 1 || level_index > ladder.level_count())
        throw Error(Errc::level_out_of_range,
                    "level " + std::to_string(level_index) + " not in 1.." + std::to_string(ladder.level_count()));
    return program_with_offset(ladder, level_index, variation ? variation->draw() : 0.0);
}

}  // namespace mcam
