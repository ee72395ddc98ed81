#include <doctest.h>

#include <cmath>
#include <random>

#include "mcam/device.hpp"
#include "mcam/error.hpp"

using namespace mcam;

namespace {

Errc code_of(auto&& fn) {
    try {
        fn();
    } catch (const Error& e) {
        return e.code();
    }
    FAIL("expected mcam::Error");
    return Errc::io_error;
}

}  // namespace

TEST_CASE("default ladder spacing and interleaving") {
    const ThresholdLadder l = default_ladder();
    REQUIRE(l.level_count() == 8);
    CHECK(l.spacing() == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(l.vth(1) == doctest::Approx(0.4));
    CHECK(l.vth(8) == doctest::Approx(2.5));
    CHECK(l.wl(1) == doctest::Approx(0.25));
    CHECK(l.wl(8) == doctest::Approx(2.35));
}

TEST_CASE("ladder levels follow the equal-spacing formula") {
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> lo(-1.0, 1.0), width(0.1, 4.0);
    for (int trial = 0; trial < 200; ++trial) {
        const int bits = 1 + trial % 3;
        const double a = lo(rng), b = a + width(rng);
        const ThresholdLadder l = build_ladder(bits, a, b);
        const int L = 1 << bits;
        const double step = (b - a) / (L - 1);
        REQUIRE(l.level_count() == L);
        for (int k = 1; k <= L; ++k) {
            CHECK(l.vth(k) == doctest::Approx(a + (k - 1) * step).epsilon(1e-12));
            CHECK(l.wl(k) == doctest::Approx(l.vth(k) - step / 2).epsilon(1e-12));
            if (k > 1) CHECK(l.wl(k) > l.vth(k - 1));
            CHECK(l.wl(k) < l.vth(k));
        }
        CHECK(l.vth(L) == b);
        CHECK_NOTHROW(l.validate());
    }
}

TEST_CASE("ladder rejects bad precision and ranges") {
    CHECK(code_of([] { build_ladder(0, 0.4, 2.5); }) == Errc::unsupported_precision);
    CHECK(code_of([] { build_ladder(4, 0.4, 2.5); }) == Errc::unsupported_precision);
    CHECK(code_of([] { build_ladder(3, 2.5, 0.4); }) == Errc::invalid_range);
    CHECK(code_of([] { build_ladder(3, 1.0, 1.0); }) == Errc::invalid_range);
    CHECK(code_of([] { build_ladder(3, NAN, 1.0); }) == Errc::invalid_range);
}

TEST_CASE("broken interleaving fails validation") {
    ThresholdLadder l = default_ladder();
    l.search_levels[3] = l.levels[4] + 0.01;
    CHECK_THROWS_AS(l.validate(), Error);
}

TEST_CASE("programming without variation lands on the nominal level") {
    const ThresholdLadder l = default_ladder();
    for (int k = 1; k <= l.level_count(); ++k) {
        const FefetInstance f = program(l, k);
        CHECK(f.level_index == k);
        CHECK(f.vth_offset == 0.0);
        CHECK(f.effective_vth == l.vth(k));
    }
    CHECK(code_of([&] { program(l, 0); }) == Errc::level_out_of_range);
    CHECK(code_of([&] { program(l, 9); }) == Errc::level_out_of_range);
    CHECK(program_with_offset(l, 2, 0.05).effective_vth == doctest::Approx(l.vth(2) + 0.05));
}

TEST_CASE("conduction is a strict threshold") {
    const FefetInstance f = program(default_ladder(), 3);
    CHECK_FALSE(conducts(f, f.effective_vth));
    CHECK(conducts(f, std::nextafter(f.effective_vth, 10.0)));
    CHECK_FALSE(conducts(f, f.effective_vth - 0.15));
}

TEST_CASE("variation draws scale with sigma from a shared stream") {
    VariationSampler a({0.02, 9}), b({0.06, 9});
    for (int i = 0; i < 100; ++i) CHECK(b.draw() == doctest::Approx(3.0 * a.draw()).epsilon(1e-12));

    VariationSampler zero({0.0, 9});
    for (int i = 0; i < 10; ++i) CHECK(zero.draw() == 0.0);
}

TEST_CASE("variation draws have the requested moments") {
    const double sigma = 0.054;
    const int n = 200000;
    VariationSampler s({sigma, 123});
    double sum = 0.0, sq = 0.0;
    for (int i = 0; i < n; ++i) {
        const double x = s.draw();
        sum += x;
        sq += x * x;
    }
    const double mean = sum / n;
    const double var = sq / n - mean * mean;
    CHECK(std::abs(mean) < 4.0 * sigma / std::sqrt(n));
    // Var of the sample variance is 2 sigma^4 / n for a normal.
    CHECK(std::abs(var - sigma * sigma) < 4.0 * sigma * sigma * std::sqrt(2.0 / n));
}

TEST_CASE("programming with a sampler adds its offset") {
    const ThresholdLadder l = default_ladder();
    VariationSampler a({0.05, 2}), b({0.05, 2});
    for (int k = 1; k <= 8; ++k) {
        const FefetInstance f = program(l, k, &a);
        const double off = b.draw();
        CHECK(f.vth_offset == off);
        CHECK(f.effective_vth == doctest::Approx(l.vth(k) + off));
    }
}
