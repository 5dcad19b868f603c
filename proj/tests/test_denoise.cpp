#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>

#include "test_util.hpp"
#include "wesma/datagen.hpp"
#include "wesma/denoise.hpp"
#include "wesma/rng.hpp"

using namespace wesma;

TEST_SUITE("denoise") {

TEST_CASE("mad sigma") {
    CHECK(mad_sigma(std::vector<double>{0.0, 0.0, 0.0}) == 0.0);
    CHECK(mad_sigma(std::vector<double>{1.0, -1.0, 1.0, -1.0}) ==
          doctest::Approx(1.4826).epsilon(1e-4));
    CHECK_THROWS_WITH_AS(mad_sigma(std::vector<double>{}), "empty detail band",
                         std::invalid_argument);

    // Monte-Carlo oracle: the estimator recovers the generating sigma.
    Rng rng(99);
    std::vector<double> samples(100000);
    for (double& s : samples) {
        s = 2.0 * rng.normal();
    }
    const double estimate = mad_sigma(samples);
    CHECK(std::fabs(estimate - 2.0) / 2.0 < 0.05);
}

TEST_CASE("universal threshold") {
    CHECK(universal_threshold(0.0, 100) == 0.0);
    CHECK(universal_threshold(2.0, 1) == 0.0);
    CHECK(universal_threshold(1.0, 1024) == doctest::Approx(3.7233).epsilon(1e-4));
    CHECK(universal_threshold(1.0, 1024) ==
          doctest::Approx(std::sqrt(2.0 * std::log(1024.0))).epsilon(1e-15));

    // Monotone in both arguments.
    CHECK(universal_threshold(2.0, 1024) > universal_threshold(1.0, 1024));
    CHECK(universal_threshold(1.0, 4096) > universal_threshold(1.0, 1024));
    CHECK_THROWS_AS(universal_threshold(-1.0, 4), std::invalid_argument);
}

TEST_CASE("threshold rules on pinned cases") {
    CHECK(apply_threshold(0.5, 1.0, ThresholdRule::hard) == 0.0);
    CHECK(apply_threshold(3.0, 1.0, ThresholdRule::hard) == 3.0);
    CHECK(apply_threshold(3.0, 1.0, ThresholdRule::soft) == 2.0);
    CHECK(apply_threshold(-0.5, 1.0, ThresholdRule::soft) == 0.0);
    CHECK(apply_threshold(-2.5, 1.0, ThresholdRule::soft) == -1.5);
}

TEST_CASE("threshold rule properties") {
    Rng rng(3);
    for (int i = 0; i < 200; ++i) {
        const double c = rng.uniform(-5.0, 5.0);
        const double t = rng.uniform(0.0, 3.0);
        for (ThresholdRule rule : {ThresholdRule::hard, ThresholdRule::soft}) {
            CHECK(apply_threshold(-c, t, rule) == -apply_threshold(c, t, rule));
        }
        CHECK(std::fabs(apply_threshold(c, t, ThresholdRule::soft)) <= std::fabs(c));
        const double hard_once = apply_threshold(c, t, ThresholdRule::hard);
        CHECK(apply_threshold(hard_once, t, ThresholdRule::hard) == hard_once);
    }
}

TEST_CASE("snr accounting") {
    const Signal ref{1.0, 0.0};
    CHECK(std::isinf(snr_db(ref, ref)));
    CHECK(snr_db(ref, Signal{0.0, 0.0}) == doctest::Approx(0.0).epsilon(1e-12));

    // Reference power 100x residual power -> 20 dB.
    const Signal big(100, 1.0);
    Signal est = big;
    for (std::size_t i = 0; i < est.size(); ++i) {
        est[i] += 0.1;
    }
    CHECK(snr_db(big, est) == doctest::Approx(20.0).epsilon(1e-9));

    CHECK_THROWS_WITH_AS(snr_db(Signal{1.0}, Signal{1.0, 2.0}), "length mismatch",
                         std::invalid_argument);
    CHECK_THROWS_WITH_AS(snr_db(Signal{0.0, 0.0}, Signal{1.0, 2.0}), "all-zero reference",
                         std::invalid_argument);
}

TEST_CASE("zero threshold is the identity through perfect reconstruction") {
    const Signal x = test::random_signal(256, 17);
    DenoiseConfig cfg;
    cfg.filter_name = "db2";
    cfg.levels = 4;
    cfg.manual_threshold = 0.0;
    const auto [out, report] = denoise(x, cfg);
    CHECK(report.threshold_used == 0.0);
    CHECK(test::max_abs_error(x, out) < 1e-8);
    CHECK_FALSE(report.input_snr_db.has_value());
}

TEST_CASE("clean piecewise-constant signal passes through almost untouched") {
    const Signal x = gen_signal(SignalKind::blocks, 1024, 0);
    DenoiseConfig cfg;
    cfg.filter_name = "haar";
    cfg.levels = 5;
    const auto [out, report] = denoise(x, cfg, &x);
    // MAD over the mostly-zero finest detail band gives sigma ~ 0.
    CHECK(report.sigma_used < 1e-12);
    CHECK(test::max_abs_error(x, out) < 1e-6);
    CHECK(*report.output_snr_db > 100.0);
}

TEST_CASE("soft universal shrinkage recovers blocks from 10.5 dB noise") {
    std::vector<double> improvements;
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        const Signal clean = gen_signal(SignalKind::blocks, 2048, 0);
        NoiseSpec spec;
        spec.target_snr_db = 10.5;
        spec.seed = seed;
        const auto [noisy, sigma] = add_awgn(clean, spec);
        DenoiseConfig cfg;
        cfg.filter_name = "haar";
        cfg.levels = 5;
        const auto [out, report] = denoise(noisy, cfg, &clean);
        REQUIRE(report.improvement_db.has_value());
        CHECK(*report.improvement_db > 0.0);
        improvements.push_back(*report.improvement_db);
    }
    std::sort(improvements.begin(), improvements.end());
    CHECK(improvements[improvements.size() / 2] >= 5.0);
}

TEST_CASE("detail energy never grows under soft shrinkage") {
    const Signal x = test::random_signal(128, 23);
    const WaveletFilter f = wavelet_filter("haar");
    const UwtDecomposition dec = uwt_forward(x, f, 3);
    for (const Signal& band : dec.details) {
        double before = 0.0;
        double after = 0.0;
        for (double c : band) {
            before += c * c;
            const double s = apply_threshold(c, 0.4, ThresholdRule::soft);
            after += s * s;
        }
        CHECK(after <= before);
    }
}

} // TEST_SUITE
