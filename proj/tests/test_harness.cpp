#include <cmath>

#include "doctest.h"

#include "braidlab/errors.hpp"
#include "braidlab/harness.hpp"

using namespace braidlab;

TEST_CASE("point-mass flows decode perfectly with every decoder") {
    for (DecoderKind d : {DecoderKind::Bp, DecoderKind::Peel, DecoderKind::Maxwell}) {
        SimConfig cfg;
        cfg.decoder = d;
        cfg.k = 3;
        cfg.beta = 0.6;
        cfg.m0 = 60;
        cfg.dist = FlowSizeDist::explicit_pmf({{2, 1.0}});
        cfg.trials = 5;
        cfg.seed = 11;
        const auto r = run_ser(cfg);
        CHECK(r.ser == 0.0);
        CHECK(r.errors == 0);
    }
}

TEST_CASE("results are bit-identical across thread counts and repeats") {
    SimConfig cfg;
    cfg.decoder = DecoderKind::Bp;
    cfg.k = 3;
    cfg.beta = 0.55;
    cfg.m0 = 400;
    cfg.dist = FlowSizeDist::power_law(1.5);
    cfg.trials = 24;
    cfg.seed = 2024;
    cfg.threads = 1;
    const auto a = run_ser(cfg);
    cfg.threads = 4;
    const auto b = run_ser(cfg);
    const auto c = run_ser(cfg);
    CHECK(a.errors == b.errors);
    CHECK(b.errors == c.errors);
    CHECK(a.trial_ser == b.trial_ser);
    CHECK(a.ser == b.ser);
}

TEST_CASE("wilson interval brackets the point estimate") {
    const auto [lo, hi] = wilson_interval(7, 100);
    CHECK(lo < 0.07);
    CHECK(hi > 0.07);
    CHECK(lo >= 0.0);
    CHECK(hi <= 1.0);
    const auto [zlo, zhi] = wilson_interval(0, 1000);
    CHECK(zlo < 1e-12);
    CHECK(zhi < 0.01);
}

TEST_CASE("sweep: singleton grid reduces to run_ser, empty grid is empty") {
    SimConfig cfg;
    cfg.decoder = DecoderKind::Peel;
    cfg.k = 3;
    cfg.beta = 0.8;
    cfg.m0 = 120;
    cfg.trials = 6;
    cfg.seed = 5;
    const auto rows = ser_sweep(cfg, {0.8});
    REQUIRE(rows.size() == 1);
    const auto direct = run_ser(cfg);
    CHECK(rows[0].ser == direct.ser);
    CHECK(ser_sweep(cfg, {}).empty());
}

TEST_CASE("maxwell trials respect the size cap") {
    SimConfig cfg;
    cfg.decoder = DecoderKind::Maxwell;
    cfg.m0 = 100000;
    CHECK_THROWS_AS(cfg.validate(), resource_error);
}

TEST_CASE("coupled configs check divisibility") {
    SimConfig cfg;
    cfg.k = 6;
    cfg.beta = 0.7;
    cfg.m0 = 1000;  // not divisible by N
    cfg.N = 16;
    cfg.w = 5;
    CHECK_THROWS_AS(cfg.validate(), param_error);
}
