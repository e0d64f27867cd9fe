#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oac/coexist.hpp"
#include "oac/sim.hpp"

using namespace oac;

TEST_CASE("trial streams are reproducible and distinct") {
    SplitMix64 a = trial_stream(42, 7);
    SplitMix64 b = trial_stream(42, 7);
    SplitMix64 c = trial_stream(42, 8);
    SplitMix64 d = trial_stream(43, 7);
    bool same = true, diff1 = false, diff2 = false;
    for (int i = 0; i < 64; ++i) {
        uint64_t va = a.next();
        same = same && (va == b.next());
        diff1 = diff1 || (va != c.next());
        diff2 = diff2 || (va != d.next());
    }
    CHECK(same);
    CHECK(diff1);
    CHECK(diff2);
}

TEST_CASE("channel flip rate matches the crossover probability") {
    SplitMix64 rng(99);
    BitVec x(64, 0);
    const double eps = 0.1;
    const int trials = 5000;
    uint64_t flips = 0;
    for (int t = 0; t < trials; ++t) {
        BitVec y = bsc_corrupt(x, eps, rng);
        for (auto b : y) flips += b;
    }
    double total = 64.0 * trials;
    double p = static_cast<double>(flips) / total;
    double sigma = std::sqrt(eps * (1.0 - eps) / total);
    CHECK(std::abs(p - eps) < 3.5 * sigma);
    CHECK_THROWS_AS(bsc_corrupt(x, 0.5, rng), std::domain_error);
}

TEST_CASE("Wilson interval sanity") {
    auto ci = wilson95(0, 1000);
    CHECK(ci.lo < 1e-12);
    CHECK(ci.hi > 0.0);
    CHECK(ci.hi < 0.01);
    ci = wilson95(1000, 1000);
    CHECK(ci.hi == 1.0);
    ci = wilson95(50, 1000);
    CHECK(ci.lo < 0.05);
    CHECK(ci.hi > 0.05);
    CHECK(ci.hi - ci.lo < 0.04);
}

TEST_CASE("results do not depend on the thread count") {
    ExperimentConfig e;
    e.cfg = CodeConfig::tailless(16, {1, 2});
    e.eps_list = {0.05};
    e.trials = 400;
    e.seed = 5;
    e.dec.M = 8;
    e.dec.epsilon = 0.05;
    e.threads = 1;
    auto r1 = run_fer(e);
    e.threads = 4;
    auto r4 = run_fer(e);
    CHECK(r1.points[0].errors == r4.points[0].errors);
    CHECK(r1.points[0].outcomes == r4.points[0].outcomes);
}

TEST_CASE("full-regime error rate falls with cleaner channels and wider beams") {
    ExperimentConfig e;
    e.cfg = CodeConfig::tailless(32, {1, 2});
    e.eps_list = {0.01, 0.08};
    e.trials = 1500;
    e.seed = 11;
    e.dec.M = 16;
    e.dec.epsilon = 0.01;
    auto rep = run_fer(e);
    REQUIRE(rep.points.size() == 2);
    CHECK(rep.points[0].fer < 0.1);
    CHECK(rep.points[0].fer < rep.points[1].fer);

    ExperimentConfig narrow = e;
    narrow.eps_list = {0.08};
    narrow.dec.M = 1;
    auto nrep = run_fer(narrow);
    CHECK(nrep.points[0].fer >= rep.points[1].fer);
}

TEST_CASE("single trailing unknown matches the closed form") {
    ExperimentConfig e;
    e.cfg = CodeConfig::tailless(64, {1, 2});
    e.eps_list = {0.05};
    e.trials = 20000;
    e.seed = 21;
    e.regime = Regime::KnownPrefix;
    e.known_suffix = 1;
    auto rep = run_fer(e);
    double theory = fer_one_unknown(0.5, 0.05);
    double sigma = std::sqrt(theory * (1.0 - theory) / static_cast<double>(e.trials));
    CHECK(std::abs(rep.points[0].fer - theory) < 4.0 * sigma);
}

TEST_CASE("both beam variants run the full regime deterministically") {
    ExperimentConfig e;
    e.cfg = CodeConfig(24, {1, 2}, 2);
    e.eps_list = {0.05};
    e.trials = 500;
    e.seed = 31;
    e.dec.M = 8;
    e.dec.epsilon = 0.05;
    e.algo = DecodeAlgo::BackwardReplacing;
    auto r1 = run_fer(e);
    auto r2 = run_fer(e);
    CHECK(r1.points[0].errors == r2.points[0].errors);
    CHECK(r1.points[0].fer >= 0.0);
    CHECK(r1.points[0].fer <= 1.0);
}

TEST_CASE("tail sweep shares trial streams across tail lengths") {
    ExperimentConfig e;
    e.cfg = CodeConfig::tailless(16, {1, 2});
    e.eps_list = {0.05};
    e.trials = 300;
    e.seed = 13;
    e.dec.M = 8;
    e.dec.epsilon = 0.05;
    auto reports = tail_sweep(e, {0, 2, 4});
    REQUIRE(reports.size() == 3);
    for (const auto& r : reports) {
        REQUIRE(r.points.size() == 1);
        CHECK(r.points[0].trials == 300);
        CHECK(r.seed == 13);
    }
    // identical trial index -> identical source block and noise, so the
    // comparison is paired by construction
    CHECK(reports[0].points[0].outcomes.size() == reports[2].points[0].outcomes.size());
}

TEST_CASE("McNemar edge cases") {
    CHECK(mcnemar_one_sided_p(0, 0) == 1.0);
    CHECK(mcnemar_one_sided_p(100, 0) < 1e-6);
    CHECK(mcnemar_one_sided_p(50, 50) > 0.5);
    CHECK(mcnemar_one_sided_p(0, 100) > 0.99);
}

TEST_CASE("paired comparison counts discordant trials") {
    FerPoint base, var;
    base.outcomes = {1, 1, 0, 0, 1, 0};
    var.outcomes = {0, 1, 0, 1, 0, 0};
    auto pc = compare_paired(base, var);
    CHECK(pc.improvements == 2);
    CHECK(pc.regressions == 1);
    CHECK(pc.p_value > 0.05);
    var.outcomes.pop_back();
    CHECK_THROWS_AS(compare_paired(base, var), std::invalid_argument);
}

TEST_CASE("experiment validation") {
    ExperimentConfig e;
    e.cfg = CodeConfig::tailless(16, {1, 2});
    e.eps_list = {};
    CHECK_THROWS_AS(e.validate(), std::invalid_argument);
    e.eps_list = {0.6};
    CHECK_THROWS_AS(e.validate(), std::invalid_argument);
    e.eps_list = {0.05};
    e.trials = 0;
    CHECK_THROWS_AS(e.validate(), std::invalid_argument);
    e.trials = 10;
    e.regime = Regime::KnownPrefix;
    e.known_suffix = 21;
    CHECK_THROWS_AS(e.validate(), std::invalid_argument);
    e.known_suffix = 2;
    CHECK_NOTHROW(e.validate());
}
