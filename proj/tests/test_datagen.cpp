#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "elb/datagen.hpp"
#include "elb/oracle.hpp"

using namespace elb;

TEST_CASE("random_walk steps stay within half a unit") {
    const auto s = random_walk(1000, 99, 0.0);
    for (std::size_t i = 1; i < s.size(); ++i) {
        const double step = s[i] - s[i - 1];
        CHECK(step >= -0.5);
        CHECK(step <= 0.5);
    }
}

TEST_CASE("random_walk starts at base plus one increment") {
    const auto s = random_walk(3, 5, 10.0);
    CHECK(s[0] >= 9.5);
    CHECK(s[0] <= 10.5);
}

TEST_CASE("random_walk is deterministic per seed") {
    const auto a = random_walk(500, 12345, 0.0);
    const auto b = random_walk(500, 12345, 0.0);
    CHECK(a == b);
    const auto c = random_walk(500, 12346, 0.0);
    CHECK(a != c);
}

TEST_CASE("first element has zero mean over many seeds") {
    double sum = 0.0;
    const int seeds = 10000;
    for (int seed = 1; seed <= seeds; ++seed) {
        sum += random_walk(1, static_cast<std::uint64_t>(seed), 0.0)[0];
    }
    CHECK(std::fabs(sum / seeds) <= 0.02);
}

TEST_CASE("embed with probability zero leaves the stream unchanged") {
    auto stream = random_walk(2000, 8, 0.0);
    const auto original = stream;
    const std::vector<double> pattern{1, 2, 3};
    const auto log = embed_pattern(stream, pattern, 0.0, 77);
    CHECK(log.sites.empty());
    CHECK(stream == original);
}

TEST_CASE("embedded site count tracks the occurrence probability") {
    const std::vector<double> pattern(100, 1.0);
    for (std::uint64_t seed : {11u, 22u, 33u}) {
        auto stream = random_walk(1000000, seed, 0.0);
        const auto log = embed_pattern(stream, pattern, 1e-4, seed + 1);
        // binomial expectation ~100 sites (minus a little overlap rejection)
        CHECK(log.sites.size() >= 70);
        CHECK(log.sites.size() <= 130);
    }
}

TEST_CASE("embedded sites never overlap") {
    const std::vector<double> pattern(50, 2.0);
    auto stream = random_walk(100000, 3, 0.0);
    const auto log = embed_pattern(stream, pattern, 5e-3, 4);
    REQUIRE(log.sites.size() >= 2);
    for (std::size_t i = 1; i < log.sites.size(); ++i) {
        CHECK(log.sites[i] - log.sites[i - 1] >= 50);
    }
    const auto last = log.sites.back();
    CHECK(last + 50 - 1 <= static_cast<std::int64_t>(stream.size()));
}

TEST_CASE("embedding is deterministic per seed") {
    const std::vector<double> pattern(20, 0.5);
    auto s1 = random_walk(50000, 6, 0.0);
    auto s2 = s1;
    const auto l1 = embed_pattern(s1, pattern, 1e-3, 9);
    const auto l2 = embed_pattern(s2, pattern, 1e-3, 9);
    CHECK(l1.sites == l2.sites);
    CHECK(s1 == s2);
}

TEST_CASE("generate composes the walk and the embedding deterministically") {
    const std::vector<double> pattern(30, 1.25);
    GenConfig config;
    config.length = 40000;
    config.seed = 5;
    config.occurrence_probability = 1e-3;
    const auto a = generate(config, pattern);
    REQUIRE(!a.log.sites.empty());

    auto expected = random_walk(config.length, config.seed, config.base);
    const auto log = embed_pattern(expected, pattern, config.occurrence_probability,
                                   config.seed + 1);
    CHECK(a.stream == expected);
    CHECK(a.log.sites == log.sites);
}

TEST_CASE("saturating probability is a data error") {
    const std::vector<double> pattern(100, 1.0);
    auto stream = random_walk(10000, 2, 0.0);
    CHECK_THROWS_AS(embed_pattern(stream, pattern, 0.9, 5), DataError);
    CHECK_THROWS_AS(embed_pattern(stream, pattern, -0.1, 5), UsageError);
    const std::vector<double> too_long(20000, 1.0);
    CHECK_THROWS_AS(embed_pattern(stream, too_long, 1e-4, 5), UsageError);
}

TEST_CASE("derive_thresholds matches the hand-computed values") {
    // one subpattern of 4 values with range 2
    const std::vector<double> values{0.0, 2.0, 1.0, 1.0};
    const std::vector<std::size_t> boundaries{4};

    auto t2 = derive_thresholds(values, boundaries, 0.2, LpOrder::finite(2));
    REQUIRE(t2.size() == 1);
    CHECK(t2[0] == doctest::Approx(0.8).epsilon(1e-12));

    auto t1 = derive_thresholds(values, boundaries, 0.2, LpOrder::finite(1));
    CHECK(t1[0] == doctest::Approx(1.6).epsilon(1e-12));

    auto tinf = derive_thresholds(values, boundaries, 0.2, LpOrder::inf());
    CHECK(tinf[0] == doctest::Approx(0.4).epsilon(1e-12));
}

TEST_CASE("derive_thresholds handles constant subpatterns and bad ratios") {
    const std::vector<double> values{5, 5, 5, 1, 2};
    const std::vector<std::size_t> boundaries{3, 2};
    const auto t = derive_thresholds(values, boundaries, 0.2, LpOrder::finite(2));
    CHECK(t[0] == 0.0); // constant subpattern
    CHECK(t[1] > 0.0);
    CHECK_THROWS_AS(derive_thresholds(values, boundaries, 0.0, LpOrder::finite(2)),
                    UsageError);
    CHECK_THROWS_AS(derive_thresholds(values, boundaries, -1.0, LpOrder::finite(2)),
                    UsageError);
}

TEST_CASE("embedded sites are true matches under derived thresholds") {
    Pattern pat;
    pat.values = random_walk(40, 15, 0.0);
    pat.boundaries = {10, 20, 10};
    pat.thresholds = derive_thresholds(pat, 0.1, LpOrder::finite(2));

    auto stream = random_walk(20000, 16, 0.0);
    const auto log = embed_pattern(stream, pat.values, 1e-3, 17);
    REQUIRE(!log.sites.empty());

    const auto report = sequential_scan(pat, make_vector_source(stream), LpOrder::finite(2));
    for (std::int64_t site : log.sites) {
        CHECK(std::find(report.matches.begin(), report.matches.end(), site) !=
              report.matches.end());
    }
}
