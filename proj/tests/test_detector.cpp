#include <doctest.h>

#include <algorithm>
#include <random>

#include "dynamap/detector.hpp"
#include "dynamap/errors.hpp"
#include "test_helpers.hpp"

using namespace dynamap;

namespace {

// ---------------------------------------------------------------------------
// Independent reference for the classification rules, written straight from
// the prose against the default thresholds (5 neighbors, 30 %, 70 %) using
// exact integer arithmetic. It deliberately shares no code with the
// implementation under test.
// ---------------------------------------------------------------------------

enum class RefMode { Fore, Back };

struct RefVerdict {
    PointClass verdict;
    VerdictReason reason;
};

RefVerdict reference_classify(RefMode mode, int total, int nonground, RatioRule rule) {
    if (total < 5) {
        if (mode == RefMode::Fore) return {PointClass::Dynamic, VerdictReason::NoNeighbors};
        return {PointClass::Undetermined, VerdictReason::BackNoNeighbors};
    }
    if (rule == RatioRule::Literal) {
        // static iff nonground/total < 3/10
        if (10 * nonground < 3 * total) return {PointClass::Static, VerdictReason::RatioLow};
        return {PointClass::Dynamic, VerdictReason::RatioHigh};
    }
    // reconciled: static iff ground/total < 3/10 or ground/total <= 7/10
    const int ground = total - nonground;
    if (10 * ground < 3 * total || 10 * ground <= 7 * total) {
        return {PointClass::Static, VerdictReason::RatioLow};
    }
    return {PointClass::Dynamic, VerdictReason::RatioHigh};
}

std::vector<MapPoint> make_neighbors(int total, int nonground) {
    std::vector<MapPoint> neighbors;
    for (int i = 0; i < total; ++i) {
        MapPoint mp;
        mp.position = {0.1 * i, 0.0, 0.0};
        mp.label = i < nonground ? GroundLabel::NonGround : GroundLabel::Ground;
        neighbors.push_back(mp);
    }
    return neighbors;
}

DetectorConfig config_with_rule(RatioRule rule) {
    DetectorConfig cfg;
    cfg.ratio_rule = rule;
    return cfg;
}

}  // namespace

TEST_CASE("fore mode examples from the published rule (literal)") {
    const DetectorConfig cfg = config_with_rule(RatioRule::Literal);

    CHECK(classify_fore(make_neighbors(3, 0), cfg) == Verdict{PointClass::Dynamic, VerdictReason::NoNeighbors});
    CHECK(classify_fore(make_neighbors(10, 1), cfg) == Verdict{PointClass::Static, VerdictReason::RatioLow});
    CHECK(classify_fore(make_neighbors(10, 5), cfg) == Verdict{PointClass::Dynamic, VerdictReason::RatioHigh});
    // Boundary: exactly 30 % goes to the dynamic side.
    CHECK(classify_fore(make_neighbors(10, 3), cfg) == Verdict{PointClass::Dynamic, VerdictReason::RatioHigh});
    // Boundary: exactly min_neighbors takes the ratio branch.
    CHECK(classify_fore(make_neighbors(5, 0), cfg) == Verdict{PointClass::Static, VerdictReason::RatioLow});
    CHECK(classify_fore(make_neighbors(4, 0), cfg) == Verdict{PointClass::Dynamic, VerdictReason::NoNeighbors});
}

TEST_CASE("back mode examples from the published rule (literal)") {
    const DetectorConfig cfg = config_with_rule(RatioRule::Literal);

    CHECK(classify_back(make_neighbors(0, 0), cfg) ==
          Verdict{PointClass::Undetermined, VerdictReason::BackNoNeighbors});
    CHECK(classify_back(make_neighbors(8, 0), cfg) == Verdict{PointClass::Static, VerdictReason::RatioLow});
    CHECK(classify_back(make_neighbors(8, 8), cfg) == Verdict{PointClass::Dynamic, VerdictReason::RatioHigh});
}

TEST_CASE("reconciled rule keeps re-observed structure and rejects ground-dominated voxels") {
    const DetectorConfig cfg = config_with_rule(RatioRule::Reconciled);

    // All-nonground voxel: the point coincides with existing structure.
    CHECK(classify_fore(make_neighbors(10, 10), cfg) == Verdict{PointClass::Static, VerdictReason::RatioLow});
    // All-ground voxel: a non-ground point hovering over bare ground.
    CHECK(classify_fore(make_neighbors(10, 0), cfg) == Verdict{PointClass::Dynamic, VerdictReason::RatioHigh});
    // Boundary: ground ratio exactly at the cutoff stays static.
    CHECK(classify_fore(make_neighbors(10, 3), cfg) == Verdict{PointClass::Static, VerdictReason::RatioLow});
    CHECK(classify_fore(make_neighbors(10, 2), cfg) == Verdict{PointClass::Dynamic, VerdictReason::RatioHigh});
}

TEST_CASE("separate: fore/back split at the 30 m threshold, boundary inclusive") {
    DetectorConfig cfg;
    const Point3 platform{0, 0, 0};
    CHECK(separate({29.9, 0, 0}, platform, cfg) == Region::Fore);
    CHECK(separate({30.1, 0, 0}, platform, cfg) == Region::Back);
    CHECK(separate({30.0, 0, 0}, platform, cfg) == Region::Fore);
}

TEST_CASE("table-driven oracle: implementation matches the prose reference exactly") {
    for (const RatioRule rule : {RatioRule::Literal, RatioRule::Reconciled}) {
        const DetectorConfig cfg = config_with_rule(rule);
        for (int total = 0; total <= 12; ++total) {
            for (int nonground = 0; nonground <= total; ++nonground) {
                const auto neighbors = make_neighbors(total, nonground);

                const auto want_fore = reference_classify(RefMode::Fore, total, nonground, rule);
                const auto got_fore = classify_fore(neighbors, cfg);
                CHECK(got_fore.verdict == want_fore.verdict);
                CHECK(got_fore.reason == want_fore.reason);

                const auto want_back = reference_classify(RefMode::Back, total, nonground, rule);
                const auto got_back = classify_back(neighbors, cfg);
                CHECK(got_back.verdict == want_back.verdict);
                CHECK(got_back.reason == want_back.reason);
            }
        }
    }
}

TEST_CASE("classify_fore never returns Undetermined; verdicts are permutation-invariant") {
    std::mt19937 rng(21);
    for (const RatioRule rule : {RatioRule::Literal, RatioRule::Reconciled}) {
        const DetectorConfig cfg = config_with_rule(rule);
        for (int total = 0; total <= 12; ++total) {
            for (int nonground = 0; nonground <= total; ++nonground) {
                auto neighbors = make_neighbors(total, nonground);
                const auto base = classify_fore(neighbors, cfg);
                CHECK(base.verdict != PointClass::Undetermined);

                std::shuffle(neighbors.begin(), neighbors.end(), rng);
                CHECK(classify_fore(neighbors, cfg) == base);
                const auto back = classify_back(neighbors, cfg);
                std::shuffle(neighbors.begin(), neighbors.end(), rng);
                CHECK(classify_back(neighbors, cfg) == back);
            }
        }
    }
}

TEST_CASE("monotonicity of the ratio rule in its own direction") {
    // Literal rule: flipping a neighbor Ground -> NonGround can only push
    // toward dynamic. The reconciled rule is monotone the other way around:
    // flipping NonGround -> Ground can only push toward dynamic.
    for (int total = 5; total <= 12; ++total) {
        for (int nonground = 0; nonground < total; ++nonground) {
            const DetectorConfig literal = config_with_rule(RatioRule::Literal);
            if (classify_fore(make_neighbors(total, nonground), literal).verdict == PointClass::Dynamic) {
                CHECK(classify_fore(make_neighbors(total, nonground + 1), literal).verdict ==
                      PointClass::Dynamic);
            }
            const DetectorConfig reconciled = config_with_rule(RatioRule::Reconciled);
            if (classify_fore(make_neighbors(total, nonground + 1), reconciled).verdict ==
                PointClass::Dynamic) {
                CHECK(classify_fore(make_neighbors(total, nonground), reconciled).verdict ==
                      PointClass::Dynamic);
            }
        }
    }
}

TEST_CASE("resolve_undetermined: approach within threshold decides immediately") {
    VoxelMap tracking({1.0, 20, 0.05});

    SUBCASE("nearly empty containing voxel resolves dynamic (rule-independent)") {
        DetectorConfig cfg;
        tracking.insert({50.2, 0.2, 0.2}, GroundLabel::NonGround);
        tracking.insert({50.4, 0.4, 0.4}, GroundLabel::NonGround);

        std::vector<UndeterminedEntry> container{{{50.5, 0.5, 0.5}, 0, 3, true, -1}};
        const auto resolved = resolve_undetermined(container, {40.0, 0.0, 0.0}, tracking, cfg);
        REQUIRE(resolved.size() == 1);
        CHECK(resolved[0].verdict.verdict == PointClass::Dynamic);
        CHECK(resolved[0].verdict.reason == VerdictReason::NoNeighbors);
        CHECK(container.empty());
    }

    SUBCASE("12 neighbors, 1 non-ground resolves static under the published rule") {
        DetectorConfig cfg = config_with_rule(RatioRule::Literal);
        for (int i = 0; i < 11; ++i) tracking.insert({50.05 + 0.08 * i, 0.5, 0.5}, GroundLabel::Ground);
        tracking.insert({50.5, 0.8, 0.5}, GroundLabel::NonGround);

        std::vector<UndeterminedEntry> container{{{50.5, 0.5, 0.5}, 4, 3, true, -1}};
        const auto resolved = resolve_undetermined(container, {40.0, 0.0, 0.0}, tracking, cfg);
        REQUIRE(resolved.size() == 1);
        CHECK(resolved[0].verdict.verdict == PointClass::Static);
        CHECK(container.empty());
    }

    SUBCASE("structure-dominated voxel resolves static under the reconciled rule") {
        DetectorConfig cfg = config_with_rule(RatioRule::Reconciled);
        for (int i = 0; i < 11; ++i) tracking.insert({50.05 + 0.08 * i, 0.5, 0.5}, GroundLabel::NonGround);
        tracking.insert({50.5, 0.8, 0.5}, GroundLabel::Ground);

        std::vector<UndeterminedEntry> container{{{50.5, 0.5, 0.5}, 4, 3, true, -1}};
        const auto resolved = resolve_undetermined(container, {40.0, 0.0, 0.0}, tracking, cfg);
        REQUIRE(resolved.size() == 1);
        CHECK(resolved[0].verdict.verdict == PointClass::Static);
        CHECK(container.empty());
    }
}

TEST_CASE("resolve_undetermined: far entries time out static after 10 consecutive sweeps") {
    DetectorConfig cfg;
    VoxelMap tracking({1.0, 20, 0.05});
    std::vector<UndeterminedEntry> container{{{100.0, 0.0, 0.0}, 0, 0, true, -1}};

    for (int sweep = 1; sweep <= 9; ++sweep) {
        const auto resolved = resolve_undetermined(container, {0.0, 0.0, 0.0}, tracking, cfg);
        CHECK(resolved.empty());
        REQUIRE(container.size() == 1);
        CHECK(container[0].far_sweep_count == sweep);
    }
    const auto resolved = resolve_undetermined(container, {0.0, 0.0, 0.0}, tracking, cfg);
    REQUIRE(resolved.size() == 1);
    CHECK(resolved[0].verdict == Verdict{PointClass::Static, VerdictReason::TimeoutStatic});
    CHECK(container.empty());
}

TEST_CASE("resolve_undetermined preserves container order of kept entries") {
    DetectorConfig cfg;
    VoxelMap tracking({1.0, 20, 0.05});
    std::vector<UndeterminedEntry> container{
        {{100.0, 0.0, 0.0}, 0, 0, false, 10},
        {{20.0, 0.0, 0.0}, 0, 0, false, 11},  // resolves now (dynamic, empty voxel)
        {{120.0, 0.0, 0.0}, 3, 0, false, 12},
    };
    const auto resolved = resolve_undetermined(container, {0.0, 0.0, 0.0}, tracking, cfg);
    REQUIRE(resolved.size() == 1);
    CHECK(resolved[0].entry.record_id == 11);
    REQUIRE(container.size() == 2);
    CHECK(container[0].record_id == 10);
    CHECK(container[1].record_id == 12);
    CHECK(container[0].far_sweep_count == 1);
    CHECK(container[1].far_sweep_count == 4);
}

TEST_CASE("detector config validation") {
    DetectorConfig cfg;
    cfg.fore_back_threshold = 0.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.min_neighbors = 0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.nonground_ratio_threshold = 1.0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
    cfg = {};
    cfg.undetermined_max_far_sweeps = 0;
    CHECK_THROWS_AS(validate(cfg), ConfigError);
}
