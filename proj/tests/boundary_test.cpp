#include <gtest/gtest.h>

#include <random>
#include <vector>

#include "vadtree/boundary.hpp"

using namespace vadtree;

namespace {

ConfidenceSequence make_sequence(const std::vector<double>& scores) {
    ConfidenceSequence seq;
    seq.video_id = "v";
    seq.num_frames = static_cast<int>(scores.size());
    for (size_t i = 0; i < scores.size(); ++i) {
        seq.points.push_back(ConfidencePoint{static_cast<int>(i) + 1, scores[i]});
    }
    return seq;
}

// Independent O(T) reference: every interior frame passing the two-sided
// test is a peak; adjacent passing frames with equal confidence collapse to
// the leftmost one.
std::vector<Peak> brute_force_peaks(const std::vector<double>& c) {
    std::vector<Peak> out;
    const int n = static_cast<int>(c.size());
    if (n < 3) return out;
    std::vector<bool> pass(static_cast<size_t>(n), false);
    for (int i = 1; i + 1 < n; ++i) {
        pass[static_cast<size_t>(i)] =
            c[static_cast<size_t>(i)] >= c[static_cast<size_t>(i - 1)] &&
            c[static_cast<size_t>(i)] >= c[static_cast<size_t>(i + 1)];
    }
    for (int i = 1; i + 1 < n; ++i) {
        if (!pass[static_cast<size_t>(i)]) continue;
        if (pass[static_cast<size_t>(i - 1)] &&
            c[static_cast<size_t>(i - 1)] == c[static_cast<size_t>(i)]) {
            continue;
        }
        out.push_back(Peak{i + 1, c[static_cast<size_t>(i)]});
    }
    return out;
}

} // namespace

TEST(PlanWindows, TilesTwentyFramesWithWindowEight) {
    const auto plans = plan_windows(20, 8);
    ASSERT_EQ(plans.size(), 5u);
    const std::vector<int> starts = {1, 5, 9, 13, 17};
    for (size_t i = 0; i < plans.size(); ++i) {
        EXPECT_EQ(plans[i].start_frame, starts[i]);
    }
    std::vector<int> owner(21, 0);
    for (const auto& p : plans) {
        for (int f = p.retain_begin; f <= p.retain_end; ++f) {
            ASSERT_GE(f, 1);
            ASSERT_LE(f, 20);
            owner[static_cast<size_t>(f)]++;
        }
    }
    for (int f = 1; f <= 20; ++f) {
        EXPECT_EQ(owner[static_cast<size_t>(f)], 1) << "frame " << f;
    }
}

TEST(PlanWindows, VideoShorterThanWindow) {
    const auto plans = plan_windows(5, 8);
    ASSERT_EQ(plans.size(), 1u);
    EXPECT_EQ(plans[0].start_frame, 1);
    EXPECT_EQ(plans[0].length, 5);
    EXPECT_EQ(plans[0].retain_begin, 1);
    EXPECT_EQ(plans[0].retain_end, 5);
}

TEST(PlanWindows, ExactFit) {
    const auto plans = plan_windows(8, 8);
    ASSERT_EQ(plans.size(), 1u);
    EXPECT_EQ(plans[0].retain_begin, 1);
    EXPECT_EQ(plans[0].retain_end, 8);
}

TEST(PlanWindows, RejectsBadInput) {
    EXPECT_THROW(plan_windows(0, 8), Error);
    EXPECT_THROW(plan_windows(10, 7), Error);
    EXPECT_THROW(plan_windows(10, 0), Error);
}

TEST(PlanWindows, TilingPropertyRandomized) {
    std::mt19937 rng(7);
    for (int it = 0; it < 300; ++it) {
        const int l_raw = 2 * std::uniform_int_distribution<int>(1, 40)(rng);
        const int t = std::uniform_int_distribution<int>(1, 500)(rng);
        const auto plans = plan_windows(t, l_raw);
        std::vector<int> count(static_cast<size_t>(t) + 1, 0);
        for (const auto& p : plans) {
            EXPECT_GE(p.retain_begin, p.start_frame);
            EXPECT_LE(p.retain_end, p.start_frame + p.length - 1);
            for (int f = p.retain_begin; f <= p.retain_end; ++f) {
                ASSERT_GE(f, 1);
                ASSERT_LE(f, t);
                count[static_cast<size_t>(f)]++;
            }
        }
        for (int f = 1; f <= t; ++f) {
            ASSERT_EQ(count[static_cast<size_t>(f)], 1)
                << "T=" << t << " l_raw=" << l_raw << " frame " << f;
        }
    }
}

TEST(AssembleGlobalSequence, TwoWindowsHandTrace) {
    std::vector<LocalWindow> windows;
    windows.push_back(LocalWindow{1, {0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1, 0.1}});
    windows.push_back(LocalWindow{5, {0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9, 0.9}});
    const auto seq = assemble_global_sequence(windows, 12);
    ASSERT_EQ(seq.points.size(), 12u);
    for (int f = 1; f <= 6; ++f) EXPECT_DOUBLE_EQ(seq.points[static_cast<size_t>(f - 1)].c, 0.1);
    for (int f = 7; f <= 12; ++f) EXPECT_DOUBLE_EQ(seq.points[static_cast<size_t>(f - 1)].c, 0.9);
    for (int f = 1; f <= 12; ++f) EXPECT_EQ(seq.points[static_cast<size_t>(f - 1)].t, f);
}

TEST(AssembleGlobalSequence, SingleWindowIsIdentity) {
    std::vector<LocalWindow> windows;
    windows.push_back(LocalWindow{1, {0.3, 0.5, 0.2, 0.9, 0.1}});
    const auto seq = assemble_global_sequence(windows, 5);
    ASSERT_EQ(seq.points.size(), 5u);
    EXPECT_DOUBLE_EQ(seq.points[0].c, 0.3);
    EXPECT_DOUBLE_EQ(seq.points[3].c, 0.9);
}

TEST(AssembleGlobalSequence, MissingMiddleWindowIsCoverageViolation) {
    // Windows for T=20, l_raw=8 should sit at 1,5,9,13,17; drop the one at 9.
    std::vector<LocalWindow> windows;
    for (int start : {1, 5, 13, 17}) {
        windows.push_back(LocalWindow{start, std::vector<double>(8, 0.5)});
    }
    try {
        assemble_global_sequence(windows, 20);
        FAIL() << "expected coverage violation";
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::coverage_violation);
        EXPECT_NE(std::string(e.what()).find("11"), std::string::npos) << e.what();
    }
}

TEST(AssembleGlobalSequence, RejectsOutOfRangeScores) {
    std::vector<LocalWindow> windows;
    windows.push_back(LocalWindow{1, {0.5, 1.5, 0.5, 0.5, 0.5}});
    EXPECT_THROW(assemble_global_sequence(windows, 5), Error);
}

TEST(AssembleGlobalSequence, MatchesPlannedWindowsRandomized) {
    std::mt19937 rng(13);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int it = 0; it < 200; ++it) {
        const int l_raw = 2 * std::uniform_int_distribution<int>(1, 20)(rng);
        const int t = std::uniform_int_distribution<int>(1, 300)(rng);
        const auto plans = plan_windows(t, l_raw);
        // Scores encode the global frame index so ownership is checkable.
        std::vector<LocalWindow> windows;
        std::vector<double> expected(static_cast<size_t>(t), -1.0);
        for (const auto& p : plans) {
            LocalWindow w;
            w.start_frame = p.start_frame;
            for (int i = 0; i < p.length; ++i) {
                w.scores.push_back(static_cast<double>((p.start_frame + i) % 97) / 100.0);
            }
            windows.push_back(std::move(w));
            for (int f = p.retain_begin; f <= p.retain_end; ++f) {
                expected[static_cast<size_t>(f - 1)] = static_cast<double>(f % 97) / 100.0;
            }
        }
        const auto seq = assemble_global_sequence(windows, t);
        ASSERT_EQ(seq.points.size(), static_cast<size_t>(t));
        for (int f = 1; f <= t; ++f) {
            ASSERT_DOUBLE_EQ(seq.points[static_cast<size_t>(f - 1)].c, expected[static_cast<size_t>(f - 1)])
                << "T=" << t << " l_raw=" << l_raw << " frame " << f;
        }
    }
}

TEST(ExtractPeaks, SingleInteriorMaximum) {
    const auto peaks = extract_peaks(make_sequence({0.1, 0.5, 0.3}));
    ASSERT_EQ(peaks.peaks.size(), 1u);
    EXPECT_EQ(peaks.peaks[0].t, 2);
    EXPECT_DOUBLE_EQ(peaks.peaks[0].confidence, 0.5);
}

TEST(ExtractPeaks, PlateauCollapsesLeftmost) {
    const auto peaks = extract_peaks(make_sequence({0.2, 0.5, 0.5, 0.2}));
    ASSERT_EQ(peaks.peaks.size(), 1u);
    EXPECT_EQ(peaks.peaks[0].t, 2);
}

TEST(ExtractPeaks, MonotoneSequenceHasNoPeaks) {
    const auto peaks = extract_peaks(make_sequence({0.1, 0.2, 0.3, 0.4}));
    EXPECT_TRUE(peaks.peaks.empty());
}

TEST(ExtractPeaks, ShortSequenceYieldsEmptySet) {
    EXPECT_TRUE(extract_peaks(make_sequence({0.1, 0.9})).peaks.empty());
}

TEST(ExtractPeaks, MatchesBruteForceOnRandomSequences) {
    std::mt19937 rng(42);
    std::uniform_int_distribution<int> len_dist(3, 500);
    // Coarse quantization keeps plateaus frequent.
    std::uniform_int_distribution<int> level(0, 4);
    for (int it = 0; it < 1000; ++it) {
        const int n = len_dist(rng);
        std::vector<double> c(static_cast<size_t>(n));
        for (auto& v : c) v = static_cast<double>(level(rng)) / 4.0;
        const auto got = extract_peaks(make_sequence(c)).peaks;
        const auto want = brute_force_peaks(c);
        ASSERT_EQ(got.size(), want.size()) << "case " << it;
        for (size_t i = 0; i < got.size(); ++i) {
            ASSERT_EQ(got[i].t, want[i].t);
            ASSERT_DOUBLE_EQ(got[i].confidence, want[i].confidence);
        }
        // Soundness: returned peaks satisfy the two-sided condition.
        for (const auto& p : got) {
            ASSERT_GT(p.t, 1);
            ASSERT_LT(p.t, n);
            ASSERT_GE(c[static_cast<size_t>(p.t - 1)], c[static_cast<size_t>(p.t - 2)]);
            ASSERT_GE(c[static_cast<size_t>(p.t - 1)], c[static_cast<size_t>(p.t)]);
        }
    }
}

TEST(LoadConfidenceFile, GlobalScoresForm) {
    const auto dir = std::filesystem::temp_directory_path() / "vadtree_boundary_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "g.json";
    write_json_file(path, json{{"video_id", "g"},
                               {"num_frames", 4},
                               {"fps", 30.0},
                               {"global_scores", {0.1, 0.9, 0.2, 0.3}}});
    const auto input = load_confidence_file(path);
    EXPECT_EQ(input.video_id, "g");
    ASSERT_EQ(input.sequence.points.size(), 4u);
    EXPECT_DOUBLE_EQ(input.sequence.points[1].c, 0.9);
}

TEST(LoadConfidenceFile, RejectsBothOrNeitherForm) {
    const auto dir = std::filesystem::temp_directory_path() / "vadtree_boundary_test";
    std::filesystem::create_directories(dir);
    const auto path = dir / "bad.json";
    write_json_file(path, json{{"video_id", "b"}, {"num_frames", 4}, {"fps", 30.0}});
    EXPECT_THROW(load_confidence_file(path), Error);
    write_json_file(path, json{{"video_id", "b"},
                               {"num_frames", 2},
                               {"fps", 30.0},
                               {"global_scores", {0.1, 0.2}},
                               {"windows", json::array()}});
    EXPECT_THROW(load_confidence_file(path), Error);
}
