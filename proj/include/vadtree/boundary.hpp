#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "vadtree/errors.hpp"
#include "vadtree/io_util.hpp"

namespace vadtree {

// One output window of an external boundary-detection model. start_frame is
// the 1-based global index of the first scored frame; scores has one value
// per frame of the window.
struct LocalWindow {
    int start_frame = 1;
    std::vector<double> scores;
};

struct ConfidencePoint {
    int t = 0;      // 1-based frame index
    double c = 0.0; // boundary confidence in [0,1]
};

// Unified per-frame confidence sequence: after assembly every frame of
// [1, num_frames] is covered by exactly one point.
struct ConfidenceSequence {
    std::string video_id;
    int num_frames = 0;
    std::vector<ConfidencePoint> points;
};

struct Peak {
    int t = 0;
    double confidence = 0.0;
};

struct PeakSet {
    std::string video_id;
    int num_frames = 0;
    std::vector<Peak> peaks; // sorted by t, all strictly inside (1, num_frames)
};

// Planned placement of one sliding window. retain_begin/retain_end are the
// 1-based inclusive global frames whose scores survive into the global
// sequence.
struct WindowPlan {
    int start_frame = 1;
    int length = 0;
    int retain_begin = 1;
    int retain_end = 0;
};

// Overlapping sliding-window layout with stride l_raw/2. Every window keeps
// its central half; the first window additionally keeps its leading quarter
// and the last one keeps everything through num_frames, so the retained
// ranges tile [1, num_frames] with no gap or overlap.
inline std::vector<WindowPlan> plan_windows(int num_frames, int l_raw) {
    if (num_frames < 1) {
        throw invalid_input("plan_windows: num_frames must be >= 1, got " + std::to_string(num_frames));
    }
    if (l_raw < 2 || l_raw % 2 != 0) {
        throw invalid_input("plan_windows: l_raw must be even and >= 2, got " + std::to_string(l_raw));
    }
    if (num_frames <= l_raw) {
        return {WindowPlan{1, num_frames, 1, num_frames}};
    }
    const int q1 = l_raw / 4;
    const int q3 = 3 * l_raw / 4;
    const int stride = l_raw / 2;

    std::vector<WindowPlan> plans;
    plans.push_back(WindowPlan{1, l_raw, 1, q3});
    int covered = q3; // last retained frame so far
    int start = 1;
    while (covered < num_frames) {
        start += stride;
        const int length = std::min(l_raw, num_frames - start + 1);
        const int begin = start + q1;
        const int end = std::min(start + q3 - 1, num_frames);
        plans.push_back(WindowPlan{start, length, begin, end});
        covered = start + q3 - 1;
    }
    plans.back().retain_end = num_frames;
    return plans;
}

// Concatenates the retained parts of the windows into the global sequence.
// The stride is inferred from the window placement itself; a trailing window
// that was clipped or snapped back by the producer is accepted as long as it
// still covers the remaining frames.
inline ConfidenceSequence assemble_global_sequence(std::vector<LocalWindow> windows, int num_frames,
                                                   const std::string& video_id = "") {
    if (num_frames < 1) {
        throw invalid_input("assemble_global_sequence: num_frames must be >= 1");
    }
    if (windows.empty()) {
        throw Error(ErrorKind::coverage_violation, "no windows cover frame 1");
    }
    std::sort(windows.begin(), windows.end(),
              [](const LocalWindow& a, const LocalWindow& b) { return a.start_frame < b.start_frame; });
    for (const auto& w : windows) {
        if (w.start_frame < 1) {
            throw invalid_input("window start_frame must be >= 1, got " + std::to_string(w.start_frame));
        }
        for (double s : w.scores) {
            if (!(s >= 0.0 && s <= 1.0)) {
                throw invalid_input("window score outside [0,1] in window at frame " +
                                    std::to_string(w.start_frame));
            }
        }
    }

    ConfidenceSequence seq;
    seq.video_id = video_id;
    seq.num_frames = num_frames;
    seq.points.assign(static_cast<size_t>(num_frames), ConfidencePoint{});

    auto take = [&](const LocalWindow& w, int begin, int end) {
        for (int f = begin; f <= end; ++f) {
            const long idx = static_cast<long>(f) - w.start_frame;
            if (idx < 0 || idx >= static_cast<long>(w.scores.size())) {
                throw Error(ErrorKind::coverage_violation,
                            "frame " + std::to_string(f) + " not covered by any retained window range");
            }
            seq.points[static_cast<size_t>(f - 1)] = ConfidencePoint{f, w.scores[static_cast<size_t>(idx)]};
        }
    };

    if (windows.size() == 1) {
        const auto& w = windows.front();
        if (w.start_frame != 1) {
            throw Error(ErrorKind::coverage_violation, "frame 1 not covered by any retained window range");
        }
        if (static_cast<int>(w.scores.size()) < num_frames) {
            throw Error(ErrorKind::coverage_violation,
                        "frame " + std::to_string(w.scores.size() + 1) +
                            " not covered by any retained window range");
        }
        take(w, 1, num_frames);
        return seq;
    }

    const int stride = windows[1].start_frame - windows[0].start_frame;
    if (stride < 1) {
        throw Error(ErrorKind::coverage_violation,
                    "overlapping duplicate window at frame " + std::to_string(windows[1].start_frame));
    }
    const int l_raw = 2 * stride;
    const int q1 = l_raw / 4;
    const int q3 = 3 * l_raw / 4;

    if (windows[0].start_frame != 1) {
        throw Error(ErrorKind::coverage_violation, "frame 1 not covered by any retained window range");
    }

    int covered = 0; // last frame retained so far
    for (size_t i = 0; i < windows.size(); ++i) {
        const auto& w = windows[i];
        const bool last = (i + 1 == windows.size());
        if (covered >= num_frames) {
            throw Error(ErrorKind::coverage_violation,
                        "window at frame " + std::to_string(w.start_frame) +
                            " overlaps already covered range");
        }
        int begin = 0;
        int end = 0;
        if (i == 0) {
            begin = 1;
            end = q3;
        } else {
            const int expected = 1 + static_cast<int>(i) * stride;
            if (!last && w.start_frame != expected) {
                throw Error(ErrorKind::coverage_violation,
                            "frame " + std::to_string(covered + 1) +
                                " not covered by any retained window range");
            }
            begin = covered + 1;
            end = last ? num_frames : w.start_frame + q3 - 1;
            if (!last && begin != w.start_frame + q1) {
                throw Error(ErrorKind::coverage_violation,
                            "frame " + std::to_string(begin) + " not covered by any retained window range");
            }
        }
        if (last) {
            end = num_frames;
        }
        take(w, begin, std::min(end, num_frames));
        covered = end;
    }
    if (covered < num_frames) {
        throw Error(ErrorKind::coverage_violation,
                    "frame " + std::to_string(covered + 1) + " not covered by any retained window range");
    }
    return seq;
}

// Interior local maxima of the assembled sequence: C(t) >= C(t-1) and
// C(t) >= C(t+1). Plateau runs of equal confidence collapse to their
// leftmost frame. Endpoints are never peaks; they are factual boundaries
// injected later by tree construction.
inline PeakSet extract_peaks(const ConfidenceSequence& seq) {
    PeakSet out;
    out.video_id = seq.video_id;
    out.num_frames = seq.num_frames;
    const auto& pts = seq.points;
    if (pts.size() < 3) {
        return out;
    }
    for (size_t i = 0; i + 1 < pts.size(); ++i) {
        if (pts[i + 1].t != pts[i].t + 1) {
            throw invalid_input("extract_peaks: sequence is not contiguous at frame " +
                                std::to_string(pts[i].t));
        }
    }
    bool prev_is_candidate = false;
    for (size_t i = 1; i + 1 < pts.size(); ++i) {
        const double c = pts[i].c;
        const bool candidate = c >= pts[i - 1].c && c >= pts[i + 1].c;
        if (candidate && !(prev_is_candidate && pts[i - 1].c == c)) {
            out.peaks.push_back(Peak{pts[i].t, c});
        }
        prev_is_candidate = candidate;
    }
    return out;
}

// Per-video input file. Exactly one of "windows" / "global_scores" must be
// present; the latter bypasses window assembly for producers that already
// postprocess their own outputs.
struct ConfidenceInput {
    std::string video_id;
    int num_frames = 0;
    double fps = 0.0;
    ConfidenceSequence sequence;
};

inline ConfidenceInput load_confidence_file(const std::filesystem::path& path) {
    const json j = read_json_file(path);
    ConfidenceInput input;
    for (const char* field : {"video_id", "num_frames", "fps"}) {
        if (!j.contains(field)) {
            throw invalid_input(path.string() + ": missing field \"" + field + "\"");
        }
    }
    input.video_id = j.at("video_id").get<std::string>();
    input.num_frames = j.at("num_frames").get<int>();
    input.fps = j.at("fps").get<double>();
    if (input.num_frames < 1) {
        throw invalid_input(path.string() + ": num_frames must be >= 1");
    }
    if (!(input.fps > 0.0)) {
        throw invalid_input(path.string() + ": fps must be > 0");
    }

    const bool has_windows = j.contains("windows");
    const bool has_global = j.contains("global_scores");
    if (has_windows == has_global) {
        throw invalid_input(path.string() + ": exactly one of \"windows\"/\"global_scores\" must be present");
    }

    if (has_global) {
        const auto scores = j.at("global_scores").get<std::vector<double>>();
        if (static_cast<int>(scores.size()) != input.num_frames) {
            throw invalid_input(path.string() + ": global_scores length " + std::to_string(scores.size()) +
                                " != num_frames " + std::to_string(input.num_frames));
        }
        input.sequence.video_id = input.video_id;
        input.sequence.num_frames = input.num_frames;
        input.sequence.points.reserve(scores.size());
        for (size_t i = 0; i < scores.size(); ++i) {
            if (!(scores[i] >= 0.0 && scores[i] <= 1.0)) {
                throw invalid_input(path.string() + ": global_scores[" + std::to_string(i) +
                                    "] outside [0,1]");
            }
            input.sequence.points.push_back(ConfidencePoint{static_cast<int>(i) + 1, scores[i]});
        }
        return input;
    }

    std::vector<LocalWindow> windows;
    for (const auto& wj : j.at("windows")) {
        LocalWindow w;
        if (!wj.contains("start_frame") || !wj.contains("scores")) {
            throw invalid_input(path.string() + ": window entries need \"start_frame\" and \"scores\"");
        }
        w.start_frame = wj.at("start_frame").get<int>();
        w.scores = wj.at("scores").get<std::vector<double>>();
        windows.push_back(std::move(w));
    }
    input.sequence = assemble_global_sequence(std::move(windows), input.num_frames, input.video_id);
    return input;
}

} // namespace vadtree
