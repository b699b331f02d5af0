#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "vadtree/boundary.hpp"
#include "vadtree/errors.hpp"

namespace vadtree {

// One video segment [l, r] (1-based, inclusive) with the confidences of its
// two boundaries. Factual boundaries (video start/end) carry confidence 1.
struct EventNode {
    std::string node_id; // "<video_id>:<l>-<r>"
    int l = 1;
    int r = 1;
    double conf_l = 1.0;
    double conf_r = 1.0;
    int depth = 0;
    // Links as indices into GranularityTree::nodes, -1 when absent. Not
    // serialized; containment is recoverable from the intervals.
    int parent = -1;
    int left = -1;
    int right = -1;
};

struct GranularityTree {
    std::string video_id;
    int num_frames = 0;
    std::vector<EventNode> nodes; // sorted by (l asc, r desc): parents before children
};

inline std::string make_node_id(const std::string& video_id, int l, int r) {
    return video_id + ":" + std::to_string(l) + "-" + std::to_string(r);
}

namespace detail {

// Range argmax over peak confidences, ties broken toward the smaller frame.
class PeakArgmax {
public:
    explicit PeakArgmax(const std::vector<Peak>& peaks) : peaks_(peaks) {
        const size_t n = peaks.size();
        if (n == 0) return;
        size_t levels = 1;
        while ((size_t{1} << levels) <= n) ++levels;
        table_.assign(levels, std::vector<int>(n));
        for (size_t i = 0; i < n; ++i) table_[0][i] = static_cast<int>(i);
        for (size_t k = 1; k < levels; ++k) {
            const size_t span = size_t{1} << k;
            for (size_t i = 0; i + span <= n; ++i) {
                table_[k][i] = better(table_[k - 1][i], table_[k - 1][i + span / 2]);
            }
        }
    }

    // Best peak index with l < t < r, or -1.
    int query(int l, int r) const {
        auto lo = std::lower_bound(peaks_.begin(), peaks_.end(), l + 1,
                                   [](const Peak& p, int t) { return p.t < t; });
        auto hi = std::lower_bound(peaks_.begin(), peaks_.end(), r,
                                   [](const Peak& p, int t) { return p.t < t; });
        if (lo >= hi) return -1;
        const size_t a = static_cast<size_t>(lo - peaks_.begin());
        const size_t b = static_cast<size_t>(hi - peaks_.begin()); // exclusive
        size_t k = 0;
        while ((size_t{2} << k) <= b - a) ++k;
        return better(table_[k][a], table_[k][b - (size_t{1} << k)]);
    }

private:
    int better(int i, int j) const {
        const Peak& a = peaks_[static_cast<size_t>(i)];
        const Peak& b = peaks_[static_cast<size_t>(j)];
        if (a.confidence != b.confidence) return a.confidence > b.confidence ? i : j;
        return a.t <= b.t ? i : j;
    }

    const std::vector<Peak>& peaks_;
    std::vector<std::vector<int>> table_;
};

} // namespace detail

// Depth-first binary segmentation of [1, num_frames]. Each popped interval is
// recorded, then split at the most confident unconsumed peak strictly inside
// it while that confidence clears gamma_min; children share the split frame.
// The left child is pushed last so traversal descends left first. Output is
// sorted by start time (wider node first on equal starts).
inline GranularityTree tree_init(const std::string& video_id, int num_frames, const PeakSet& peaks,
                                 double gamma_min) {
    if (num_frames < 2) {
        throw invalid_input("tree_init: num_frames must be >= 2, got " + std::to_string(num_frames));
    }
    if (!(gamma_min >= 0.0 && gamma_min <= 1.0)) {
        throw invalid_input("tree_init: gamma_min must be in [0,1]");
    }
    for (size_t i = 0; i < peaks.peaks.size(); ++i) {
        const Peak& p = peaks.peaks[i];
        if (p.t <= 1 || p.t >= num_frames) {
            throw invalid_input("tree_init: peak at frame " + std::to_string(p.t) +
                                " is not strictly inside (1, " + std::to_string(num_frames) + ")");
        }
        if (i > 0 && peaks.peaks[i - 1].t >= p.t) {
            throw invalid_input("tree_init: peaks must be strictly increasing in t");
        }
    }

    detail::PeakArgmax argmax(peaks.peaks);

    struct Pending {
        int l, r;
        double conf_l, conf_r;
        int depth;
        int parent;
    };

    GranularityTree tree;
    tree.video_id = video_id;
    tree.num_frames = num_frames;

    std::vector<Pending> stack;
    stack.push_back(Pending{1, num_frames, 1.0, 1.0, 0, -1});

    while (!stack.empty()) {
        Pending cur = stack.back();
        stack.pop_back();

        EventNode node;
        node.l = cur.l;
        node.r = cur.r;
        node.conf_l = cur.l == 1 ? 1.0 : cur.conf_l;
        node.conf_r = cur.r == num_frames ? 1.0 : cur.conf_r;
        node.depth = cur.depth;
        node.parent = cur.parent;
        node.node_id = make_node_id(video_id, cur.l, cur.r);

        const int idx = static_cast<int>(tree.nodes.size());
        if (cur.parent >= 0) {
            EventNode& p = tree.nodes[static_cast<size_t>(cur.parent)];
            (node.l == p.l ? p.left : p.right) = idx;
        }
        tree.nodes.push_back(node);

        const int best = argmax.query(cur.l, cur.r);
        if (best < 0) continue;
        const Peak& split = peaks.peaks[static_cast<size_t>(best)];
        if (split.confidence < gamma_min) continue;
        // A consumed split point becomes a boundary of every deeper interval,
        // so it can never reappear strictly inside one; no split-point set is
        // needed to honor the unconsumed requirement.

        stack.push_back(Pending{split.t, cur.r, split.confidence, node.conf_r, cur.depth + 1, idx});
        stack.push_back(Pending{cur.l, split.t, node.conf_l, split.confidence, cur.depth + 1, idx});
    }

    // Canonical order: by start frame, then wider-first. Link indices are
    // remapped to the sorted positions.
    std::vector<int> order(tree.nodes.size());
    for (size_t i = 0; i < order.size(); ++i) order[static_cast<size_t>(i)] = static_cast<int>(i);
    std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        const EventNode& na = tree.nodes[static_cast<size_t>(a)];
        const EventNode& nb = tree.nodes[static_cast<size_t>(b)];
        if (na.l != nb.l) return na.l < nb.l;
        return na.r > nb.r;
    });
    std::vector<int> pos(tree.nodes.size());
    for (size_t i = 0; i < order.size(); ++i) pos[static_cast<size_t>(order[i])] = static_cast<int>(i);
    std::vector<EventNode> sorted;
    sorted.reserve(tree.nodes.size());
    for (int src : order) sorted.push_back(tree.nodes[static_cast<size_t>(src)]);
    for (EventNode& n : sorted) {
        if (n.parent >= 0) n.parent = pos[static_cast<size_t>(n.parent)];
        if (n.left >= 0) n.left = pos[static_cast<size_t>(n.left)];
        if (n.right >= 0) n.right = pos[static_cast<size_t>(n.right)];
    }
    tree.nodes = std::move(sorted);
    return tree;
}

} // namespace vadtree
