#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "vadtree/errors.hpp"

namespace vadtree {

enum class ClusterMethod { kmeans, kmedoids };

inline ClusterMethod parse_cluster_method(const std::string& name) {
    if (name == "kmeans") return ClusterMethod::kmeans;
    if (name == "kmedoids") return ClusterMethod::kmedoids;
    throw invalid_input("unknown cluster method \"" + name + "\" (expected kmeans|kmedoids)");
}

struct ClusterSplit {
    std::vector<double> coarse; // cluster with the larger center
    std::vector<double> fine;
};

// Deterministic 1-D two-cluster split. Centers start at min and max of the
// values; Lloyd iterations run to an assignment fixpoint (at most 100).
// K-medoids shares the loop but snaps each center to the in-cluster point
// minimizing total absolute distance (lower of the two medians on ties).
// A single distinct value puts everything in the coarse cluster.
inline ClusterSplit cluster_confidences(const std::vector<double>& values, ClusterMethod method) {
    if (values.empty()) {
        throw invalid_input("cluster_confidences: values must be non-empty");
    }
    const double lo = *std::min_element(values.begin(), values.end());
    const double hi = *std::max_element(values.begin(), values.end());

    ClusterSplit split;
    if (lo == hi) {
        split.coarse = values;
        return split;
    }

    auto center_of = [&](const std::vector<double>& members) {
        if (method == ClusterMethod::kmeans) {
            double sum = 0.0;
            for (double v : members) sum += v;
            return sum / static_cast<double>(members.size());
        }
        std::vector<double> sorted = members;
        std::sort(sorted.begin(), sorted.end());
        return sorted[(sorted.size() - 1) / 2];
    };

    double c_low = lo;
    double c_high = hi;
    // false = low cluster, true = high cluster; initialized to the first
    // assignment pass below.
    std::vector<bool> assign(values.size(), false);
    bool first = true;
    for (int iter = 0; iter < 100; ++iter) {
        bool changed = false;
        const double mid = (c_low + c_high) / 2.0;
        for (size_t i = 0; i < values.size(); ++i) {
            const bool high = values[i] > mid; // tie at the midpoint stays low
            if (high != static_cast<bool>(assign[i])) {
                assign[i] = high;
                changed = true;
            }
        }
        if (!changed && !first) break;
        first = false;

        std::vector<double> low_members, high_members;
        for (size_t i = 0; i < values.size(); ++i) {
            (assign[i] ? high_members : low_members).push_back(values[i]);
        }
        // min stays nearest the low center and max nearest the high one, so
        // neither side can empty out.
        c_low = center_of(low_members);
        c_high = center_of(high_members);
    }

    for (size_t i = 0; i < values.size(); ++i) {
        (assign[i] ? split.coarse : split.fine).push_back(values[i]);
    }
    return split;
}

} // namespace vadtree
