#pragma once

// Vantage-point tree over a small candidate-center set. Each internal node
// stores one vantage point plus exact distance intervals for the points in
// its near and far subtrees; subtrees whose interval cannot contain anything
// within tau of the query are skipped. nearest_in_range() is the same search
// started at tau = maxRange with a -1 sentinel, so a caller that already
// knows an upper bound on the nearest distance prunes strictly more.

#include <algorithm>
#include <cstdint>
#include <span>
#include <vector>

#include "kseed/core.hpp"
#include "kseed/rng.hpp"

namespace kseed {

struct NearestResult {
    double dist;     // distance to the winner, or the unchanged bound if id == -1
    std::int64_t id; // center index, -1 when nothing lies within the bound
};

class VpTree {
public:
    // points: count * dim row-major. Vantage points are chosen uniformly at
    // random (seeded); the remaining set is split at the median distance,
    // odd sets putting the median in the near child. Distances computed
    // during construction are counted.
    VpTree(std::span<const double> points, std::size_t count, std::size_t dim,
           std::uint64_t seed, DistanceCounter& counter, std::size_t leaf_size = 8)
        : dim_(dim), leaf_size_(leaf_size == 0 ? 1 : leaf_size) {
        if (count == 0) throw invalid_input("vp-tree needs at least one point");
        if (points.size() != count * dim) throw invalid_input("vp-tree point buffer size mismatch");
        std::vector<Item> items(count);
        for (std::size_t i = 0; i < count; ++i) items[i] = Item{i, 0.0};
        SplitMix64 rng(seed);
        root_ = build(points, items, 0, count, rng, counter);
        // Materialize points in tree order so queries walk contiguous rows.
        pts_.resize(count * dim_);
        ids_.resize(count);
        for (std::size_t row = 0; row < count; ++row) {
            ids_[row] = static_cast<std::int64_t>(items[row].id);
            const double* src = points.data() + items[row].id * dim_;
            std::copy(src, src + dim_, pts_.begin() + row * dim_);
        }
    }

    std::size_t size() const { return ids_.size(); }

    NearestResult nearest(std::span<const double> q, DistanceCounter& counter) const {
        return search(root_, q, NearestResult{kInf, -1}, counter);
    }

    // Same search with the initial bound set to max_range: returns -1 unless
    // some center lies within max_range (a center at exactly max_range is
    // returned).
    NearestResult nearest_in_range(std::span<const double> q, double max_range,
                                   DistanceCounter& counter) const {
        if (!(max_range >= 0.0)) throw invalid_input("max_range must be >= 0");
        return search(root_, q, NearestResult{max_range, -1}, counter);
    }

    struct Node {
        std::int32_t vantage_row = -1;  // -1 marks a leaf
        std::int32_t left = -1, right = -1;
        std::uint32_t begin = 0, end = 0;  // leaf row range
        double near_low = 0, near_high = 0, far_low = 0, far_high = 0;
    };

    // Structural read access for tests and diagnostics.
    const std::vector<Node>& nodes() const { return nodes_; }
    std::int32_t root() const { return root_; }
    std::int64_t stored_id(std::size_t row) const { return ids_[row]; }

private:
    struct Item {
        std::size_t id;
        double dist;
    };

    std::span<const double> row(std::size_t r) const { return {pts_.data() + r * dim_, dim_}; }

    std::int32_t build(std::span<const double> points, std::vector<Item>& items,
                       std::size_t lo, std::size_t hi, SplitMix64& rng,
                       DistanceCounter& counter) {
        const std::size_t count = hi - lo;
        Node node;
        if (count <= leaf_size_) {
            node.begin = static_cast<std::uint32_t>(lo);
            node.end = static_cast<std::uint32_t>(hi);
            nodes_.push_back(node);
            return static_cast<std::int32_t>(nodes_.size() - 1);
        }

        const std::size_t pick = lo + rng.next_below(count);
        std::swap(items[lo], items[pick]);
        const std::span<const double> vantage{points.data() + items[lo].id * dim_, dim_};
        for (std::size_t i = lo + 1; i < hi; ++i)
            items[i].dist = distance(vantage, {points.data() + items[i].id * dim_, dim_}, counter);

        const std::size_t rest = count - 1;
        const std::size_t mid = lo + 1 + (rest + 1) / 2;  // odd sets: median goes near
        std::nth_element(items.begin() + lo + 1, items.begin() + mid, items.begin() + hi,
                         [](const Item& a, const Item& b) {
                             if (a.dist != b.dist) return a.dist < b.dist;
                             return a.id < b.id;
                         });

        node.vantage_row = static_cast<std::int32_t>(lo);
        node.near_low = node.far_low = kInf;
        node.near_high = node.far_high = -kInf;
        for (std::size_t i = lo + 1; i < mid; ++i) {
            node.near_low = std::min(node.near_low, items[i].dist);
            node.near_high = std::max(node.near_high, items[i].dist);
        }
        for (std::size_t i = mid; i < hi; ++i) {
            node.far_low = std::min(node.far_low, items[i].dist);
            node.far_high = std::max(node.far_high, items[i].dist);
        }

        const std::size_t slot = nodes_.size();
        nodes_.push_back(node);
        const std::int32_t left = build(points, items, lo + 1, mid, rng, counter);
        const std::int32_t right = build(points, items, mid, hi, rng, counter);
        nodes_[slot].left = left;
        nodes_[slot].right = right;
        return static_cast<std::int32_t>(slot);
    }

    // Replace the incumbent when strictly closer, or equally close with a
    // smaller center index; the -1 sentinel always loses. The index rule is
    // what lets equidistant ties resolve to the earliest-selected candidate.
    static NearestResult best(NearestResult cur, double d, std::int64_t id) {
        if (d < cur.dist) return {d, id};
        if (d == cur.dist && (cur.id == -1 || (id != -1 && id < cur.id))) return {d, id};
        return cur;
    }

    // Interval admission test: the subtree with points at distance [a, b]
    // from the vantage can hold something within tau of the query only if
    // a - tau <= r <= b + tau. Inclusive so an exact-boundary winner is
    // never skipped.
    static bool admit(double r, double tau, double a, double b) {
        return a - tau <= r && r <= b + tau;
    }

    NearestResult search(std::int32_t idx, std::span<const double> q, NearestResult cur,
                         DistanceCounter& counter) const {
        const Node& node = nodes_[idx];
        if (node.vantage_row < 0) {
            for (std::uint32_t r = node.begin; r < node.end; ++r)
                cur = best(cur, distance(q, row(r), counter), ids_[r]);
            return cur;
        }

        const double r = distance(q, row(node.vantage_row), counter);
        cur = best(cur, r, ids_[node.vantage_row]);

        const double m = (node.near_high + node.far_low) / 2.0;
        const bool near_first = r < m;
        for (int pass = 0; pass < 2; ++pass) {
            const bool go_near = (pass == 0) ? near_first : !near_first;
            const double a = go_near ? node.near_low : node.far_low;
            const double b = go_near ? node.near_high : node.far_high;
            if (admit(r, cur.dist, a, b))
                cur = search(go_near ? node.left : node.right, q, cur, counter);
        }
        return cur;
    }

    std::size_t dim_;
    std::size_t leaf_size_;
    std::vector<double> pts_;       // points in tree order
    std::vector<std::int64_t> ids_; // original center index per stored row
    std::vector<Node> nodes_;
    std::int32_t root_ = -1;
};

}  // namespace kseed
