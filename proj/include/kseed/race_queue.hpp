#pragma once

// Weighted sampling without replacement via an exponential race: item i holds
// a fixed key lambda_i ~ Exponential(1) and races with priority
// lambda_i / (w_i * alpha_i^2); smallest value wins. Because alpha only ever
// decreases, a stored priority is a lower bound on the true one, which makes
// the lazy dirty-flag scheme sound: entries above the first clean entry are
// the only ones whose priority needs recomputing before a pop.

#include <cassert>
#include <cmath>
#include <cstdint>
#include <queue>
#include <set>
#include <span>
#include <vector>

#include "kseed/core.hpp"

namespace kseed {

// Race priority with the degenerate cases folded in:
//   w == 0            -> +inf (never selectable)
//   alpha == +inf     -> lambda / w (initial draw, no seed chosen yet)
//   w * alpha^2 == 0  -> +inf (point is numerically on top of a seed)
// Shared by the queue and by the full-scan baseline so both paths compare
// bit-identical values.
inline double race_priority(double lambda, double weight, double alpha) noexcept {
    if (weight <= 0.0) return kInf;
    if (std::isinf(alpha)) return lambda / weight;
    const double denom = weight * (alpha * alpha);
    if (denom == 0.0) return kInf;
    return lambda / denom;
}

// Bookkeeping for one pop: how many entries had to be re-prioritized relative
// to the candidates still in play.
struct PopStats {
    std::size_t reprioritized = 0;       // entries drained and re-pushed/dropped
    std::size_t pool = 0;                // selectable entries before the pop
    bool popped_was_reprioritized = false;

    // Counts the final pop's inspection only when it wasn't already paid for
    // by a re-prioritization, so "all dirty" yields 1.0 and "none dirty"
    // yields 1/pool.
    double examined_fraction() const {
        if (pool == 0) return 0.0;
        const std::size_t examined = reprioritized + (popped_was_reprioritized ? 0 : 1);
        const double f = static_cast<double>(examined) / static_cast<double>(pool);
        return f > 1.0 ? 1.0 : f;
    }
};

class RaceQueue {
public:
    // Builds the initial-draw race: every index with w_i > 0 enters at
    // priority lambda_i / w_i, all flags clean. Zero-weight indices are never
    // stored.
    RaceQueue(std::span<const double> weights, std::span<const double> lambdas)
        : dirty_(weights.size(), 0), popped_(weights.size(), 0), initial_(weights.size(), 1) {
        if (weights.size() != lambdas.size()) throw invalid_input("weights/lambdas length mismatch");
        bool any = false;
        for (std::size_t i = 0; i < weights.size(); ++i) {
            if (weights[i] <= 0.0) continue;
            const double p = race_priority(lambdas[i], weights[i], kInf);
            if (std::isfinite(p)) {
                heap_.push(Entry{p, i});
            } else {
                degenerate_.insert(i);  // lambda / w overflowed; still selectable last
            }
            any = true;
        }
        if (!any) throw invalid_input("all weights are zero");
    }

    // Lazy: flips the flag, leaves the heap untouched. No-op for indices that
    // were already selected (their entries are gone). An entry parked in the
    // degenerate tier re-enters the race here: its value may have become
    // finite again when the first assignment replaced the initial lambda / w
    // key (that is the one transition where values can shrink; afterwards
    // they only grow). Apparent 0 forces a recompute at the next pop.
    void mark_dirty(std::size_t i) {
        if (popped_[i]) return;
        if (const auto it = degenerate_.find(i); it != degenerate_.end()) {
            degenerate_.erase(it);
            heap_.push(Entry{0.0, i});
        }
        dirty_[i] = 1;
    }

    bool popped(std::size_t i) const { return popped_[i] != 0; }

    std::size_t remaining() const { return heap_.size() + degenerate_.size(); }

    bool empty() const { return heap_.empty() && degenerate_.empty(); }

    const PopStats& last_pop_stats() const { return last_pop_; }

    // Pops the index with globally minimal true priority among unselected
    // indices (ties to the lower index). `priority_of(i)` must return the
    // current true priority; +inf marks the entry selected-equivalent and
    // demotes it to the duplicate tier, which is only drawn from (lowest
    // index first) once no raceable entry is left.
    template <typename PriorityFn>
    std::size_t pop_next(PriorityFn&& priority_of) {
        last_pop_ = PopStats{};
        last_pop_.pool = remaining();

        scratch_.clear();
        while (!heap_.empty() && dirty_[heap_.top().index]) {
            scratch_.push_back(heap_.top());
            heap_.pop();
        }
        last_pop_.reprioritized = scratch_.size();
        for (const Entry& e : scratch_) {
            const double p = priority_of(e.index);
            // Once an entry carries a recomputed key, alpha can only shrink
            // and its value only grow. Build-time lambda / w keys are exempt:
            // the first assignment may land below them, and it also dirties
            // every entry, so nothing stale survives to the second pop.
            assert(initial_[e.index] || p >= e.priority);
            initial_[e.index] = 0;
            dirty_[e.index] = 0;
            if (std::isfinite(p)) {
                heap_.push(Entry{p, e.index});
            } else {
                degenerate_.insert(e.index);
            }
        }

        std::size_t chosen;
        if (!heap_.empty()) {
            // The drained prefix was re-inserted clean, and everything left
            // behind it is lexicographically larger than the first clean
            // entry was, so the top cannot be dirty here.
            chosen = heap_.top().index;
            assert(!dirty_[chosen]);
            heap_.pop();
        } else if (!degenerate_.empty()) {
            chosen = *degenerate_.begin();
            degenerate_.erase(degenerate_.begin());
        } else {
            throw empty_queue("no selectable candidates left");
        }
        for (const Entry& e : scratch_)
            if (e.index == chosen) last_pop_.popped_was_reprioritized = true;
        popped_[chosen] = 1;
        return chosen;
    }

private:
    struct Entry {
        double priority;
        std::size_t index;
        bool operator>(const Entry& o) const {
            if (priority != o.priority) return priority > o.priority;
            return index > o.index;
        }
    };

    std::priority_queue<Entry, std::vector<Entry>, std::greater<Entry>> heap_;
    std::vector<std::uint8_t> dirty_;
    std::vector<std::uint8_t> popped_;
    std::vector<std::uint8_t> initial_;  // entry still carries its build-time key
    std::set<std::size_t> degenerate_;   // selected-equivalent entries, drawn last
    std::vector<Entry> scratch_;
    PopStats last_pop_;
};

}  // namespace kseed
