#pragma once

// K-means++ seeding over weighted data, in two algorithmically equivalent
// forms. The baseline runs the exponential race by full scan: every round
// recomputes all n distances and all n priorities. The accelerated form
// skips distance updates that the triangle inequality proves fruitless
// (skip when gamma_owner / 2 >= alpha_i) and pops the next seed from the
// dirty-flag race queue instead of rescanning. Both consume the same keyed
// randomness, so they select identical seed sequences; the baseline is the
// oracle for the accelerated path.

#include <chrono>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kseed/core.hpp"
#include "kseed/race_queue.hpp"
#include "kseed/report.hpp"
#include "kseed/rng.hpp"

namespace kseed {

// Lemma: for point x with current seed b at distance alpha = d(x, b), and a
// new center c with d(b, c) >= 2 * alpha, we get d(x, c) >= alpha, so the
// update cannot improve. Inclusive at the boundary. alpha = +inf (no owner
// yet) never prunes; alpha = 0 (the point is a seed) always prunes.
inline bool prune_admissible(double alpha, double gamma_owner) noexcept {
    return 0.5 * gamma_owner >= alpha;
}

struct SeedResult {
    std::vector<std::size_t> seed_indices;  // K distinct dataset indices, selection order
    std::vector<double> seeds;              // K * dim row-major copies of the chosen points
    RunReport report;
};

// Per-round tallies for the accelerated path; the distance counter must equal
// sum(gamma_evals + unpruned) over rounds.
struct IterStats {
    std::size_t gamma_evals = 0;
    std::size_t pruned = 0;
    std::size_t unpruned = 0;
};

// Verification hook for --debug-prune: every pruned (point, center) pair is
// re-checked with an uncounted distance evaluation.
struct PruneAudit {
    std::uint64_t events = 0;
    std::uint64_t violations = 0;
};

// Optional instrumentation outputs; any subset may be requested.
struct KppHooks {
    PruneAudit* audit = nullptr;               // accelerated path only
    std::vector<IterStats>* iter_stats = nullptr;
    AssignmentState* final_state = nullptr;    // assignment as the run left it
};

namespace detail {

inline void validate_seeding_args(const Dataset& data, std::size_t k) {
    data.validate();
    if (k < 1) throw invalid_input("K must be >= 1");
    if (k > data.positive_weight_count())
        throw invalid_input("K exceeds the number of points with positive weight");
}

inline void finalize_result(SeedResult& res, const Dataset& data, const AssignmentState& state) {
    res.seeds.reserve(res.seed_indices.size() * data.dim);
    for (std::size_t idx : res.seed_indices) {
        auto p = data.point(idx);
        res.seeds.insert(res.seeds.end(), p.begin(), p.end());
    }
    // Potential over non-seed points with the assignment as the run left it.
    std::vector<std::uint8_t> is_seed(data.n, 0);
    for (std::size_t idx : res.seed_indices) is_seed[idx] = 1;
    double z = 0.0;
    for (std::size_t i = 0; i < data.n; ++i) {
        if (is_seed[i] || std::isinf(state.alpha[i])) continue;
        z += data.weights[i] * state.alpha[i] * state.alpha[i];
    }
    res.report.potential = z;
    res.report.seed_indices = res.seed_indices;
    res.report.n = data.n;
    res.report.dim = data.dim;
    res.report.k = res.seed_indices.size();
}

class Stopwatch {
public:
    Stopwatch() : start_(std::chrono::steady_clock::now()) {}
    double elapsed_ms() const {
        const auto d = std::chrono::steady_clock::now() - start_;
        return std::chrono::duration<double, std::milli>(d).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

// Full-scan race pop: argmin of the true priority over unselected indices,
// ties to the lower index. Falls back to the lowest unselected positive-weight
// index when every remaining priority is +inf (exact duplicates of seeds).
inline std::size_t full_scan_pop(const Dataset& data, std::span<const double> lambdas,
                                 const AssignmentState& state,
                                 const std::vector<std::uint8_t>& selected) {
    std::size_t arg = data.n;
    double best = kInf;
    for (std::size_t i = 0; i < data.n; ++i) {
        if (selected[i]) continue;
        const double p = race_priority(lambdas[i], data.weights[i], state.alpha[i]);
        if (p < best) {
            best = p;
            arg = i;
        }
    }
    if (arg != data.n) return arg;
    for (std::size_t i = 0; i < data.n; ++i)
        if (!selected[i] && data.weights[i] > 0.0) return i;
    throw empty_queue("no selectable candidates left");
}

}  // namespace detail

inline SeedResult kmeanspp_baseline(const Dataset& data, std::size_t k, const RngStream& rng,
                                    DistanceCounter& counter, const KppHooks& hooks = {}) {
    detail::validate_seeding_args(data, k);
    detail::Stopwatch clock;

    std::vector<double> lambdas(data.n);
    for (std::size_t i = 0; i < data.n; ++i) lambdas[i] = rng.exponential(i);

    AssignmentState state(data.n);
    std::vector<std::uint8_t> selected(data.n, 0);
    SeedResult res;
    res.seed_indices.reserve(k);

    std::size_t newest = detail::full_scan_pop(data, lambdas, state, selected);
    selected[newest] = 1;
    res.seed_indices.push_back(newest);

    while (res.seed_indices.size() < k) {
        // Full update scan: n distance evaluations, no exceptions.
        const auto seed_pt = data.point(newest);
        for (std::size_t i = 0; i < data.n; ++i) {
            const double d = distance(seed_pt, data.point(i), counter);
            if (d < state.alpha[i]) {
                state.alpha[i] = d;
                state.owner[i] = static_cast<std::int64_t>(res.seed_indices.size()) - 1;
            }
        }
        if (hooks.iter_stats) hooks.iter_stats->push_back(IterStats{0, 0, data.n});
        newest = detail::full_scan_pop(data, lambdas, state, selected);
        selected[newest] = 1;
        res.seed_indices.push_back(newest);
    }

    res.report.algo = "kpp";
    res.report.master_seed = rng.master_seed();
    detail::finalize_result(res, data, state);
    res.report.distance_count = counter.count();
    res.report.wall_time_ms = clock.elapsed_ms();
    if (hooks.final_state) *hooks.final_state = state;
    return res;
}

inline SeedResult kmeanspp_accelerated(const Dataset& data, std::size_t k, const RngStream& rng,
                                       DistanceCounter& counter, const KppHooks& hooks = {}) {
    detail::validate_seeding_args(data, k);
    detail::Stopwatch clock;
    PruneAudit* const audit = hooks.audit;

    std::vector<double> lambdas(data.n);
    for (std::size_t i = 0; i < data.n; ++i) lambdas[i] = rng.exponential(i);

    AssignmentState state(data.n);
    RaceQueue queue(data.weights, lambdas);
    const auto priority_of = [&](std::size_t i) {
        return race_priority(lambdas[i], data.weights[i], state.alpha[i]);
    };

    SeedResult res;
    res.seed_indices.reserve(k);
    res.report.examined.reserve(k);

    std::size_t newest = queue.pop_next(priority_of);
    res.seed_indices.push_back(newest);
    res.report.examined.push_back(queue.last_pop_stats().examined_fraction());

    std::vector<double> gamma;  // gamma[j] = d(m_new, m_j) for previous seeds j
    gamma.reserve(k);
    DistanceCounter audit_counter;

    while (res.seed_indices.size() < k) {
        const auto seed_pt = data.point(newest);
        const std::size_t prev = res.seed_indices.size() - 1;
        gamma.resize(prev);
        for (std::size_t j = 0; j < prev; ++j)
            gamma[j] = distance(seed_pt, data.point(res.seed_indices[j]), counter);

        IterStats stats;
        stats.gamma_evals = prev;
        for (std::size_t i = 0; i < data.n; ++i) {
            const double g = state.owner[i] >= 0 ? gamma[state.owner[i]] : 0.0;
            if (prune_admissible(state.alpha[i], g)) {
                ++stats.pruned;
                if (audit) {
                    ++audit->events;
                    if (distance(seed_pt, data.point(i), audit_counter) < state.alpha[i])
                        ++audit->violations;
                }
                continue;
            }
            ++stats.unpruned;
            const double d = distance(seed_pt, data.point(i), counter);
            if (d < state.alpha[i]) {
                state.alpha[i] = d;
                state.owner[i] = static_cast<std::int64_t>(prev);
                queue.mark_dirty(i);
            }
        }
        if (hooks.iter_stats) hooks.iter_stats->push_back(stats);

        newest = queue.pop_next(priority_of);
        res.seed_indices.push_back(newest);
        res.report.examined.push_back(queue.last_pop_stats().examined_fraction());
    }

    res.report.algo = "kpp-fast";
    res.report.master_seed = rng.master_seed();
    detail::finalize_result(res, data, state);
    res.report.distance_count = counter.count();
    res.report.wall_time_ms = clock.elapsed_ms();
    if (hooks.final_state) *hooks.final_state = state;
    return res;
}

}  // namespace kseed
