#pragma once

// K-means|| seeding: R rounds of l-oversampled Bernoulli candidate selection,
// candidate reweighting by owned dataset weight, then reduction to K seeds
// with K-means++. The baseline updates assignments by scanning each round's
// new candidates; the accelerated variant builds a vantage-point tree on the
// new candidates and queries nearest_in_range(x_i, alpha_i), which prunes the
// whole tree for points that keep their owner. Candidate coin flips are keyed
// by (round, point), so both variants consume identical randomness and
// produce identical candidate sets, assignments, reweights, and final seeds.

#include <cstdint>
#include <span>
#include <vector>

#include "kseed/core.hpp"
#include "kseed/kmeanspp.hpp"
#include "kseed/rng.hpp"
#include "kseed/vptree.hpp"

namespace kseed {

struct ScalableConfig {
    std::size_t k = 1;
    std::size_t rounds = 5;       // R
    double oversampling = 2.0;    // l, expected candidates added per round

    static ScalableConfig defaults(std::size_t k) {
        return ScalableConfig{k, 5, 2.0 * static_cast<double>(k)};
    }

    void validate() const {
        if (k < 1) throw invalid_input("K must be >= 1");
        if (rounds < 1) throw invalid_input("R must be >= 1");
        if (!(oversampling >= 1.0)) throw invalid_input("oversampling factor must be >= 1");
    }
};

// Snapshot of the round loop for the paired equivalence check.
struct RoundTrace {
    struct Round {
        std::vector<std::size_t> added;  // dataset indices selected this round
        std::vector<double> alpha;       // assignment distances after the round
    };
    std::vector<Round> rounds;
    std::vector<std::size_t> candidates;  // final candidate indices, selection order
    std::vector<double> reweights;        // w' per candidate
};

// Clamped selection probability min(1, l * w * alpha^2 / Z). Shared by both
// paths so the comparison against the keyed uniform is bit-identical.
inline double candidate_probability(double oversampling, double weight, double alpha,
                                    double z) noexcept {
    if (z <= 0.0) return 0.0;
    const double p = oversampling * weight * (alpha * alpha) / z;
    return p > 1.0 ? 1.0 : p;
}

// Each dataset point contributes its weight to its recorded owner, so the
// total is conserved and equidistant ties stay with the earliest-selected
// candidate (owners are only ever set on strict improvement).
inline std::vector<double> reweight_by_owner(const Dataset& data, std::size_t candidate_count,
                                             std::span<const std::int64_t> owner) {
    std::vector<double> w(candidate_count, 0.0);
    for (std::size_t i = 0; i < data.n; ++i) {
        if (owner[i] < 0 || static_cast<std::size_t>(owner[i]) >= candidate_count)
            throw not_initialized("point has no recorded owner");
        w[static_cast<std::size_t>(owner[i])] += data.weights[i];
    }
    return w;
}

namespace detail {

// First candidate drawn with probability w_i / sum(w), by CDF inversion on
// the initial-draw stream. Identical in both paths.
inline std::size_t weighted_initial_index(const Dataset& data, const RngStream& rng) {
    const double total = data.total_weight();
    const double target = rng.uniform(RngStream::Stream::InitialDraw) * total;
    double cum = 0.0;
    std::size_t last_positive = data.n;
    for (std::size_t i = 0; i < data.n; ++i) {
        if (data.weights[i] <= 0.0) continue;
        cum += data.weights[i];
        last_positive = i;
        if (cum >= target) return i;
    }
    return last_positive;  // guards accumulated rounding at target == total
}

// Scans candidates [from, to) in selection order against every point;
// strict improvement keeps the earliest owner on exact ties.
inline void scan_new_candidates(const Dataset& data, const std::vector<std::size_t>& candidates,
                                std::size_t from, std::size_t to, AssignmentState& state,
                                DistanceCounter& counter) {
    for (std::size_t i = 0; i < data.n; ++i) {
        const auto pt = data.point(i);
        for (std::size_t j = from; j < to; ++j) {
            const double d = distance(data.point(candidates[j]), pt, counter);
            if (d < state.alpha[i]) {
                state.alpha[i] = d;
                state.owner[i] = static_cast<std::int64_t>(j);
            }
        }
    }
}

// Same update through the per-round tree: the query is bounded by the current
// alpha_i, and a returned center only takes ownership on strict improvement.
inline void scan_new_candidates_indexed(const Dataset& data,
                                        const std::vector<std::size_t>& candidates,
                                        std::size_t from, std::size_t to, std::uint64_t build_seed,
                                        AssignmentState& state, DistanceCounter& counter) {
    const std::size_t count = to - from;
    if (count == 0) return;  // round added nothing; nothing can improve
    std::vector<double> pts(count * data.dim);
    for (std::size_t j = 0; j < count; ++j) {
        const auto p = data.point(candidates[from + j]);
        std::copy(p.begin(), p.end(), pts.begin() + j * data.dim);
    }
    const VpTree tree(pts, count, data.dim, build_seed, counter);
    for (std::size_t i = 0; i < data.n; ++i) {
        const NearestResult hit = tree.nearest_in_range(data.point(i), state.alpha[i], counter);
        if (hit.id >= 0 && hit.dist < state.alpha[i]) {
            state.alpha[i] = hit.dist;
            state.owner[i] = static_cast<std::int64_t>(from + static_cast<std::size_t>(hit.id));
        }
    }
}

template <bool Accelerated>
SeedResult kmeansbb_run(const Dataset& data, const ScalableConfig& cfg, const RngStream& rng,
                        DistanceCounter& counter, RoundTrace* trace, PruneAudit* audit) {
    data.validate();
    cfg.validate();
    Stopwatch clock;

    std::vector<std::size_t> candidates;
    candidates.push_back(weighted_initial_index(data, rng));
    AssignmentState state(data.n);

    std::size_t k_prev = 0;
    for (std::size_t round = 1; round <= cfg.rounds; ++round) {
        const std::size_t k_now = candidates.size();
        if constexpr (Accelerated) {
            scan_new_candidates_indexed(data, candidates, k_prev, k_now,
                                        rng.derive_seed(RngStream::Stream::IndexBuild, round),
                                        state, counter);
        } else {
            scan_new_candidates(data, candidates, k_prev, k_now, state, counter);
        }
        k_prev = k_now;

        const double z = potential(data, state);
        std::vector<std::size_t> added;
        for (std::size_t i = 0; i < data.n; ++i) {
            const double u = rng.uniform(RngStream::Stream::Bernoulli, round, i);
            const double p = candidate_probability(cfg.oversampling, data.weights[i],
                                                   state.alpha[i], z);
            if (u <= p) {
                state.alpha[i] = 0.0;
                state.owner[i] = static_cast<std::int64_t>(candidates.size());
                candidates.push_back(i);
                added.push_back(i);
            }
        }
        if (trace) trace->rounds.push_back(RoundTrace::Round{added, state.alpha});
    }

    if (candidates.size() < cfg.k)
        throw insufficient_candidates("only " + std::to_string(candidates.size()) +
                                      " candidates for K=" + std::to_string(cfg.k));

    const std::vector<double> reweights = reweight_by_owner(data, candidates.size(), state.owner);
    if (trace) {
        trace->candidates = candidates;
        trace->reweights = reweights;
    }

    Dataset reduced;
    reduced.n = candidates.size();
    reduced.dim = data.dim;
    reduced.coords.reserve(reduced.n * reduced.dim);
    for (std::size_t idx : candidates) {
        const auto p = data.point(idx);
        reduced.coords.insert(reduced.coords.end(), p.begin(), p.end());
    }
    reduced.weights = reweights;

    SeedResult inner = Accelerated
                           ? kmeanspp_accelerated(reduced, cfg.k, rng, counter, KppHooks{.audit = audit})
                           : kmeanspp_baseline(reduced, cfg.k, rng, counter);

    SeedResult res;
    res.seed_indices.reserve(cfg.k);
    for (std::size_t pos : inner.seed_indices) res.seed_indices.push_back(candidates[pos]);
    res.report.algo = Accelerated ? "kbb-fast" : "kbb";
    res.report.rounds = cfg.rounds;
    res.report.oversampling = cfg.oversampling;
    res.report.master_seed = rng.master_seed();
    res.report.examined = inner.report.examined;
    finalize_result(res, data, state);
    res.report.distance_count = counter.count();
    res.report.wall_time_ms = clock.elapsed_ms();
    return res;
}

}  // namespace detail

inline SeedResult kmeansbb_baseline(const Dataset& data, const ScalableConfig& cfg,
                                    const RngStream& rng, DistanceCounter& counter,
                                    RoundTrace* trace = nullptr) {
    return detail::kmeansbb_run<false>(data, cfg, rng, counter, trace, nullptr);
}

inline SeedResult kmeansbb_accelerated(const Dataset& data, const ScalableConfig& cfg,
                                       const RngStream& rng, DistanceCounter& counter,
                                       RoundTrace* trace = nullptr, PruneAudit* audit = nullptr) {
    return detail::kmeansbb_run<true>(data, cfg, rng, counter, trace, audit);
}

}  // namespace kseed
