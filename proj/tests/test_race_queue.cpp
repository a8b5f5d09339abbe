#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <vector>

#include "kseed/bench.hpp"
#include "kseed/race_queue.hpp"
#include "kseed/rng.hpp"

using namespace kseed;

namespace {

// Accessor over a plain array of true priorities.
auto accessor(const std::vector<double>& prio) {
    return [&prio](std::size_t i) { return prio[i]; };
}

}  // namespace

TEST_CASE("build: initial priorities are lambda / w") {
    SECTION("uniform weights reduce to argmin lambda") {
        const std::vector<double> w{1.0, 1.0, 1.0};
        const std::vector<double> lam{0.5, 0.2, 0.9};
        RaceQueue q(w, lam);
        std::vector<double> prio{0.5, 0.2, 0.9};
        REQUIRE(q.pop_next(accessor(prio)) == 1);
    }
    SECTION("hand-computed lambda / w pairs") {
        const std::vector<double> w{1.0, 4.0};
        const std::vector<double> lam{0.5, 0.8};
        RaceQueue q(w, lam);
        std::vector<double> prio{0.5, 0.2};
        REQUIRE(q.pop_next(accessor(prio)) == 1);
    }
    SECTION("zero-weight index never stored") {
        const std::vector<double> w{0.0, 1.0};
        const std::vector<double> lam{0.01, 5.0};
        RaceQueue q(w, lam);
        REQUIRE(q.remaining() == 1);
        std::vector<double> prio{kInf, 5.0};
        REQUIRE(q.pop_next(accessor(prio)) == 1);
        REQUIRE(q.empty());
        REQUIRE_THROWS_AS(q.pop_next(accessor(prio)), empty_queue);
    }
    SECTION("all-zero weights rejected") {
        const std::vector<double> w{0.0, 0.0};
        const std::vector<double> lam{1.0, 1.0};
        REQUIRE_THROWS_AS(RaceQueue(w, lam), invalid_input);
    }
}

TEST_CASE("mark_dirty is lazy and idempotent") {
    const std::vector<double> w{1.0, 1.0, 1.0, 1.0};
    const std::vector<double> lam{0.4, 0.3, 0.2, 0.1};
    RaceQueue q(w, lam);
    std::vector<double> prio{0.4, 0.3, 0.2, 0.1};

    q.mark_dirty(3);
    q.mark_dirty(3);  // idempotent
    // Priorities did not actually change, so the pop result is unaffected.
    REQUIRE(q.pop_next(accessor(prio)) == 3);
    // Marking a popped index changes nothing.
    q.mark_dirty(3);
    REQUIRE(q.pop_next(accessor(prio)) == 2);
}

TEST_CASE("re-queue walkthrough: dirty prefix is fixed, first clean entry caps the scan") {
    // Items (1-based in the sketch) 1..4 map to indices 0..3. Apparent order
    // 3 < 4 < 2 < 1 with 3, 4, 1 dirty and 2 clean; after re-prioritizing
    // items 3 and 4, item 4 still holds the smallest value and wins. Item 1
    // is never examined even though it is dirty.
    const std::vector<double> w{1.0, 1.0, 1.0, 1.0};
    const std::vector<double> lam{0.30, 0.20, 0.10, 0.12};  // apparent = lambda / w
    RaceQueue q(w, lam);
    const std::vector<double> truth{0.90, 0.20, 0.50, 0.15};  // >= apparent
    q.mark_dirty(0);
    q.mark_dirty(2);
    q.mark_dirty(3);

    REQUIRE(q.pop_next(accessor(truth)) == 3);
    const PopStats& stats = q.last_pop_stats();
    REQUIRE(stats.reprioritized == 2);  // items 3 and 4 only
    REQUIRE(stats.pool == 4);
    REQUIRE(stats.popped_was_reprioritized);
    REQUIRE(stats.examined_fraction() == 0.5);

    // The clean pivot (item 2) is the next winner; item 1's true value is worse.
    REQUIRE(q.pop_next(accessor(truth)) == 1);
    REQUIRE(q.pop_next(accessor(truth)) == 2);
    REQUIRE(q.pop_next(accessor(truth)) == 0);
}

TEST_CASE("dirty entry whose refreshed value loses is not returned") {
    // lambda = w = 1 everywhere, alpha = (1, 1, 0.1): index 2 looks best at
    // its stale value 1 but re-prioritizes to 1/(0.1^2) = 100.
    const std::vector<double> w{1.0, 1.0, 1.0};
    const std::vector<double> lam{1.0, 1.0, 1.0};
    RaceQueue q(w, lam);
    const std::vector<double> alpha{1.0, 1.0, 0.1};
    const auto prio = [&](std::size_t i) { return race_priority(lam[i], w[i], alpha[i]); };
    q.mark_dirty(2);
    REQUIRE(q.pop_next(prio) == 0);  // tie between 0 and 1 resolves low
}

TEST_CASE("examined fraction bounds") {
    const std::vector<double> w{1.0, 1.0, 1.0, 1.0};
    const std::vector<double> lam{0.1, 0.2, 0.3, 0.4};
    std::vector<double> prio{0.1, 0.2, 0.3, 0.4};

    SECTION("no dirty entries: only the popped item is inspected") {
        RaceQueue q(w, lam);
        q.pop_next(accessor(prio));
        REQUIRE(q.last_pop_stats().examined_fraction() == 0.25);
    }
    SECTION("all entries dirty: full re-queue") {
        RaceQueue q(w, lam);
        for (std::size_t i = 0; i < 4; ++i) q.mark_dirty(i);
        prio = {0.5, 0.6, 0.7, 0.8};
        q.pop_next(accessor(prio));
        REQUIRE(q.last_pop_stats().examined_fraction() == 1.0);
    }
}

TEST_CASE("tiny weights whose initial priority overflows stay selectable") {
    const std::vector<double> w{1e-310, 1.0};
    const std::vector<double> lam{1.0, 5.0};
    RaceQueue q(w, lam);
    REQUIRE(q.remaining() == 2);
    const auto prio = [&](std::size_t i) { return race_priority(lam[i], w[i], kInf); };
    REQUIRE(q.pop_next(prio) == 1);
    REQUIRE(q.pop_next(prio) == 0);
}

TEST_CASE("degenerate entries fall back to lowest index once the race is empty") {
    const std::vector<double> w{1.0, 1.0, 1.0};
    const std::vector<double> lam{0.3, 0.2, 0.1};
    RaceQueue q(w, lam);
    std::vector<double> prio{0.3, kInf, kInf};  // 1 and 2 sit on top of a seed
    q.mark_dirty(1);
    q.mark_dirty(2);
    REQUIRE(q.pop_next(accessor(prio)) == 0);
    REQUIRE(q.remaining() == 2);
    REQUIRE(q.pop_next(accessor(prio)) == 1);
    REQUIRE(q.pop_next(accessor(prio)) == 2);
    REQUIRE_THROWS_AS(q.pop_next(accessor(prio)), empty_queue);
}

TEST_CASE("soundness against a brute-force scan under random priority decay") {
    std::mt19937_64 gen(99);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int trial = 0; trial < 50; ++trial) {
        const std::size_t n = 2 + gen() % 40;
        std::vector<double> w(n), lam(n), truth(n);
        for (std::size_t i = 0; i < n; ++i) {
            w[i] = 1.0;
            lam[i] = 0.05 + unit(gen);
            truth[i] = lam[i];
        }
        RaceQueue q(w, lam);
        std::vector<bool> popped(n, false);

        for (std::size_t round = 0; round < n; ++round) {
            // Priorities only ever worsen; mark what changed.
            for (std::size_t i = 0; i < n; ++i) {
                if (!popped[i] && unit(gen) < 0.35) {
                    truth[i] += unit(gen) * 2.0;
                    q.mark_dirty(i);
                }
            }
            std::size_t expect = n;
            double best = kInf;
            for (std::size_t i = 0; i < n; ++i) {
                if (!popped[i] && truth[i] < best) {
                    best = truth[i];
                    expect = i;
                }
            }
            const std::size_t got = q.pop_next(accessor(truth));
            REQUIRE(got == expect);
            popped[got] = true;
        }
        // Laziness never loses candidates: all n indices were produced.
        REQUIRE(q.empty());
    }
}

TEST_CASE("first pop follows the weighted law (chi-square)") {
    const std::vector<double> w{1.0, 2.0, 3.0, 1.0, 0.5};
    const double total = 7.5;
    const std::size_t trials = 100'000;
    std::vector<std::uint64_t> counts(w.size(), 0);
    for (std::uint64_t t = 0; t < trials; ++t) {
        const RngStream rng(t);
        std::vector<double> lam(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) lam[i] = rng.exponential(i);
        RaceQueue q(w, lam);
        std::vector<double> prio(w.size());
        for (std::size_t i = 0; i < w.size(); ++i) prio[i] = race_priority(lam[i], w[i], kInf);
        ++counts[q.pop_next(accessor(prio))];
    }
    std::vector<double> expected(w.size());
    for (std::size_t i = 0; i < w.size(); ++i)
        expected[i] = w[i] / total * static_cast<double>(trials);
    const ChiSquare cs = chi_square_test("first pop", counts, expected);
    INFO("chi2 = " << cs.statistic << " crit = " << cs.critical);
    REQUIRE_FALSE(cs.rejected());
}
