#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>
#include <set>
#include <vector>

#include "kseed/kmeanspp.hpp"
#include "kseed/synthetic.hpp"

using namespace kseed;

namespace {

Dataset duplicate_heavy_dataset(std::uint64_t seed, std::size_t n, std::size_t distinct) {
    std::mt19937_64 gen(seed);
    std::uniform_real_distribution<double> coord(-5.0, 5.0);
    std::vector<std::vector<double>> base(distinct, std::vector<double>(2));
    for (auto& p : base)
        for (double& v : p) v = coord(gen);
    std::vector<std::vector<double>> rows;
    rows.reserve(n);
    for (std::size_t i = 0; i < n; ++i) rows.push_back(base[gen() % distinct]);
    return Dataset::from_rows(rows);
}

}  // namespace

TEST_CASE("prune test arithmetic") {
    REQUIRE_FALSE(prune_admissible(kInf, 100.0));  // unowned: never prune
    REQUIRE(prune_admissible(1.0, 2.5));           // 1.25 >= 1.0
    REQUIRE_FALSE(prune_admissible(1.0, 1.5));     // 0.75 < 1.0
    REQUIRE(prune_admissible(1.0, 2.0));           // boundary is inclusive
    REQUIRE(prune_admissible(0.0, 0.0));           // the point is a seed
    REQUIRE(prune_admissible(0.0, 7.0));
}

TEST_CASE("K = 1 returns the initial weighted draw with zero distance work") {
    const Dataset data = gaussian_mixture({.n = 50, .dim = 3, .clusters = 4, .seed = 9});
    const RngStream rng(5);
    DistanceCounter c1, c2;
    const SeedResult base = kmeanspp_baseline(data, 1, rng, c1);
    const SeedResult fast = kmeanspp_accelerated(data, 1, rng, c2);
    REQUIRE(base.seed_indices.size() == 1);
    REQUIRE(base.seed_indices == fast.seed_indices);
    REQUIRE(c1.count() == 0);
    REQUIRE(c2.count() == 0);
}

TEST_CASE("two identical points, K = 2: the duplicate is the only candidate left") {
    const Dataset data = Dataset::from_rows({{1.0, 2.0}, {1.0, 2.0}});
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const RngStream rng(seed);
        DistanceCounter c1, c2;
        const SeedResult base = kmeanspp_baseline(data, 2, rng, c1);
        const SeedResult fast = kmeanspp_accelerated(data, 2, rng, c2);
        REQUIRE(base.seed_indices == fast.seed_indices);
        const std::set<std::size_t> got(base.seed_indices.begin(), base.seed_indices.end());
        REQUIRE(got == std::set<std::size_t>{0, 1});
    }
}

TEST_CASE("argument validation") {
    const Dataset data = Dataset::from_rows({{0.0}, {1.0}, {2.0}}, {1.0, 0.0, 1.0});
    const RngStream rng(0);
    DistanceCounter c;
    REQUIRE_THROWS_AS(kmeanspp_baseline(data, 0, rng, c), invalid_input);
    REQUIRE_THROWS_AS(kmeanspp_baseline(data, 3, rng, c), invalid_input);  // only 2 selectable
    REQUIRE_THROWS_AS(kmeanspp_accelerated(data, 3, rng, c), invalid_input);
    REQUIRE_NOTHROW(kmeanspp_accelerated(data, 2, rng, c));
    Dataset empty;
    REQUIRE_THROWS_AS(kmeanspp_baseline(empty, 1, rng, c), invalid_input);
}

TEST_CASE("exact baseline/accelerated equivalence across datasets, seeds, K") {
    std::vector<Dataset> datasets;
    datasets.push_back(gaussian_mixture({.n = 300, .dim = 2, .clusters = 6, .seed = 1}));
    datasets.push_back(gaussian_mixture(
        {.n = 250, .dim = 8, .clusters = 5, .separation = 6.0, .seed = 2, .unit_weights = false}));
    datasets.push_back(duplicate_heavy_dataset(3, 120, 25));

    for (std::size_t di = 0; di < datasets.size(); ++di) {
        const Dataset& data = datasets[di];
        for (const std::size_t k : {1UL, 5UL, 17UL, 40UL}) {
            for (std::uint64_t seed = 0; seed < 10; ++seed) {
                const RngStream rng(seed * 7919 + di);
                DistanceCounter c1, c2;
                AssignmentState sb(0), sf(0);
                const SeedResult base =
                    kmeanspp_baseline(data, k, rng, c1, KppHooks{.final_state = &sb});
                const SeedResult fast =
                    kmeanspp_accelerated(data, k, rng, c2, KppHooks{.final_state = &sf});
                REQUIRE(base.seed_indices == fast.seed_indices);
                REQUIRE(sb.alpha == sf.alpha);  // bit-identical assignments
                REQUIRE(base.report.potential == fast.report.potential);
                REQUIRE(c2.count() <= c1.count() + k * (k - 1) / 2);
            }
        }
    }
}

TEST_CASE("weights near the overflow edge keep both paths in lockstep") {
    const Dataset data = Dataset::from_rows({{0.0}, {4.0}, {9.0}, {16.0}},
                                            {1e-310, 1.0, 2.0, 1e-308});
    for (std::uint64_t seed = 0; seed < 12; ++seed) {
        const RngStream rng(seed);
        DistanceCounter c1, c2;
        const SeedResult base = kmeanspp_baseline(data, 4, rng, c1);
        const SeedResult fast = kmeanspp_accelerated(data, 4, rng, c2);
        REQUIRE(base.seed_indices == fast.seed_indices);
    }
}

TEST_CASE("duplicate-saturated selection still yields K distinct indices") {
    // 60 points over 12 distinct coordinates, K = 20: every coordinate is
    // exhausted and the duplicate fallback must fill the rest.
    const Dataset data = duplicate_heavy_dataset(17, 60, 12);
    for (std::uint64_t seed = 0; seed < 6; ++seed) {
        const RngStream rng(seed);
        DistanceCounter c1, c2;
        const SeedResult base = kmeanspp_baseline(data, 20, rng, c1);
        const SeedResult fast = kmeanspp_accelerated(data, 20, rng, c2);
        REQUIRE(base.seed_indices == fast.seed_indices);
        const std::set<std::size_t> uniq(base.seed_indices.begin(), base.seed_indices.end());
        REQUIRE(uniq.size() == 20);
    }
}

TEST_CASE("baseline cost is exactly n(K-1); accelerated cost decomposes") {
    const Dataset data = gaussian_mixture({.n = 400, .dim = 2, .clusters = 8, .seed = 4});
    const std::size_t k = 12;
    const RngStream rng(21);

    DistanceCounter cb;
    kmeanspp_baseline(data, k, rng, cb);
    REQUIRE(cb.count() == data.n * (k - 1));

    DistanceCounter cf;
    std::vector<IterStats> stats;
    kmeanspp_accelerated(data, k, rng, cf, KppHooks{.iter_stats = &stats});
    REQUIRE(stats.size() == k - 1);
    std::uint64_t expect = 0;
    for (std::size_t i = 0; i < stats.size(); ++i) {
        REQUIRE(stats[i].gamma_evals == i);  // k - 1 center-to-center distances
        REQUIRE(stats[i].pruned + stats[i].unpruned == data.n);
        expect += stats[i].gamma_evals + stats[i].unpruned;
    }
    REQUIRE(cf.count() == expect);
}

TEST_CASE("alpha decreases monotonically and matches the owner distance") {
    const Dataset data = gaussian_mixture({.n = 200, .dim = 3, .clusters = 5, .seed = 6});
    const std::size_t k = 10;
    const RngStream rng(33);
    DistanceCounter c;
    AssignmentState state(0);
    const SeedResult res =
        kmeanspp_accelerated(data, k, rng, c, KppHooks{.final_state = &state});

    DistanceCounter scratch;
    for (std::size_t i = 0; i < data.n; ++i) {
        if (state.owner[i] < 0) continue;
        const std::size_t owner_seed = res.seed_indices[static_cast<std::size_t>(state.owner[i])];
        REQUIRE(state.alpha[i] ==
                distance(data.point(i), data.point(owner_seed), scratch));
        // alpha is the minimum over the seeds the scan has processed, so no
        // earlier seed may be closer.
        for (std::size_t s = 0; s + 1 < res.seed_indices.size(); ++s)
            REQUIRE(distance(data.point(i), data.point(res.seed_indices[s]), scratch) >=
                    state.alpha[i]);
    }
}

TEST_CASE("prune audit finds no violations") {
    const Dataset data = gaussian_mixture({.n = 800, .dim = 2, .clusters = 16, .seed = 8});
    const RngStream rng(44);
    DistanceCounter c;
    PruneAudit audit;
    kmeanspp_accelerated(data, 24, rng, c, KppHooks{.audit = &audit});
    REQUIRE(audit.events > 0);
    REQUIRE(audit.violations == 0);
}

TEST_CASE("well-separated triads: seeds land in different triads") {
    const Dataset data = Dataset::from_rows({{0.0, 0.0},
                                             {1.0, 0.0},
                                             {0.0, 1.0},
                                             {10.0, 10.0},
                                             {11.0, 10.0},
                                             {10.0, 11.0}});
    const auto triad = [](std::size_t i) { return i < 3 ? 0 : 1; };

    // Enumerated second-draw law: given first seed f, P(second = j) is
    // proportional to d(x_j, x_f)^2. The exact probability of crossing triads
    // is far above the 0.95 bar the empirical check uses.
    DistanceCounter scratch;
    double exact_cross = 0.0;
    for (std::size_t f = 0; f < 6; ++f) {
        double z = 0.0, cross = 0.0;
        for (std::size_t j = 0; j < 6; ++j) {
            const double d = distance(data.point(j), data.point(f), scratch);
            z += d * d;
            if (triad(j) != triad(f)) cross += d * d;
        }
        exact_cross += (1.0 / 6.0) * (cross / z);
    }
    REQUIRE(exact_cross >= 0.98);

    std::size_t crossed = 0;
    const std::size_t trials = 1000;
    for (std::uint64_t t = 0; t < trials; ++t) {
        const RngStream rng(t);
        DistanceCounter c;
        const SeedResult res = kmeanspp_accelerated(data, 2, rng, c);
        crossed += triad(res.seed_indices[0]) != triad(res.seed_indices[1]);
    }
    REQUIRE(static_cast<double>(crossed) / trials >= 0.95);
}

TEST_CASE("fixed master seed gives identical reports across reruns") {
    const Dataset data = gaussian_mixture({.n = 300, .dim = 4, .clusters = 6, .seed = 10});
    DistanceCounter c1, c2;
    const SeedResult a = kmeanspp_accelerated(data, 9, RngStream(123), c1);
    const SeedResult b = kmeanspp_accelerated(data, 9, RngStream(123), c2);
    REQUIRE(a.seed_indices == b.seed_indices);
    REQUIRE(a.report.distance_count == b.report.distance_count);
    REQUIRE(a.report.potential == b.report.potential);
    REQUIRE(a.report.examined == b.report.examined);
    REQUIRE(a.seeds == b.seeds);
}
