#pragma once

// Seeded Gaussian-mixture generator so benchmarks and the acceptance suite
// run without external data. Cluster centers sit on a lattice with the given
// spacing, which guarantees the requested separation.

#include <cmath>
#include <cstdint>
#include <random>
#include <vector>

#include "kseed/core.hpp"

namespace kseed {

struct MixtureSpec {
    std::size_t n = 1000;
    std::size_t dim = 2;
    std::size_t clusters = 4;
    double separation = 10.0;  // lattice spacing between adjacent centers
    double sigma = 1.0;        // isotropic within-cluster standard deviation
    std::uint64_t seed = 0;
    bool unit_weights = true;  // otherwise dyadic weights in {0.25, ..., 4.0}
};

inline Dataset gaussian_mixture(const MixtureSpec& spec) {
    if (spec.n == 0 || spec.dim == 0 || spec.clusters == 0)
        throw invalid_input("mixture spec must have n, dim, clusters >= 1");

    std::size_t per_axis = 1;
    while (true) {
        double sites = std::pow(static_cast<double>(per_axis), static_cast<double>(spec.dim));
        if (sites >= static_cast<double>(spec.clusters)) break;
        ++per_axis;
    }

    std::vector<double> centers(spec.clusters * spec.dim);
    for (std::size_t c = 0; c < spec.clusters; ++c) {
        std::size_t rem = c;
        for (std::size_t d = 0; d < spec.dim; ++d) {
            centers[c * spec.dim + d] = static_cast<double>(rem % per_axis) * spec.separation;
            rem /= per_axis;
        }
    }

    std::mt19937_64 rng(spec.seed);
    std::normal_distribution<double> noise(0.0, spec.sigma);

    Dataset data;
    data.n = spec.n;
    data.dim = spec.dim;
    data.coords.resize(spec.n * spec.dim);
    for (std::size_t i = 0; i < spec.n; ++i) {
        const std::size_t c = i % spec.clusters;
        for (std::size_t d = 0; d < spec.dim; ++d)
            data.coords[i * spec.dim + d] = centers[c * spec.dim + d] + noise(rng);
    }

    if (spec.unit_weights) {
        data.weights.assign(spec.n, 1.0);
    } else {
        std::uniform_int_distribution<int> quarters(1, 16);
        data.weights.resize(spec.n);
        for (std::size_t i = 0; i < spec.n; ++i)
            data.weights[i] = static_cast<double>(quarters(rng)) * 0.25;
    }
    return data;
}

}  // namespace kseed
