#pragma once

// Shared foundation for the seeding algorithms: dense weighted datasets, the
// instrumented Euclidean distance, and the point-to-seed assignment state.

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace kseed {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct invalid_input : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct not_initialized : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct empty_queue : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct insufficient_candidates : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct parse_error : std::runtime_error {
    parse_error(const std::string& msg, std::size_t line_no)
        : std::runtime_error(msg + " (line " + std::to_string(line_no) + ")"), line(line_no) {}
    std::size_t line;
};

// Tally of full distance evaluations. Monotone within a run; every call of
// distance() below counts exactly once, including center-to-center and
// index-construction distances.
class DistanceCounter {
public:
    void add() noexcept { ++count_; }
    std::uint64_t count() const noexcept { return count_; }
    void reset() noexcept { count_ = 0; }

private:
    std::uint64_t count_ = 0;
};

// Dense row-major point matrix with per-point nonnegative weights.
// Immutable after load; may be shared read-only across concurrent runs.
struct Dataset {
    std::size_t n = 0;
    std::size_t dim = 0;
    std::vector<double> coords;   // n * dim, row-major
    std::vector<double> weights;  // length n

    std::span<const double> point(std::size_t i) const {
        return {coords.data() + i * dim, dim};
    }

    double total_weight() const {
        double s = 0.0;
        for (double w : weights) s += w;
        return s;
    }

    std::size_t positive_weight_count() const {
        std::size_t c = 0;
        for (double w : weights) c += (w > 0.0);
        return c;
    }

    // Throws invalid_input on non-finite coordinates, negative/missing weights,
    // or an all-zero weight vector.
    void validate() const {
        if (n == 0 || dim == 0) throw invalid_input("dataset is empty");
        if (coords.size() != n * dim) throw invalid_input("coordinate buffer size mismatch");
        if (weights.size() != n) throw invalid_input("weight vector length mismatch");
        for (double c : coords)
            if (!std::isfinite(c)) throw invalid_input("non-finite coordinate");
        bool any_positive = false;
        for (double w : weights) {
            if (!(w >= 0.0) || !std::isfinite(w)) throw invalid_input("weights must be finite and >= 0");
            any_positive |= (w > 0.0);
        }
        if (!any_positive) throw invalid_input("all weights are zero");
    }

    static Dataset from_rows(const std::vector<std::vector<double>>& rows,
                             std::vector<double> weights = {}) {
        Dataset d;
        d.n = rows.size();
        d.dim = rows.empty() ? 0 : rows.front().size();
        d.coords.reserve(d.n * d.dim);
        for (const auto& r : rows) {
            if (r.size() != d.dim) throw invalid_input("ragged rows");
            d.coords.insert(d.coords.end(), r.begin(), r.end());
        }
        d.weights = weights.empty() ? std::vector<double>(d.n, 1.0) : std::move(weights);
        return d;
    }
};

// Euclidean distance (true distance, not squared). Exactly one counter tick
// per invocation.
inline double distance(std::span<const double> a, std::span<const double> b,
                       DistanceCounter& counter) {
    if (a.size() != b.size()) throw invalid_input("dimension mismatch in distance()");
    counter.add();
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

// Per-point best distance to a chosen seed and the index of that seed.
// alpha is non-increasing over a run; owner = -1 means "no seed yet".
struct AssignmentState {
    std::vector<double> alpha;
    std::vector<std::int64_t> owner;

    explicit AssignmentState(std::size_t n) : alpha(n, kInf), owner(n, -1) {}
};

// Seeding potential Z = sum_i w_i * alpha_i^2, accumulated in index order.
// Used both as the sampling normalizer and as the quality statistic.
inline double potential(const Dataset& data, const AssignmentState& state) {
    double z = 0.0;
    for (std::size_t i = 0; i < data.n; ++i) {
        if (std::isinf(state.alpha[i])) throw not_initialized("alpha not initialized");
        z += data.weights[i] * state.alpha[i] * state.alpha[i];
    }
    return z;
}

}  // namespace kseed
