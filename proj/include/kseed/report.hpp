#pragma once

// Per-run benchmark record and the CSV row format emitted by sweeps.

#include <cstdint>
#include <cstdio>
#include <ostream>
#include <string>
#include <vector>

namespace kseed {

struct RunReport {
    std::string algo;     // kpp | kpp-fast | kbb | kbb-fast
    std::string dataset;  // tag, e.g. file stem or synthetic spec
    std::size_t n = 0;
    std::size_t dim = 0;
    std::size_t k = 0;
    std::size_t rounds = 0;      // k-means|| only, 0 otherwise
    double oversampling = 0.0;   // k-means|| only
    std::uint64_t master_seed = 0;
    std::uint64_t distance_count = 0;
    double wall_time_ms = 0.0;
    std::vector<std::size_t> seed_indices;
    double potential = 0.0;              // sum w_i * alpha_i^2 over non-seed points at termination
    std::vector<double> examined;        // per-selection examined fraction (queue-backed paths)

    double mean_examined() const {
        if (examined.empty()) return 0.0;
        double s = 0.0;
        for (double f : examined) s += f;
        return s / static_cast<double>(examined.size());
    }
};

inline constexpr const char* kCsvHeader =
    "dataset,algo,n,dim,k,trial,master_seed,distance_count,wall_time_ms,potential";

inline std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

inline void write_csv_header(std::ostream& os) { os << kCsvHeader << '\n'; }

inline void write_csv_row(std::ostream& os, const RunReport& r, std::size_t trial) {
    os << r.dataset << ',' << r.algo << ',' << r.n << ',' << r.dim << ',' << r.k << ','
       << trial << ',' << r.master_seed << ',' << r.distance_count << ','
       << format_double(r.wall_time_ms) << ',' << format_double(r.potential) << '\n';
}

}  // namespace kseed
