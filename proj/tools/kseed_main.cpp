// Command-line front end: loads or generates a dataset, runs the requested
// seeding algorithm (optionally paired against its oracle), and emits the
// per-trial CSV rows and sweep aggregates.
//
// Exit codes: 0 ok, 2 dataset parse error, 3 configuration error,
// 4 oracle divergence or prune violation, 5 insufficient candidates,
// 1 unexpected failure.

#include <CLI11.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kseed/kseed.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUnexpected = 1;
constexpr int kExitParse = 2;
constexpr int kExitConfig = 3;
constexpr int kExitOracle = 4;
constexpr int kExitInsufficient = 5;

struct Options {
    std::string input;
    std::string format = "csv";
    std::optional<std::size_t> weights_column;
    std::string synthetic;
    std::string algo = "kpp-fast";
    std::size_t k = 0;
    std::size_t rounds = 5;
    double oversampling = 0.0;  // 0 = default 2K
    std::size_t trials = 1;
    bool trials_given = false;
    std::uint64_t master_seed = 0;
    std::string output;
    std::string agg_output;
    bool oracle_check = false;
    bool debug_prune = false;
    std::string sweep_list;
};

std::vector<std::size_t> parse_k_list(const std::string& s) {
    std::vector<std::size_t> ks;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        if (tok.empty()) continue;
        std::size_t pos = 0;
        unsigned long long v = 0;
        try {
            v = std::stoull(tok, &pos);
        } catch (const std::exception&) {
            throw kseed::invalid_input("bad K in sweep list: " + tok);
        }
        if (pos != tok.size() || v == 0) throw kseed::invalid_input("bad K in sweep list: " + tok);
        ks.push_back(static_cast<std::size_t>(v));
    }
    if (ks.empty()) throw kseed::invalid_input("empty sweep list");
    return ks;
}

kseed::MixtureSpec parse_synthetic(const std::string& s) {
    kseed::MixtureSpec spec;
    spec.n = 10000;
    spec.clusters = 16;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        const std::size_t eq = tok.find('=');
        if (eq == std::string::npos) throw kseed::invalid_input("synthetic spec wants key=value: " + tok);
        const std::string key = tok.substr(0, eq);
        const std::string val = tok.substr(eq + 1);
        try {
            if (key == "n") spec.n = std::stoull(val);
            else if (key == "dim") spec.dim = std::stoull(val);
            else if (key == "clusters") spec.clusters = std::stoull(val);
            else if (key == "sep") spec.separation = std::stod(val);
            else if (key == "sigma") spec.sigma = std::stod(val);
            else if (key == "seed") spec.seed = std::stoull(val);
            else if (key == "weights") spec.unit_weights = (val == "unit");
            else throw kseed::invalid_input("unknown synthetic key: " + key);
        } catch (const kseed::invalid_input&) {
            throw;
        } catch (const std::exception&) {
            throw kseed::invalid_input("bad synthetic value for " + key + ": " + val);
        }
    }
    return spec;
}

std::string dataset_tag(const Options& opt) {
    if (!opt.synthetic.empty()) return "synthetic";
    return std::filesystem::path(opt.input).stem().string();
}

struct RunOutcome {
    std::vector<kseed::SweepResult::Entry> entries;
    std::vector<kseed::SweepRow> aggregate;
    bool oracle_failed = false;
    std::uint64_t prune_events = 0;
    std::uint64_t prune_violations = 0;
};

bool is_fast(const std::string& algo) { return algo == "kpp-fast" || algo == "kbb-fast"; }
std::string family_of(const std::string& algo) {
    return (algo == "kbb" || algo == "kbb-fast") ? "kbb" : "kpp";
}

kseed::SeedResult run_once(const kseed::Dataset& data, const Options& opt, const std::string& algo,
                           std::uint64_t seed, kseed::PruneAudit* audit) {
    const kseed::RngStream rng(seed);
    kseed::DistanceCounter counter;
    if (algo == "kpp") return kseed::kmeanspp_baseline(data, opt.k, rng, counter);
    if (algo == "kpp-fast")
        return kseed::kmeanspp_accelerated(data, opt.k, rng, counter, kseed::KppHooks{.audit = audit});
    kseed::ScalableConfig cfg{opt.k, opt.rounds,
                              opt.oversampling > 0 ? opt.oversampling : 2.0 * opt.k};
    if (algo == "kbb") return kseed::kmeansbb_baseline(data, cfg, rng, counter);
    return kseed::kmeansbb_accelerated(data, cfg, rng, counter, nullptr, audit);
}

RunOutcome run_single(const kseed::Dataset& data, const Options& opt, const std::string& tag) {
    RunOutcome out;
    const std::string paired =
        is_fast(opt.algo) ? family_of(opt.algo) : family_of(opt.algo) + "-fast";

    for (std::size_t trial = 0; trial < opt.trials; ++trial) {
        const std::uint64_t seed = opt.master_seed + trial;
        kseed::PruneAudit audit;
        kseed::SeedResult res =
            run_once(data, opt, opt.algo, seed, opt.debug_prune ? &audit : nullptr);
        res.report.dataset = tag;
        std::cout << "trial " << trial << " seed indices (0-based):";
        for (const std::size_t idx : res.seed_indices) std::cout << ' ' << idx;
        std::cout << "\n";
        out.entries.push_back({res.report, trial});
        if (opt.debug_prune) {
            out.prune_events += audit.events;
            out.prune_violations += audit.violations;
        }

        if (opt.oracle_check) {
            kseed::SeedResult other = run_once(data, opt, paired, seed, nullptr);
            other.report.dataset = tag;
            if (other.seed_indices != res.seed_indices) {
                std::cerr << "oracle divergence at master seed " << seed << "\n";
                out.oracle_failed = true;
            }
            out.entries.push_back({other.report, trial});
        }
    }
    return out;
}

RunOutcome run_sweep(const kseed::Dataset& data, const Options& opt, const std::string& tag) {
    kseed::SweepOptions sopt;
    sopt.family = family_of(opt.algo);
    sopt.trials = opt.trials_given ? opt.trials : 5;
    sopt.master_seed = opt.master_seed;
    if (sopt.family == "kbb") {
        sopt.rounds = opt.rounds;
        if (opt.oversampling > 0) sopt.oversampling = opt.oversampling;
    }
    const std::vector<std::size_t> ks = parse_k_list(opt.sweep_list);
    kseed::SweepResult sr = kseed::sweep(data, tag, ks, sopt);
    RunOutcome out;
    out.entries = std::move(sr.entries);
    out.aggregate = std::move(sr.aggregate);
    return out;
}

void print_summary(const RunOutcome& out) {
    struct Agg {
        double dist = 0, time = 0, examined = 0;
        std::size_t runs = 0;
    };
    std::map<std::string, Agg> by_algo;
    for (const auto& e : out.entries) {
        Agg& a = by_algo[e.report.algo];
        a.dist += static_cast<double>(e.report.distance_count);
        a.time += e.report.wall_time_ms;
        a.examined += e.report.mean_examined();
        ++a.runs;
    }
    for (const auto& [algo, a] : by_algo) {
        const double runs = static_cast<double>(a.runs);
        std::cout << algo << ": runs=" << a.runs << " mean_distance_count=" << a.dist / runs
                  << " mean_wall_time_ms=" << a.time / runs;
        if (algo == "kpp-fast" || algo == "kbb-fast")
            std::cout << " mean_examined_fraction=" << a.examined / runs;
        std::cout << "\n";
    }
    for (const char* fam_cstr : {"kpp", "kbb"}) {
        const std::string fam(fam_cstr);
        const auto base = by_algo.find(fam);
        const auto fast = by_algo.find(fam + "-fast");
        if (base != by_algo.end() && fast != by_algo.end() && fast->second.dist > 0) {
            std::cout << fam << " distance reduction (baseline/accelerated): "
                      << base->second.dist / fast->second.dist << "\n";
        }
    }
}

int run(const Options& opt) {
    if (opt.input.empty() == opt.synthetic.empty()) {
        std::cerr << "exactly one of --input or --synthetic is required\n";
        return kExitConfig;
    }
    if (opt.sweep_list.empty() && opt.k == 0) {
        std::cerr << "--k is required (or use --sweep)\n";
        return kExitConfig;
    }

    kseed::Dataset data;
    if (!opt.synthetic.empty()) {
        try {
            data = kseed::gaussian_mixture(parse_synthetic(opt.synthetic));
        } catch (const std::exception& e) {
            std::cerr << "bad --synthetic spec: " << e.what() << "\n";
            return kExitConfig;
        }
    } else {
        const auto fmt = kseed::parse_format(opt.format);
        if (!fmt) {
            std::cerr << "unknown format: " << opt.format << "\n";
            return kExitConfig;
        }
        try {
            data = kseed::load_dataset(opt.input, *fmt, opt.weights_column);
        } catch (const std::exception& e) {
            std::cerr << "cannot load dataset: " << e.what() << "\n";
            return kExitParse;
        }
    }

    const std::string tag = dataset_tag(opt);
    const RunOutcome out =
        opt.sweep_list.empty() ? run_single(data, opt, tag) : run_sweep(data, opt, tag);

    if (!opt.output.empty()) {
        std::ofstream os(opt.output);
        if (!os) {
            std::cerr << "cannot write " << opt.output << "\n";
            return kExitConfig;
        }
        kseed::write_csv_header(os);
        for (const auto& e : out.entries) kseed::write_csv_row(os, e.report, e.trial);
    }
    if (!out.aggregate.empty()) {
        kseed::write_aggregate_csv(std::cout, out.aggregate);
        if (!opt.agg_output.empty()) {
            std::ofstream os(opt.agg_output);
            kseed::write_aggregate_csv(os, out.aggregate);
        }
    }
    print_summary(out);
    if (opt.debug_prune) {
        std::cout << "prune audit: events=" << out.prune_events
                  << " violations=" << out.prune_violations << "\n";
        if (out.prune_violations > 0) return kExitOracle;
    }
    if (out.oracle_failed) return kExitOracle;
    return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    Options opt;
    CLI::App app{"K-means seed selection: k-means++ / k-means|| with triangle-inequality "
                 "pruning, a dynamic sampling queue, and instrumented distance counts"};
    app.add_option("--input", opt.input, "dataset file");
    app.add_option("--format", opt.format, "csv | svmlight")->capture_default_str();
    app.add_option("--weights-column", opt.weights_column,
                   "0-based CSV column holding per-point weights");
    app.add_option("--synthetic", opt.synthetic,
                   "generate data instead: n=..,dim=..,clusters=..,sep=..,sigma=..,seed=..");
    app.add_option("--algo", opt.algo, "kpp | kpp-fast | kbb | kbb-fast")
        ->check(CLI::IsMember({"kpp", "kpp-fast", "kbb", "kbb-fast"}))
        ->capture_default_str();
    app.add_option("--k", opt.k, "number of seeds");
    app.add_option("--r", opt.rounds, "k-means|| rounds")->capture_default_str();
    app.add_option("--l", opt.oversampling, "k-means|| oversampling factor (default 2K)");
    app.add_option("--trials", opt.trials, "independent trials; trial t uses master-seed+t")
        ->capture_default_str();
    app.add_option("--master-seed", opt.master_seed, "base seed")->capture_default_str();
    app.add_option("--output", opt.output, "per-trial CSV output path");
    app.add_option("--agg-output", opt.agg_output, "sweep aggregate CSV output path");
    app.add_flag("--oracle-check", opt.oracle_check,
                 "also run the paired baseline/accelerated variant and require identical seeds");
    app.add_flag("--debug-prune", opt.debug_prune,
                 "re-verify every pruned (point, center) pair with an uncounted distance");
    app.add_option("--sweep", opt.sweep_list, "comma-separated K list; runs baseline + accelerated");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kExitOk : kExitConfig;
    }
    opt.trials_given = app.count("--trials") > 0;

    try {
        return run(opt);
    } catch (const kseed::insufficient_candidates& e) {
        std::cerr << "insufficient candidates: " << e.what() << "\n";
        return kExitInsufficient;
    } catch (const kseed::invalid_input& e) {
        std::cerr << "invalid configuration: " << e.what() << "\n";
        return kExitConfig;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUnexpected;
    }
}
