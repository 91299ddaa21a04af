#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "elb/core.hpp"
#include "elb/datagen.hpp"
#include "elb/envelope.hpp"
#include "elb/io.hpp"
#include "elb/matcher.hpp"
#include "elb/oracle.hpp"

namespace {

using namespace elb;
using Clock = std::chrono::steady_clock;

std::uint64_t elapsed_ns(Clock::time_point t0) {
    return static_cast<std::uint64_t>(
        std::chrono::duration_cast<std::chrono::nanoseconds>(Clock::now() - t0).count());
}

std::size_t width_from_ratio(double ratio_percent, std::size_t n) {
    if (!(ratio_percent > 0.0) || ratio_percent > 50.0) {
        throw UsageError("block ratio must be in (0, 50] percent, got " +
                         std::to_string(ratio_percent));
    }
    const auto w = static_cast<std::size_t>(ratio_percent / 100.0 * static_cast<double>(n));
    return std::max<std::size_t>(1, w);
}

ElbVariant parse_variant(const std::string& name) {
    if (name == "ele") return ElbVariant::ele;
    if (name == "seq") return ElbVariant::seq;
    throw UsageError("unknown variant '" + name + "' (expected ele or seq)");
}

std::string format_ns(double ns) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.1f", ns);
    return buf;
}

// ---------------------------------------------------------------------------
// gen

struct GenOptions {
    std::string pattern_file;
    std::string out_prefix;
    std::size_t length = 0;
    std::uint64_t seed = 0;
    double probability = 1e-4;
    double base = 0.0;
    double noise = 0.0;
    double threshold_ratio = 0.0; // percent; 0 = not given
    std::string p = "2";
};

int cmd_gen(const GenOptions& opt) {
    const Pattern pattern = read_pattern_file(opt.pattern_file);
    const LpOrder p = LpOrder::parse(opt.p);

    const double saturation = opt.probability * static_cast<double>(pattern.length());
    if (saturation > 0.5 && saturation <= 1.0) {
        std::cerr << "warning: occurrence probability fills " << saturation * 100.0
                  << "% of the stream with embedded copies\n";
    }

    GenConfig config;
    config.length = opt.length;
    config.seed = opt.seed;
    config.base = opt.base;
    config.occurrence_probability = opt.probability;
    config.noise_amplitude = opt.noise;
    const GenResult result = generate(config, pattern.values);

    write_stream_file(opt.out_prefix + ".stream", result.stream);
    write_embed_csv(opt.out_prefix + ".embed.csv", result.log);

    SidecarInfo info;
    info.seed = opt.seed;
    info.base = opt.base;
    info.length = opt.length;
    info.occurrence_probability = opt.probability;
    info.noise_amplitude = opt.noise;
    info.p = p.str();
    if (opt.threshold_ratio > 0.0) info.threshold_ratio = opt.threshold_ratio / 100.0;
    info.pattern_file = opt.pattern_file;
    info.pattern_n = pattern.length();
    info.pattern_b = pattern.subpattern_count();
    info.embedded_count = result.log.sites.size();
    write_sidecar_json(opt.out_prefix + ".json", info);

    std::cerr << "wrote " << opt.out_prefix << ".stream (" << opt.length << " elements, "
              << result.log.sites.size() << " embedded copies)\n";
    return 0;
}

// ---------------------------------------------------------------------------
// match

struct MatchOptions {
    std::string pattern_file;
    std::string stream_file;
    std::string algo = "elb-seq";
    std::string p = "2";
    double block_ratio = 5.0;      // percent
    double threshold_ratio = 0.0;  // percent; 0 = use the pattern file's thresholds
    std::string out_prefix;
};

Pattern load_pattern(const std::string& path, double threshold_ratio_percent, LpOrder p) {
    Pattern pattern = read_pattern_file(path);
    if (threshold_ratio_percent > 0.0) {
        pattern.thresholds = derive_thresholds(pattern, threshold_ratio_percent / 100.0, p);
        for (std::size_t k = 0; k < pattern.subpattern_count(); ++k) {
            if (pattern.thresholds[k] == 0.0) {
                std::cerr << "warning: constant subpattern " << (k + 1)
                          << " derives a zero threshold\n";
            }
        }
    }
    return pattern;
}

int cmd_match(const MatchOptions& opt) {
    const LpOrder p = LpOrder::parse(opt.p);
    const Pattern pattern = load_pattern(opt.pattern_file, opt.threshold_ratio, p);

    MatchReport report;
    if (opt.algo == "ss") {
        std::uint64_t count = 0;
        auto inner = open_stream_file(opt.stream_file);
        StreamSource counted = [&count, inner]() mutable {
            auto x = inner();
            if (x) ++count;
            return x;
        };
        const OracleReport oracle = sequential_scan(pattern, std::move(counted), p);
        report.matches = oracle.matches;
        report.stats.windows_total =
            count >= pattern.length() ? count - pattern.length() + 1 : 0;
        report.stats.candidates_verified = report.stats.windows_total;
        report.stats.element_touches_verify = oracle.element_touches;
    } else if (opt.algo == "elb-ele" || opt.algo == "elb-seq") {
        MatcherConfig cfg;
        cfg.pattern = pattern;
        cfg.p = p;
        cfg.variant = opt.algo == "elb-ele" ? ElbVariant::ele : ElbVariant::seq;
        cfg.block_width = width_from_ratio(opt.block_ratio, pattern.length());
        report = process_stream(std::move(cfg), open_stream_file(opt.stream_file));
    } else {
        throw UsageError("unknown algorithm '" + opt.algo +
                         "' (expected ss, elb-ele or elb-seq)");
    }

    write_match_csv(opt.out_prefix + ".matches.csv", report.matches);
    write_stats_csv(opt.out_prefix + ".stats.csv", report);
    std::cerr << report.matches.size() << " matches over " << report.stats.windows_total
              << " windows\n";
    return 0;
}

// ---------------------------------------------------------------------------
// envelope

struct EnvelopeOptions {
    std::string pattern_file;
    std::string variant = "ele";
    std::string p = "2";
    double block_ratio = 5.0;
    double threshold_ratio = 0.0;
    std::string out_file;
};

int cmd_envelope(const EnvelopeOptions& opt) {
    const LpOrder p = LpOrder::parse(opt.p);
    const Pattern pattern = load_pattern(opt.pattern_file, opt.threshold_ratio, p);
    const ElbVariant variant = parse_variant(opt.variant);
    const Envelope env =
        variant == ElbVariant::ele
            ? build_envelope_ele(pattern)
            : build_envelope_seq(pattern, width_from_ratio(opt.block_ratio, pattern.length()),
                                 p);
    write_envelope_csv(opt.out_file, env);
    return 0;
}

// ---------------------------------------------------------------------------
// bench

struct BenchOptions {
    std::string pattern_file;
    std::string axis = "p";
    std::string out_file = "bench.csv";
    std::size_t length = 1000000;
    int reps = 3;
    std::uint64_t seed = 1;
    std::string p = "2";
    double threshold_ratio = 20.0; // percent
    double probability = 1e-4;
    double block_ratio = 5.0;      // percent
};

struct CellSpec {
    std::string axis_value;
    std::string algo; // SS | ELB-ELE | ELB-SEQ
    LpOrder p = LpOrder::finite(2);
    double threshold_ratio = 0.2; // fraction
    double probability = 1e-4;
    double block_ratio = 0.05;    // fraction
    std::size_t block_width = 1;
    Pattern pattern;
    const std::vector<double>* stream = nullptr;
};

struct CellResult {
    std::uint64_t median_total_ns = 0;
    std::uint64_t median_verify_ns = 0;
    std::uint64_t windows_total = 0;
    double power = 0.0;
    std::vector<std::int64_t> matches;
};

std::uint64_t median(std::vector<std::uint64_t> v) {
    std::sort(v.begin(), v.end());
    const std::size_t s = v.size();
    return s % 2 ? v[s / 2] : (v[s / 2 - 1] + v[s / 2]) / 2;
}

CellResult run_cell(const CellSpec& cell, int reps) {
    CellResult res;
    std::vector<std::uint64_t> totals, verifies;
    if (cell.algo == "SS") {
        for (int r = 0; r <= reps; ++r) {
            const auto t0 = Clock::now();
            auto report = sequential_scan(cell.pattern, std::span<const double>(*cell.stream),
                                          cell.p);
            const auto dt = elapsed_ns(t0);
            if (r == 0) continue; // warm-up
            totals.push_back(dt);
            if (r == reps) res.matches = std::move(report.matches);
        }
        res.windows_total = cell.stream->size() >= cell.pattern.length()
                                ? cell.stream->size() - cell.pattern.length() + 1
                                : 0;
        res.power = 0.0;
    } else {
        MatcherConfig cfg;
        cfg.pattern = cell.pattern;
        cfg.p = cell.p;
        cfg.variant = cell.algo == "ELB-ELE" ? ElbVariant::ele : ElbVariant::seq;
        cfg.block_width = cell.block_width;
        const Matcher matcher(std::move(cfg));
        for (int r = 0; r <= reps; ++r) {
            const auto t0 = Clock::now();
            auto report = matcher.process(std::span<const double>(*cell.stream));
            const auto dt = elapsed_ns(t0);
            if (r == 0) continue;
            totals.push_back(dt);
            verifies.push_back(report.verify_time_ns);
            if (r == reps) {
                res.windows_total = report.stats.windows_total;
                res.power = pruning_power(report).value_or(0.0);
                res.matches = std::move(report.matches);
            }
        }
    }
    res.median_total_ns = median(totals);
    res.median_verify_ns = verifies.empty() ? 0 : median(verifies);
    return res;
}

int bench_threads() {
    const char* env = std::getenv("ELB_THREADS");
    if (!env) return 1;
    const int t = std::atoi(env);
    return t >= 1 ? t : 1;
}

int cmd_bench(const BenchOptions& opt) {
    if (opt.reps < 1) throw UsageError("--reps must be >= 1");
    const Pattern base_pattern = read_pattern_file(opt.pattern_file);
    const std::size_t n = base_pattern.length();
    const LpOrder default_p = LpOrder::parse(opt.p);
    width_from_ratio(opt.block_ratio, n); // validate the default ratio early

    struct AxisPoint {
        std::string label;
        LpOrder p;
        double threshold_ratio;
        double probability;
        double block_ratio;
    };
    std::vector<AxisPoint> points;
    const double ratio_frac = opt.threshold_ratio / 100.0;
    const double block_frac = opt.block_ratio / 100.0;
    if (opt.axis == "p") {
        for (const char* v : {"1", "2", "3", "inf"}) {
            points.push_back({v, LpOrder::parse(v), ratio_frac, opt.probability, block_frac});
        }
    } else if (opt.axis == "threshold") {
        for (int pct : {5, 10, 15, 20, 25, 30}) {
            points.push_back({std::to_string(pct) + "%", default_p, pct / 100.0,
                              opt.probability, block_frac});
        }
    } else if (opt.axis == "probability") {
        for (double prob : {1e-3, 5e-4, 1e-4, 5e-5, 1e-5}) {
            char label[32];
            std::snprintf(label, sizeof label, "%g", prob);
            points.push_back({label, default_p, ratio_frac, prob, block_frac});
        }
    } else if (opt.axis == "block") {
        for (int pct : {1, 5, 10, 20, 40}) {
            points.push_back({std::to_string(pct) + "%", default_p, ratio_frac,
                              opt.probability, pct / 100.0});
        }
    } else {
        throw UsageError("unknown axis '" + opt.axis +
                         "' (expected p, threshold, probability or block)");
    }

    // Streams are generated up front; timing below covers matching only.
    std::map<double, std::vector<double>> streams;
    for (const auto& pt : points) {
        if (streams.count(pt.probability)) continue;
        GenConfig gen_config;
        gen_config.length = opt.length;
        gen_config.seed = opt.seed;
        gen_config.occurrence_probability = pt.probability;
        streams.emplace(pt.probability, generate(gen_config, base_pattern.values).stream);
    }

    std::vector<CellSpec> cells;
    for (const auto& pt : points) {
        Pattern pattern = base_pattern;
        pattern.thresholds = derive_thresholds(pattern, pt.threshold_ratio, pt.p);
        const std::size_t w = width_from_ratio(pt.block_ratio * 100.0, n);
        for (const char* algo : {"SS", "ELB-ELE", "ELB-SEQ"}) {
            CellSpec cell;
            cell.axis_value = pt.label;
            cell.algo = algo;
            cell.p = pt.p;
            cell.threshold_ratio = pt.threshold_ratio;
            cell.probability = pt.probability;
            cell.block_ratio = pt.block_ratio;
            cell.block_width = w;
            cell.pattern = pattern;
            cell.stream = &streams.at(pt.probability);
            cells.push_back(std::move(cell));
        }
    }

    std::vector<CellResult> results(cells.size());
    const int threads = std::min<int>(bench_threads(), static_cast<int>(cells.size()));
    if (threads <= 1) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            std::cerr << "bench: " << cells[i].axis_value << " " << cells[i].algo << "\n";
            results[i] = run_cell(cells[i], opt.reps);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (int t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                while (true) {
                    const std::size_t i = next.fetch_add(1);
                    if (i >= cells.size()) return;
                    results[i] = run_cell(cells[i], opt.reps);
                }
            });
        }
        for (auto& th : pool) th.join();
    }

    // Each axis point owns 3 consecutive cells: SS, ELB-ELE, ELB-SEQ.
    std::ofstream out(opt.out_file);
    if (!out) throw DataError("cannot write file: " + opt.out_file);
    out << "axis,axis_value,algo,p,threshold_ratio,occurrence_probability,block_ratio,"
           "block_width,stream_length,seed,reps,generator,pattern_n,pattern_b,"
           "windows_total,match_count,pruning_power,total_ns_per_window,"
           "pruning_ns_per_window,speedup_vs_ss\n";

    std::printf("%-10s %-8s %14s %14s %10s %9s %9s\n", "axis", "algo", "total ns/win",
                "prune ns/win", "power", "speedup", "matches");
    for (std::size_t g = 0; g < cells.size(); g += 3) {
        const CellResult& ss = results[g];
        for (std::size_t j = 0; j < 3; ++j) {
            const CellSpec& cell = cells[g + j];
            const CellResult& res = results[g + j];
            if (cell.algo != "SS" && res.matches != ss.matches) {
                throw DataError("bench invariant violated: " + cell.algo +
                                " match set differs from SS at axis value " +
                                cell.axis_value);
            }
            const double windows = static_cast<double>(std::max<std::uint64_t>(
                res.windows_total, 1));
            const double total_per_window =
                static_cast<double>(res.median_total_ns) / windows;
            const double prune_per_window =
                cell.algo == "SS"
                    ? 0.0
                    : static_cast<double>(res.median_total_ns - std::min(
                          res.median_verify_ns, res.median_total_ns)) / windows;
            const double speedup = static_cast<double>(ss.median_total_ns) /
                                   static_cast<double>(std::max<std::uint64_t>(
                                       res.median_total_ns, 1));

            out << opt.axis << ',' << cell.axis_value << ',' << cell.algo << ','
                << cell.p.str() << ',' << format_double(cell.threshold_ratio) << ','
                << format_double(cell.probability) << ','
                << format_double(cell.block_ratio) << ',' << cell.block_width << ','
                << static_cast<std::uint64_t>(opt.length) << ',' << opt.seed << ','
                << opt.reps << ',' << kGeneratorName << ',' << base_pattern.length() << ','
                << base_pattern.subpattern_count() << ',' << res.windows_total << ','
                << res.matches.size() << ',' << format_double(res.power) << ','
                << format_double(total_per_window) << ','
                << format_double(prune_per_window) << ',' << format_double(speedup)
                << '\n';

            char power_buf[16];
            std::snprintf(power_buf, sizeof power_buf, "%.2f%%", res.power * 100.0);
            char speed_buf[16];
            std::snprintf(speed_buf, sizeof speed_buf, "%.2fx", speedup);
            std::printf("%-10s %-8s %14s %14s %10s %9s %9zu\n", cell.axis_value.c_str(),
                        cell.algo.c_str(), format_ns(total_per_window).c_str(),
                        format_ns(prune_per_window).c_str(), power_buf, speed_buf,
                        res.matches.size());
        }
    }
    out.flush();
    if (!out) throw DataError("write failed: " + opt.out_file);
    std::cerr << "wrote " << opt.out_file << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Streaming consecutive-subpattern matcher with equal-length block pruning"};
    app.require_subcommand(1);

    GenOptions gen;
    auto* gen_cmd = app.add_subcommand("gen", "Generate a synthetic stream with embedded pattern copies");
    gen_cmd->add_option("--pattern-file", gen.pattern_file, "Pattern file")->required();
    gen_cmd->add_option("--length", gen.length, "Stream length")->required();
    gen_cmd->add_option("--seed", gen.seed, "RNG seed");
    gen_cmd->add_option("--probability", gen.probability, "Per-timestamp embedding probability");
    gen_cmd->add_option("--r-base", gen.base, "Random walk base level R");
    gen_cmd->add_option("--noise", gen.noise, "Uniform noise amplitude added to embedded copies");
    gen_cmd->add_option("--threshold-ratio", gen.threshold_ratio, "Threshold ratio in percent (sidecar provenance)");
    gen_cmd->add_option("--p", gen.p, "Lp order (positive integer or inf)");
    gen_cmd->add_option("--out", gen.out_prefix, "Output file prefix")->required();

    MatchOptions match;
    auto* match_cmd = app.add_subcommand("match", "Match a pattern over a stream file");
    match_cmd->add_option("--pattern-file", match.pattern_file, "Pattern file")->required();
    match_cmd->add_option("--stream-file", match.stream_file, "Stream file")->required();
    match_cmd->add_option("--algo", match.algo, "ss | elb-ele | elb-seq");
    match_cmd->add_option("--p", match.p, "Lp order (positive integer or inf)");
    match_cmd->add_option("--block-ratio", match.block_ratio, "Block size as percent of pattern length, in (0, 50]");
    match_cmd->add_option("--threshold-ratio", match.threshold_ratio, "Derive thresholds at this percent ratio instead of the file's");
    match_cmd->add_option("--out", match.out_prefix, "Output file prefix")->required();

    EnvelopeOptions env;
    auto* env_cmd = app.add_subcommand("envelope", "Dump a pattern envelope as CSV");
    env_cmd->add_option("--pattern-file", env.pattern_file, "Pattern file")->required();
    env_cmd->add_option("--variant", env.variant, "ele | seq");
    env_cmd->add_option("--p", env.p, "Lp order (positive integer or inf)");
    env_cmd->add_option("--block-ratio", env.block_ratio, "Block size as percent of pattern length (seq)");
    env_cmd->add_option("--threshold-ratio", env.threshold_ratio, "Derive thresholds at this percent ratio instead of the file's");
    env_cmd->add_option("--out", env.out_file, "Output CSV path")->required();

    BenchOptions bench;
    auto* bench_cmd = app.add_subcommand("bench", "Sweep one axis and compare SS, ELB-ELE and ELB-SEQ");
    bench_cmd->add_option("--pattern-file", bench.pattern_file, "Pattern file")->required();
    bench_cmd->add_option("--axis", bench.axis, "p | threshold | probability | block");
    bench_cmd->add_option("--length", bench.length, "Stream length");
    bench_cmd->add_option("--reps", bench.reps, "Timed repetitions per cell (after one warm-up)");
    bench_cmd->add_option("--seed", bench.seed, "RNG seed");
    bench_cmd->add_option("--p", bench.p, "Default Lp order");
    bench_cmd->add_option("--threshold-ratio", bench.threshold_ratio, "Default threshold ratio in percent");
    bench_cmd->add_option("--probability", bench.probability, "Default occurrence probability");
    bench_cmd->add_option("--block-ratio", bench.block_ratio, "Default block ratio in percent");
    bench_cmd->add_option("--out", bench.out_file, "Output CSV path");

    try {
        app.parse(argc, argv);
        if (gen_cmd->parsed()) return cmd_gen(gen);
        if (match_cmd->parsed()) return cmd_match(match);
        if (env_cmd->parsed()) return cmd_envelope(env);
        if (bench_cmd->parsed()) return cmd_bench(bench);
        return 2;
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return 2;
    } catch (const DataError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
