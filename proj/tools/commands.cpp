#include "commands.hpp"

#include "mfp/estimator.hpp"
#include "mfp/fingerprint.hpp"
#include "mfp/oracle.hpp"
#include "mfp/rng.hpp"
#include "mfp/selftest.hpp"
#include "mfp/serialization.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

namespace mfp::cli {

using nlohmann::json;

namespace {

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point start) {
    return std::chrono::duration<double, std::milli>(Clock::now() - start).count();
}

std::optional<std::string> env(const char *name) {
    const char *v = std::getenv(name);
    if (v == nullptr || *v == '\0') {
        return std::nullopt;
    }
    return std::string(v);
}

std::uint64_t parse_u64(const std::string &text, const char *what) {
    std::uint64_t v = 0;
    const char *end = text.data() + text.size();
    const auto [ptr, ec] = std::from_chars(text.data(), end, v);
    if (ec != std::errc() || ptr != end || text.empty()) {
        throw ArgumentError(std::string(what) + ": expected an unsigned integer, got '" + text + "'");
    }
    return v;
}

json counters_json(const WorkCounters &c) {
    return {{"pair_evals", c.pair_evals},     {"composed_evals", c.composed_evals},
            {"scan_frames", c.scan_frames},   {"scan_skips", c.scan_skips},
            {"emitted_cells", c.emitted_cells}, {"inversions", c.inversions},
            {"max_scan_depth", c.max_scan_depth}};
}

json config_json(const SketchConfig &c) {
    return {{"epsilon", c.epsilon}, {"delta", c.delta}, {"k", c.k},
            {"m", c.m},             {"d", c.d},         {"l_prime", c.l_prime},
            {"p", c.params.prime()}, {"u", c.params.universe()}, {"seed", c.master_seed}};
}

/// Options shared by the subcommands that draw random seeds or pick a field.
struct SeedAndPrime {
    std::string seed;
    std::string prime;

    std::uint64_t resolved_seed() const {
        if (!seed.empty()) {
            return parse_u64(seed, "--seed");
        }
        if (auto e = env("MFP_SEED")) {
            return parse_u64(*e, "MFP_SEED");
        }
        return 1;
    }

    FieldParams resolved_prime() const {
        if (!prime.empty()) {
            return parse_prime(prime);
        }
        if (auto e = env("MFP_PRIME")) {
            return parse_prime(*e);
        }
        return FieldParams{};
    }
};

struct SketchOptions {
    std::string input = "-";
    std::string out;
    double epsilon = 0.1;
    double delta = 0.1;
    SeedAndPrime sp;
    std::uint32_t degree = 0;
    bool force_stream = false;
    bool naive = false;
};

struct CompareOptions {
    std::string a;
    std::string b;
    bool csv = false;
};

struct BenchOptions {
    std::uint64_t b = 100000;
    std::uint32_t k = 0;
    double epsilon = 0.1;
    std::uint32_t trials = 3;
    std::string mode = "both";
    SeedAndPrime sp;
};

struct SelftestCliOptions {
    std::string scale = "quick";
    std::uint64_t seed = 1;
};

Fingerprint build_naive(std::span<const ItemId> items, const SketchConfig &config, WorkCounters *counters) {
    if (items.empty()) {
        throw ArgumentError("empty stream: nothing to sketch");
    }
    Fingerprint fp;
    fp.config = config;
    fp.element_count = items.size();
    for (std::size_t r = 0; r < config.m; ++r) {
        const BlockState state = naive_minhash_block(items, block_pair(config, r), config.k, config.params, counters);
        fp.blocks.push_back(finish_block(state, block_bit_hashes(config, r), block_pair_seed(config, r),
                                         block_bit_seed(config, r), config.params));
    }
    return fp;
}

void cmd_sketch(const SketchOptions &o, std::istream &in, json &manifest) {
    SketchConfig config = sketch_config_for(o.epsilon, o.delta, o.sp.resolved_seed(), o.sp.resolved_prime());
    if (o.degree != 0) {
        config.d = o.degree;
    }
    config.validate();
    manifest["config"] = config_json(config);

    const bool from_stdin = o.input == "-";
    const bool known_length = !from_stdin && !o.force_stream && std::filesystem::is_regular_file(o.input);
    if (o.naive && !known_length) {
        throw ArgumentError("--naive needs a regular input file");
    }
    std::ifstream file;
    if (!from_stdin) {
        file.open(o.input);
        if (!file) {
            throw IoError("cannot open input '" + o.input + "'");
        }
    }
    std::istream &source = from_stdin ? in : file;
    const std::string name = from_stdin ? "<stdin>" : o.input;
    const char *mode = o.naive ? "naive" : known_length ? "known_length" : "streaming";
    manifest["input"] = {{"path", name}, {"mode", mode}};

    WorkCounters counters;
    const auto start = Clock::now();
    Fingerprint fp;
    FieldElement t = 0;
    if (known_length) {
        std::vector<ItemId> items;
        read_items(source, name, config.params.universe(), [&](ItemId x) { items.push_back(x); });
        if (items.empty()) {
            throw DataError(name + ": empty stream: nothing to sketch");
        }
        const auto parsed = Clock::now();
        manifest["timing_ms"]["parse"] = std::chrono::duration<double, std::milli>(parsed - start).count();
        if (o.naive) {
            fp = build_naive(items, config, &counters);
            t = config.params.prime();
        } else {
            fp = build_fingerprint(items, config, &counters);
            t = threshold_for(items.size(), config);
        }
    } else {
        StreamingBuilder builder(config, &counters);
        read_items(source, name, config.params.universe(), [&](ItemId x) { builder.add(x); });
        if (builder.count() == 0) {
            throw DataError(name + ": empty stream: nothing to sketch");
        }
        fp = builder.finish();
        t = builder.threshold();
        manifest["streaming"] = {{"buffer", builder.buffer_limit()},
                                 {"final_length_estimate", builder.length_estimate()},
                                 {"epochs", builder.epochs()}};
    }
    manifest["timing_ms"]["build"] = ms_since(start);
    manifest["threshold"] = t;
    manifest["input"]["elements"] = fp.element_count;
    manifest["valid_blocks"] = fp.valid_blocks();
    manifest["counters"] = counters_json(counters);

    write_fingerprint_file(o.out, fp);
    manifest["output"] = {{"path", o.out}, {"bytes", serialize(fp).size()}};
}

void cmd_compare(const CompareOptions &o, std::ostream &out, json &manifest) {
    const Fingerprint a = read_fingerprint_file(o.a);
    const Fingerprint b = read_fingerprint_file(o.b);
    manifest["inputs"] = {{{"path", o.a}, {"elements", a.element_count}, {"valid_blocks", a.valid_blocks()}},
                          {{"path", o.b}, {"elements", b.element_count}, {"valid_blocks", b.valid_blocks()}}};
    manifest["config"] = config_json(a.config);
    const SimilarityEstimate est = median_estimate(a, b);
    manifest["result"] = {{"j_hat", est.j_hat},
                          {"j_hat_clamped", est.j_clamped},
                          {"used_blocks", est.used_blocks},
                          {"block_estimates", est.raw},
                          {"agreeing_rows", est.agreeing_rows},
                          {"compared_rows", est.compared_rows}};

    std::ostringstream line;
    line << std::setprecision(6) << std::fixed;
    if (o.csv) {
        line << o.a << ',' << o.b << ',' << est.j_hat << ',' << est.used_blocks << ',';
        line << std::defaultfloat << a.config.epsilon << ',' << a.config.delta << '\n';
    } else {
        line << "j_hat          " << est.j_hat << '\n'
             << "j_hat_clamped  " << est.j_clamped << '\n'
             << "used_blocks    " << est.used_blocks << " of " << a.config.m << '\n'
             << std::defaultfloat << "epsilon        " << a.config.epsilon << '\n'
             << "delta          " << a.config.delta << '\n';
    }
    out << line.str();
}

void cmd_bench(const BenchOptions &o, std::ostream &out, json &manifest) {
    const std::uint64_t seed = o.sp.resolved_seed();
    const FieldParams params = o.sp.resolved_prime();
    const IndependenceLevel level = degree_for_accuracy(o.epsilon);
    const std::uint64_t k = o.k != 0 ? o.k : params_for(o.epsilon, 0.5).k;
    if (o.b == 0 || o.b > params.universe()) {
        throw ArgumentError("--b must lie in [1, u]");
    }
    const bool run_fast = o.mode != "naive";
    const bool run_naive = o.mode != "fast";
    const FieldElement t = threshold_for(o.b, level.l_prime, params);
    const FamilyConfig family{level.degree, o.epsilon / 1024, params};
    manifest["config"] = {{"b", o.b},           {"k", k},         {"d", level.degree}, {"l_prime", level.l_prime},
                          {"p", params.prime()}, {"threshold", t}, {"seed", seed},      {"trials", o.trials},
                          {"mode", o.mode}};
    manifest["expected_scanned_cells"] =
        static_cast<double>(t) * static_cast<double>(o.b) * static_cast<double>(k) / static_cast<double>(params.prime());

    out << "mode,b,k,trial,wall_ms,hash_evals,scanned_cells,cell_touches,non_output_work\n";
    out << std::setprecision(3) << std::fixed;
    WorkCounters fast_total;
    WorkCounters naive_total;
    for (std::uint32_t trial = 0; trial < o.trials; ++trial) {
        const auto items = random_distinct_items(o.b, derive_seed(seed, trial, SeedPurpose::bit_hash), params.universe());
        const PolynomialPair pair = sample_base_pair(derive_seed(seed, trial, SeedPurpose::polynomial_pair), family);
        if (run_fast) {
            WorkCounters c;
            const auto start = Clock::now();
            block_update(items, pair, k, t, params, &c);
            const double ms = ms_since(start);
            out << "fast," << o.b << ',' << k << ',' << trial << ',' << ms << ',' << c.pair_evals << ','
                << c.emitted_cells << ',' << c.cell_touches() << ',' << c.non_output_work() << '\n';
            fast_total += c;
        }
        if (run_naive) {
            WorkCounters c;
            const auto start = Clock::now();
            naive_minhash_block(items, pair, k, params, &c);
            const double ms = ms_since(start);
            out << "naive," << o.b << ',' << k << ',' << trial << ',' << ms << ',' << c.composed_evals << ','
                << c.composed_evals << ',' << c.composed_evals << ',' << c.pair_evals << '\n';
            naive_total += c;
        }
    }
    manifest["counters"] = {{"fast", counters_json(fast_total)}, {"naive", counters_json(naive_total)}};
}

int cmd_selftest(const SelftestCliOptions &o, std::ostream &out, json &manifest) {
    SelftestOptions options;
    options.scale = o.scale == "full" ? SelftestScale::full : SelftestScale::quick;
    options.seed = o.seed;
    options.corrupt = env("MFP_SELFTEST_CORRUPT").has_value();
    const auto start = Clock::now();
    const SelftestReport report = run_selftest(options);
    manifest["timing_ms"]["total"] = ms_since(start);
    manifest["config"] = {{"scale", o.scale}, {"seed", o.seed}, {"corrupt", options.corrupt}};
    json checks = json::array();
    for (const auto &c : report.checks) {
        out << (c.passed ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    }
    manifest["checks"] = checks;
    out << (report.passed() ? "selftest passed\n" : "selftest FAILED\n");
    return report.passed() ? exit_ok : exit_selftest;
}

} // namespace

FieldParams parse_prime(const std::string &text) {
    if (text == "m61") {
        return FieldParams{};
    }
    if (text == "m31") {
        return FieldParams::for_prime(FieldParams::kMersenne31);
    }
    return FieldParams::for_prime(parse_u64(text, "prime"));
}

std::uint64_t read_items(std::istream &in, const std::string &source, std::uint64_t universe,
                         const std::function<void(ItemId)> &sink) {
    std::string line;
    std::uint64_t line_no = 0;
    std::uint64_t count = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        const auto last = line.find_last_not_of(" \t\r");
        const char *begin = line.data() + first;
        const char *end = line.data() + last + 1;
        ItemId x = 0;
        const auto [ptr, ec] = std::from_chars(begin, end, x);
        if (ec == std::errc::result_out_of_range) {
            throw DataError(source + ":" + std::to_string(line_no) + ": item ID does not fit in 64 bits");
        }
        if (ec != std::errc() || ptr != end) {
            throw DataError(source + ":" + std::to_string(line_no) + ": expected an unsigned decimal item ID, got '" +
                            std::string(begin, end) + "'");
        }
        if (x >= universe) {
            throw DataError(source + ":" + std::to_string(line_no) + ": item ID " + std::to_string(x) +
                            " is outside the universe [0, " + std::to_string(universe) + ")");
        }
        sink(x);
        ++count;
    }
    if (in.bad()) {
        throw IoError(source + ": read failed");
    }
    return count;
}

int run(const std::vector<std::string> &args, std::istream &in, std::ostream &out, std::ostream &err) {
    CLI::App app{"mfp: single-bit min-hash fingerprints of item-ID streams"};
    app.name("mfp");
    app.require_subcommand(1);

    SketchOptions sketch;
    auto *s = app.add_subcommand("sketch", "Fingerprint a stream of decimal item IDs");
    s->add_option("input", sketch.input, "Input file, or - for standard input")->capture_default_str();
    s->add_option("--out,-o", sketch.out, "Fingerprint file to write")->required();
    s->add_option("--epsilon", sketch.epsilon, "Additive accuracy target in (0, 1)")->capture_default_str();
    s->add_option("--delta", sketch.delta, "Failure probability in (0, 1)")->capture_default_str();
    s->add_option("--seed", sketch.sp.seed, "Master seed (default: $MFP_SEED, else 1)");
    s->add_option("--prime", sketch.sp.prime, "Field prime: m61, m31 or a decimal prime (default: $MFP_PRIME, else m61)");
    s->add_option("--degree", sketch.degree, "Override the polynomial degree d");
    s->add_flag("--stream", sketch.force_stream, "Use the unknown-length path even for a regular file");
    s->add_flag("--naive", sketch.naive, "Evaluate every hash directly (slow; for verification)");

    CompareOptions compare;
    auto *c = app.add_subcommand("compare", "Estimate the Jaccard similarity of two fingerprints");
    c->add_option("a", compare.a, "First fingerprint file")->required();
    c->add_option("b", compare.b, "Second fingerprint file")->required();
    c->add_flag("--csv", compare.csv, "Emit one CSV row: fileA,fileB,j_hat,used_blocks,epsilon,delta");

    BenchOptions bench;
    auto *bn = app.add_subcommand("bench", "Time the threshold scan against naive evaluation on one block");
    bn->add_option("--b", bench.b, "Stream length")->capture_default_str();
    bn->add_option("--k", bench.k, "Rows per block (default: ceil(8.02 / epsilon^2))");
    bn->add_option("--epsilon", bench.epsilon, "Accuracy target; sets d, and k when --k is absent")
        ->capture_default_str();
    bn->add_option("--trials", bench.trials, "Independent trials")->capture_default_str();
    bn->add_option("--mode", bench.mode, "fast, naive or both")
        ->check(CLI::IsMember({"fast", "naive", "both"}))
        ->capture_default_str();
    bn->add_option("--seed", bench.sp.seed, "Seed (default: $MFP_SEED, else 1)");
    bn->add_option("--prime", bench.sp.prime, "Field prime (default: $MFP_PRIME, else m61)");

    SelftestCliOptions selftest;
    auto *st = app.add_subcommand("selftest", "Check the fast paths against the oracles");
    st->add_option("--scale", selftest.scale, "quick or full")
        ->check(CLI::IsMember({"quick", "full"}))
        ->capture_default_str();
    st->add_option("--seed", selftest.seed, "Seed for the randomized checks")->capture_default_str();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp &) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::ParseError &e) {
        err << "mfp: " << e.what() << '\n';
        return exit_usage;
    }

    json manifest;
    int code = exit_ok;
    const auto start = Clock::now();
    try {
        if (s->parsed()) {
            manifest["command"] = "sketch";
            cmd_sketch(sketch, in, manifest);
        } else if (c->parsed()) {
            manifest["command"] = "compare";
            cmd_compare(compare, out, manifest);
        } else if (bn->parsed()) {
            manifest["command"] = "bench";
            cmd_bench(bench, out, manifest);
        } else {
            manifest["command"] = "selftest";
            code = cmd_selftest(selftest, out, manifest);
        }
    } catch (const DataError &e) {
        err << "mfp: data error: " << e.what() << '\n';
        code = exit_data;
    } catch (const IoError &e) {
        err << "mfp: I/O error: " << e.what() << '\n';
        code = exit_data;
    } catch (const FormatError &e) {
        err << "mfp: format error: " << e.what() << '\n';
        code = exit_data;
    } catch (const IncompatibleError &e) {
        err << "mfp: " << e.what() << '\n';
        manifest["mismatch_field"] = e.field();
        code = exit_incompatible;
    } catch (const EstimationError &e) {
        err << "mfp: " << e.what() << '\n';
        code = exit_data;
    } catch (const ArgumentError &e) {
        err << "mfp: " << e.what() << '\n';
        code = exit_usage;
    } catch (const Error &e) {
        err << "mfp: internal error: " << e.what() << '\n';
        code = exit_data;
    }
    manifest["exit_code"] = code;
    manifest["timing_ms"]["wall"] = ms_since(start);
    err << manifest.dump() << '\n';
    return code;
}

} // namespace mfp::cli
