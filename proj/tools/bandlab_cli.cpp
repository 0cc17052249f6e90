#include <chrono>
#include <cstdint>
#include <cstdio>
#include <new>
#include <stdexcept>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "bandlab/canonical_json.hpp"
#include "bandlab/density.hpp"
#include "bandlab/eigensolver.hpp"
#include "bandlab/ensemble.hpp"
#include "bandlab/errors.hpp"
#include "bandlab/harness.hpp"
#include "bandlab/pairings.hpp"
#include "bandlab/rational.hpp"

namespace {

using nlohmann::json;

// Exit-code contract: 0 success, 2 usage, 3 size limit, 4 resources,
// 5 schema/IO, 6 assertion failure.
constexpr int kExitUsage = 2;
constexpr int kExitSizeLimit = 3;
constexpr int kExitResources = 4;
constexpr int kExitSchema = 5;
constexpr int kExitAssertion = 6;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct AssertionFailure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct GlobalFlags {
    std::uint64_t seed = 1;
    std::string out;
    std::string format;  // empty: tables default to csv, reports to json
    int threads = 1;
};

bool wants_csv(const GlobalFlags& g, const char* fallback) {
    return (g.format.empty() ? std::string(fallback) : g.format) == "csv";
}

std::string fmt17(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string config_header(const json& config) {
    return "# " + bandlab::canonical_dump(config, 0);  // compact form ends with '\n'
}

void write_output(const GlobalFlags& g, const std::string& text) {
    if (g.out.empty()) {
        std::fputs(text.c_str(), stdout);
    } else {
        bandlab::write_text_file(g.out, text);
    }
}

struct Grid {
    double lo = 0.0;
    double hi = 0.0;
    int n = 1;
};

Grid parse_grid(const std::string& text) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3) throw UsageError("grid must be lo:hi:n");
    Grid grid;
    try {
        std::size_t used = 0;
        grid.lo = std::stod(parts[0], &used);
        if (used != parts[0].size()) throw UsageError("grid lo is not a number");
        grid.hi = std::stod(parts[1], &used);
        if (used != parts[1].size()) throw UsageError("grid hi is not a number");
        grid.n = std::stoi(parts[2], &used);
        if (used != parts[2].size()) throw UsageError("grid n is not an integer");
    } catch (const UsageError&) {
        throw;
    } catch (const std::exception&) {
        throw UsageError("grid must be lo:hi:n with numeric bounds");
    }
    if (grid.n < 1 || grid.n > 1000000) throw UsageError("grid n must be in [1, 10^6]");
    if (!(grid.lo <= grid.hi)) throw UsageError("grid requires lo <= hi");
    return grid;
}

std::vector<int> parse_word(const std::string& text) {
    std::vector<int> nu;
    std::string cur;
    auto flush = [&]() {
        if (cur.empty()) throw UsageError("word must be comma-separated integers");
        try {
            std::size_t used = 0;
            const int v = std::stoi(cur, &used);
            if (used != cur.size() || v < 0) throw std::invalid_argument("");
            nu.push_back(v);
        } catch (const std::exception&) {
            throw UsageError("word entries must be nonnegative integers");
        }
        cur.clear();
    };
    for (char c : text) {
        if (c == ',') {
            flush();
        } else {
            cur += c;
        }
    }
    flush();
    return nu;
}

std::string word_label(const std::vector<int>& nu) {
    std::string s;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        if (i) s += ",";
        s += std::to_string(nu[i]);
    }
    return s;
}

// ---------------------------------------------------------------- density --

struct DensityArgs {
    std::string ensemble = "gue";
    int m = 1;
    std::string grid = "-4:4:161";
};

int run_density(const GlobalFlags& g, const DensityArgs& args) {
    if (args.ensemble != "gue" && args.ensemble != "goe")
        throw UsageError("--ensemble must be gue or goe");
    if (args.m < 1 || args.m > bandlab::kMaxBlockOrder)
        throw UsageError("--m must be in [1, 64]");
    const Grid grid = parse_grid(args.grid);

    const bandlab::EnsembleClass cls = args.ensemble == "gue" ? bandlab::EnsembleClass::Gue
                                                              : bandlab::EnsembleClass::Goe;
    bandlab::DensityModel model(cls, args.m);

    json config;
    config["command"] = "density";
    config["ensemble"] = args.ensemble;
    config["m"] = args.m;
    config["grid"] = json{{"lo", grid.lo}, {"hi", grid.hi}, {"n", grid.n}};

    const double step = grid.n > 1 ? (grid.hi - grid.lo) / (grid.n - 1) : 0.0;
    if (wants_csv(g, "csv")) {
        std::string text = config_header(config);
        text += "x,pdf,cdf\n";
        for (int i = 0; i < grid.n; ++i) {
            const double x = grid.lo + step * i;
            text += fmt17(x) + "," + fmt17(model.pdf(x)) + "," + fmt17(model.cdf(x)) + "\n";
        }
        write_output(g, text);
    } else {
        json rows = json::array();
        for (int i = 0; i < grid.n; ++i) {
            const double x = grid.lo + step * i;
            rows.push_back(json{{"x", x}, {"pdf", model.pdf(x)}, {"cdf", model.cdf(x)}});
        }
        json doc;
        doc["config"] = config;
        doc["rows"] = rows;
        doc["total_mass"] = model.total_mass();
        write_output(g, bandlab::canonical_dump(doc));
    }
    return 0;
}

// ---------------------------------------------------------------- moments --

struct MomentsArgs {
    std::string ensemble = "gue";
    int m = 1;
    int k_max = 8;
    std::string word;
};

int run_moments(const GlobalFlags& g, const MomentsArgs& args) {
    if (args.ensemble != "gue" && args.ensemble != "goe" && args.ensemble != "mixed")
        throw UsageError("--ensemble must be gue, goe or mixed");
    if (args.m < 1) throw UsageError("--m must be positive");

    json config;
    config["command"] = "moments";
    config["ensemble"] = args.ensemble;
    config["m"] = args.m;

    json rows = json::array();
    std::string csv_rows;
    if (args.ensemble == "mixed") {
        if (args.word.empty()) throw UsageError("--ensemble mixed requires --word");
        const std::vector<int> nu = parse_word(args.word);
        config["word"] = nu;
        bandlab::TraceWord word{nu};
        const long long exact = bandlab::mixed_trace_gue(args.m, word);
        rows.push_back(json{{"word", nu},
                            {"letters", word.letter_count()},
                            {"exact", static_cast<double>(exact)},
                            {"exact_rational", std::to_string(exact)}});
        csv_rows += "mixed," + std::to_string(args.m) + ",\"" + word_label(nu) + "\"," +
                    fmt17(static_cast<double>(exact)) + "," + std::to_string(exact) + "\n";
    } else {
        if (args.k_max < 1 || args.k_max > bandlab::kMaxMomentOrder)
            throw UsageError("--k-max must be in [1, 16]");
        config["k_max"] = args.k_max;
        for (int k = 1; k <= args.k_max; ++k) {
            const bandlab::Rational exact = args.ensemble == "gue"
                                                ? bandlab::gue_moment(args.m, k)
                                                : bandlab::goe_moment(args.m, k);
            rows.push_back(json{{"k", k},
                               {"exact", exact.to_double()},
                               {"exact_rational", exact.to_string()}});
            csv_rows += args.ensemble + "," + std::to_string(args.m) + "," + std::to_string(k) +
                        "," + fmt17(exact.to_double()) + "," + exact.to_string() + "\n";
        }
    }

    if (wants_csv(g, "csv")) {
        std::string text = config_header(config);
        text += "ensemble,m,k,exact,exact_rational\n";
        text += csv_rows;
        write_output(g, text);
    } else {
        json doc;
        doc["config"] = config;
        doc["rows"] = rows;
        write_output(g, bandlab::canonical_dump(doc));
    }
    return 0;
}

// ----------------------------------------------------------------- sample --

struct SampleArgs {
    std::string spec_file;
    int N = 0;
    int m = 1;
    int b = 0;
    double power = 0.0;
    double logc = 0.0;
    std::string symmetry = "transpose_coupled";
    std::string distribution = "rademacher";
    std::string normalization = "gue_scaled";
    std::string emit = "spectrum";
};

int run_sample(const GlobalFlags& g, const SampleArgs& args, bool seed_given) {
    bandlab::EnsembleSpec spec;
    if (!args.spec_file.empty()) {
        json doc;
        try {
            doc = json::parse(bandlab::read_text_file(args.spec_file));
        } catch (const json::parse_error& e) {
            throw bandlab::SchemaError(std::string("spec file is not valid JSON: ") + e.what());
        }
        spec = doc.get<bandlab::EnsembleSpec>();
        if (seed_given) spec.seed = g.seed;
    } else {
        if (args.N < 2) throw UsageError("--N must be at least 2 (or use --spec FILE)");
        if (args.m < 1 || args.m > bandlab::kMaxEnsembleBlockOrder)
            throw UsageError("--m must be in [1, 64]");
        int schedules = (args.b > 0) + (args.power > 0.0) + (args.logc > 0.0);
        if (schedules != 1)
            throw UsageError("give exactly one bandwidth schedule: --b, --power or --log");
        spec.N = args.N;
        spec.m = args.m;
        if (args.b > 0) {
            spec.bandwidth.kind = bandlab::BandwidthSchedule::Kind::Fixed;
            spec.bandwidth.param = args.b;
        } else if (args.power > 0.0) {
            spec.bandwidth.kind = bandlab::BandwidthSchedule::Kind::PowerLaw;
            spec.bandwidth.param = args.power;
        } else {
            spec.bandwidth.kind = bandlab::BandwidthSchedule::Kind::Logarithmic;
            spec.bandwidth.param = args.logc;
        }
        try {
            spec.symmetry = bandlab::symmetry_class_from_string(args.symmetry);
            spec.distribution = bandlab::distribution_from_string(args.distribution);
        } catch (const bandlab::SchemaError& e) {
            throw UsageError(e.what());
        }
        spec.seed = g.seed;
    }
    spec.validate();
    bandlab::Normalization norm;
    try {
        norm = bandlab::normalization_from_string(args.normalization);
    } catch (const bandlab::SchemaError& e) {
        throw UsageError(e.what());
    }
    if (args.emit != "spectrum" && args.emit != "matrix")
        throw UsageError("--emit must be spectrum or matrix");

    const bandlab::SymmetricBandMatrix matrix = bandlab::build_matrix(spec, norm);

    json config;
    config["command"] = "sample";
    config["spec"] = spec;
    config["normalization"] = bandlab::to_string(norm);
    config["emit"] = args.emit;
    config["bandwidth_resolved"] = spec.bandwidth_at_n();

    if (args.emit == "spectrum") {
        const bandlab::SpectralSample sample = bandlab::solve_spectrum(matrix, "cli");
        if (wants_csv(g, "csv")) {
            std::string text = config_header(config);
            for (double v : sample.eigenvalues) text += fmt17(v) + "\n";
            write_output(g, text);
        } else {
            json doc;
            doc["config"] = config;
            doc["eigenvalues"] = sample.eigenvalues;
            doc["diagnostics"] = json{{"ql_sweeps", sample.diagnostics.ql_sweeps},
                                      {"trace_residual", sample.diagnostics.trace_residual},
                                      {"frobenius_residual", sample.diagnostics.frobenius_residual}};
            write_output(g, bandlab::canonical_dump(doc));
        }
    } else {
        const int n = matrix.size();
        const int h = matrix.half_bandwidth();
        if (wants_csv(g, "csv")) {
            std::string text = config_header(config);
            text += "row,col,value\n";
            for (int j = 0; j < n; ++j)
                for (int i = j; i <= std::min(j + h, n - 1); ++i)
                    text += std::to_string(i) + "," + std::to_string(j) + "," +
                            fmt17(matrix.lower(i, j)) + "\n";
            write_output(g, text);
        } else {
            json triplets = json::array();
            for (int j = 0; j < n; ++j)
                for (int i = j; i <= std::min(j + h, n - 1); ++i)
                    triplets.push_back(json::array({i, j, matrix.lower(i, j)}));
            json doc;
            doc["config"] = config;
            doc["order"] = n;
            doc["half_bandwidth"] = h;
            doc["triplets"] = triplets;
            write_output(g, bandlab::canonical_dump(doc));
        }
    }
    return 0;
}

// ------------------------------------------------------------- experiment --

std::string experiment_csv(const json& report) {
    const std::string kind = report.at("kind").get<std::string>();
    const json& results = report.at("results");
    std::string text = config_header(report.at("config"));
    if (kind == "esd") {
        // histogram of the largest N against the reference density
        const json& per_n = results.at("per_n");
        const json& last = per_n.back();
        const json& cfg = report.at("config");
        const double lo = cfg.at("histogram").at("lo").get<double>();
        const double hi = cfg.at("histogram").at("hi").get<double>();
        const int bins = cfg.at("histogram").at("bins").get<int>();
        const double width = (hi - lo) / bins;
        const json& counts = last.at("histogram_counts");
        const json& emp = last.at("empirical_density");
        const json& ref = results.at("reference").at("histogram_density");
        text += "bin_left,bin_right,count,empirical_density,reference_density\n";
        for (int b = 0; b < bins; ++b) {
            const double l = lo + b * width;
            text += fmt17(l) + "," + fmt17(l + width) + "," +
                    std::to_string(counts[b].get<long long>()) + "," +
                    fmt17(emp[b].get<double>()) + "," + fmt17(ref[b].get<double>()) + "\n";
        }
    } else if (kind == "moments") {
        text += "N,k,mean,se,exact,exact_rational,pass\n";
        for (const json& row : results.at("per_n"))
            for (const json& entry : row.at("moments"))
                text += std::to_string(row.at("N").get<int>()) + "," +
                        std::to_string(entry.at("k").get<int>()) + "," +
                        fmt17(entry.at("mean").get<double>()) + "," +
                        fmt17(entry.at("se").get<double>()) + "," +
                        fmt17(entry.at("exact").get<double>()) + "," +
                        entry.at("exact_rational").get<std::string>() + "," +
                        (entry.at("pass").get<bool>() ? "true" : "false") + "\n";
    } else {
        text += "N,word,letters,mean,se,exact,pass\n";
        for (const json& row : results.at("per_n"))
            for (const json& entry : row.at("words"))
                text += std::to_string(row.at("N").get<int>()) + ",\"" +
                        word_label(entry.at("word").get<std::vector<int>>()) + "\"," +
                        std::to_string(entry.at("letters").get<int>()) + "," +
                        fmt17(entry.at("mean").get<double>()) + "," +
                        fmt17(entry.at("se").get<double>()) + "," +
                        fmt17(entry.at("exact").get<double>()) + "," +
                        (entry.at("pass").get<bool>() ? "true" : "false") + "\n";
    }
    return text;
}

int run_experiment_cmd(const GlobalFlags& g, const std::string& config_path, bool seed_given) {
    json doc;
    try {
        doc = json::parse(bandlab::read_text_file(config_path));
    } catch (const json::parse_error& e) {
        throw bandlab::SchemaError(std::string("config file is not valid JSON: ") + e.what());
    }
    bandlab::ExperimentConfig config = doc.get<bandlab::ExperimentConfig>();
    config.threads = g.threads;
    if (seed_given) config.master_seed = g.seed;

    const auto start = std::chrono::steady_clock::now();
    const json report = bandlab::run_experiment(config);
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    std::fprintf(stderr, "wall_clock_seconds=%.3f\n", seconds);

    if (wants_csv(g, "json")) {
        write_output(g, experiment_csv(report));
    } else if (g.out.empty()) {
        std::fputs(bandlab::canonical_dump(report).c_str(), stdout);
    } else {
        bandlab::persist_report(report, g.out);
    }
    return bandlab::report_has_hard_failures(report) ? kExitAssertion : 0;
}

// ----------------------------------------------------------------- verify --

int run_verify(const GlobalFlags& g, const std::string& report_path) {
    const json report = bandlab::load_report(report_path);
    const std::vector<std::string> diffs = bandlab::verify_report(report);

    json config;
    config["command"] = "verify";
    config["report"] = report_path;
    std::string text = config_header(config);
    for (const std::string& d : diffs) text += "mismatch: " + d + "\n";
    text += diffs.empty() ? "verified: all reference values recomputed consistently\n"
                          : "verification failed: " + std::to_string(diffs.size()) + " mismatch(es)\n";
    write_output(g, text);
    return diffs.empty() ? 0 : kExitAssertion;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"block Toeplitz band-matrix spectral laboratory"};
    app.fallthrough();  // subcommands inherit this, so global flags work after the name
    app.require_subcommand(1);

    GlobalFlags global;
    bool seed_given = false;
    app.add_option("--seed", global.seed, "master seed (all randomness flows from it)")
        ->each([&seed_given](const std::string&) { seed_given = true; });
    app.add_option("--out", global.out, "output file (default: stdout)");
    app.add_option("--format", global.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--threads", global.threads, "worker pool size for experiments")
        ->check(CLI::PositiveNumber);

    DensityArgs density_args;
    CLI::App* density = app.add_subcommand("density", "evaluate the limiting spectral density");
    density->add_option("--ensemble", density_args.ensemble, "gue or goe");
    density->add_option("--m", density_args.m, "block order");
    density->add_option("--grid", density_args.grid, "evaluation grid lo:hi:n");

    MomentsArgs moments_args;
    CLI::App* moments = app.add_subcommand("moments", "exact limit moments (rational arithmetic)");
    moments->add_option("--ensemble", moments_args.ensemble, "gue, goe or mixed");
    moments->add_option("--m", moments_args.m, "block order");
    moments->add_option("--k-max", moments_args.k_max, "largest moment order");
    moments->add_option("--word", moments_args.word, "trace word nu_1,...,nu_r (mixed)");

    SampleArgs sample_args;
    CLI::App* sample = app.add_subcommand("sample", "draw one matrix and emit spectrum or band");
    sample->add_option("--spec", sample_args.spec_file, "ensemble spec JSON file");
    sample->add_option("--N", sample_args.N, "number of block rows");
    sample->add_option("--m", sample_args.m, "block order");
    sample->add_option("--b", sample_args.b, "fixed bandwidth");
    sample->add_option("--power", sample_args.power, "power-law bandwidth exponent");
    sample->add_option("--log", sample_args.logc, "logarithmic bandwidth coefficient");
    sample->add_option("--class", sample_args.symmetry, "transpose_coupled or symmetric_blocks");
    sample->add_option("--dist", sample_args.distribution, "gaussian, rademacher or uniform_scaled");
    sample->add_option("--normalization", sample_args.normalization,
                       "raw, gue_scaled or trace_scaled");
    sample->add_option("--emit", sample_args.emit, "spectrum or matrix");

    std::string experiment_config;
    CLI::App* experiment = app.add_subcommand("experiment", "run a Monte Carlo experiment");
    experiment->add_option("--config", experiment_config, "experiment config JSON file")
        ->required();

    std::string verify_report_path;
    CLI::App* verify = app.add_subcommand("verify", "recompute a report's reference values");
    verify->add_option("--report", verify_report_path, "report JSON file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitUsage;
    }

    try {
        if (density->parsed()) return run_density(global, density_args);
        if (moments->parsed()) return run_moments(global, moments_args);
        if (sample->parsed()) return run_sample(global, sample_args, seed_given);
        if (experiment->parsed()) return run_experiment_cmd(global, experiment_config, seed_given);
        if (verify->parsed()) return run_verify(global, verify_report_path);
        std::fprintf(stderr, "error: no subcommand selected\n");
        return kExitUsage;
    } catch (const UsageError& e) {
        std::fprintf(stderr, "usage error: %s\n", e.what());
        return kExitUsage;
    } catch (const bandlab::SizeLimitError& e) {
        std::fprintf(stderr, "size limit: %s\n", e.what());
        return kExitSizeLimit;
    } catch (const bandlab::DegreeLimitError& e) {
        std::fprintf(stderr, "size limit: %s\n", e.what());
        return kExitSizeLimit;
    } catch (const bandlab::MemoryBudgetError& e) {
        std::fprintf(stderr, "resource limit: %s\n", e.what());
        return kExitResources;
    } catch (const std::bad_alloc&) {
        std::fprintf(stderr, "resource limit: allocation failed\n");
        return kExitResources;
    } catch (const bandlab::SchemaError& e) {
        std::fprintf(stderr, "schema error: %s\n", e.what());
        return kExitSchema;
    } catch (const nlohmann::json::exception& e) {
        std::fprintf(stderr, "schema error: %s\n", e.what());
        return kExitSchema;
    } catch (const bandlab::SolverError& e) {
        std::fprintf(stderr, "solver failure: %s\n", e.what());
        return kExitAssertion;
    } catch (const AssertionFailure& e) {
        std::fprintf(stderr, "assertion failure: %s\n", e.what());
        return kExitAssertion;
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
}
