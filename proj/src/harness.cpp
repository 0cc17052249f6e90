#include "bandlab/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <memory>
#include <mutex>
#include <thread>
#include <utility>

#include "bandlab/canonical_json.hpp"
#include "bandlab/density.hpp"
#include "bandlab/eigensolver.hpp"
#include "bandlab/errors.hpp"
#include "bandlab/pairings.hpp"
#include "bandlab/rng.hpp"

namespace bandlab {

namespace {

using nlohmann::json;

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

MeanSe mean_se(const std::vector<double>& values) {
    MeanSe out;
    const std::size_t n = values.size();
    if (n == 0) return out;
    double sum = 0.0;
    for (double v : values) sum += v;
    out.mean = sum / static_cast<double>(n);
    if (n < 2) return out;
    double ss = 0.0;
    for (double v : values) {
        const double d = v - out.mean;
        ss += d * d;
    }
    out.se = std::sqrt(ss / static_cast<double>(n - 1) / static_cast<double>(n));
    return out;
}

double median_of(std::vector<double> values) {
    std::sort(values.begin(), values.end());
    const std::size_t n = values.size();
    if (n == 0) return 0.0;
    if (n % 2 == 1) return values[n / 2];
    return 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

json z_score(double diff, double se) {
    if (se > 0.0) return json(diff / se);
    if (diff == 0.0) return json(0.0);
    return json();  // null: undefined z for a degenerate (zero-variance) sample
}

struct Histogram {
    std::vector<long long> counts;
    long long inside = 0;
    long long total = 0;
};

Histogram histogram_of(const std::vector<double>& values, const HistogramSpec& spec) {
    Histogram h;
    h.counts.assign(spec.bins, 0);
    h.total = static_cast<long long>(values.size());
    const double width = (spec.hi - spec.lo) / spec.bins;
    for (double x : values) {
        if (x < spec.lo || x > spec.hi) continue;
        int idx = static_cast<int>((x - spec.lo) / width);
        idx = std::min(idx, spec.bins - 1);
        ++h.counts[idx];
        ++h.inside;
    }
    return h;
}

json density_of(const Histogram& h, const HistogramSpec& spec) {
    const double width = (spec.hi - spec.lo) / spec.bins;
    json out = json::array();
    for (long long c : h.counts)
        out.push_back(h.total > 0 ? static_cast<double>(c) / (static_cast<double>(h.total) * width)
                                  : 0.0);
    return out;
}

template <typename T>
T require_field(const json& j, const char* key) {
    if (!j.contains(key)) throw SchemaError(std::string("missing required field: ") + key);
    try {
        return j.at(key).get<T>();
    } catch (const json::exception& e) {
        throw SchemaError(std::string("bad field '") + key + "': " + e.what());
    }
}

EnsembleClass class_of(SymmetryClass symmetry) {
    return symmetry == SymmetryClass::TransposeCoupled ? EnsembleClass::Gue : EnsembleClass::Goe;
}

std::string class_name(EnsembleClass cls) {
    return cls == EnsembleClass::Gue ? "gue" : "goe";
}

Rational reference_moment(EnsembleClass cls, int m, int k) {
    return cls == EnsembleClass::Gue ? gue_moment(m, k) : goe_moment(m, k);
}

// deterministic id for the direct-oracle pool, distinct from sample seeds
constexpr std::uint64_t kDirectPoolStream = 4;

std::uint64_t kind_id(ExperimentKind kind) {
    switch (kind) {
        case ExperimentKind::Esd: return 1;
        case ExperimentKind::Moments: return 2;
        case ExperimentKind::MixedTraces: return 3;
    }
    return 0;
}

struct SampleResult {
    std::vector<double> eigenvalues;
    SolverDiagnostics diagnostics;
};

struct SolverTotals {
    long long ql_sweeps = 0;
    double max_trace_residual = 0.0;
    double max_frobenius_residual = 0.0;

    void absorb(const SolverDiagnostics& d) {
        ql_sweeps += d.ql_sweeps;
        max_trace_residual = std::max(max_trace_residual, d.trace_residual);
        max_frobenius_residual = std::max(max_frobenius_residual, d.frobenius_residual);
    }
};

std::vector<SampleResult> draw_samples(const ExperimentConfig& config, int N,
                                       Normalization normalization, SolverTotals& totals) {
    std::vector<SampleResult> results(config.samples_per_n);
    run_parallel(config.samples_per_n, config.threads, [&](int i) {
        EnsembleSpec spec;
        spec.N = N;
        spec.m = config.m;
        spec.bandwidth = config.bandwidth;
        spec.symmetry = config.symmetry;
        spec.distribution = config.distribution;
        spec.seed = derive_sample_seed(config.master_seed, config.kind, N, i);
        const SymmetricBandMatrix matrix = build_matrix(spec, normalization);
        SpectralSample sample = solve_spectrum(matrix, "");
        results[i].eigenvalues = std::move(sample.eigenvalues);
        results[i].diagnostics = sample.diagnostics;
    });
    for (const SampleResult& r : results) totals.absorb(r.diagnostics);
    return results;
}

constexpr int kEsdMomentOrders = 4;

json run_esd(const ExperimentConfig& config, SolverTotals& totals) {
    const ReferenceSource ref = resolve_reference(config);
    const EnsembleClass cls = class_of(config.symmetry);
    const HistogramSpec& hist = config.histogram;

    std::unique_ptr<DensityModel> model;
    std::vector<double> direct_pool;
    if (ref == ReferenceSource::AnalyticDensity) {
        model = std::make_unique<DensityModel>(cls, config.m);
    } else {
        direct_pool = sample_direct_goe(config.m, config.direct_sampler_count,
                                        rng::key_hash(config.master_seed, kDirectPoolStream));
    }
    auto reference_cdf = [&](const std::vector<double>& sorted) {
        if (model) {
            const double total = model->total_mass();
            return ks_distance(sorted, [&](double x) { return model->cdf(x) / total; });
        }
        return two_sample_ks(sorted, direct_pool);
    };

    const int n_max = *std::max_element(config.n_values.begin(), config.n_values.end());
    json per_n = json::array();
    std::vector<double> ks_medians;
    for (int N : config.n_values) {
        std::vector<SampleResult> samples = draw_samples(config, N, Normalization::GueScaled, totals);

        std::vector<double> pooled;
        std::vector<double> ks_values;
        std::vector<std::vector<double>> sample_moments;
        for (const SampleResult& s : samples) {
            pooled.insert(pooled.end(), s.eigenvalues.begin(), s.eigenvalues.end());
            ks_values.push_back(reference_cdf(s.eigenvalues));
            sample_moments.push_back(empirical_moments(s.eigenvalues, kEsdMomentOrders));
        }
        std::sort(pooled.begin(), pooled.end());
        const double pooled_ks = reference_cdf(pooled);
        const MeanSe ks_stats = mean_se(ks_values);
        const double ks_median = median_of(ks_values);
        ks_medians.push_back(ks_median);

        json moment_mean = json::array();
        json moment_se = json::array();
        for (int k = 0; k < kEsdMomentOrders; ++k) {
            std::vector<double> column;
            for (const auto& row : sample_moments) column.push_back(row[k]);
            const MeanSe stats = mean_se(column);
            moment_mean.push_back(stats.mean);
            moment_se.push_back(stats.se);
        }

        const Histogram h = histogram_of(pooled, hist);
        const bool gated = config.ks_gate.has_value() && N == n_max;
        const bool pass = !gated || pooled_ks <= *config.ks_gate;

        json entry;
        entry["N"] = N;
        entry["bandwidth"] = config.bandwidth.resolve(N);
        entry["samples"] = config.samples_per_n;
        entry["pooled_ks"] = pooled_ks;
        entry["ks_mean"] = ks_stats.mean;
        entry["ks_se"] = ks_stats.se;
        entry["ks_median"] = ks_median;
        entry["moment_mean"] = moment_mean;
        entry["moment_se"] = moment_se;
        entry["histogram_counts"] = h.counts;
        entry["empirical_density"] = density_of(h, hist);
        entry["outside_mass"] =
            h.total > 0
                ? static_cast<double>(h.total - h.inside) / static_cast<double>(h.total)
                : 0.0;
        entry["pass"] = pass;
        per_n.push_back(std::move(entry));
    }

    json reference;
    reference["source"] = to_string(ref);
    reference["class"] = class_name(cls);
    if (model) {
        const double total = model->total_mass();
        const double width = (hist.hi - hist.lo) / hist.bins;
        json density = json::array();
        for (int b = 0; b < hist.bins; ++b) {
            const double l = hist.lo + b * width;
            const double r = l + width;
            density.push_back((model->cdf(r) - model->cdf(l)) / (width * total));
        }
        json moments = json::array();
        for (int k = 1; k <= kEsdMomentOrders; ++k) moments.push_back(model->moment(k) / total);
        reference["histogram_density"] = std::move(density);
        reference["moments"] = std::move(moments);
        reference["total_mass"] = total;
        reference["outside_mass"] = 1.0 - (model->cdf(hist.hi) - model->cdf(hist.lo)) / total;
    } else {
        const Histogram h = histogram_of(direct_pool, hist);
        reference["histogram_density"] = density_of(h, hist);
        json moments = json::array();
        for (double v : empirical_moments(direct_pool, kEsdMomentOrders)) moments.push_back(v);
        reference["moments"] = std::move(moments);
        reference["outside_mass"] =
            h.total > 0
                ? static_cast<double>(h.total - h.inside) / static_cast<double>(h.total)
                : 0.0;
        reference["pool_size"] = static_cast<long long>(direct_pool.size());
    }

    json trend;
    trend["ks_medians"] = ks_medians;
    if (ks_medians.size() < 2) {
        trend["nonincreasing"] = nullptr;  // not applicable for a single N
    } else {
        bool nonincreasing = true;
        for (std::size_t i = 1; i < ks_medians.size(); ++i)
            if (ks_medians[i] > ks_medians[i - 1]) nonincreasing = false;
        trend["nonincreasing"] = nonincreasing;
    }

    json results;
    results["per_n"] = std::move(per_n);
    results["reference"] = std::move(reference);
    results["trend"] = std::move(trend);
    return results;
}

json run_moments(const ExperimentConfig& config, SolverTotals& totals) {
    const EnsembleClass cls = class_of(config.symmetry);

    json per_n = json::array();
    for (int N : config.n_values) {
        std::vector<SampleResult> samples = draw_samples(config, N, Normalization::GueScaled, totals);
        std::vector<std::vector<double>> sample_moments;
        for (const SampleResult& s : samples)
            sample_moments.push_back(empirical_moments(s.eigenvalues, config.k_max));

        json entries = json::array();
        for (int k = 1; k <= config.k_max; ++k) {
            std::vector<double> column;
            for (const auto& row : sample_moments) column.push_back(row[k - 1]);
            const MeanSe stats = mean_se(column);
            const Rational exact = reference_moment(cls, config.m, k);
            const double exact_d = exact.to_double();
            const double diff = stats.mean - exact_d;
            json entry;
            entry["k"] = k;
            entry["mean"] = stats.mean;
            entry["se"] = stats.se;
            entry["exact"] = exact_d;
            entry["exact_rational"] = exact.to_string();
            entry["z"] = z_score(diff, stats.se);
            entry["pass"] = std::fabs(diff) <= 3.0 * stats.se + config.bias_budget;
            entries.push_back(std::move(entry));
        }
        json row;
        row["N"] = N;
        row["bandwidth"] = config.bandwidth.resolve(N);
        row["samples"] = config.samples_per_n;
        row["moments"] = std::move(entries);
        per_n.push_back(std::move(row));
    }

    json reference;
    reference["source"] = to_string(ReferenceSource::CombinatorialMoments);
    reference["class"] = class_name(cls);

    json results;
    results["per_n"] = std::move(per_n);
    results["reference"] = std::move(reference);
    return results;
}

json run_mixed(const ExperimentConfig& config, SolverTotals& totals) {
    json per_n = json::array();
    for (int N : config.n_values) {
        std::vector<SampleResult> samples =
            draw_samples(config, N, Normalization::TraceScaled, totals);

        json entries = json::array();
        for (const std::vector<int>& nu : config.words) {
            TraceWord word{nu};
            const int max_power = static_cast<int>(nu.size());
            std::vector<double> stats;
            for (const SampleResult& s : samples) {
                // power sums tr Y^i from the spectrum, i = 1..r
                std::vector<double> power_sums(max_power, 0.0);
                for (double lambda : s.eigenvalues) {
                    double p = 1.0;
                    for (int i = 0; i < max_power; ++i) {
                        p *= lambda;
                        power_sums[i] += p;
                    }
                }
                double value = 1.0;
                for (int i = 0; i < max_power; ++i)
                    for (int rep = 0; rep < nu[i]; ++rep) value *= power_sums[i];
                value /= std::pow(static_cast<double>(N), word.order());
                stats.push_back(value);
            }
            const MeanSe agg = mean_se(stats);
            const long long exact = mixed_trace_gue(config.m, word);
            const double exact_d = static_cast<double>(exact);
            const double diff = agg.mean - exact_d;
            const double budget = config.relative_budget * std::max(1.0, std::fabs(exact_d));
            json entry;
            entry["word"] = nu;
            entry["letters"] = word.letter_count();
            entry["mean"] = agg.mean;
            entry["se"] = agg.se;
            entry["exact"] = exact_d;
            entry["exact_integer"] = std::to_string(exact);
            entry["z"] = z_score(diff, agg.se);
            entry["pass"] = std::fabs(diff) <= 3.0 * agg.se + budget;
            entries.push_back(std::move(entry));
        }
        json row;
        row["N"] = N;
        row["bandwidth"] = config.bandwidth.resolve(N);
        row["samples"] = config.samples_per_n;
        row["words"] = std::move(entries);
        per_n.push_back(std::move(row));
    }

    json reference;
    reference["source"] = to_string(ReferenceSource::CombinatorialMoments);
    reference["class"] = class_name(EnsembleClass::Gue);

    json results;
    results["per_n"] = std::move(per_n);
    results["reference"] = std::move(reference);
    return results;
}

}  // namespace

void ExperimentConfig::validate() const {
    if (m < 1 || m > kMaxEnsembleBlockOrder)
        throw SchemaError("block order m out of range [1, 64]");
    if (n_values.empty()) throw SchemaError("n_values must be nonempty");
    for (int N : n_values)
        if (N < 2) throw SchemaError("every N must be at least 2");
    if (samples_per_n < 2) throw SchemaError("samples_per_n must be at least 2 (standard errors)");
    if (threads < 1) throw SchemaError("threads must be at least 1");

    const ReferenceSource ref = resolve_reference(*this);
    switch (kind) {
        case ExperimentKind::Esd:
            if (ref != ReferenceSource::AnalyticDensity &&
                ref != ReferenceSource::DirectGoeSampler)
                throw SchemaError("esd experiments need an analytic-density or direct-sampler reference");
            if (histogram.bins < 1 || !(histogram.lo < histogram.hi))
                throw SchemaError("histogram must have bins >= 1 and lo < hi");
            if (ref == ReferenceSource::DirectGoeSampler) {
                if (symmetry != SymmetryClass::SymmetricBlocks)
                    throw SchemaError("the direct GOE oracle applies to the symmetric-blocks class");
                if (direct_sampler_count < 2)
                    throw SchemaError("direct_sampler_count must be at least 2");
            }
            break;
        case ExperimentKind::Moments:
            if (ref != ReferenceSource::CombinatorialMoments)
                throw SchemaError("moment experiments use the combinatorial reference");
            if (k_max < 1 || k_max > kMaxMomentOrder)
                throw SchemaError("k_max out of range [1, 16]");
            break;
        case ExperimentKind::MixedTraces:
            if (ref != ReferenceSource::CombinatorialMoments)
                throw SchemaError("mixed-trace experiments use the combinatorial reference");
            if (symmetry != SymmetryClass::TransposeCoupled)
                throw SchemaError("mixed-trace statistics are defined for the transpose-coupled class");
            if (words.empty()) throw SchemaError("words must be nonempty");
            for (const auto& nu : words) {
                if (nu.empty()) throw SchemaError("every trace word must be nonempty");
                TraceWord word{nu};
                int positive = 0;
                for (int v : nu) {
                    if (v < 0) throw SchemaError("trace-word multiplicities must be nonnegative");
                    positive += v;
                }
                if (positive == 0) throw SchemaError("every trace word needs a positive multiplicity");
                if (word.letter_count() > kMaxMixedTraceLetters)
                    throw SchemaError("trace word has more than 12 letters");
            }
            break;
    }
}

std::string to_string(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Esd: return "esd";
        case ExperimentKind::Moments: return "moments";
        case ExperimentKind::MixedTraces: return "mixed_traces";
    }
    throw SchemaError("unknown experiment kind");
}

std::string to_string(ReferenceSource s) {
    switch (s) {
        case ReferenceSource::Auto: return "auto";
        case ReferenceSource::AnalyticDensity: return "analytic_density";
        case ReferenceSource::CombinatorialMoments: return "combinatorial_moments";
        case ReferenceSource::DirectGoeSampler: return "direct_goe_sampler";
    }
    throw SchemaError("unknown reference source");
}

ExperimentKind experiment_kind_from_string(const std::string& s) {
    if (s == "esd") return ExperimentKind::Esd;
    if (s == "moments") return ExperimentKind::Moments;
    if (s == "mixed_traces") return ExperimentKind::MixedTraces;
    throw SchemaError("unknown experiment kind: " + s);
}

ReferenceSource reference_source_from_string(const std::string& s) {
    if (s == "auto") return ReferenceSource::Auto;
    if (s == "analytic_density") return ReferenceSource::AnalyticDensity;
    if (s == "combinatorial_moments") return ReferenceSource::CombinatorialMoments;
    if (s == "direct_goe_sampler") return ReferenceSource::DirectGoeSampler;
    throw SchemaError("unknown reference source: " + s);
}

void to_json(json& j, const HistogramSpec& h) {
    j = json{{"lo", h.lo}, {"hi", h.hi}, {"bins", h.bins}};
}

void from_json(const json& j, HistogramSpec& h) {
    h.lo = require_field<double>(j, "lo");
    h.hi = require_field<double>(j, "hi");
    h.bins = require_field<int>(j, "bins");
}

void to_json(json& j, const ExperimentConfig& c) {
    j = json{};
    j["kind"] = to_string(c.kind);
    j["m"] = c.m;
    j["bandwidth"] = c.bandwidth;
    j["symmetry_class"] = to_string(c.symmetry);
    j["distribution"] = to_string(c.distribution);
    j["n_values"] = c.n_values;
    j["samples_per_n"] = c.samples_per_n;
    j["master_seed"] = c.master_seed;
    j["reference"] = to_string(resolve_reference(c));
    switch (c.kind) {
        case ExperimentKind::Esd:
            j["histogram"] = c.histogram;
            if (resolve_reference(c) == ReferenceSource::DirectGoeSampler)
                j["direct_sampler_count"] = c.direct_sampler_count;
            if (c.ks_gate) j["ks_gate"] = *c.ks_gate;
            break;
        case ExperimentKind::Moments:
            j["k_max"] = c.k_max;
            j["bias_budget"] = c.bias_budget;
            break;
        case ExperimentKind::MixedTraces:
            j["words"] = c.words;
            j["relative_budget"] = c.relative_budget;
            break;
    }
}

void from_json(const json& j, ExperimentConfig& c) {
    c = ExperimentConfig{};
    c.kind = experiment_kind_from_string(require_field<std::string>(j, "kind"));
    c.m = require_field<int>(j, "m");
    if (!j.contains("bandwidth")) throw SchemaError("missing required field: bandwidth");
    c.bandwidth = j.at("bandwidth").get<BandwidthSchedule>();
    c.symmetry = symmetry_class_from_string(require_field<std::string>(j, "symmetry_class"));
    c.distribution = distribution_from_string(require_field<std::string>(j, "distribution"));
    c.n_values = require_field<std::vector<int>>(j, "n_values");
    c.samples_per_n = require_field<int>(j, "samples_per_n");
    c.master_seed = require_field<std::uint64_t>(j, "master_seed");
    if (j.contains("reference"))
        c.reference = reference_source_from_string(j.at("reference").get<std::string>());
    if (j.contains("histogram")) c.histogram = j.at("histogram").get<HistogramSpec>();
    if (j.contains("k_max")) c.k_max = j.at("k_max").get<int>();
    if (j.contains("words")) c.words = j.at("words").get<std::vector<std::vector<int>>>();
    if (j.contains("direct_sampler_count"))
        c.direct_sampler_count = j.at("direct_sampler_count").get<int>();
    if (j.contains("ks_gate")) c.ks_gate = j.at("ks_gate").get<double>();
    if (j.contains("bias_budget")) c.bias_budget = j.at("bias_budget").get<double>();
    if (j.contains("relative_budget")) c.relative_budget = j.at("relative_budget").get<double>();
}

ReferenceSource resolve_reference(const ExperimentConfig& config) {
    if (config.reference != ReferenceSource::Auto) return config.reference;
    return config.kind == ExperimentKind::Esd ? ReferenceSource::AnalyticDensity
                                              : ReferenceSource::CombinatorialMoments;
}

std::uint64_t derive_sample_seed(std::uint64_t master_seed, ExperimentKind kind, int N,
                                 int sample_index) {
    return rng::key_hash(master_seed, kind_id(kind), static_cast<std::uint64_t>(N),
                    static_cast<std::uint64_t>(sample_index));
}

void run_parallel(int count, int threads, const std::function<void(int)>& fn) {
    if (count <= 0) return;
    const int workers = std::min(std::max(threads, 1), count);
    if (workers == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::mutex error_mutex;
    std::exception_ptr first_error;
    auto body = [&]() {
        while (true) {
            const int i = next.fetch_add(1);
            if (i >= count) return;
            try {
                fn(i);
            } catch (...) {
                std::lock_guard<std::mutex> lock(error_mutex);
                if (!first_error) first_error = std::current_exception();
            }
        }
    };
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) pool.emplace_back(body);
    for (std::thread& t : pool) t.join();
    if (first_error) std::rethrow_exception(first_error);
}

std::vector<double> sample_direct_goe(int m, int count, std::uint64_t seed) {
    if (m < 1 || m > kMaxEnsembleBlockOrder)
        throw SizeLimitError("direct GOE sampler: block order out of range [1, 64]");
    if (count < 1) throw SizeLimitError("direct GOE sampler: count must be positive");

    const double root_two = std::sqrt(2.0);
    const double inv_root_m = 1.0 / std::sqrt(static_cast<double>(m));
    std::vector<double> pooled;
    pooled.reserve(static_cast<std::size_t>(m) * count);
    std::vector<double> a(static_cast<std::size_t>(m) * m);
    for (int i = 0; i < count; ++i) {
        for (int u = 0; u < m; ++u)
            for (int v = u; v < m; ++v) {
                double g = rng::gaussian(rng::key_hash(seed, static_cast<std::uint64_t>(i),
                                             static_cast<std::uint64_t>(u),
                                             static_cast<std::uint64_t>(v)));
                if (u == v) g *= root_two;
                a[u * m + v] = a[v * m + u] = g * inv_root_m;
            }
        std::vector<double> eigs = eigenvalues_dense(a, m);
        pooled.insert(pooled.end(), eigs.begin(), eigs.end());
    }
    std::sort(pooled.begin(), pooled.end());
    return pooled;
}

nlohmann::json run_experiment(const ExperimentConfig& config) {
    config.validate();

    json report;
    report["schema_version"] = kReportSchemaVersion;
    report["kind"] = to_string(config.kind);
    report["config"] = config;

    SolverTotals totals;
    switch (config.kind) {
        case ExperimentKind::Esd:
            report["results"] = run_esd(config, totals);
            break;
        case ExperimentKind::Moments:
            report["results"] = run_moments(config, totals);
            break;
        case ExperimentKind::MixedTraces:
            report["results"] = run_mixed(config, totals);
            break;
    }
    report["solver"] = json{{"ql_sweeps_total", totals.ql_sweeps},
                            {"max_trace_residual", totals.max_trace_residual},
                            {"max_frobenius_residual", totals.max_frobenius_residual}};
    return report;
}

void persist_report(const nlohmann::json& report, const std::string& path) {
    write_text_file(path, canonical_dump(report));
}

nlohmann::json load_report(const std::string& path) {
    json report;
    try {
        report = json::parse(read_text_file(path));
    } catch (const json::parse_error& e) {
        throw SchemaError(std::string("report is not valid JSON: ") + e.what());
    }
    if (!report.contains("schema_version"))
        throw SchemaError("report has no schema_version field");
    const int found = report.at("schema_version").get<int>();
    if (found != kReportSchemaVersion)
        throw SchemaError("report schema version mismatch: expected " +
                          std::to_string(kReportSchemaVersion) + ", found " +
                          std::to_string(found));
    return report;
}

std::vector<std::string> verify_report(const nlohmann::json& report) {
    std::vector<std::string> diffs;
    auto complain = [&diffs](const std::string& msg) { diffs.push_back(msg); };

    if (!report.contains("schema_version") ||
        report.at("schema_version").get<int>() != kReportSchemaVersion) {
        complain("schema_version missing or unsupported");
        return diffs;
    }
    if (!report.contains("config") || !report.contains("kind") || !report.contains("results")) {
        complain("report lacks config/kind/results sections");
        return diffs;
    }

    ExperimentConfig config;
    try {
        config = report.at("config").get<ExperimentConfig>();
    } catch (const std::exception& e) {
        complain(std::string("config echo does not parse: ") + e.what());
        return diffs;
    }
    if (report.at("kind").get<std::string>() != to_string(config.kind))
        complain("top-level kind disagrees with the config echo");

    const json& results = report.at("results");
    const EnsembleClass cls = class_of(config.symmetry);

    try {
        switch (config.kind) {
            case ExperimentKind::Moments: {
                for (const json& row : results.at("per_n")) {
                    for (const json& entry : row.at("moments")) {
                        const int k = entry.at("k").get<int>();
                        const Rational exact = reference_moment(cls, config.m, k);
                        if (entry.at("exact_rational").get<std::string>() != exact.to_string())
                            complain("moment k=" + std::to_string(k) +
                                     ": exact_rational mismatch, recomputed " + exact.to_string());
                        if (entry.at("exact").get<double>() != exact.to_double())
                            complain("moment k=" + std::to_string(k) + ": exact value mismatch");
                    }
                }
                break;
            }
            case ExperimentKind::MixedTraces: {
                for (const json& row : results.at("per_n")) {
                    for (const json& entry : row.at("words")) {
                        TraceWord word{entry.at("word").get<std::vector<int>>()};
                        const long long exact = mixed_trace_gue(config.m, word);
                        if (entry.at("exact_integer").get<std::string>() != std::to_string(exact))
                            complain("mixed trace word: exact_integer mismatch, recomputed " +
                                     std::to_string(exact));
                        if (entry.at("exact").get<double>() != static_cast<double>(exact))
                            complain("mixed trace word: exact value mismatch");
                    }
                }
                break;
            }
            case ExperimentKind::Esd: {
                const json& reference = results.at("reference");
                const ReferenceSource ref = resolve_reference(config);
                if (reference.at("source").get<std::string>() != to_string(ref))
                    complain("reference source mismatch");
                if (reference.at("class").get<std::string>() != class_name(cls))
                    complain("reference class mismatch");
                const HistogramSpec& hist = config.histogram;
                json recomputed_density;
                json recomputed_moments = json::array();
                if (ref == ReferenceSource::AnalyticDensity) {
                    DensityModel model(cls, config.m);
                    const double total = model.total_mass();
                    const double width = (hist.hi - hist.lo) / hist.bins;
                    recomputed_density = json::array();
                    for (int b = 0; b < hist.bins; ++b) {
                        const double l = hist.lo + b * width;
                        recomputed_density.push_back(
                            (model.cdf(l + width) - model.cdf(l)) / (width * total));
                    }
                    for (int k = 1; k <= kEsdMomentOrders; ++k)
                        recomputed_moments.push_back(model.moment(k) / total);
                    if (reference.at("total_mass").get<double>() != total)
                        complain("reference total_mass mismatch");
                } else {
                    std::vector<double> pool =
                        sample_direct_goe(config.m, config.direct_sampler_count,
                                          rng::key_hash(config.master_seed, kDirectPoolStream));
                    const Histogram h = histogram_of(pool, hist);
                    recomputed_density = density_of(h, hist);
                    for (double v : empirical_moments(pool, kEsdMomentOrders))
                        recomputed_moments.push_back(v);
                }
                if (reference.at("histogram_density") != recomputed_density)
                    complain("reference histogram_density mismatch");
                if (reference.at("moments") != recomputed_moments)
                    complain("reference moments mismatch");
                break;
            }
        }
    } catch (const json::exception& e) {
        complain(std::string("report structure error: ") + e.what());
    }
    return diffs;
}

namespace {

void scan_hard_failures(const json& node, bool& found) {
    if (node.is_object()) {
        auto it = node.find("pass");
        if (it != node.end() && it->is_boolean() && !it->get<bool>()) found = true;
        for (const auto& item : node.items()) scan_hard_failures(item.value(), found);
    } else if (node.is_array()) {
        for (const json& item : node) scan_hard_failures(item, found);
    }
}

}  // namespace

bool report_has_hard_failures(const nlohmann::json& report) {
    bool found = false;
    scan_hard_failures(report, found);
    return found;
}

}  // namespace bandlab
