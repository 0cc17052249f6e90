#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandlab/ensemble.hpp"

namespace bandlab {

inline constexpr int kReportSchemaVersion = 1;

enum class ExperimentKind { Esd, Moments, MixedTraces };

// Which oracle the empirical statistics are compared against.
enum class ReferenceSource {
    Auto,                  // pick per experiment kind (see resolve_reference)
    AnalyticDensity,       // quadrature density model (ESD)
    CombinatorialMoments,  // exact pairing sums (moments / mixed traces)
    DirectGoeSampler,      // pooled spectra of small GOE matrices (ESD)
};

struct HistogramSpec {
    double lo = -4.0;
    double hi = 4.0;
    int bins = 81;
};

// One Monte Carlo experiment: a matrix-ensemble template, a ladder of sizes N,
// a sample count per size, and the statistic set implied by `kind`.
struct ExperimentConfig {
    ExperimentKind kind = ExperimentKind::Esd;
    int m = 1;
    BandwidthSchedule bandwidth;
    SymmetryClass symmetry = SymmetryClass::TransposeCoupled;
    EntryDistribution distribution = EntryDistribution::Rademacher;
    std::vector<int> n_values;
    int samples_per_n = 10;

    int k_max = 4;                        // moments experiment: orders 1..k_max
    std::vector<std::vector<int>> words;  // mixed traces: nu-vectors, nu[i-1] factors tr Y^i

    ReferenceSource reference = ReferenceSource::Auto;
    HistogramSpec histogram;              // ESD pooling grid
    std::uint64_t master_seed = 1;
    int direct_sampler_count = 20000;     // pool size for the direct GOE oracle

    std::optional<double> ks_gate;        // hard gate on pooled KS at the largest N
    double bias_budget = 0.1;             // finite-N allowance added to 3 SE (moments)
    double relative_budget = 0.1;         // relative allowance (mixed traces)

    // runtime-only knobs, never echoed into reports
    int threads = 1;
    std::string output;

    void validate() const;  // throws SchemaError
};

std::string to_string(ExperimentKind k);
std::string to_string(ReferenceSource s);
ExperimentKind experiment_kind_from_string(const std::string& s);
ReferenceSource reference_source_from_string(const std::string& s);

void to_json(nlohmann::json& j, const HistogramSpec& h);
void from_json(const nlohmann::json& j, HistogramSpec& h);
// Config echo: excludes `threads` and `output` so reports are reproducible
// across worker counts and destinations.
void to_json(nlohmann::json& j, const ExperimentConfig& c);
void from_json(const nlohmann::json& j, ExperimentConfig& c);

ReferenceSource resolve_reference(const ExperimentConfig& config);

// Per-sample seed: (master seed, experiment id, N, sample index) pushed
// through the counter-based mixer, so ladders never share entry streams.
std::uint64_t derive_sample_seed(std::uint64_t master_seed, ExperimentKind kind, int N,
                                 int sample_index);

// Runs fn(0..count-1) on a bounded pool. Callers store results by index, so
// the output is independent of scheduling.
void run_parallel(int count, int threads, const std::function<void(int)>& fn);

// Pooled, sorted eigenvalues of `count` independent m x m GOE matrices H/sqrt(m)
// (Gaussian entries, diagonal variance 2, off-diagonal 1). Their empirical
// density is the finite-order GOE one-point function.
std::vector<double> sample_direct_goe(int m, int count, std::uint64_t seed);

// Runs the configured experiment and returns the report document
// (schema_version, config echo, per-N aggregates, reference values,
// deterministic solver diagnostics). Byte-stable for fixed config.
nlohmann::json run_experiment(const ExperimentConfig& config);

void persist_report(const nlohmann::json& report, const std::string& path);
nlohmann::json load_report(const std::string& path);  // SchemaError on version mismatch

// Recomputes every reference value in the report from the analytic /
// combinatorial modules and returns human-readable mismatch descriptions
// (empty means the report is internally consistent).
std::vector<std::string> verify_report(const nlohmann::json& report);

bool report_has_hard_failures(const nlohmann::json& report);

}  // namespace bandlab
