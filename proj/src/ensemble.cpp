#include "bandlab/ensemble.hpp"

#include <cmath>
#include <stdexcept>

#include "bandlab/errors.hpp"
#include "bandlab/rng.hpp"

namespace bandlab {

namespace {

constexpr double kRoot2 = 1.4142135623730950488;

double draw(EntryDistribution dist, std::uint64_t key) {
    switch (dist) {
        case EntryDistribution::Gaussian: return rng::gaussian(key);
        case EntryDistribution::Rademacher: return rng::rademacher(key);
        case EntryDistribution::UniformScaled: return rng::uniform_scaled(key);
    }
    throw std::logic_error("unknown entry distribution");
}

}  // namespace

int BandwidthSchedule::resolve(int N) const {
    double value = 0.0;
    switch (kind) {
        case Kind::PowerLaw: value = std::pow(static_cast<double>(N), param); break;
        case Kind::Logarithmic: value = param * std::log(static_cast<double>(N)); break;
        case Kind::Fixed: value = param; break;
    }
    int b = static_cast<int>(std::ceil(value));
    if (b < 1) b = 1;
    if (b > N - 1) b = N - 1;
    return b;
}

bool BandwidthSchedule::almost_sure() const {
    return kind == Kind::PowerLaw && param > 0.5;
}

int resolve_bandwidth(const BandwidthSchedule& schedule, int N) {
    return schedule.resolve(N);
}

void EnsembleSpec::validate() const {
    if (N < 2) throw SchemaError("ensemble needs N >= 2");
    if (m < 1 || m > kMaxEnsembleBlockOrder)
        throw SchemaError("block order m outside [1, " +
                          std::to_string(kMaxEnsembleBlockOrder) + "]");
    switch (bandwidth.kind) {
        case BandwidthSchedule::Kind::PowerLaw:
            if (!(bandwidth.param > 0.0 && bandwidth.param < 1.0))
                throw SchemaError("power-law bandwidth exponent must lie in (0, 1)");
            break;
        case BandwidthSchedule::Kind::Logarithmic:
            if (!(bandwidth.param > 0.0))
                throw SchemaError("logarithmic bandwidth factor must be positive");
            break;
        case BandwidthSchedule::Kind::Fixed:
            if (!(bandwidth.param >= 1.0))
                throw SchemaError("fixed bandwidth must be >= 1");
            break;
    }
}

double block_entry(const EnsembleSpec& spec, int s, int u, int v) {
    const bool symmetric_block =
        spec.symmetry == SymmetryClass::SymmetricBlocks || s == 0;
    int cu = u, cv = v;
    if (symmetric_block && cu > cv) std::swap(cu, cv);
    const std::uint64_t key = rng::key_hash(spec.seed, static_cast<std::uint64_t>(s),
                                            static_cast<std::uint64_t>(cu),
                                            static_cast<std::uint64_t>(cv));
    double value = draw(spec.distribution, key);
    if (spec.symmetry == SymmetryClass::SymmetricBlocks && u == v) value *= kRoot2;
    return value;
}

std::vector<std::vector<double>> sample_block_family(const EnsembleSpec& spec) {
    spec.validate();
    const int b = spec.bandwidth_at_n();
    std::vector<std::vector<double>> blocks(b + 1);
    for (int s = 0; s <= b; ++s) {
        blocks[s].resize(static_cast<std::size_t>(spec.m) * spec.m);
        for (int u = 0; u < spec.m; ++u)
            for (int v = 0; v < spec.m; ++v)
                blocks[s][static_cast<std::size_t>(u) * spec.m + v] = block_entry(spec, s, u, v);
    }
    return blocks;
}

SymmetricBandMatrix build_matrix(const EnsembleSpec& spec, Normalization normalization,
                                 std::size_t max_bytes) {
    spec.validate();
    const int b = spec.bandwidth_at_n();
    const int n = spec.N * spec.m;
    const int h = std::min(spec.m * b + spec.m - 1, n - 1);
    const std::size_t need = static_cast<std::size_t>(n) * (h + 1) * sizeof(double);
    if (need > max_bytes)
        throw MemoryBudgetError("band storage needs " + std::to_string(need) +
                                " bytes, budget " + std::to_string(max_bytes));

    double factor = 1.0;
    if (normalization == Normalization::GueScaled)
        factor = 1.0 / std::sqrt(2.0 * spec.m * b);
    else if (normalization == Normalization::TraceScaled)
        factor = 1.0 / std::sqrt(2.0 * b);

    SymmetricBandMatrix a(n, h);
    for (int c = 0; c < n; ++c) {
        const int top = std::min(c + h, n - 1);
        const int bj = c / spec.m;
        for (int r = c; r <= top; ++r) {
            const int bi = r / spec.m;
            const int s = bi - bj;
            if (s > b) break;  // rows below this block offset stay outside the block band
            a.lower(r, c) = factor * block_entry(spec, s, r % spec.m, c % spec.m);
        }
    }
    return a;
}

double entry_distribution_moment(EntryDistribution dist, int k) {
    if (k < 0 || k > 8) throw SizeLimitError("entry moment order above cap 8");
    if (k % 2 != 0) return 0.0;
    switch (dist) {
        case EntryDistribution::Gaussian: {
            double r = 1.0;
            for (int v = k - 1; v > 1; v -= 2) r *= v;
            return r;
        }
        case EntryDistribution::Rademacher: return 1.0;
        case EntryDistribution::UniformScaled:
            return std::pow(3.0, k / 2) / (k + 1);
    }
    throw std::logic_error("unknown entry distribution");
}

std::string to_string(SymmetryClass c) {
    return c == SymmetryClass::TransposeCoupled ? "transpose_coupled" : "symmetric_blocks";
}

std::string to_string(EntryDistribution d) {
    switch (d) {
        case EntryDistribution::Gaussian: return "gaussian";
        case EntryDistribution::Rademacher: return "rademacher";
        case EntryDistribution::UniformScaled: return "uniform_scaled";
    }
    return "?";
}

std::string to_string(Normalization n) {
    switch (n) {
        case Normalization::Raw: return "raw";
        case Normalization::GueScaled: return "gue_scaled";
        case Normalization::TraceScaled: return "trace_scaled";
    }
    return "?";
}

std::string to_string(BandwidthSchedule::Kind k) {
    switch (k) {
        case BandwidthSchedule::Kind::PowerLaw: return "power_law";
        case BandwidthSchedule::Kind::Logarithmic: return "logarithmic";
        case BandwidthSchedule::Kind::Fixed: return "fixed";
    }
    return "?";
}

SymmetryClass symmetry_class_from_string(const std::string& s) {
    if (s == "transpose_coupled") return SymmetryClass::TransposeCoupled;
    if (s == "symmetric_blocks") return SymmetryClass::SymmetricBlocks;
    throw SchemaError("unknown symmetry class: " + s);
}

EntryDistribution distribution_from_string(const std::string& s) {
    if (s == "gaussian") return EntryDistribution::Gaussian;
    if (s == "rademacher") return EntryDistribution::Rademacher;
    if (s == "uniform_scaled") return EntryDistribution::UniformScaled;
    throw SchemaError("unknown entry distribution: " + s);
}

Normalization normalization_from_string(const std::string& s) {
    if (s == "raw") return Normalization::Raw;
    if (s == "gue_scaled") return Normalization::GueScaled;
    if (s == "trace_scaled") return Normalization::TraceScaled;
    throw SchemaError("unknown normalization: " + s);
}

BandwidthSchedule::Kind schedule_kind_from_string(const std::string& s) {
    if (s == "power_law") return BandwidthSchedule::Kind::PowerLaw;
    if (s == "logarithmic") return BandwidthSchedule::Kind::Logarithmic;
    if (s == "fixed") return BandwidthSchedule::Kind::Fixed;
    throw SchemaError("unknown bandwidth schedule kind: " + s);
}

void to_json(nlohmann::json& j, const BandwidthSchedule& s) {
    j = nlohmann::json{{"kind", to_string(s.kind)}, {"param", s.param}};
}

void from_json(const nlohmann::json& j, BandwidthSchedule& s) {
    if (!j.contains("kind") || !j.contains("param"))
        throw SchemaError("bandwidth schedule needs fields kind and param");
    s.kind = schedule_kind_from_string(j.at("kind").get<std::string>());
    s.param = j.at("param").get<double>();
}

void to_json(nlohmann::json& j, const EnsembleSpec& s) {
    j = nlohmann::json{{"N", s.N},
                       {"m", s.m},
                       {"bandwidth", s.bandwidth},
                       {"symmetry_class", to_string(s.symmetry)},
                       {"distribution", to_string(s.distribution)},
                       {"seed", s.seed}};
}

void from_json(const nlohmann::json& j, EnsembleSpec& s) {
    for (const char* field : {"N", "m", "bandwidth", "symmetry_class", "distribution", "seed"})
        if (!j.contains(field))
            throw SchemaError(std::string("ensemble spec missing field ") + field);
    s.N = j.at("N").get<int>();
    s.m = j.at("m").get<int>();
    s.bandwidth = j.at("bandwidth").get<BandwidthSchedule>();
    s.symmetry = symmetry_class_from_string(j.at("symmetry_class").get<std::string>());
    s.distribution = distribution_from_string(j.at("distribution").get<std::string>());
    s.seed = j.at("seed").get<std::uint64_t>();
    s.validate();
}

}  // namespace bandlab
