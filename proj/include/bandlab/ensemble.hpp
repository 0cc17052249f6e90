#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <json.hpp>

#include "bandlab/band_matrix.hpp"

namespace bandlab {

inline constexpr int kMaxEnsembleBlockOrder = 64;
inline constexpr std::size_t kDefaultMatrixBudget = std::size_t(2) << 30;  // 2 GiB

// Coupling between the block at offset s and the block at offset -s.
enum class SymmetryClass {
    TransposeCoupled,  // A_{-s} = A_s^T, all entries unit variance
    SymmetricBlocks,   // every A_s symmetric, diagonal entries variance 2
};

enum class EntryDistribution { Gaussian, Rademacher, UniformScaled };

enum class Normalization {
    Raw,          // T_N itself
    GueScaled,    // T_N / sqrt(2 m b_N)
    TraceScaled,  // T_N / sqrt(2 b_N)
};

struct BandwidthSchedule {
    enum class Kind { PowerLaw, Logarithmic, Fixed };
    Kind kind = Kind::PowerLaw;
    double param = 0.5;

    // ceil of the schedule value, clamped to [1, N-1]
    int resolve(int N) const;

    // true iff sum_N b_N^{-2} converges (controls almost-sure convergence
    // of the spectral statistics; diagnostic only)
    bool almost_sure() const;
};

struct EnsembleSpec {
    int N = 0;
    int m = 1;
    BandwidthSchedule bandwidth;
    SymmetryClass symmetry = SymmetryClass::TransposeCoupled;
    EntryDistribution distribution = EntryDistribution::Rademacher;
    std::uint64_t seed = 0;

    void validate() const;  // throws SchemaError on out-of-range fields
    int bandwidth_at_n() const { return bandwidth.resolve(N); }
};

int resolve_bandwidth(const BandwidthSchedule& schedule, int N);

// Raw entry (u, v) of the block A_s, before any normalization. Pure function
// of (seed, s, u, v); the symmetric couplings are baked in.
double block_entry(const EnsembleSpec& spec, int s, int u, int v);

// Blocks A_0, ..., A_b as m x m row-major matrices.
std::vector<std::vector<double>> sample_block_family(const EnsembleSpec& spec);

// Assembles the N*m x N*m symmetric band matrix with half-bandwidth
// m*b + m - 1. Throws MemoryBudgetError when the band storage would exceed
// max_bytes.
SymmetricBandMatrix build_matrix(const EnsembleSpec& spec, Normalization normalization,
                                 std::size_t max_bytes = kDefaultMatrixBudget);

// Exact k-th moment of one off-diagonal entry (unit variance class), k <= 8.
double entry_distribution_moment(EntryDistribution dist, int k);

std::string to_string(SymmetryClass c);
std::string to_string(EntryDistribution d);
std::string to_string(Normalization n);
std::string to_string(BandwidthSchedule::Kind k);
SymmetryClass symmetry_class_from_string(const std::string& s);
EntryDistribution distribution_from_string(const std::string& s);
Normalization normalization_from_string(const std::string& s);
BandwidthSchedule::Kind schedule_kind_from_string(const std::string& s);

void to_json(nlohmann::json& j, const BandwidthSchedule& s);
void from_json(const nlohmann::json& j, BandwidthSchedule& s);
void to_json(nlohmann::json& j, const EnsembleSpec& s);
void from_json(const nlohmann::json& j, EnsembleSpec& s);

}  // namespace bandlab
