#include "bandlab/pairings.hpp"

#include <array>
#include <cmath>
#include <mutex>
#include <numeric>
#include <stdexcept>
#include <string>

#include "bandlab/errors.hpp"

namespace bandlab {

namespace {

void check_partition_size(int k) {
    if (k < 0 || k > kMaxPairPartitionK)
        throw SizeLimitError("pair partition size k = " + std::to_string(k) +
                             " outside [0, " + std::to_string(kMaxPairPartitionK) + "]");
}

void check_moment_order(int n) {
    if (n < 0 || n > kMaxMomentOrder)
        throw SizeLimitError("moment order n = " + std::to_string(n) + " outside [0, " +
                             std::to_string(kMaxMomentOrder) + "]");
}

void enumerate_rec(int two_k, unsigned used, PairPartition& scratch,
                   const std::function<void(const PairPartition&)>& fn) {
    if (static_cast<int>(scratch.pairs.size()) == scratch.k) {
        fn(scratch);
        return;
    }
    int a = 0;
    while (used & (1u << a)) ++a;
    for (int b = a + 1; b < two_k; ++b) {
        if (used & (1u << b)) continue;
        scratch.pairs.emplace_back(a + 1, b + 1);
        enumerate_rec(two_k, used | (1u << a) | (1u << b), scratch, fn);
        scratch.pairs.pop_back();
    }
}

struct UnionFind16 {
    std::array<int, 16> parent;
    void reset(int n) { std::iota(parent.begin(), parent.begin() + n, 0); }
    int find(int x) {
        while (parent[x] != x) {
            parent[x] = parent[parent[x]];
            x = parent[x];
        }
        return x;
    }
    void unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) parent[b] = a;
    }
    int classes(int n) {
        int c = 0;
        for (int i = 0; i < n; ++i)
            if (find(i) == i) ++c;
        return c;
    }
};

int orbit_count_impl(const PairPartition& p) {
    const int n = 2 * p.k;
    std::array<int, 16> pi;
    for (const auto& [a, b] : p.pairs) {
        pi[a - 1] = b - 1;
        pi[b - 1] = a - 1;
    }
    // gamma . pi with gamma the cyclic shift x -> x+1 (mod 2k); the reverse
    // composition is conjugate to this one, so the orbit count agrees.
    std::array<bool, 16> seen{};
    int orbits = 0;
    for (int start = 0; start < n; ++start) {
        if (seen[start]) continue;
        ++orbits;
        int x = start;
        while (!seen[x]) {
            seen[x] = true;
            x = (pi[x] + 1) % n;
        }
    }
    return orbits;
}

void validate_orbit_convention() {
    for (int k = 1; k <= 4; ++k) {
        PairPartition scratch;
        scratch.k = k;
        scratch.pairs.reserve(k);
        enumerate_rec(2 * k, 0u, scratch, [k](const PairPartition& p) {
            if (is_noncrossing(p) && orbit_count_impl(p) != k + 1)
                throw std::logic_error("orbit composition convention is wrong");
        });
    }
}

__int128 pow128(__int128 base, int exp) {
    __int128 r = 1;
    for (int i = 0; i < exp; ++i) r *= base;
    return r;
}

int word_free_indices(const PairPartition& p, const std::vector<int>& f, int letters) {
    UnionFind16 uf;
    uf.reset(letters);
    for (const auto& [a, b] : p.pairs) {
        uf.unite(a - 1, f[b - 1]);
        uf.unite(b - 1, f[a - 1]);
    }
    return uf.classes(letters);
}

}  // namespace

void for_each_pair_partition(int k, const std::function<void(const PairPartition&)>& fn) {
    check_partition_size(k);
    PairPartition scratch;
    scratch.k = k;
    scratch.pairs.reserve(k);
    enumerate_rec(2 * k, 0u, scratch, fn);
}

std::vector<PairPartition> enumerate_pair_partitions(int k) {
    std::vector<PairPartition> out;
    for_each_pair_partition(k, [&out](const PairPartition& p) { out.push_back(p); });
    return out;
}

bool is_noncrossing(const PairPartition& p) {
    for (std::size_t i = 0; i < p.pairs.size(); ++i)
        for (std::size_t j = i + 1; j < p.pairs.size(); ++j) {
            const auto& [a, b] = p.pairs[i];
            const auto& [c, d] = p.pairs[j];
            if (a < c && c < b && b < d) return false;
        }
    return true;
}

int orbit_count(const PairPartition& p) {
    static std::once_flag flag;
    std::call_once(flag, validate_orbit_convention);
    return orbit_count_impl(p);
}

long long double_factorial(int n) {
    long long r = 1;
    for (int v = n; v > 1; v -= 2) r *= v;
    return r;
}

long long catalan_number(int k) {
    long long r = 1;
    for (int i = 0; i < k; ++i) r = r * 2 * (2 * i + 1) / (i + 2);
    return r;
}

long long catalan_limit_check(int n) {
    if (n % 2 != 0) throw SizeLimitError("catalan check needs an even argument");
    const int k = n / 2;
    check_partition_size(k);
    long long hits = 0;
    for_each_pair_partition(k, [&hits, k](const PairPartition& p) {
        if (orbit_count_impl(p) == k + 1) ++hits;
    });
    return hits;
}

Rational gue_moment(int m, int n) {
    if (m < 1) throw SizeLimitError("block order must be >= 1");
    check_moment_order(n);
    if (n % 2 != 0) return Rational(0);
    const int k = n / 2;
    check_partition_size(k);
    __int128 num = 0;
    for_each_pair_partition(k, [&num, m](const PairPartition& p) {
        num += pow128(m, orbit_count_impl(p) - 1);
    });
    return Rational::from_int128(num, pow128(m, k));
}

int TraceWord::order() const {
    int nu = 0;
    for (int e : exponents) nu += e;
    return nu;
}

int TraceWord::letter_count() const {
    int letters = 0;
    for (std::size_t i = 0; i < exponents.size(); ++i)
        letters += static_cast<int>(i + 1) * exponents[i];
    return letters;
}

std::vector<int> build_f_map(const TraceWord& word) {
    const int letters = word.letter_count();
    std::vector<int> f(letters);
    int base = 0;
    for (std::size_t i = 0; i < word.exponents.size(); ++i) {
        const int len = static_cast<int>(i + 1);
        for (int c = 0; c < word.exponents[i]; ++c) {
            for (int pos = 0; pos < len; ++pos)
                f[base + pos] = (pos + 1 < len) ? base + pos + 1 : base;
            base += len;
        }
    }
    return f;
}

int free_index_count(const PairPartition& p, const TraceWord& word) {
    const int letters = word.letter_count();
    if (letters > kMaxMixedTraceLetters)
        throw SizeLimitError("trace word with " + std::to_string(letters) + " letters above cap " +
                             std::to_string(kMaxMixedTraceLetters));
    if (2 * p.k != letters)
        throw std::invalid_argument("partition size does not match trace word");
    return word_free_indices(p, build_f_map(word), letters);
}

long long mixed_trace_gue(int m, const TraceWord& word) {
    if (m < 1) throw SizeLimitError("block order must be >= 1");
    const int letters = word.letter_count();
    if (letters > kMaxMixedTraceLetters)
        throw SizeLimitError("trace word with " + std::to_string(letters) + " letters above cap " +
                             std::to_string(kMaxMixedTraceLetters));
    if (letters % 2 != 0) return 0;
    const std::vector<int> f = build_f_map(word);
    __int128 sum = 0;
    for_each_pair_partition(letters / 2, [&sum, &f, m, letters](const PairPartition& p) {
        sum += pow128(m, word_free_indices(p, f, letters));
    });
    if (sum > static_cast<__int128>(INT64_MAX))
        throw SizeLimitError("mixed trace value exceeds 64-bit range");
    return static_cast<long long>(sum);
}

Rational goe_moment(int m, int n) {
    if (m < 1) throw SizeLimitError("block order must be >= 1");
    check_moment_order(n);
    if (n % 2 != 0) return Rational(0);
    const int k = n / 2;
    check_partition_size(k);
    const int slots = 2 * k;
    __int128 acc = 0;
    UnionFind16 uf;
    for_each_pair_partition(k, [&](const PairPartition& p) {
        for (unsigned mask = 0; mask < (1u << k); ++mask) {
            uf.reset(slots);
            for (int i = 0; i < k; ++i) {
                const int a = p.pairs[i].first - 1;
                const int b = p.pairs[i].second - 1;
                const int sa = (a + 1) % slots;
                const int sb = (b + 1) % slots;
                if (mask & (1u << i)) {
                    uf.unite(a, sb);  // twisted
                    uf.unite(b, sa);
                } else {
                    uf.unite(a, b);   // straight
                    uf.unite(sa, sb);
                }
            }
            acc += pow128(m, uf.classes(slots));
        }
    });
    try {
        return Rational::from_int128(acc, pow128(m, k + 1));
    } catch (const std::overflow_error&) {
        throw SizeLimitError("goe moment exceeds exact 64-bit range");
    }
}

Rational goe_moment_bruteforce(int m, int n) {
    if (m < 1) throw SizeLimitError("block order must be >= 1");
    check_moment_order(n);
    if (n % 2 != 0) return Rational(0);
    const int k = n / 2;
    check_partition_size(k);
    const int slots = 2 * k;
    double assignments = std::pow(static_cast<double>(m), slots);
    if (assignments > 1e8)
        throw SizeLimitError("brute-force goe moment needs m^n <= 1e8");

    __int128 acc = 0;
    std::array<int, 16> t{};
    for_each_pair_partition(k, [&](const PairPartition& p) {
        t.fill(0);
        while (true) {
            int weight_exp = 0;
            bool admissible = true;
            for (int i = 0; i < k && admissible; ++i) {
                const int a = p.pairs[i].first - 1;
                const int b = p.pairs[i].second - 1;
                const int sa = (a + 1) % slots;
                const int sb = (b + 1) % slots;
                const bool straight = t[a] == t[b] && t[sa] == t[sb];
                const bool twisted = t[a] == t[sb] && t[b] == t[sa];
                if (!straight && !twisted) {
                    admissible = false;
                } else if (t[a] == t[b] && t[b] == t[sa] && t[sa] == t[sb]) {
                    ++weight_exp;
                }
            }
            if (admissible) acc += pow128(2, weight_exp);
            int pos = 0;
            while (pos < slots && ++t[pos] == m) t[pos++] = 0;
            if (pos == slots) break;
        }
    });
    try {
        return Rational::from_int128(acc, pow128(m, k + 1));
    } catch (const std::overflow_error&) {
        throw SizeLimitError("goe moment exceeds exact 64-bit range");
    }
}

}  // namespace bandlab
