#include <doctest.h>

#include <vector>

#include "bandlab/errors.hpp"
#include "bandlab/pairings.hpp"
#include "bandlab/rational.hpp"

using namespace bandlab;

namespace {

// Independent Wick oracle for trace-word expectations over the m x m
// complex-Gaussian ensemble with E[H_ab H_cd] = [a==d][b==c]: expand the
// word into per-factor cycles, enumerate every index tuple t in [m]^L and
// every pairing, and multiply the entrywise covariances literally. No use of
// the successor-map or free-index machinery under test.
long long isserlis_trace_oracle(int m, const std::vector<int>& nu) {
    // positions 0..L-1 laid out factor by factor; succ[p] is the next
    // position around p's own trace cycle
    std::vector<int> succ;
    int L = 0;
    for (std::size_t i = 0; i < nu.size(); ++i) L += static_cast<int>(i + 1) * nu[i];
    succ.resize(L);
    int base = 0;
    for (std::size_t i = 0; i < nu.size(); ++i) {
        const int len = static_cast<int>(i + 1);
        for (int rep = 0; rep < nu[i]; ++rep) {
            for (int p = 0; p < len; ++p) succ[base + p] = base + (p + 1) % len;
            base += len;
        }
    }
    if (L % 2 != 0) return 0;

    const std::vector<PairPartition> pairings = enumerate_pair_partitions(L / 2);
    long long total = 0;
    std::vector<int> t(L, 0);
    while (true) {
        for (const PairPartition& pi : pairings) {
            long long prod = 1;
            for (const auto& [a1, b1] : pi.pairs) {
                const int a = a1 - 1, b = b1 - 1;  // pairs are 1-based
                if (t[a] != t[succ[b]] || t[b] != t[succ[a]]) {
                    prod = 0;
                    break;
                }
            }
            total += prod;
        }
        int pos = 0;
        while (pos < L && ++t[pos] == m) t[pos++] = 0;
        if (pos == L) break;
    }
    return total;
}

}  // namespace

TEST_CASE("pair partition counts are the double factorials") {
    for (int k = 1; k <= 6; ++k) {
        CHECK(static_cast<long long>(enumerate_pair_partitions(k).size()) ==
              double_factorial(2 * k - 1));
    }
    CHECK(double_factorial(1) == 1);
    CHECK(double_factorial(7) == 105);
    CHECK(double_factorial(15) == 2027025);
}

TEST_CASE("pair partitions arrive canonically and in lexicographic order") {
    const std::vector<PairPartition> parts = enumerate_pair_partitions(2);
    REQUIRE(parts.size() == 3);
    CHECK(parts[0].pairs == std::vector<std::pair<int, int>>{{1, 2}, {3, 4}});
    CHECK(parts[1].pairs == std::vector<std::pair<int, int>>{{1, 3}, {2, 4}});
    CHECK(parts[2].pairs == std::vector<std::pair<int, int>>{{1, 4}, {2, 3}});

    for (int k = 1; k <= 5; ++k) {
        for (const PairPartition& p : enumerate_pair_partitions(k)) {
            REQUIRE(p.k == k);
            int prev_a = 0;
            for (const auto& [a, b] : p.pairs) {
                CHECK(a < b);
                CHECK(a > prev_a);
                prev_a = a;
            }
        }
    }

    // the visitor and the collector agree
    int visited = 0;
    for_each_pair_partition(3, [&](const PairPartition& p) {
        REQUIRE(p.k == 3);
        ++visited;
    });
    CHECK(visited == 15);
}

TEST_CASE("orbit counts: noncrossing partitions attain k+1 and parity holds") {
    for (int k = 1; k <= 5; ++k) {
        for (const PairPartition& p : enumerate_pair_partitions(k)) {
            const int g = orbit_count(p);
            CHECK(g >= 1);
            CHECK(g <= k + 1);
            CHECK((k + 1 - g) % 2 == 0);  // defect is twice the genus
            CHECK(is_noncrossing(p) == (g == k + 1));
        }
    }
}

TEST_CASE("catalan numbers count the maximal-orbit partitions") {
    const long long expected[] = {1, 1, 2, 5, 14, 42, 132, 429, 1430};
    for (int k = 1; k <= 6; ++k) {
        CHECK(catalan_number(k) == expected[k]);
        CHECK(catalan_limit_check(2 * k) == expected[k]);
    }
}

TEST_CASE("unitary-class moment identities in exact arithmetic") {
    for (int m = 1; m <= 6; ++m) {
        const Rational m2(static_cast<std::int64_t>(m) * m, 1);
        CHECK(gue_moment(m, 2) == Rational(1));
        CHECK(gue_moment(m, 4) == Rational(2) + Rational(1) / m2);
        CHECK(gue_moment(m, 6) == Rational(5) + Rational(10) / m2);
        CHECK(gue_moment(m, 8) == Rational(14) + Rational(70) / m2 + Rational(21) / (m2 * m2));
    }
    for (int k = 1; k <= 6; ++k) {
        CHECK(gue_moment(1, 2 * k) == Rational(double_factorial(2 * k - 1)));
        CHECK(gue_moment(1, 2 * k - 1) == Rational(0));
    }
}

TEST_CASE("trace words expose their sizes") {
    TraceWord squared_linear{{2}};         // (tr H)^2
    CHECK(squared_linear.order() == 2);
    CHECK(squared_linear.letter_count() == 2);

    TraceWord fourth{{0, 0, 0, 1}};        // tr H^4
    CHECK(fourth.order() == 1);
    CHECK(fourth.letter_count() == 4);

    TraceWord mixed{{1, 2}};               // (tr H)(tr H^2)^2
    CHECK(mixed.order() == 3);
    CHECK(mixed.letter_count() == 5);
}

TEST_CASE("mixed-trace closed forms") {
    for (int m = 1; m <= 6; ++m) {
        const long long mm = m;
        CHECK(mixed_trace_gue(m, TraceWord{{2}}) == mm);                      // <(tr H)^2>
        CHECK(mixed_trace_gue(m, TraceWord{{0, 1}}) == mm * mm);              // <tr H^2>
        CHECK(mixed_trace_gue(m, TraceWord{{0, 0, 0, 1}}) == 2 * mm * mm * mm + mm);
        CHECK(mixed_trace_gue(m, TraceWord{{0, 2}}) == mm * mm * mm * mm + 2 * mm * mm);
        CHECK(mixed_trace_gue(m, TraceWord{{1}}) == 0);                       // odd word
    }
}

TEST_CASE("mixed traces equal the independent entrywise Wick oracle") {
    const std::vector<std::vector<int>> words = {
        {2}, {0, 1}, {4}, {2, 1}, {0, 0, 0, 1}, {0, 2}, {1, 0, 1}, {0, 3}, {2, 2},
    };
    for (int m = 1; m <= 3; ++m) {
        for (const auto& nu : words) {
            TraceWord word{nu};
            if (word.letter_count() > 6) continue;  // unit-scale budget
            CHECK(mixed_trace_gue(m, word) == isserlis_trace_oracle(m, nu));
        }
    }
}

TEST_CASE("orthogonal-class moment identities") {
    for (int m = 1; m <= 6; ++m) {
        CHECK(goe_moment(m, 2) == Rational(1) + Rational(1, m));
    }
    CHECK(goe_moment(2, 4) == Rational(23, 4));
    for (int k = 1; k <= 4; ++k) {
        CHECK(goe_moment(1, 2 * k) == Rational((1LL << k) * double_factorial(2 * k - 1)));
    }
    CHECK(goe_moment(3, 3) == Rational(0));
}

TEST_CASE("orthogonal-class fast path equals brute force") {
    for (int m = 1; m <= 2; ++m) {
        for (int k = 1; k <= 3; ++k) {
            CHECK(goe_moment(m, 2 * k) == goe_moment_bruteforce(m, 2 * k));
        }
    }
}

TEST_CASE("combinatorial size caps throw") {
    CHECK_THROWS_AS(gue_moment(2, kMaxMomentOrder + 2), SizeLimitError);
    CHECK_THROWS_AS(goe_moment(2, kMaxMomentOrder + 2), SizeLimitError);
    CHECK_THROWS_AS(mixed_trace_gue(2, TraceWord{{kMaxMixedTraceLetters + 2}}), SizeLimitError);
    CHECK_THROWS_AS(enumerate_pair_partitions(kMaxPairPartitionK + 1), SizeLimitError);
}
