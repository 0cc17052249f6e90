#include <doctest.h>

#include <cstdint>
#include <stdexcept>

#include "bandlab/rational.hpp"

using bandlab::Rational;

TEST_CASE("rational arithmetic reduces to lowest terms") {
    const Rational r(6, 8);
    CHECK(r.numerator() == 3);
    CHECK(r.denominator() == 4);
    CHECK(r.to_string() == "3/4");

    CHECK(Rational(2, -4) == Rational(-1, 2));
    CHECK(Rational(0, 5) == Rational(0));
    CHECK(Rational(9, 3).to_string() == "3");
}

TEST_CASE("rational field operations") {
    const Rational a(1, 6), b(1, 10);
    CHECK(a + b == Rational(4, 15));
    CHECK(a - b == Rational(1, 15));
    CHECK(a * b == Rational(1, 60));
    CHECK(a / b == Rational(5, 3));

    Rational acc(0);
    for (int i = 1; i <= 10; ++i) acc += Rational(1, i);
    CHECK(acc == Rational(7381, 2520));  // H_10
}

TEST_CASE("rational to_double and comparisons") {
    CHECK(Rational(9, 4).to_double() == 2.25);
    CHECK(Rational(1, 3) != Rational(1, 4));
    CHECK(Rational(-7, 2).to_string() == "-7/2");
}

TEST_CASE("rational guards zero denominators and overflow") {
    CHECK_THROWS_AS(Rational(1, 0), std::domain_error);
    CHECK_THROWS_AS(Rational(1, 2) / Rational(0), std::domain_error);

    const Rational big(INT64_MAX / 2, 1);
    CHECK_THROWS_AS(big * Rational(8), std::overflow_error);

    // 128-bit intermediates keep legitimate results exact
    const Rational x(1'000'000'007, 998'244'353);
    CHECK(x * Rational(998'244'353, 1'000'000'007) == Rational(1));
}

TEST_CASE("from_int128 reduces before narrowing") {
    const __int128 num = static_cast<__int128>(INT64_MAX) * 4;
    const __int128 den = static_cast<__int128>(INT64_MAX) * 8;
    CHECK(Rational::from_int128(num, den) == Rational(1, 2));
}
