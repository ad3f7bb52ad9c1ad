#include <doctest.h>

#include "cfx/cf_core.hpp"
#include "cfx/errors.hpp"
#include "generators.hpp"

using namespace cfx;

TEST_CASE("rational basics") {
    CHECK(Rational::parse("6/8") == Rational(BigInt(3), BigInt(4)));
    CHECK(Rational::parse("-3").str() == "-3/1");
    CHECK(Rational::from_double(0.375) == Rational(BigInt(3), BigInt(8)));
    CHECK(floor(Rational(BigInt(-7), BigInt(2))) == -4);
    CHECK(ceil(Rational(BigInt(7), BigInt(2))) == 4);
    CHECK_THROWS_AS(Rational(BigInt(1), BigInt(0)), DomainError);
    CHECK_THROWS_AS(Rational::parse("1/x"), DomainError);
}

TEST_CASE("evaluate and convergents") {
    CHECK(evaluate_cf(CFWord{1, 2, 2}) == Rational(BigInt(5), BigInt(7)));
    CHECK(evaluate_cf(CFWord{2}) == Rational(BigInt(1), BigInt(2)));
    CHECK_THROWS_AS(evaluate_cf(CFWord{}), DomainError);

    const auto cv = convergents(CFWord{1, 2, 2});
    REQUIRE(cv.size() == 3);
    CHECK(cv[0].p == 1);
    CHECK(cv[0].q == 1);
    CHECK(cv[1].p == 2);
    CHECK(cv[1].q == 3);
    CHECK(cv[2].p == 5);
    CHECK(cv[2].q == 7);
}

TEST_CASE("expand_rational") {
    CHECK(expand_rational(Rational(BigInt(5), BigInt(7))) == CFWord{1, 2, 2});
    CHECK(expand_rational(Rational(BigInt(1), BigInt(2))) == CFWord{2});
    CHECK(expand_rational(Rational(BigInt(13), BigInt(30))) == CFWord{2, 3, 4});
    CHECK_THROWS_AS(expand_rational(Rational(1)), DomainError);
    CHECK_THROWS_AS(expand_rational(Rational(0)), DomainError);
}

TEST_CASE("words reject zero digits and parse lists") {
    CHECK_THROWS_AS(CFWord({1, 0, 2}), DomainError);
    CHECK(CFWord::parse("1, 2,2") == CFWord{1, 2, 2});
    CHECK_THROWS_AS(CFWord::parse("1,,2"), DomainError);
    CHECK_FALSE(CFWord({2, 1}).is_canonical());
    CHECK(CFWord({1}).is_canonical());
}

TEST_CASE("cylinder intervals") {
    const auto c = cylinder_interval(CFWord{1, 2, 2});
    CHECK(c.interval.left() == Rational(BigInt(7), BigInt(10)));
    CHECK(c.interval.right() == Rational(BigInt(5), BigInt(7)));
    CHECK(c.length == Rational(BigInt(1), BigInt(70)));

    const auto one = cylinder_interval(CFWord{1});
    CHECK(one.interval.left() == Rational(BigInt(1), BigInt(2)));
    CHECK(one.interval.right() == Rational(1));

    const auto root = cylinder_interval(CFWord{});
    CHECK(root.interval.left() == Rational(0));
    CHECK(root.length == Rational(1));
}

TEST_CASE("running stats") {
    const auto s = running_stats(CFWord{3, 1, 7, 2});
    CHECK(s[0].max == 3);
    CHECK(s[1].max == 3);
    CHECK(s[2].max == 7);
    CHECK(s[3].sum == 13);
    CHECK_THROWS_AS(running_stats(CFWord{}), DomainError);
}

TEST_CASE("expand_real: sqrt(2) - 1 has all digits 2") {
    const std::size_t n = 200;
    const std::size_t prec = required_precision_bits(n);
    BigFloat x(static_cast<mpfr_prec_t>(prec));
    mpfr_sqrt_ui(x.get(), 2, MPFR_RNDN);
    mpfr_sub_ui(x.get(), x.get(), 1, MPFR_RNDN);
    const auto e = expand_real(x, n, prec);
    REQUIRE(e.word.size() == n);
    for (const auto& d : e.word.digits()) CHECK(d == 2);
}

TEST_CASE("expand_real: golden ratio conjugate and e - 2") {
    const std::size_t n = 60;
    const std::size_t prec = required_precision_bits(n);
    BigFloat g(static_cast<mpfr_prec_t>(prec));
    mpfr_sqrt_ui(g.get(), 5, MPFR_RNDN);
    mpfr_sub_ui(g.get(), g.get(), 1, MPFR_RNDN);
    mpfr_div_ui(g.get(), g.get(), 2, MPFR_RNDN);
    const auto golden = expand_real(g, n, prec);
    for (const auto& d : golden.word.digits()) CHECK(d == 1);

    // e - 2 = [1, 2, 1, 1, 4, 1, 1, 6, ...]
    BigFloat e(static_cast<mpfr_prec_t>(prec));
    mpfr_set_ui(e.get(), 1, MPFR_RNDN);
    mpfr_exp(e.get(), e.get(), MPFR_RNDN);
    mpfr_sub_ui(e.get(), e.get(), 2, MPFR_RNDN);
    const auto w = expand_real(e, 30, prec).word;
    for (std::size_t i = 0; i < w.size(); ++i) {
        const long expected = i % 3 == 1 ? static_cast<long>(2 * (i / 3 + 1)) : 1;
        CHECK(w[i] == expected);
    }
}

TEST_CASE("expand_real preconditions and exact mode") {
    BigFloat half = BigFloat::parse("0.5", 200);
    CHECK_THROWS_AS(expand_real(half, 100, 100), DomainError);
    BigFloat one = BigFloat::parse("1", 200);
    CHECK_THROWS_AS(expand_real(one, 5, 200), DomainError);
    BigFloat low_prec = BigFloat::parse("0.3", 64);
    CHECK_THROWS_AS(expand_real(low_prec, 5, 200), DomainError);

    // 3/8 is exact: [2, 1, 2] then termination.
    BigFloat q = BigFloat::parse("0.375", 104);
    const auto e = expand_real(q, 10, 104, RealInput::exact);
    CHECK(e.truncated);
    CHECK(e.word == CFWord{2, 1, 2});
    // As a rounded value 3/8 sits on cylinder boundaries and is refused.
    CHECK_THROWS_AS(expand_real(q, 10, 104), PrecisionError);
}

TEST_CASE("property: exact identities on random words") {
    testing::WordGenerator gen(20261015);
    for (int i = 0; i < 2000; ++i) {
        const CFWord w = gen.next_canonical();
        const Rational x = evaluate_cf(w);
        CHECK(expand_rational(x) == w);

        const auto cv = convergents(w);
        CHECK(Rational(cv.back().p, cv.back().q) == x);

        const auto cyl = cylinder_interval(w);
        const BigInt q = cv.back().q;
        const BigInt q_prev = w.size() >= 2 ? cv[cv.size() - 2].q : BigInt(1);
        CHECK(cyl.length == Rational(BigInt(1), q * (q + q_prev)));
        CHECK(cyl.interval.length() == cyl.length);
        CHECK(check_qn_bounds(w));

        // Extending a word nests the cylinder.
        const auto child = cylinder_interval(w.extended(3));
        CHECK(cyl.interval.closure().contains(child.interval));
    }
}

TEST_CASE("property: expand_real agrees with exact digits of dyadic inputs") {
    testing::WordGenerator gen(7);
    for (int i = 0; i < 300; ++i) {
        const CFWord w = gen.next_canonical(12);
        const Rational x = evaluate_cf(w);
        const std::size_t n = std::min<std::size_t>(w.size(), 8);
        const std::size_t prec = required_precision_bits(64);
        const BigFloat bx = BigFloat::from_rational(x, static_cast<mpfr_prec_t>(prec));
        // The rounded input is within 2^-prec of x, so digits agree with x's
        // whenever the enclosure certifies them.
        try {
            const auto e = expand_real(bx, n, prec);
            CHECK(e.word == w.prefix(n));
        } catch (const PrecisionError&) {
            // Only allowed when x is a rational with a short expansion that
            // the enclosure cannot resolve past its end.
            CHECK(w.size() <= n);
        }
    }
}
