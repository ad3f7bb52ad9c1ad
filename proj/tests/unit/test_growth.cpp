#include <doctest.h>

#include <cmath>

#include "cfx/errors.hpp"
#include "cfx/growth.hpp"

using namespace cfx;

TEST_CASE("spec validation") {
    CHECK_THROWS_AS(GrowthSpec::doubly_exp(1.0, 2.0, 1.0), DomainError);
    CHECK_THROWS_AS(GrowthSpec::doubly_exp(2.0, 2.0, 0.0), DomainError);
    CHECK_THROWS_AS(GrowthSpec::single_exp(1.0, -1.0), DomainError);
    CHECK(GrowthSpec::doubly_exp(2, 3, 1).family_name() == "doubly");
}

TEST_CASE("log_phi values") {
    CHECK(log_phi(GrowthSpec::polynomial(3), 10).log() == doctest::Approx(3 * std::log(10.0)));
    CHECK(log_phi(GrowthSpec::single_exp(0.5), 16).log() == doctest::Approx(4.0));
    const auto d = GrowthSpec::doubly_exp(2, 2, 1);
    CHECK(log_phi(d, 3).log() == doctest::Approx(8 * std::log(2.0)));
    CHECK_FALSE(log_phi(d, 3).overflow());
    // ln phi(40) for (2, 2, 2) is 2^1600 ln 2: far past double range.
    const auto big = log_phi(GrowthSpec::doubly_exp(2, 2, 2), 40);
    CHECK(big.overflow());
    CHECK(big.log_abs_log() == doctest::Approx(1108.6689759753308).epsilon(1e-15));
    CHECK_THROWS_AS(log_phi(d, 0), DomainError);
}

TEST_CASE("LogScalar shifted in the overflow regime") {
    const auto x = LogScalar::from_log_log(1000.0);
    const auto y = x.shifted(5.0);
    CHECK(y.overflow());
    CHECK(y.log_abs_log() == doctest::Approx(1000.0));
    CHECK(y.log_abs_log() >= x.log_abs_log());
    CHECK(LogScalar::from_log_log(3.0).shifted(5.0).log() == doctest::Approx(std::exp(3.0) + 5.0));
    const auto small = LogScalar::from_log(3.0).shifted(-1.0);
    CHECK(small.log() == doctest::Approx(2.0));
}

TEST_CASE("threshold_N pinned values") {
    CHECK(threshold_N(GrowthSpec::doubly_exp(2, 2, 1, 1)) == 2);
    CHECK(threshold_N(GrowthSpec::doubly_exp(2, 2, 1, 10)) == 1);
    CHECK(threshold_N(GrowthSpec::doubly_exp(2, 2, 2, 1)) == 2);
    CHECK(threshold_N(GrowthSpec::doubly_exp(1.1, 1.1, 0.5, 1)) == 2208);
    CHECK(threshold_N(GrowthSpec::geometric(2, 1)) == 2);
    CHECK_THROWS_AS(threshold_N(GrowthSpec::polynomial(2)), DomainError);
}

TEST_CASE("property: threshold window and failure below N") {
    const GrowthSpec specs[] = {
        GrowthSpec::doubly_exp(2, 2, 1, 1),      GrowthSpec::doubly_exp(3, 1.5, 0.5, 0.7),
        GrowthSpec::doubly_exp(1.5, 3, 2, 2),    GrowthSpec::single_exp(1, 1),
        GrowthSpec::single_exp(0.6, 0.5),        GrowthSpec::single_exp(2, 3),
        GrowthSpec::geometric(2, 1),             GrowthSpec::geometric(3, 0.8),
        GrowthSpec::doubly_exp(1.1, 1.1, 0.5, 1),
    };
    for (const auto& spec : specs) {
        CAPTURE(spec.describe());
        const std::size_t N = threshold_N(spec);
        for (std::size_t n = N; n <= N + 50; ++n) CHECK(threshold_conditions(spec, n).all());
        if (N > 1) CHECK_FALSE(threshold_conditions(spec, N - 1).all());
    }
}

TEST_CASE("property: L increasing and f < beta phi < g") {
    const GrowthSpec specs[] = {
        GrowthSpec::polynomial(0.5), GrowthSpec::single_exp(0.3, 2), GrowthSpec::doubly_exp(2, 2, 2),
        GrowthSpec::doubly_exp(1.2, 5, 0.4, 0.3), GrowthSpec::geometric(1.5),
    };
    for (const auto& spec : specs) {
        CAPTURE(spec.describe());
        for (std::size_t n = 1; n < 200; ++n) {
            const auto a = log_phi(spec, n);
            const auto b = log_phi(spec, n + 1);
            CHECK(b.log_abs_log() > a.log_abs_log());
            if (!a.overflow() && a.log() > 1e-300) {
                CHECK(a.log_abs_log() == doctest::Approx(std::log(a.log())).epsilon(1e-9));
            }
            const auto f = bound_f(spec, n);
            const auto g = bound_g(spec, n);
            if (f && !a.overflow()) {
                CHECK(f->log() < a.log() + std::log(spec.beta()));
                CHECK(a.log() + std::log(spec.beta()) < g.log());
            }
        }
    }
}

TEST_CASE("inclusion inequalities") {
    const auto spec = GrowthSpec::doubly_exp(2, 2, 1, 1);
    CHECK(find_N0(spec, 1.5, 0.25, 100) == std::optional<std::size_t>(1));
    const auto at1 = inclusion_check(spec, 1.9, 0.25, 1);
    CHECK(at1.exponent_gap);
    CHECK_FALSE(at1.growth_gap);
    for (std::size_t n = 2; n <= 5; ++n) CHECK(inclusion_check(spec, 1.9, 0.25, n).both());
    CHECK_FALSE(verify_inclusion_inequalities(spec, 1.9, 0.25, 1, 100));
    CHECK(find_N0(spec, 1.9, 0.25, 100) == std::optional<std::size_t>(2));
    CHECK(verify_inclusion_inequalities(spec, 1.9, 0.25, 2, 100));
    // Vacuous range.
    CHECK(verify_inclusion_inequalities(spec, 1.9, 0.25, 10, 5));

    CHECK(default_delta(spec) == doctest::Approx(1.0 / 6.0));
    CHECK(default_d(spec) == doctest::Approx(1.5));
    CHECK_THROWS_AS(find_N0(spec, 2.5, 0.25, 10), DomainError);
    CHECK_THROWS_AS(find_N0(spec, 1.5, 0.5, 10), DomainError);
    CHECK_THROWS_AS(find_N0(GrowthSpec::single_exp(1), 1.5, 0.1, 10), DomainError);
}

TEST_CASE("property: find_N0 is non-increasing as delta shrinks") {
    for (double b : {1.5, 2.0, 3.0}) {
        for (double c : {1.5, 2.0, 5.0}) {
            for (double alpha : {0.5, 1.0, 2.0}) {
                const auto spec = GrowthSpec::doubly_exp(b, c, alpha, 1.0);
                const double d = default_d(spec);
                const double top = default_delta(spec) * 1.9;
                std::optional<std::size_t> prev;
                for (double frac : {1.0, 0.75, 0.5, 0.25, 0.1, 0.01}) {
                    const auto n0 = find_N0(spec, d, top * frac, 500);
                    CAPTURE(spec.describe());
                    CAPTURE(frac);
                    REQUIRE(n0.has_value());
                    if (prev) CHECK(*n0 <= *prev);
                    prev = n0;
                }
            }
        }
    }
}
