#include <doctest.h>

#include <cmath>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "support/oracles.hpp"
#include "vpmine/stats.hpp"

using namespace vpmine;

namespace {

// The t statistic and p-value recomputed from scratch, with the cdf taken
// from the quadrature oracle rather than the incomplete beta.
double paired_p_rowwise(const std::vector<double>& a, const std::vector<double>& b,
                        Alternative alt) {
    const std::size_t n = a.size();
    std::vector<double> d(n);
    for (std::size_t i = 0; i < n; ++i) d[i] = a[i] - b[i];
    double mean = 0;
    for (double x : d) mean += x;
    mean /= static_cast<double>(n);
    double ss = 0;
    for (double x : d) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(n - 1));
    if (sd == 0.0) {
        if (mean == 0.0) return 0.5;
        const bool supports_less = mean < 0.0;
        return (alt == Alternative::less) == supports_less ? 0.0 : 1.0;
    }
    const double t = mean / (sd / std::sqrt(static_cast<double>(n)));
    const double cdf = oracle::t_cdf_quadrature(t, static_cast<double>(n - 1));
    return alt == Alternative::less ? cdf : 1.0 - cdf;
}

} // namespace

TEST_SUITE("stats") {

TEST_CASE("incomplete_beta hits its boundary values") {
    CHECK(incomplete_beta(2.0, 3.0, 0.0) == 0.0);
    CHECK(incomplete_beta(2.0, 3.0, 1.0) == 1.0);
    CHECK(incomplete_beta(2.0, 3.0, -0.5) == 0.0);
    CHECK(incomplete_beta(2.0, 3.0, 1.5) == 1.0);
    // I_x(1, b) = 1 - (1-x)^b in closed form.
    for (double x : {0.1, 0.37, 0.8})
        CHECK(incomplete_beta(1.0, 4.0, x) ==
              doctest::Approx(1.0 - std::pow(1.0 - x, 4.0)).epsilon(1e-12));
    CHECK_THROWS_AS(incomplete_beta(0.0, 1.0, 0.5), std::invalid_argument);
    CHECK_THROWS_AS(incomplete_beta(1.0, -1.0, 0.5), std::invalid_argument);
}

TEST_CASE("incomplete_beta satisfies the reflection identity") {
    std::mt19937_64 gen(61);
    std::uniform_real_distribution<double> par(0.2, 20.0);
    std::uniform_real_distribution<double> unit(0.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        double a = par(gen), b = par(gen), x = unit(gen);
        CHECK(incomplete_beta(a, b, x) + incomplete_beta(b, a, 1.0 - x) ==
              doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("student_t_cdf closed forms") {
    CHECK(student_t_cdf(0.0, 5.0) == doctest::Approx(0.5).epsilon(1e-14));
    // df = 1 is Cauchy: F(t) = 1/2 + atan(t)/pi.
    for (double t : {-4.0, -1.0, 0.3, 2.5}) {
        CHECK(student_t_cdf(t, 1.0) ==
              doctest::Approx(0.5 + std::atan(t) / std::numbers::pi).epsilon(1e-12));
    }
    CHECK(student_t_cdf(1.0, 1.0) == doctest::Approx(0.75).epsilon(1e-12));
    // df = 2 has F(t) = 1/2 + t / (2 sqrt(2 + t^2)).
    for (double t : {-3.0, 0.7, 1.0}) {
        CHECK(student_t_cdf(t, 2.0) ==
              doctest::Approx(0.5 + t / (2.0 * std::sqrt(2.0 + t * t))).epsilon(1e-12));
    }
    CHECK(student_t_cdf(1.0, 2.0) ==
          doctest::Approx(0.5 + 1.0 / (2.0 * std::sqrt(3.0))).epsilon(1e-12));
}

TEST_CASE("student_t_cdf agrees with quadrature") {
    for (double df : {1.0, 2.0, 3.0, 5.0, 10.0, 30.0, 100.0})
        for (double t : {-8.0, -3.0, -1.0, -0.2, 0.0, 0.5, 2.0, 10.0}) {
            INFO("t=", t, " df=", df);
            CHECK(student_t_cdf(t, df) ==
                  doctest::Approx(oracle::t_cdf_quadrature(t, df)).epsilon(1e-9));
        }
}

TEST_CASE("student_t_cdf symmetry and tails") {
    std::mt19937_64 gen(67);
    std::uniform_real_distribution<double> td(-12.0, 12.0);
    std::uniform_real_distribution<double> dfd(0.5, 60.0);
    for (int rep = 0; rep < 300; ++rep) {
        double t = td(gen), df = dfd(gen);
        CHECK(student_t_cdf(t, df) + student_t_cdf(-t, df) == doctest::Approx(1.0).epsilon(1e-12));
        if (rep % 10 == 0) {
            CHECK(student_t_cdf(t, df) >= 0.0);
            CHECK(student_t_cdf(t, df) <= 1.0);
        }
    }
    CHECK(student_t_cdf(std::numeric_limits<double>::infinity(), 3.0) == 1.0);
    CHECK(student_t_cdf(-std::numeric_limits<double>::infinity(), 3.0) == 0.0);
    CHECK_THROWS_AS(student_t_cdf(1.0, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(student_t_cdf(std::nan(""), 3.0), std::invalid_argument);
}

TEST_CASE("paired t-test on a fixed example") {
    // d = (-1, 0, -1, -1), mean -0.75, sd 0.5, t = -3 on 3 degrees of freedom.
    std::vector<double> a = {1, 2, 3, 4};
    std::vector<double> b = {2, 2, 4, 5};
    CHECK(paired_t_one_sided(a, b, Alternative::less) ==
          doctest::Approx(0.0288344428112).epsilon(1e-9));
    CHECK(paired_t_one_sided(a, b, Alternative::greater) ==
          doctest::Approx(1.0 - 0.0288344428112).epsilon(1e-9));
}

TEST_CASE("paired t-test zero-variance conventions") {
    std::vector<double> a = {3, 5, 7};
    CHECK(paired_t_one_sided(a, a, Alternative::less) == 0.5);
    CHECK(paired_t_one_sided(a, a, Alternative::greater) == 0.5);

    std::vector<double> higher = {4, 6, 8}; // a - higher is constant -1
    CHECK(paired_t_one_sided(a, higher, Alternative::less) == 0.0);
    CHECK(paired_t_one_sided(a, higher, Alternative::greater) == 1.0);
    CHECK(paired_t_one_sided(higher, a, Alternative::less) == 1.0);
    CHECK(paired_t_one_sided(higher, a, Alternative::greater) == 0.0);
}

TEST_CASE("paired t-test validates its input") {
    std::vector<double> two = {1, 2};
    std::vector<double> three = {1, 2, 3};
    std::vector<double> one = {1};
    std::vector<double> none;
    CHECK_THROWS_AS(paired_t_one_sided(two, three, Alternative::less), std::invalid_argument);
    CHECK_THROWS_AS(paired_t_one_sided(one, one, Alternative::less), std::invalid_argument);
    CHECK_THROWS_AS(paired_t_one_sided(none, none, Alternative::less), std::invalid_argument);
}

TEST_CASE("paired t-test matches an independent recomputation") {
    std::mt19937_64 gen(71);
    std::uniform_int_distribution<std::size_t> size(2, 30);
    std::normal_distribution<double> noise(0.0, 2.0);
    std::uniform_real_distribution<double> shift(-1.0, 1.0);
    for (int rep = 0; rep < 200; ++rep) {
        const std::size_t n = size(gen);
        const double offset = shift(gen);
        std::vector<double> a(n), b(n);
        for (std::size_t i = 0; i < n; ++i) {
            b[i] = noise(gen);
            a[i] = b[i] + offset + noise(gen) * 0.5;
        }
        for (Alternative alt : {Alternative::less, Alternative::greater}) {
            double got = paired_t_one_sided(a, b, alt);
            CHECK(got == doctest::Approx(paired_p_rowwise(a, b, alt)).epsilon(1e-6));
        }
        double sum = paired_t_one_sided(a, b, Alternative::less) +
                     paired_t_one_sided(a, b, Alternative::greater);
        CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    }
}

} // TEST_SUITE
