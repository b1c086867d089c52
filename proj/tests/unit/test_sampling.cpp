#include <doctest.h>

#include <cmath>
#include <cstdlib>
#include <numbers>
#include <vector>

#include "nkspin/errors.hpp"
#include "nkspin/parallel.hpp"
#include "nkspin/sampling.hpp"

using namespace nkspin;

namespace {

// E[Re(g)^2] for g uniform on S^3 by Simpson's rule. With Re(g) = cos t the
// marginal density is proportional to sin^2 t on [0, pi].
double simpson_second_moment(int panels) {
    const double h = std::numbers::pi / panels;
    double num = 0.0, den = 0.0;
    for (int k = 0; k <= panels; ++k) {
        const double t = k * h;
        const double w = (k == 0 || k == panels) ? 1.0 : (k % 2 ? 4.0 : 2.0);
        const double s2 = std::sin(t) * std::sin(t);
        num += w * std::cos(t) * std::cos(t) * s2;
        den += w * s2;
    }
    return num / den;
}

struct ThreadsGuard {
    explicit ThreadsGuard(const char* value) { setenv("NKSPIN_THREADS", value, 1); }
    ~ThreadsGuard() { unsetenv("NKSPIN_THREADS"); }
};

}  // namespace

TEST_CASE("determinism") {
    const SampleSet a = uniform_s3(42, 500);
    const SampleSet b = uniform_s3(42, 500);
    REQUIRE(a.size() == 500);
    for (std::size_t i = 0; i < a.size(); ++i) CHECK(a[i] == b[i]);
    CHECK(a[17] == uniform_s3_point(42, 17));
    CHECK_FALSE(uniform_s3(43, 1)[0] == a[0]);
}

TEST_CASE("single point and empty request") {
    const SampleSet s = uniform_s3(1, 1);
    REQUIRE(s.size() == 1);
    CHECK(s[0].quat().norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(uniform_s3(1, 0), DomainError);
}

TEST_CASE("thread count does not change the points") {
    std::vector<UnitQuat> one, four;
    {
        ThreadsGuard g("1");
        CHECK(thread_count() == 1);
        one = uniform_s3(5, 3000).points;
    }
    {
        ThreadsGuard g("4");
        CHECK(thread_count() == 4);
        four = uniform_s3(5, 3000).points;
    }
    CHECK(one == four);
}

TEST_CASE("parallel_for visits each index once and rethrows the lowest failure") {
    ThreadsGuard g("3");
    std::vector<int> hits(1000, 0);
    parallel_for(hits.size(), [&](std::size_t i) { ++hits[i]; });
    for (int h : hits) CHECK(h == 1);

    try {
        parallel_for(100, [](std::size_t i) {
            if (i == 40 || i == 90) throw std::runtime_error(std::to_string(i));
        });
        FAIL("expected an exception");
    } catch (const std::runtime_error& e) {
        CHECK(std::string(e.what()) == "40");
    }
}

TEST_CASE("component means obey the CLT bound") {
    const std::size_t n = 100000;
    const SampleSet s = uniform_s3(2024, n);
    double m[4] = {0, 0, 0, 0};
    for (const auto& g : s) {
        m[0] += g.quat().w;
        m[1] += g.quat().x;
        m[2] += g.quat().y;
        m[3] += g.quat().z;
    }
    for (double v : m) CHECK(std::abs(v / n) <= 4.0 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("chi-square on the 16 orthant cells") {
    const std::size_t n = 100000;
    const SampleSet s = uniform_s3(777, n);
    std::vector<double> counts(16, 0.0);
    for (const auto& g : s) {
        const Quat& q = g;
        const int cell = (q.w > 0) | ((q.x > 0) << 1) | ((q.y > 0) << 2) | ((q.z > 0) << 3);
        counts[cell] += 1.0;
    }
    const double expected = n / 16.0;
    double chi2 = 0.0;
    for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
    // Upper 1e-4 quantile of chi-square with 15 degrees of freedom.
    CHECK(chi2 < 44.263);
}

TEST_CASE("pairwise summation") {
    std::vector<double> v(1 << 20, 0.1);
    CHECK(pairwise_sum(v) == doctest::Approx(0.1 * (1 << 20)).epsilon(1e-14));
    CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
    CHECK(pairwise_sum(std::vector<double>{2.5}) == 2.5);
}

TEST_CASE("mc_integrate") {
    const SampleSet s = uniform_s3(9, 20000);
    const MCEstimate one = mc_integrate([](const UnitQuat&) { return 1.0; }, s);
    CHECK(one.mean == 1.0);
    CHECK(one.standard_error == 0.0);
    CHECK(one.n == 20000);

    const double oracle = simpson_second_moment(2000);
    CHECK(oracle == doctest::Approx(0.25).epsilon(1e-12));
    const MCEstimate m = mc_integrate([](const UnitQuat& g) { return g.w() * g.w(); }, s);
    CHECK(m.standard_error > 0.0);
    CHECK(std::abs(m.mean - oracle) <= 3.0 * m.standard_error);

    CHECK_THROWS_AS(mc_integrate([](const UnitQuat& g) { return g.w() > 0.5 ? NAN : 0.0; }, s), EvaluationError);
}

TEST_CASE("standard error definition") {
    const std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    const MCEstimate e = mean_and_error(v);
    CHECK(e.mean == 2.5);
    // Sample stdev uses n - 1.
    CHECK(e.standard_error == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
}

TEST_CASE("random unit imaginary quaternions") {
    CounterRng rng(1, 2);
    for (int n = 0; n < 100; ++n) CHECK(random_unit_im(rng).norm() == doctest::Approx(1.0).epsilon(1e-15));
    CounterRng a(1, 2), b(1, 3);
    CHECK(a.next_u64() != b.next_u64());
    CounterRng u(8, 0);
    for (int n = 0; n < 1000; ++n) {
        const double x = u.next_uniform();
        CHECK((x > 0.0 && x < 1.0));
    }
}
