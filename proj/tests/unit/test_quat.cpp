#include <doctest.h>

#include <cmath>
#include <numbers>

#include "nkspin/errors.hpp"
#include "nkspin/quat.hpp"
#include "nkspin/sampling.hpp"

using namespace nkspin;

namespace {

double dist(const Quat& a, const Quat& b) { return (a - b).norm(); }

Quat random_quat(CounterRng& rng) {
    return {rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian()};
}

}  // namespace

TEST_CASE("multiplication table") {
    CHECK(Quat(kI) * Quat(kJ) == Quat(kK));
    CHECK(Quat(kJ) * Quat(kK) == Quat(kI));
    CHECK(Quat(kK) * Quat(kI) == Quat(kJ));
    CHECK(Quat(kJ) * Quat(kI) == -Quat(kK));
    CHECK(Quat(kI) * Quat(kI) == Quat(-1.0));
    CHECK(Quat(1, 1, 0, 0) * Quat(1, 0, 1, 0) == Quat(1, 1, 1, 1));
}

TEST_CASE("inverse") {
    CHECK(inverse(Quat(kI)) == Quat(-kI));
    CHECK(inverse(Quat(1.0)) == Quat(1.0));
    CHECK(dist(inverse(Quat(2.0 * kI)), Quat(-0.5 * kI)) < 1e-16);
    CHECK_THROWS_AS(inverse(Quat{}), DomainError);

    const Quat q{0.3, -1.2, 0.7, 2.0};
    CHECK(dist(q * inverse(q), Quat(1.0)) < 1e-15);
    const UnitQuat u(q);
    CHECK(dist(u.inverse(), u.quat().conj()) < 1e-16);
}

TEST_CASE("unit quaternion construction renormalizes") {
    const UnitQuat u(0.0, 3.0, 0.0, 4.0);
    CHECK(u.quat().norm() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(u.quat().x == doctest::Approx(0.6));
    CHECK_THROWS_AS(UnitQuat(0.0, 0.0, 0.0, 0.0), DomainError);
    CHECK_THROWS_AS(UnitQuat(NAN, 0.0, 0.0, 0.0), DomainError);
}

TEST_CASE("exp and log") {
    const double half_pi = std::numbers::pi / 2.0;
    CHECK(dist(exp_im(half_pi * kI), Quat(kI)) < 1e-15);
    CHECK(exp_im(ImQuat{}) == UnitQuat::identity());
    CHECK((log_unit(UnitQuat(Quat(kK))) - half_pi * kK).norm() < 1e-15);
    CHECK_THROWS_AS(log_unit(UnitQuat(-1.0, 0.0, 0.0, 0.0)), BranchError);
    CHECK(log_unit(UnitQuat::identity()).norm() == 0.0);

    CounterRng rng(7, 0);
    for (int n = 0; n < 1000; ++n) {
        const ImQuat x = (3.0 * rng.next_uniform()) * random_unit_im(rng);
        CHECK((log_unit(exp_im(x)) - x).norm() < 1e-12);
    }
}

TEST_CASE("dot, cross and bracket agree with the product") {
    CHECK(cross(kI, kJ) == kK);
    CHECK(dot(kI, kI) == 1.0);
    CHECK(bracket(kI, kJ) == 2.0 * kK);
    const Quat commutator = Quat(kI) * Quat(kJ) - Quat(kJ) * Quat(kI);
    CHECK(commutator == Quat(2.0 * kK));

    CounterRng rng(11, 0);
    for (int n = 0; n < 10000; ++n) {
        const ImQuat x{rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian()};
        const ImQuat y{rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian()};
        const Quat lhs = Quat(x) * Quat(y);
        const Quat rhs(-dot(x, y), cross(x, y));
        REQUIRE(dist(lhs, rhs) <= 1e-14 * std::max(1.0, x.norm() * y.norm()));
    }
}

TEST_CASE("norm is multiplicative") {
    CounterRng rng(3, 0);
    double worst = 0.0;
    for (int n = 0; n < 10000; ++n) {
        const Quat p = random_quat(rng);
        const Quat q = random_quat(rng);
        worst = std::max(worst, std::abs((p * q).norm() - p.norm() * q.norm()) / std::max(1.0, p.norm() * q.norm()));
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("associativity") {
    CounterRng rng(5, 0);
    for (int n = 0; n < 1000; ++n) {
        const Quat p = random_quat(rng), q = random_quat(rng), r = random_quat(rng);
        CHECK(dist((p * q) * r, p * (q * r)) < 1e-12 * (1.0 + p.norm() * q.norm() * r.norm()));
    }
}

TEST_CASE("conjugation and its matrix") {
    const UnitQuat q = exp_im(0.7 * ImQuat{1.0, 2.0, -0.5} / ImQuat{1.0, 2.0, -0.5}.norm());
    const Mat3 R = conjugation_matrix(q);
    CHECK((R.transpose() * R - Mat3::Identity()).norm() < 1e-14);
    CHECK(R.determinant() == doctest::Approx(1.0).epsilon(1e-14));
    for (const auto& a : kBasis) {
        const ImQuat direct = conjugate_by(q, a);
        const Quat via_mul = q.quat() * Quat(a) * q.quat().conj();
        CHECK(dist(Quat(direct), via_mul) < 1e-15);
        CHECK((R * a.vec() - direct.vec()).norm() < 1e-15);
    }
}

TEST_CASE("rotation to unit quaternion") {
    CHECK(rotation_to_unit_quat(Mat3::Identity()) == UnitQuat::identity());

    Mat3 rx = Mat3::Identity();
    rx(1, 1) = -1.0;
    rx(2, 2) = -1.0;
    CHECK(dist(rotation_to_unit_quat(rx), Quat(kI)) < 1e-15);

    const UnitQuat q = exp_im(0.3 * kJ);
    const UnitQuat back = rotation_to_unit_quat(conjugation_matrix(q));
    CHECK(std::min(dist(back, q), dist(back, -q.quat())) <= 1e-12);

    Mat3 reflection = Mat3::Identity();
    reflection(0, 0) = -1.0;
    CHECK_THROWS_AS(rotation_to_unit_quat(reflection), DomainError);
    CHECK_THROWS_AS(rotation_to_unit_quat(2.0 * Mat3::Identity()), DomainError);
}

TEST_CASE("rotation round trip on random unit quaternions") {
    const SampleSet s = uniform_s3(99, 1000);
    double worst = 0.0;
    for (const auto& q : s) {
        const UnitQuat back = rotation_to_unit_quat(conjugation_matrix(q));
        worst = std::max(worst, std::min(dist(back, q), dist(back, -q.quat())));
        CHECK(back.w() >= 0.0);
    }
    CHECK(worst <= 1e-12);
}

TEST_CASE("canonical sign") {
    CHECK(canonical_sign(Quat(-1.0, 0.0, 0.0, 0.0)) == Quat(1.0));
    CHECK(canonical_sign(Quat(0.0, 0.0, -1.0, 0.0)) == Quat(0.0, 0.0, 1.0, 0.0));
    CHECK(canonical_sign(Quat(0.5, -0.5, 0.5, 0.5)) == Quat(0.5, -0.5, 0.5, 0.5));
}
