#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "nkspin/errors.hpp"
#include "nkspin/s3calc.hpp"
#include "nkspin/sampling.hpp"
#include "nkspin/spinor.hpp"

using namespace nkspin;

namespace {

const DerivOptions kFd = DerivOptions::fd(1e-4);

double dist(const Quat& a, const Quat& b) { return (a - b).norm(); }

std::vector<SpinorField> gks_families(const ImQuat& b) {
    return {families::constant(), families::inverse(), families::conj_b(b), families::b_inverse(b)};
}

// f = cos(theta) + sin(theta) g^{-1} b g, without a registered differential.
SpinorField tilted(double theta, const ImQuat& b) {
    SpinorField s;
    s.value = [=](const UnitQuat& g) {
        return Quat(std::cos(theta), std::sin(theta) * conjugate_by(g.inverse(), b));
    };
    s.label = "tilted";
    return s;
}

// Unit length nowhere: |f| = 1 + Re(g)/2.
SpinorField stretched() {
    SpinorField s;
    s.value = [](const UnitQuat& g) { return Quat(1.0 + 0.5 * g.w()); };
    s.differential = [](const UnitQuat& g, const ImQuat& x) { return Quat(0.5 * (g.quat() * Quat(x)).w); };
    return s;
}

Mat3 skew_part(const Mat3& m) { return 0.5 * (m - m.transpose()); }

}  // namespace

TEST_CASE("clifford action") {
    CHECK(clifford_action(kI, Quat(1.0)) == Quat(kI));
    const Quat f{0.2, -0.4, 0.8, 0.4};
    CHECK(dist(clifford_action(kJ, clifford_action(kK, f)), clifford_action(kI, f)) < 1e-15);
    const Quat ijk = clifford_action(kI, clifford_action(kJ, clifford_action(kK, f)));
    CHECK(dist(ijk, -f) < 1e-15);
}

TEST_CASE("spinor covariant derivative") {
    const SampleSet s = uniform_s3(21, 50);
    for (const auto& g : s) {
        for (const auto& x : kBasis) {
            CHECK(dist(spinor_covariant_derivative(families::constant(), g, x), Quat(0.5 * x)) < 1e-15);
            const Quat expected = -0.5 * (Quat(x) * g.inverse().quat());
            CHECK(dist(spinor_covariant_derivative(families::inverse(), g, x), expected) < 1e-15);
        }
    }
    // FD oracle for conj_b at the identity: f_*(x) = [f(1), x] with f(1) = b.
    const SpinorField f = families::conj_b(kJ);
    const Quat fd = central_difference(f.value, UnitQuat::identity(), kI, 1e-4);
    const Quat analytic = spinor_covariant_derivative(f, UnitQuat::identity(), kI) - 0.5 * (Quat(kI) * Quat(kJ));
    CHECK(dist(fd, analytic) < 1e-7);
    CHECK(dist(analytic, Quat(kJ) * Quat(kI) - Quat(kI) * Quat(kJ)) < 1e-15);
}

TEST_CASE("family parameters are validated") {
    CHECK_THROWS_AS(families::conj_b(ImQuat{1.0, 1.0, 0.0}), DomainError);
    CHECK_THROWS_AS(families::b_inverse(ImQuat{}), DomainError);
}

TEST_CASE("xi fields of the families") {
    const ImQuat b{0.0, 0.6, 0.8};
    const SampleSet s = uniform_s3(22, 100);
    for (const auto& g : s) {
        for (const auto& a : kBasis) {
            CHECK((xi_field(families::constant(), a)(g) - a).norm() < 1e-15);
            // xi_a(g) = a g, so the frame component is g^{-1} a g.
            CHECK((xi_field(families::inverse(), a)(g) - conjugate_by(g.inverse(), a)).norm() < 1e-15);
            // xi_a(g) = g b g^{-1} a g b^{-1}.
            const Quat ambient = g.quat() * Quat(b) * g.inverse().quat() * Quat(a) * g.quat() * inverse(Quat(b));
            const Quat from_field = g.quat() * Quat(xi_field(families::b_inverse(b), a)(g));
            CHECK(dist(ambient, from_field) < 1e-14);
        }
    }
    SpinorField zero;
    zero.value = [](const UnitQuat&) { return Quat{}; };
    CHECK_THROWS_AS(xi_field(zero, kI)(UnitQuat::identity()), DegeneracyError);
}

TEST_CASE("xi defining identity and orientation") {
    const SampleSet s = uniform_s3(23, 200);
    auto spinors = gks_families(kK);
    spinors.push_back(families::random_poly(5));
    for (const auto& psi : spinors) {
        for (const auto& g : s) {
            const Quat f = psi(g);
            for (const auto& a : kBasis) CHECK(dist(Quat(xi_field(psi, a)(g)) * f, f * Quat(a)) <= 1e-12);
            const ImQuat vi = xi_field(psi, kI)(g), vj = xi_field(psi, kJ)(g), vk = xi_field(psi, kK)(g);
            CHECK(std::abs(dot(vi, vj)) < 1e-14);
            CHECK(std::abs(dot(vj, vk)) < 1e-14);
            CHECK(std::abs(vi.norm() - 1.0) < 1e-14);
            CHECK(det_triple(vi, vj, vk) == doctest::Approx(1.0).epsilon(1e-13));
        }
    }
}

TEST_CASE("m_matrix") {
    const SampleSet s = uniform_s3(24, 100);
    CHECK(m_matrix(families::constant(), s[0]).matrix.norm() == 0.0);

    const ImQuat b = kJ;
    const SpinorField f = families::conj_b(b);
    for (const auto& g : s) {
        const MMatrix m = m_matrix(f, g);
        CHECK(skew_part(m.matrix).norm() < 1e-14);
        CHECK(m.real_part < 1e-14);
        const Quat fg = f(g);
        for (int j = 0; j < 3; ++j) {
            const ImQuat x = kBasis[j];
            const ImQuat expected = conjugate_by(fg, x) - x;
            CHECK((ImQuat{m.matrix(0, j), m.matrix(1, j), m.matrix(2, j)} - expected).norm() < 1e-14);
        }
        CHECK((m.matrix - m_matrix(f, g, kFd).matrix).norm() < 1e-7);
    }

    const UnitQuat g = exp_im(0.5 * kI);
    const MMatrix id = m_matrix(families::identity_map(), g);
    CHECK((id.matrix - conjugation_matrix(g)).norm() < 1e-14);
    CHECK(skew_part(id.matrix).norm() > 0.1);
}

TEST_CASE("generalized Killing endomorphism") {
    const SampleSet s = uniform_s3(25, 50);
    for (const auto& g : s) {
        CHECK((gk_endomorphism(families::constant(), g) - 0.5 * Mat3::Identity()).norm() < 1e-15);
        CHECK((gk_endomorphism(families::inverse(), g) + 0.5 * Mat3::Identity()).norm() < 1e-14);
        const Mat3 A = gk_endomorphism(families::conj_b(kJ), g);
        CHECK(skew_part(A).norm() < 1e-14);
        const double lambda = A.trace() / 3.0;
        CHECK((A - lambda * Mat3::Identity()).norm() > 0.5);
    }
    CHECK_THROWS_AS(gk_endomorphism(stretched(), exp_im(0.3 * kJ)), ConsistencyError);
}

TEST_CASE("gk_check on families and controls") {
    const SampleSet s = uniform_s3(26, 300);
    const GKReport one = gk_check(families::constant(), s);
    CHECK(one.pass);
    REQUIRE(one.killing_constant.has_value());
    CHECK(*one.killing_constant == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(one.endomorphisms.size() == s.size());

    const GKReport two = gk_check(families::inverse(), s);
    CHECK(two.pass);
    CHECK(*two.killing_constant == doctest::Approx(-0.5).epsilon(1e-12));

    const GKReport three = gk_check(families::conj_b(kJ), s);
    CHECK(three.pass);
    CHECK_FALSE(three.killing_constant.has_value());
    CHECK(three.lambda_fit_residual > 1e-2);

    const GKReport four = gk_check(families::b_inverse(kI), s, GKTolerances::for_mode(DerivMode::FiniteDifference), kFd);
    CHECK(four.pass);
    CHECK(four.skew_residual < 1e-5);

    const GKReport id = gk_check(families::identity_map(), s);
    CHECK_FALSE(id.pass);
    CHECK(id.skew_residual >= 0.1);
}

TEST_CASE("nabla xi identity on the families") {
    const SampleSet s = uniform_s3(27, 200);
    CounterRng rng(27, 1);
    for (const auto& psi : gks_families(ImQuat{0.0, 0.6, 0.8})) {
        for (const auto& g : s) {
            const ImQuat x = random_unit_im(rng);
            const ImQuat a = kBasis[rng.next_u64() % 3];
            const VectorFieldS3 xi = xi_field(psi, a);
            const ImQuat lhs = covariant_derivative(xi, {g, x}).lie;
            const Eigen::Vector3d Ax = gk_endomorphism(psi, g) * x.vec();
            const ImQuat rhs = -2.0 * hodge_contract(ImQuat{Ax(0), Ax(1), Ax(2)}, xi(g));
            CHECK((lhs - rhs).norm() <= 1e-6);
        }
    }
}

TEST_CASE("d xi on the Killing families") {
    const SampleSet s = uniform_s3(28, 100);
    for (const auto& g : s) {
        for (const auto& a : kBasis) {
            const VectorFieldS3 x1 = xi_field(families::constant(), a);
            const VectorFieldS3 x2 = xi_field(families::inverse(), a);
            CHECK((exterior_derivative_dual(x1, g).dual() + 2.0 * x1(g)).norm() <= 1e-6);
            CHECK((exterior_derivative_dual(x2, g).dual() - 2.0 * x2(g)).norm() <= 1e-6);
        }
    }
}

TEST_CASE("divergence criterion on random spinors") {
    const SampleSet s = uniform_s3(29, 200);
    for (std::uint64_t k = 0; k < 50; ++k) {
        const SpinorField psi = families::random_poly(1000 + k);
        const GKReport r = gk_check(psi, s);
        CHECK(r.divergence_identity_residual <= 1e-6);
        // Both sides of the equivalence fail together on non-examples.
        CHECK((r.skew_residual <= 1e-8) == (r.divergence_residual <= 1e-8));
        CHECK(r.length_residual < 1e-12);
    }
    for (const auto& psi : gks_families(kK)) {
        const GKReport r = gk_check(psi, s);
        CHECK(r.skew_residual <= 1e-8);
        CHECK(r.divergence_residual <= 1e-8);
    }
}

TEST_CASE("random polynomial spinors") {
    const SpinorField a = families::random_poly(7), b = families::random_poly(7);
    const UnitQuat g = exp_im(ImQuat{0.1, 0.2, 0.3});
    CHECK(a(g) == b(g));
    CHECK(a(g).norm() == doctest::Approx(1.0).epsilon(1e-14));
    DerivOptions rich = kFd;
    rich.richardson = true;
    for (const auto& x : kBasis) CHECK(dist(a.derivative(g, x, {}), a.derivative(g, x, rich)) < 1e-9);
}

TEST_CASE("divergence vanishes along an orbit of a family (3) field") {
    const VectorFieldS3 xi = xi_field(families::conj_b(kJ), kI);
    const auto orbit = flow_orbit(xi, exp_im(ImQuat{0.3, -0.2, 0.5}), 6.0, 200);
    for (const auto& p : orbit) CHECK(std::abs(divergence(xi, p.g)) <= 1e-6);
}

TEST_CASE("V alpha decomposition") {
    const SampleSet s = uniform_s3(30, 100);
    const auto one = decompose_valpha(families::constant());
    const auto three = decompose_valpha(families::conj_b(kK));
    const double theta = 0.7;
    const auto tilt = decompose_valpha(tilted(theta, kK));
    for (const auto& g : s) {
        CHECK(one.alpha(g) == 1.0);
        CHECK(one.V(g).norm() == 0.0);
        CHECK(std::abs(three.alpha(g)) < 1e-15);
        CHECK(three.V(g).norm() == doctest::Approx(1.0).epsilon(1e-14));
        CHECK(tilt.alpha(g) == doctest::Approx(std::cos(theta)).epsilon(1e-14));
        CHECK(tilt.V(g).norm() == doctest::Approx(std::sin(theta)).epsilon(1e-14));
    }
}

TEST_CASE("system residuals") {
    const SampleSet s = uniform_s3(31, 300);
    const SystemResidual r1 = max_residuals(system_residuals(decompose_valpha(families::constant()), s));
    CHECK(r1.max() == 0.0);
    for (const auto& psi : gks_families(kJ))
        CHECK(max_residuals(system_residuals(decompose_valpha(psi), s)).max() <= 1e-6);
    const SystemResidual fd = max_residuals(system_residuals(decompose_valpha(families::conj_b(kJ)), s, kFd));
    CHECK(fd.max() <= 1e-6);
    const SystemResidual bad = max_residuals(system_residuals(decompose_valpha(families::identity_map()), s));
    CHECK(bad.max() >= 0.05);
}

TEST_CASE("frame round trips") {
    const SampleSet s = uniform_s3(32, 200);
    for (const auto& psi : {families::constant(), families::inverse(), families::conj_b(kJ), families::b_inverse(kK)}) {
        const OrthoFrame frame = frame_from_spinor(psi);
        CHECK(orthoframe_defect(frame, s) < 1e-13);
        const ReconstructedSpinor rec = spinor_from_frame(frame, s);
        CHECK(round_trip_residual(psi, rec) <= 1e-9);
        const SpinorField back = rec.field(frame);
        const UnitQuat g = exp_im(ImQuat{0.2, 0.1, -0.4});
        CHECK(std::min(dist(back(g), psi(g)), dist(back(g), -psi(g))) <= 1e-9);
    }

    const OrthoFrame one = frame_from_spinor(families::constant());
    const UnitQuat g = exp_im(0.9 * kK);
    for (int n = 0; n < 3; ++n) CHECK((one.fields[n](g) - kBasis[n]).norm() < 1e-15);
    const ReconstructedSpinor rec = spinor_from_frame(one, s);
    for (const auto& v : rec.values) CHECK(dist(v, Quat(1.0)) < 1e-12);
}

TEST_CASE("spinor_from_frame rejects bad frames") {
    const SampleSet s = uniform_s3(33, 50);
    const OrthoFrame flipped{{left_invariant_field(kJ), left_invariant_field(kI), left_invariant_field(kK)}};
    CHECK_THROWS_AS(spinor_from_frame(flipped, s), DomainError);
    // Orthonormal and oriented, but not divergence-free.
    const OrthoFrame twisted = frame_from_spinor(families::identity_map());
    CHECK_THROWS_AS(spinor_from_frame(twisted, s), DomainError);
}

TEST_CASE("gk_check does not depend on the thread count") {
    const SampleSet s = uniform_s3(34, 400);
    const SpinorField psi = families::random_poly(3);
    setenv("NKSPIN_THREADS", "1", 1);
    const GKReport a = gk_check(psi, s);
    setenv("NKSPIN_THREADS", "3", 1);
    const GKReport b = gk_check(psi, s);
    unsetenv("NKSPIN_THREADS");
    CHECK(a.skew_residual == b.skew_residual);
    CHECK(a.lambda_fit == b.lambda_fit);
    CHECK(a.divergence_identity_residual == b.divergence_identity_residual);
}
