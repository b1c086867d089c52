#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "nkspin/quat.hpp"
#include "nkspin/s3calc.hpp"
#include "nkspin/sampling.hpp"

// Spinors on S^3 in the fixed left gauge. A spinor is stored through its
// H-valued gauge function f (Psi = [u~, f]); Clifford multiplication by a
// tangent vector g x acts on f by left multiplication with x.

namespace nkspin {

enum class SpinorFamily {
    Const,       // f = c: Killing, constant +1/2
    Inverse,     // f = g^{-1}: Killing, constant -1/2
    ConjB,       // f = g^{-1} b g
    BInverse,    // f = b g^{-1}
    Identity,    // f = g, not generalized Killing
    RandomPoly,  // normalize(c0 + c1 g + c2 g^2)
    Custom,
};

struct SpinorField {
    std::function<Quat(const UnitQuat&)> value;
    /// f_*(g x) when registered.
    std::function<Quat(const UnitQuat&, const ImQuat&)> differential;
    SpinorFamily family{SpinorFamily::Custom};
    std::string label{"custom"};
    /// Family parameter: c for Const, b for ConjB / BInverse.
    Quat parameter{};

    Quat operator()(const UnitQuat& g) const { return value(g); }
    bool has_differential() const { return static_cast<bool>(differential); }
    Quat derivative(const UnitQuat& g, const ImQuat& x, const DerivOptions& opts) const {
        return directional_derivative(value, differential, g, x, opts);
    }
};

namespace families {

SpinorField constant(const Quat& c = Quat{1.0});
SpinorField inverse();
/// b must be a unit imaginary quaternion (DomainError otherwise).
SpinorField conj_b(const ImQuat& b);
SpinorField b_inverse(const ImQuat& b);
SpinorField identity_map();
/// Smooth, generically non-Killing unit spinor normalize(c0 + c1 g + c2 g^2)
/// with coefficients drawn from `seed`. Seeds whose polynomial comes within
/// 0.1 of zero on a probe set are re-drawn.
SpinorField random_poly(std::uint64_t seed);

}  // namespace families

/// x . f: left multiplication.
Quat clifford_action(const ImQuat& x, const Quat& f);

/// Gauge component of nabla_X Psi: X(f) + 1/2 x f.
Quat spinor_covariant_derivative(const SpinorField& psi, const UnitQuat& g, const ImQuat& x,
                                 const DerivOptions& opts = {});

/// xi_a with frame component v_a = f a f^{-1}; carries an analytic differential
/// when psi does. DegeneracyError when f vanishes.
VectorFieldS3 xi_field(const SpinorField& psi, const ImQuat& a);

/// Matrix of x -> f_*(g x) f(g)^{-1} together with the largest real part
/// dropped when projecting the columns onto Im H.
struct MMatrix {
    Mat3 matrix{Mat3::Zero()};
    double real_part{0.0};
};
MMatrix m_matrix(const SpinorField& psi, const UnitQuat& g, const DerivOptions& opts = {});

/// The endomorphism A with nabla_X Psi = A(X) . Psi, in the frame u.
/// Column j solves a f = e_j(f) + 1/2 e_j f. A column with |Re a| > tol means
/// |f| is not locally constant and raises ConsistencyError.
Mat3 gk_endomorphism(const SpinorField& psi, const UnitQuat& g, const DerivOptions& opts = {}, double tol = 1e-8);

struct GKTolerances {
    double skew{1e-8};
    double divergence{1e-8};
    double length{1e-8};
    double identity{1e-8};
    double real_part{1e-8};
    double killing_fit{1e-6};

    static GKTolerances for_mode(DerivMode mode);
};

struct GKReport {
    std::vector<Mat3> endomorphisms;
    double skew_residual{0.0};
    /// max |delta xi_a| over a in {i, j, k} and samples.
    double divergence_residual{0.0};
    /// Standard deviation of |f| over the samples.
    double length_residual{0.0};
    /// max |delta xi_a + 2 sum_i det(e_i, M(e_i), b)|, b = f a f^{-1}.
    double divergence_identity_residual{0.0};
    double real_part_residual{0.0};
    /// Least-squares lambda minimizing sum ||A - lambda I||_F^2 and the largest
    /// remaining ||A - lambda I||_F.
    double lambda_fit{0.0};
    double lambda_fit_residual{0.0};
    std::optional<double> killing_constant;
    bool pass{false};
};

GKReport gk_check(const SpinorField& psi, const SampleSet& samples, const GKTolerances& tol = {},
                  const DerivOptions& opts = {});

/// Psi = V . Phi + alpha Phi with Phi = [u~, 1]: alpha = Re f, V = [u, Im f].
struct VAlphaDecomposition {
    VectorFieldS3 V;
    ScalarFieldS3 alpha;
};
VAlphaDecomposition decompose_valpha(const SpinorField& psi);

struct SystemResidual {
    double unit_length{0.0};  // (i)
    double vector_eq{0.0};    // (ii), Im H norm
    double scalar_eq{0.0};    // (iii)

    double max() const;
};

/// Residuals of
///   (i)   alpha^2 + |V|^2 = 1
///   (ii)  -V -| *nabla_V V - V(alpha) V + alpha nabla_V V + d alpha = 0
///   (iii) alpha *(V ^ dV) + (2 alpha - delta V)(1 - alpha^2) + alpha V(alpha) = 0
SystemResidual system_residual_at(const VAlphaDecomposition& d, const UnitQuat& g, const DerivOptions& opts = {});
std::vector<SystemResidual> system_residuals(const VAlphaDecomposition& d, const SampleSet& samples,
                                             const DerivOptions& opts = {});
SystemResidual max_residuals(const std::vector<SystemResidual>& rs);

/// (xi_i, xi_j, xi_k).
OrthoFrame frame_from_spinor(const SpinorField& psi);

/// Pointwise reconstruction of a unit spinor from a frame on a sample set.
struct ReconstructedSpinor {
    std::vector<UnitQuat> points;
    std::vector<Quat> values;

    /// Evaluates f anywhere by rotation_to_unit_quat, with the sign aligned to
    /// the nearest reconstructed sample.
    SpinorField field(const OrthoFrame& frame) const;
};

/// Inverts frame_from_spinor up to one global sign. Signs are propagated by a
/// greedy nearest-neighbour walk over the samples, each new value aligned to
/// its nearest already visited neighbour. DomainError when the frame is not
/// orthonormal and positively oriented within `tol`, or when a field is not
/// divergence-free within `div_tol`.
ReconstructedSpinor spinor_from_frame(const OrthoFrame& frame, const SampleSet& samples, double tol = 1e-9,
                                      double div_tol = 1e-6, const DerivOptions& opts = {});

/// min over s = +-1 of max_i |s values_i - f(points_i)/|f(points_i)||.
double round_trip_residual(const SpinorField& original, const ReconstructedSpinor& rec);

}  // namespace nkspin
