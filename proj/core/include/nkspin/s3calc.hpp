#pragma once

#include <array>
#include <functional>
#include <string>
#include <vector>

#include "nkspin/errors.hpp"
#include "nkspin/quat.hpp"
#include "nkspin/sampling.hpp"

// Calculus on the round S^3 in the left-invariant frame u(g) = (g i, g j, g k).
// A tangent vector at g is written g x with x in Im H; a vector field Y is
// stored through its frame component y : S^3 -> Im H, Y_g = g y(g).

namespace nkspin {

enum class DerivMode { Analytic, FiniteDifference };

struct DerivOptions {
    DerivMode mode{DerivMode::Analytic};
    double h{1e-4};
    /// Combine steps h and h/2 to cancel the O(h^2) term.
    bool richardson{false};

    static DerivOptions analytic() { return {}; }
    static DerivOptions fd(double step = 1e-4) { return {DerivMode::FiniteDifference, step, false}; }
};

/// Central difference of F along t -> g exp(t x):
/// (F(g e^{hx}) - F(g e^{-hx})) / 2h.
template <class F>
auto central_difference(const F& f, const UnitQuat& g, const ImQuat& x, double h, bool richardson = false)
    -> decltype(f(g)) {
    if (!(h > 0.0)) throw DomainError("central_difference: step must be positive");
    auto step = [&](double s) {
        const auto plus = f(g * exp_im(s * x));
        const auto minus = f(g * exp_im(-s * x));
        return (plus - minus) * (1.0 / (2.0 * s));
    };
    if (!richardson) return step(h);
    const auto coarse = step(h);
    const auto fine = step(0.5 * h);
    return fine * (4.0 / 3.0) - coarse * (1.0 / 3.0);
}

/// d/dt|_0 F(g exp(t x)), either from a registered differential or by
/// central differences. An empty differential in analytic mode raises
/// ConfigurationError.
template <class F, class DF>
auto directional_derivative(const F& f, const DF& differential, const UnitQuat& g, const ImQuat& x,
                            const DerivOptions& opts) -> decltype(f(g)) {
    if (opts.mode == DerivMode::Analytic) {
        if (!differential) throw ConfigurationError("analytic derivative requested but no differential is registered");
        return differential(g, x);
    }
    return central_difference(f, g, x, opts.h, opts.richardson);
}

/// Tangent vector g x at g.
struct TangentS3 {
    UnitQuat base;
    ImQuat lie;

    Quat ambient() const { return base.quat() * Quat(lie); }
};

/// Y_g = g y(g). `differential(g, x)` is y_*(g x) when registered.
struct VectorFieldS3 {
    std::function<ImQuat(const UnitQuat&)> component;
    std::function<ImQuat(const UnitQuat&, const ImQuat&)> differential;
    std::string name{"custom"};

    ImQuat operator()(const UnitQuat& g) const { return component(g); }
    bool has_differential() const { return static_cast<bool>(differential); }
    ImQuat derivative(const UnitQuat& g, const ImQuat& x, const DerivOptions& opts) const {
        return directional_derivative(component, differential, g, x, opts);
    }
};

/// Real function on S^3 with optional analytic gradient (frame components).
struct ScalarFieldS3 {
    std::function<double(const UnitQuat&)> value;
    std::function<ImQuat(const UnitQuat&)> gradient;
    std::string name{"custom"};

    double operator()(const UnitQuat& g) const { return value(g); }
    bool has_gradient() const { return static_cast<bool>(gradient); }
    double derivative(const UnitQuat& g, const ImQuat& x, const DerivOptions& opts) const;
};

/// Three vector fields meant to be a positively oriented orthonormal frame.
struct OrthoFrame {
    std::array<VectorFieldS3, 3> fields;
};

/// Left-invariant field g c (a Hopf field when |c| = 1).
VectorFieldS3 left_invariant_field(const ImQuat& c);
/// Right-invariant field b g, whose frame component is g^{-1} b g.
VectorFieldS3 right_invariant_field(const ImQuat& b);

/// (nabla_X Y)_g = g (1/2 [x, y(g)] + y_*(X)).
TangentS3 covariant_derivative(const VectorFieldS3& Y, const TangentS3& X, const DerivOptions& opts = {});

/// delta Y = -sum_i <e_i, y_*(g e_i)>, the negative trace of nabla Y.
double divergence(const VectorFieldS3& Y, const UnitQuat& g, const DerivOptions& opts = {});

/// grad alpha = g sum_i e_i(alpha) e_i.
TangentS3 gradient(const ScalarFieldS3& alpha, const UnitQuat& g, const DerivOptions& opts = {});

/// Two-form at a point, stored by its frame components w(e_i, e_j).
struct TwoForm {
    Mat3 components{Mat3::Zero()};

    double operator()(const ImQuat& x, const ImQuat& y) const { return x.vec().dot(components * y.vec()); }
    /// z with w = *z, i.e. z = (w(e2,e3), w(e3,e1), w(e1,e2)).
    ImQuat dual() const { return {components(1, 2), components(2, 0), components(0, 1)}; }
};

/// *z as a two-form (so *e1 = e2 ^ e3).
TwoForm hodge_star(const ImQuat& z);

/// d(Y^flat) at g: dY(ge_i, ge_j) = e_i<y, e_j> - e_j<y, e_i> - 2 <y, e_i x e_j>,
/// the last term being -<Y, [ge_i, ge_j]>.
TwoForm exterior_derivative_dual(const VectorFieldS3& Y, const UnitQuat& g, const DerivOptions& opts = {});

/// X -| *Y in frame components: cross(y, x).
ImQuat hodge_contract(const ImQuat& x, const ImQuat& y);

/// <vol, x ^ y ^ z>, with det(i, j, k) = +1.
double det_triple(const ImQuat& x, const ImQuat& y, const ImQuat& z);

struct OrbitPoint {
    double t{0.0};
    UnitQuat g;
};

/// RK4 integration of g' = g y(g) on [0, t_max] with renormalization after
/// every step. Requires steps >= 8; DegeneracyError if |y| drops below
/// `min_speed` along the orbit.
std::vector<OrbitPoint> flow_orbit(const VectorFieldS3& Y, const UnitQuat& g0, double t_max, int steps,
                                   double min_speed = 1e-8);

/// Largest deviation from orthonormality / positive orientation of the frame
/// over the samples (0 for a perfect frame).
double orthoframe_defect(const OrthoFrame& frame, const SampleSet& samples);

}  // namespace nkspin
