#include "nkspin/s3calc.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace nkspin {

double ScalarFieldS3::derivative(const UnitQuat& g, const ImQuat& x, const DerivOptions& opts) const {
    if (opts.mode == DerivMode::Analytic) {
        if (!gradient) throw ConfigurationError("scalar field '" + name + "' has no analytic gradient");
        return dot(gradient(g), x);
    }
    return central_difference(value, g, x, opts.h, opts.richardson);
}

VectorFieldS3 left_invariant_field(const ImQuat& c) {
    VectorFieldS3 f;
    f.component = [c](const UnitQuat&) { return c; };
    f.differential = [](const UnitQuat&, const ImQuat&) { return ImQuat{}; };
    f.name = "left-invariant";
    return f;
}

VectorFieldS3 right_invariant_field(const ImQuat& b) {
    VectorFieldS3 f;
    f.component = [b](const UnitQuat& g) { return conjugate_by(g.inverse(), b); };
    // d/dt e^{-tx} h e^{tx} = h x - x h = [h, x]
    f.differential = [b](const UnitQuat& g, const ImQuat& x) { return bracket(conjugate_by(g.inverse(), b), x); };
    f.name = "right-invariant";
    return f;
}

TangentS3 covariant_derivative(const VectorFieldS3& Y, const TangentS3& X, const DerivOptions& opts) {
    const UnitQuat& g = X.base;
    return {g, 0.5 * bracket(X.lie, Y(g)) + Y.derivative(g, X.lie, opts)};
}

double divergence(const VectorFieldS3& Y, const UnitQuat& g, const DerivOptions& opts) {
    // <e_i, [e_i, y]> = 0, so only the differential contributes to the trace.
    double tr = 0.0;
    for (const auto& e : kBasis) tr += dot(e, Y.derivative(g, e, opts));
    return -tr;
}

TangentS3 gradient(const ScalarFieldS3& alpha, const UnitQuat& g, const DerivOptions& opts) {
    if (opts.mode == DerivMode::Analytic) {
        if (!alpha.has_gradient())
            throw ConfigurationError("scalar field '" + alpha.name + "' has no analytic gradient");
        return {g, alpha.gradient(g)};
    }
    ImQuat lie;
    lie.x = alpha.derivative(g, kI, opts);
    lie.y = alpha.derivative(g, kJ, opts);
    lie.z = alpha.derivative(g, kK, opts);
    return {g, lie};
}

TwoForm hodge_star(const ImQuat& z) {
    TwoForm w;
    w.components << 0.0, z.z, -z.y,
                    -z.z, 0.0, z.x,
                    z.y, -z.x, 0.0;
    return w;
}

TwoForm exterior_derivative_dual(const VectorFieldS3& Y, const UnitQuat& g, const DerivOptions& opts) {
    const ImQuat y = Y(g);
    std::array<ImQuat, 3> dy;
    for (int i = 0; i < 3; ++i) dy[i] = Y.derivative(g, kBasis[i], opts);
    TwoForm w;
    for (int i = 0; i < 3; ++i) {
        for (int j = 0; j < 3; ++j) {
            w.components(i, j) =
                dot(dy[i], kBasis[j]) - dot(dy[j], kBasis[i]) - 2.0 * dot(y, cross(kBasis[i], kBasis[j]));
        }
    }
    return w;
}

ImQuat hodge_contract(const ImQuat& x, const ImQuat& y) { return cross(y, x); }

double det_triple(const ImQuat& x, const ImQuat& y, const ImQuat& z) { return dot(x, cross(y, z)); }

std::vector<OrbitPoint> flow_orbit(const VectorFieldS3& Y, const UnitQuat& g0, double t_max, int steps,
                                   double min_speed) {
    if (steps < 8) throw DomainError("flow_orbit: need at least 8 steps");
    if (!(t_max > 0.0)) throw DomainError("flow_orbit: t_max must be positive");
    const double dt = t_max / steps;

    auto rhs = [&](const Quat& q) {
        const UnitQuat g(q);
        const ImQuat y = Y(g);
        if (y.norm() < min_speed) {
            std::ostringstream msg;
            msg << "flow_orbit: field nearly vanishes (|y| = " << y.norm() << ") at g = " << g;
            throw DegeneracyError(msg.str());
        }
        return g.quat() * Quat(y);
    };

    std::vector<OrbitPoint> orbit;
    orbit.reserve(static_cast<std::size_t>(steps) + 1);
    orbit.push_back({0.0, g0});
    Quat q = g0;
    for (int n = 0; n < steps; ++n) {
        const Quat k1 = rhs(q);
        const Quat k2 = rhs(q + (0.5 * dt) * k1);
        const Quat k3 = rhs(q + (0.5 * dt) * k2);
        const Quat k4 = rhs(q + dt * k3);
        q = q + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const UnitQuat g(q);
        q = g.quat();
        orbit.push_back({(n + 1) * dt, g});
    }
    return orbit;
}

double orthoframe_defect(const OrthoFrame& frame, const SampleSet& samples) {
    double worst = 0.0;
    for (const auto& g : samples) {
        std::array<ImQuat, 3> v;
        for (int a = 0; a < 3; ++a) v[a] = frame.fields[a](g);
        for (int a = 0; a < 3; ++a)
            for (int b = 0; b < 3; ++b)
                worst = std::max(worst, std::abs(dot(v[a], v[b]) - (a == b ? 1.0 : 0.0)));
        worst = std::max(worst, std::abs(det_triple(v[0], v[1], v[2]) - 1.0));
    }
    return worst;
}

}  // namespace nkspin
