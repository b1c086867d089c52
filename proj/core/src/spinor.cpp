#include "nkspin/spinor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "nkspin/errors.hpp"
#include "nkspin/parallel.hpp"

namespace nkspin {

namespace {

void require_unit_imaginary(const ImQuat& b, const char* who) {
    if (std::abs(b.norm() - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << who << ": parameter " << b << " is not a unit imaginary quaternion";
        throw DomainError(msg.str());
    }
}

Quat safe_inverse(const Quat& q, const char* who) {
    if (q.norm2() < 1e-24) throw DegeneracyError(std::string(who) + ": spinor vanishes");
    return inverse(q);
}

double skew_norm(const Mat3& a) { return (0.5 * (a - a.transpose())).cwiseAbs().maxCoeff(); }

}  // namespace

namespace families {

SpinorField constant(const Quat& c) {
    SpinorField s;
    s.value = [c](const UnitQuat&) { return c; };
    s.differential = [](const UnitQuat&, const ImQuat&) { return Quat{}; };
    s.family = SpinorFamily::Const;
    s.label = "const";
    s.parameter = c;
    return s;
}

SpinorField inverse() {
    SpinorField s;
    s.value = [](const UnitQuat& g) { return g.inverse().quat(); };
    s.differential = [](const UnitQuat& g, const ImQuat& x) { return -(Quat(x) * g.inverse()); };
    s.family = SpinorFamily::Inverse;
    s.label = "inv";
    return s;
}

SpinorField conj_b(const ImQuat& b) {
    require_unit_imaginary(b, "conj_b");
    SpinorField s;
    s.value = [b](const UnitQuat& g) { return Quat(conjugate_by(g.inverse(), b)); };
    s.differential = [b](const UnitQuat& g, const ImQuat& x) {
        return Quat(bracket(conjugate_by(g.inverse(), b), x));
    };
    s.family = SpinorFamily::ConjB;
    s.label = "conjb";
    s.parameter = b;
    return s;
}

SpinorField b_inverse(const ImQuat& b) {
    require_unit_imaginary(b, "b_inverse");
    SpinorField s;
    s.value = [b](const UnitQuat& g) { return Quat(b) * g.inverse(); };
    s.differential = [b](const UnitQuat& g, const ImQuat& x) { return -(Quat(b) * Quat(x) * g.inverse()); };
    s.family = SpinorFamily::BInverse;
    s.label = "binv";
    s.parameter = b;
    return s;
}

SpinorField identity_map() {
    SpinorField s;
    s.value = [](const UnitQuat& g) { return g.quat(); };
    s.differential = [](const UnitQuat& g, const ImQuat& x) { return g.quat() * Quat(x); };
    s.family = SpinorFamily::Identity;
    s.label = "identity";
    return s;
}

SpinorField random_poly(std::uint64_t seed) {
    constexpr double kMinNorm = 0.1;
    const SampleSet probe = uniform_s3(seed ^ 0x5eed5eed5eedULL, 512);

    std::array<Quat, 3> c;
    for (std::uint64_t stream = 0;; ++stream) {
        CounterRng rng(seed, stream);
        for (auto& ci : c) ci = {rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian(), rng.next_gaussian()};
        double min_norm = std::numeric_limits<double>::infinity();
        for (const auto& g : probe) {
            const Quat p = c[0] + c[1] * g + c[2] * g * g;
            min_norm = std::min(min_norm, p.norm());
        }
        if (min_norm >= kMinNorm) break;
    }

    auto poly = [c](const UnitQuat& g) { return c[0] + c[1] * g + c[2] * g * g; };
    SpinorField s;
    s.value = [poly](const UnitQuat& g) {
        const Quat p = poly(g);
        return p / p.norm();
    };
    s.differential = [c, poly](const UnitQuat& g, const ImQuat& x) {
        const Quat p = poly(g);
        const Quat gx = g.quat() * Quat(x);
        const Quat dp = c[1] * gx + c[2] * (gx * g + g.quat() * gx);
        const double n = p.norm();
        const double pdp = p.vec().dot(dp.vec());
        return dp / n - p * (pdp / (n * n * n));
    };
    s.family = SpinorFamily::RandomPoly;
    s.label = "randpoly:" + std::to_string(seed);
    return s;
}

}  // namespace families

Quat clifford_action(const ImQuat& x, const Quat& f) { return Quat(x) * f; }

Quat spinor_covariant_derivative(const SpinorField& psi, const UnitQuat& g, const ImQuat& x, const DerivOptions& opts) {
    return psi.derivative(g, x, opts) + 0.5 * clifford_action(x, psi(g));
}

VectorFieldS3 xi_field(const SpinorField& psi, const ImQuat& a) {
    VectorFieldS3 field;
    field.name = "xi";
    field.component = [psi, a](const UnitQuat& g) {
        const Quat f = psi(g);
        return (f * Quat(a) * safe_inverse(f, "xi_field")).imag();
    };
    if (psi.has_differential()) {
        // v_* = f_* a f^{-1} - f a f^{-1} f_* f^{-1}
        field.differential = [psi, a](const UnitQuat& g, const ImQuat& x) {
            const Quat f = psi(g);
            const Quat finv = safe_inverse(f, "xi_field");
            const Quat df = psi.differential(g, x);
            const Quat v = f * Quat(a) * finv;
            return (df * Quat(a) * finv - v * df * finv).imag();
        };
    }
    return field;
}

MMatrix m_matrix(const SpinorField& psi, const UnitQuat& g, const DerivOptions& opts) {
    const Quat finv = safe_inverse(psi(g), "m_matrix");
    MMatrix m;
    for (int j = 0; j < 3; ++j) {
        const Quat col = psi.derivative(g, kBasis[j], opts) * finv;
        m.matrix.col(j) = col.imag().vec();
        m.real_part = std::max(m.real_part, std::abs(col.real()));
    }
    return m;
}

namespace {

struct EndoColumns {
    Mat3 a{Mat3::Zero()};
    double real_part{0.0};
};

EndoColumns endomorphism_columns(const SpinorField& psi, const UnitQuat& g, const DerivOptions& opts) {
    const Quat f = psi(g);
    const Quat finv = safe_inverse(f, "gk_endomorphism");
    EndoColumns out;
    for (int j = 0; j < 3; ++j) {
        const Quat col = spinor_covariant_derivative(psi, g, kBasis[j], opts) * finv;
        out.a.col(j) = col.imag().vec();
        out.real_part = std::max(out.real_part, std::abs(col.real()));
    }
    return out;
}

}  // namespace

Mat3 gk_endomorphism(const SpinorField& psi, const UnitQuat& g, const DerivOptions& opts, double tol) {
    const auto cols = endomorphism_columns(psi, g, opts);
    if (cols.real_part > tol) {
        std::ostringstream msg;
        msg << "gk_endomorphism: |Re a| = " << cols.real_part << " exceeds " << tol
            << " at g = " << g << "; the spinor length is not constant";
        throw ConsistencyError(msg.str());
    }
    return cols.a;
}

GKTolerances GKTolerances::for_mode(DerivMode mode) {
    GKTolerances t;
    if (mode == DerivMode::FiniteDifference) {
        t.skew = t.divergence = t.length = t.identity = t.real_part = 1e-4;
        t.killing_fit = 1e-4;
    }
    return t;
}

GKReport gk_check(const SpinorField& psi, const SampleSet& samples, const GKTolerances& tol, const DerivOptions& opts) {
    struct PerSample {
        Mat3 a;
        double real_part{0.0};
        double skew{0.0};
        double length{0.0};
        double divergence{0.0};
        double identity{0.0};
    };
    std::array<VectorFieldS3, 3> xi;
    for (int k = 0; k < 3; ++k) xi[k] = xi_field(psi, kBasis[k]);

    const auto per = parallel_map<PerSample>(samples.size(), [&](std::size_t s) {
        const UnitQuat& g = samples[s];
        PerSample r;
        const auto cols = endomorphism_columns(psi, g, opts);
        r.a = cols.a;
        r.real_part = cols.real_part;
        r.skew = skew_norm(cols.a);
        const Quat f = psi(g);
        r.length = f.norm();
        const Mat3 m = m_matrix(psi, g, opts).matrix;
        for (int k = 0; k < 3; ++k) {
            const double div = divergence(xi[k], g, opts);
            const ImQuat b = xi[k](g);
            double det_sum = 0.0;
            for (int i = 0; i < 3; ++i) det_sum += det_triple(kBasis[i], ImQuat(Vec3(m.col(i))), b);
            r.divergence = std::max(r.divergence, std::abs(div));
            r.identity = std::max(r.identity, std::abs(div + 2.0 * det_sum));
        }
        return r;
    });

    GKReport rep;
    rep.endomorphisms.reserve(per.size());
    std::vector<double> lengths, traces;
    lengths.reserve(per.size());
    traces.reserve(per.size());
    for (const auto& r : per) {
        rep.endomorphisms.push_back(r.a);
        rep.skew_residual = std::max(rep.skew_residual, r.skew);
        rep.real_part_residual = std::max(rep.real_part_residual, r.real_part);
        rep.divergence_residual = std::max(rep.divergence_residual, r.divergence);
        rep.divergence_identity_residual = std::max(rep.divergence_identity_residual, r.identity);
        lengths.push_back(r.length);
        traces.push_back(r.a.trace());
    }
    const auto len = mean_and_error(lengths);
    rep.length_residual = len.standard_error * std::sqrt(static_cast<double>(std::max<std::size_t>(len.n, 1)));

    rep.lambda_fit = pairwise_sum(traces) / (3.0 * static_cast<double>(std::max<std::size_t>(traces.size(), 1)));
    for (const auto& a : rep.endomorphisms)
        rep.lambda_fit_residual = std::max(rep.lambda_fit_residual, (a - rep.lambda_fit * Mat3::Identity()).norm());
    if (rep.lambda_fit_residual <= tol.killing_fit) rep.killing_constant = rep.lambda_fit;

    rep.pass = rep.skew_residual <= tol.skew && rep.divergence_residual <= tol.divergence &&
               rep.length_residual <= tol.length && rep.divergence_identity_residual <= tol.identity &&
               rep.real_part_residual <= tol.real_part;
    return rep;
}

VAlphaDecomposition decompose_valpha(const SpinorField& psi) {
    VAlphaDecomposition d;
    d.V.name = "V";
    d.V.component = [psi](const UnitQuat& g) { return psi(g).imag(); };
    d.alpha.name = "alpha";
    d.alpha.value = [psi](const UnitQuat& g) { return psi(g).real(); };
    if (psi.has_differential()) {
        d.V.differential = [psi](const UnitQuat& g, const ImQuat& x) { return psi.differential(g, x).imag(); };
        d.alpha.gradient = [psi](const UnitQuat& g) {
            return ImQuat{psi.differential(g, kI).real(), psi.differential(g, kJ).real(),
                          psi.differential(g, kK).real()};
        };
    }
    return d;
}

double SystemResidual::max() const { return std::max({unit_length, vector_eq, scalar_eq}); }

SystemResidual system_residual_at(const VAlphaDecomposition& d, const UnitQuat& g, const DerivOptions& opts) {
    const ImQuat v = d.V(g);
    const double alpha = d.alpha(g);
    const ImQuat nvv = covariant_derivative(d.V, TangentS3{g, v}, opts).lie;
    const double v_alpha = d.alpha.derivative(g, v, opts);
    const ImQuat dalpha = gradient(d.alpha, g, opts).lie;
    const ImQuat eq2 = -hodge_contract(v, nvv) - v_alpha * v + alpha * nvv + dalpha;
    const double v_wedge_dv = dot(v, exterior_derivative_dual(d.V, g, opts).dual());
    const double delta_v = divergence(d.V, g, opts);
    const double eq3 = alpha * v_wedge_dv + (2.0 * alpha - delta_v) * (1.0 - alpha * alpha) + alpha * v_alpha;

    SystemResidual r;
    r.unit_length = std::abs(alpha * alpha + v.norm2() - 1.0);
    r.vector_eq = eq2.norm();
    r.scalar_eq = std::abs(eq3);
    return r;
}

std::vector<SystemResidual> system_residuals(const VAlphaDecomposition& d, const SampleSet& samples,
                                             const DerivOptions& opts) {
    return parallel_map<SystemResidual>(samples.size(),
                                        [&](std::size_t i) { return system_residual_at(d, samples[i], opts); });
}

SystemResidual max_residuals(const std::vector<SystemResidual>& rs) {
    SystemResidual m;
    for (const auto& r : rs) {
        m.unit_length = std::max(m.unit_length, r.unit_length);
        m.vector_eq = std::max(m.vector_eq, r.vector_eq);
        m.scalar_eq = std::max(m.scalar_eq, r.scalar_eq);
    }
    return m;
}

OrthoFrame frame_from_spinor(const SpinorField& psi) {
    OrthoFrame frame;
    const char* names[] = {"xi_i", "xi_j", "xi_k"};
    for (int a = 0; a < 3; ++a) {
        frame.fields[a] = xi_field(psi, kBasis[a]);
        frame.fields[a].name = names[a];
    }
    return frame;
}

namespace {

Mat3 frame_matrix(const OrthoFrame& frame, const UnitQuat& g) {
    Mat3 r;
    for (int a = 0; a < 3; ++a) r.col(a) = frame.fields[a](g).vec();
    return r;
}

double chord2(const Quat& p, const Quat& q) { return (p - q).norm2(); }

Quat align_sign(const Quat& q, const Quat& ref) { return q.vec().dot(ref.vec()) < 0.0 ? -q : q; }

}  // namespace

ReconstructedSpinor spinor_from_frame(const OrthoFrame& frame, const SampleSet& samples, double tol, double div_tol,
                                      const DerivOptions& opts) {
    const double defect = orthoframe_defect(frame, samples);
    if (defect > tol) {
        std::ostringstream msg;
        msg << "spinor_from_frame: frame is not an oriented orthonormal frame (defect " << defect << ")";
        throw DomainError(msg.str());
    }
    for (const auto& field : frame.fields) {
        const DerivOptions o =
            field.has_differential() || opts.mode == DerivMode::FiniteDifference ? opts : DerivOptions::fd(samples.fd_step);
        for (const auto& g : samples) {
            const double div = divergence(field, g, o);
            if (std::abs(div) > div_tol) {
                std::ostringstream msg;
                msg << "spinor_from_frame: field " << field.name << " has divergence " << div << " at " << g;
                throw DomainError(msg.str());
            }
        }
    }

    const std::size_t n = samples.size();
    ReconstructedSpinor rec;
    rec.points = samples.points;
    rec.values = parallel_map<Quat>(n, [&](std::size_t i) {
        return rotation_to_unit_quat(frame_matrix(frame, samples[i]), std::max(tol, 1e-8)).quat();
    });
    if (n == 0) return rec;

    std::vector<char> visited(n, 0);
    std::vector<std::size_t> order;
    order.reserve(n);
    std::size_t current = 0;
    visited[0] = 1;
    order.push_back(0);
    for (std::size_t step = 1; step < n; ++step) {
        std::size_t next = n;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t j = 0; j < n; ++j) {
            if (visited[j]) continue;
            const double d = chord2(samples[current], samples[j]);
            if (d < best) {
                best = d;
                next = j;
            }
        }
        std::size_t anchor = order.front();
        best = std::numeric_limits<double>::infinity();
        for (std::size_t k : order) {
            const double d = chord2(samples[k], samples[next]);
            if (d < best) {
                best = d;
                anchor = k;
            }
        }
        rec.values[next] = align_sign(rec.values[next], rec.values[anchor]);
        visited[next] = 1;
        order.push_back(next);
        current = next;
    }
    return rec;
}

SpinorField ReconstructedSpinor::field(const OrthoFrame& frame) const {
    SpinorField s;
    s.family = SpinorFamily::Custom;
    s.label = "reconstructed";
    s.value = [frame, pts = points, vals = values](const UnitQuat& g) {
        const Quat q = rotation_to_unit_quat(frame_matrix(frame, g)).quat();
        std::size_t nearest = 0;
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < pts.size(); ++i) {
            const double d = chord2(pts[i], g);
            if (d < best) {
                best = d;
                nearest = i;
            }
        }
        return pts.empty() ? q : align_sign(q, vals[nearest]);
    };
    return s;
}

double round_trip_residual(const SpinorField& original, const ReconstructedSpinor& rec) {
    double plus = 0.0, minus = 0.0;
    for (std::size_t i = 0; i < rec.points.size(); ++i) {
        const Quat f = original(rec.points[i]);
        const Quat unit = f / f.norm();
        plus = std::max(plus, (rec.values[i] - unit).norm());
        minus = std::max(minus, (rec.values[i] + unit).norm());
    }
    return std::min(plus, minus);
}

}  // namespace nkspin
