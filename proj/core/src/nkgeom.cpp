#include "nkspin/nkgeom.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include <Eigen/Eigenvalues>

#include "nkspin/errors.hpp"
#include "nkspin/parallel.hpp"

namespace nkspin {

namespace {

constexpr double kBaseTol = 1e-12;
const double kInvSqrt3 = 1.0 / std::sqrt(3.0);

void require_same_base(const ProductTangent& a, const ProductTangent& b) {
    const double d1 = (a.base.g1.quat() - b.base.g1.quat()).norm();
    const double d2 = (a.base.g2.quat() - b.base.g2.quat()).norm();
    if (d1 > kBaseTol || d2 > kBaseTol) throw DomainError("nearly Kaehler tensor evaluated on vectors at different points");
}

void require_unit(const ImQuat& v, const char* what) {
    if (std::abs(v.norm() - 1.0) > 1e-12) {
        std::ostringstream msg;
        msg << what << " " << v << " must be a unit imaginary quaternion";
        throw DomainError(msg.str());
    }
}

std::string vec_label(const ImQuat& v) {
    std::ostringstream os;
    os << v.x << ',' << v.y << ',' << v.z;
    return os.str();
}

// Lie component p^{-1} p' of a curve through p with velocity dp.
ImQuat lie_component(const Quat& p, const Quat& dp) { return (inverse(p) * dp).imag(); }

}  // namespace

double ad_square_trace(const ImQuat& x) {
    Mat3 ad;
    for (int j = 0; j < 3; ++j) {
        const Quat commutator = Quat(x) * Quat(kBasis[j]) - Quat(kBasis[j]) * Quat(x);
        ad.col(j) = commutator.imag().vec();
    }
    return -(ad * ad).trace() / 12.0;
}

double kappa() {
    static const double value = [] {
        const double k = ad_square_trace(kI);
        for (const auto& e : {kJ, kK}) {
            if (std::abs(ad_square_trace(e) - k) > 1e-15) throw ConsistencyError("ad-trace normalization is not isotropic");
        }
        return k;
    }();
    return value;
}

double nk_metric(const ProductTangent& a, const ProductTangent& b) {
    require_same_base(a, b);
    return kappa() / 3.0 *
           (2.0 * dot(a.x1, b.x1) + 2.0 * dot(a.x2, b.x2) - dot(a.x1, b.x2) - dot(a.x2, b.x1));
}

ProductTangent nk_J(const ProductTangent& a) {
    return {a.base, kInvSqrt3 * (a.x1 - 2.0 * a.x2), kInvSqrt3 * (2.0 * a.x1 - a.x2)};
}

double nk_omega(const ProductTangent& a, const ProductTangent& b) {
    require_same_base(a, b);
    return kappa() * kInvSqrt3 * (dot(a.x1, b.x2) - dot(a.x2, b.x1));
}

LagrangianFamily LagrangianFamily::gamma1() {
    LagrangianFamily f;
    f.kind_ = FamilyKind::Gamma1;
    f.name_ = "gamma1";
    return f;
}

LagrangianFamily LagrangianFamily::gamma2() {
    LagrangianFamily f;
    f.kind_ = FamilyKind::Gamma2;
    f.name_ = "gamma2";
    return f;
}

LagrangianFamily LagrangianFamily::gamma3(const ImQuat& b) {
    require_unit(b, "gamma3: b");
    LagrangianFamily f;
    f.kind_ = FamilyKind::Gamma3;
    f.b_ = b;
    f.name_ = "gamma3:" + vec_label(b);
    return f;
}

LagrangianFamily LagrangianFamily::gamma4(const ImQuat& b) {
    require_unit(b, "gamma4: b");
    LagrangianFamily f;
    f.kind_ = FamilyKind::Gamma4;
    f.b_ = b;
    f.name_ = "gamma4:" + vec_label(b);
    return f;
}

LagrangianFamily LagrangianFamily::lab(const ImQuat& a, const ImQuat& b) {
    require_unit(a, "lab: a");
    require_unit(b, "lab: b");
    if (std::abs(dot(a, b)) > 1e-12) throw DomainError("lab: a and b must be orthogonal");
    LagrangianFamily f;
    f.kind_ = FamilyKind::Lab;
    f.a_ = a;
    f.b_ = b;
    f.name_ = "lab:" + vec_label(a) + ";" + vec_label(b);
    return f;
}

LagrangianFamily LagrangianFamily::graph_inv(SpinorField map) {
    LagrangianFamily f;
    f.kind_ = FamilyKind::GraphInv;
    f.name_ = "graphinv:" + map.label;
    f.map_ = std::move(map);
    return f;
}

ProductPoint family_point(const LagrangianFamily& F, const UnitQuat& g) {
    switch (F.kind()) {
        case FamilyKind::Gamma1:
            return {g, UnitQuat::identity()};
        case FamilyKind::Gamma2:
            return {g, g};
        case FamilyKind::Gamma3:
            return {g, UnitQuat(Quat(conjugate_by(g.inverse(), F.b())))};
        case FamilyKind::Gamma4:
            return {g, UnitQuat(g.quat() * Quat(F.b()))};
        case FamilyKind::Lab:
            return {UnitQuat(Quat(conjugate_by(g, F.a()))), UnitQuat(Quat(conjugate_by(g, F.b())))};
        case FamilyKind::GraphInv:
            return {g, UnitQuat(F.map()(g)).inverse()};
    }
    throw DomainError("family_point: unknown family");
}

ProductTangent family_tangent(const LagrangianFamily& F, const UnitQuat& g, const ImQuat& x, const DerivOptions& opts) {
    ProductTangent t{family_point(F, g), {}, {}};
    switch (F.kind()) {
        case FamilyKind::Gamma1:
            t.x1 = x;
            break;
        case FamilyKind::Gamma2:
            t.x1 = x;
            t.x2 = x;
            break;
        case FamilyKind::Gamma3: {
            const Quat h = conjugate_by(g.inverse(), F.b());
            t.x1 = x;
            t.x2 = x - (inverse(h) * Quat(x) * h).imag();
            break;
        }
        case FamilyKind::Gamma4:
            t.x1 = x;
            t.x2 = conjugate_by(inverse(Quat(F.b())), x);
            break;
        case FamilyKind::Lab: {
            // d/dt g e^{tx} a e^{-tx} g^{-1} = g [x, a] g^{-1}
            auto lie = [&](const ImQuat& c) { return conjugate_by(g, (inverse(Quat(c)) * Quat(bracket(x, c))).imag()); };
            t.x1 = lie(F.a());
            t.x2 = lie(F.b());
            break;
        }
        case FamilyKind::GraphInv: {
            const Quat f = F.map()(g);
            t.x1 = x;
            t.x2 = -(F.map().derivative(g, x, opts) * inverse(f)).imag();
            break;
        }
    }
    return t;
}

ProductTangent family_tangent_fd(const LagrangianFamily& F, const UnitQuat& g, const ImQuat& x, double h) {
    const ProductPoint p0 = family_point(F, g);
    const ProductPoint pp = family_point(F, g * exp_im(h * x));
    const ProductPoint pm = family_point(F, g * exp_im(-h * x));
    const double s = 1.0 / (2.0 * h);
    return {p0, lie_component(p0.g1, (pp.g1.quat() - pm.g1.quat()) * s),
            lie_component(p0.g2, (pp.g2.quat() - pm.g2.quat()) * s)};
}

double lagrangian_residual(const LagrangianFamily& F, const SampleSet& samples, const DerivOptions& opts) {
    const auto per = parallel_map<double>(samples.size(), [&](std::size_t s) {
        std::array<ProductTangent, 3> t;
        for (int i = 0; i < 3; ++i) t[i] = family_tangent(F, samples[s], kBasis[i], opts);
        double worst = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) worst = std::max(worst, std::abs(nk_omega(t[i], t[j])));
        return worst;
    });
    return per.empty() ? 0.0 : *std::max_element(per.begin(), per.end());
}

Mat3 induced_gram(const LagrangianFamily& F, const UnitQuat& g, const DerivOptions& opts) {
    std::array<ProductTangent, 3> t;
    for (int i = 0; i < 3; ++i) t[i] = family_tangent(F, g, kBasis[i], opts);
    Mat3 G;
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j) G(i, j) = nk_metric(t[i], t[j]);
    return G;
}

std::optional<ImQuat> fiber_axis(const LagrangianFamily& F, const UnitQuat& g) {
    switch (F.kind()) {
        case FamilyKind::Gamma3:
            return conjugate_by(g.inverse(), F.b());
        case FamilyKind::Gamma4:
            return F.b();
        case FamilyKind::GraphInv: {
            const auto& m = F.map();
            if (m.family == SpinorFamily::ConjB) return conjugate_by(g.inverse(), m.parameter.imag());
            if (m.family == SpinorFamily::BInverse) return m.parameter.imag();
            return std::nullopt;
        }
        default:
            return std::nullopt;
    }
}

VolumeEstimate volume_ratio(const LagrangianFamily& F, const SampleSet& samples, const DerivOptions& opts,
                            bool allow_short_circuit, double constant_tol) {
    const auto values = parallel_map<double>(samples.size(), [&](std::size_t s) {
        return std::sqrt(std::max(0.0, induced_gram(F, samples[s], opts).determinant()));
    });
    const MCEstimate mc = mean_and_error(values);
    VolumeEstimate v{mc.mean, mc.standard_error, mc.n, false};
    if (allow_short_circuit && !values.empty()) {
        const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
        if (*hi - *lo <= constant_tol) {
            v.standard_error = 0.0;
            v.exact = true;
        }
    }
    return v;
}

GramReport fit_geometry(const LagrangianFamily& F, const SampleSet& samples, const FitTolerances& tol,
                        const DerivOptions& opts) {
    GramReport rep;
    rep.grams = parallel_map<Mat3>(samples.size(), [&](std::size_t s) { return induced_gram(F, samples[s], opts); });
    for (std::size_t s = 0; s < rep.grams.size(); ++s) {
        const double det = rep.grams[s].determinant();
        if (!(det > tol.degenerate_det)) {
            std::ostringstream msg;
            msg << "fit_geometry: immersion of " << F.name() << " degenerates at g = " << samples[s]
                << " (det G = " << det << ")";
            throw DegeneracyError(msg.str());
        }
    }
    if (rep.grams.empty()) return rep;

    // Round: G = c^2 I.
    double c2 = 0.0;
    for (const auto& G : rep.grams) c2 += G.trace() / 3.0;
    c2 /= static_cast<double>(rep.grams.size());
    double round_res = 0.0;
    for (const auto& G : rep.grams) round_res = std::max(round_res, (G - c2 * Mat3::Identity()).cwiseAbs().maxCoeff());

    // Berger: constant spectrum with one simple eigenvalue.
    std::vector<Eigen::Vector3d> spectra;
    std::vector<Mat3> vectors;
    spectra.reserve(rep.grams.size());
    for (const auto& G : rep.grams) {
        Eigen::SelfAdjointEigenSolver<Mat3> es(G);
        spectra.push_back(es.eigenvalues());
        vectors.push_back(es.eigenvectors());
    }
    const auto& s0 = spectra.front();
    const int simple = (s0[2] - s0[1] <= s0[1] - s0[0]) ? 0 : 2;
    const int pair_lo = simple == 0 ? 1 : 0;
    double fiber2 = 0.0, base2 = 0.0;
    for (const auto& sp : spectra) {
        fiber2 += sp[simple];
        base2 += 0.5 * (sp[pair_lo] + sp[pair_lo + 1]);
    }
    fiber2 /= static_cast<double>(spectra.size());
    base2 /= static_cast<double>(spectra.size());
    double berger_res = 0.0;
    for (const auto& sp : spectra) {
        berger_res = std::max({berger_res, std::abs(sp[simple] - fiber2), std::abs(sp[pair_lo] - base2),
                               std::abs(sp[pair_lo + 1] - base2)});
    }
    double axis_res = 0.0;
    for (std::size_t s = 0; s < spectra.size(); ++s) {
        const auto axis = fiber_axis(F, samples[s]);
        if (!axis) break;
        const Vec3 e = vectors[s].col(simple);
        const Vec3 ax = axis->vec();
        axis_res = std::max(axis_res, std::min((e - ax).norm(), (e + ax).norm()));
    }

    rep.lagrangian_residual = lagrangian_residual(F, samples, opts);
    rep.volume = volume_ratio(F, samples, opts);

    if (round_res <= tol.shape) {
        rep.fit.kind = GeometryKind::Round;
        rep.fit.radius = std::sqrt(c2);
        rep.fit_residual = round_res;
        return rep;
    }
    rep.axis_residual = axis_res;
    if (berger_res <= tol.shape && axis_res <= tol.axis && std::abs(fiber2 - base2) > tol.shape) {
        rep.fit.kind = GeometryKind::Berger;
        rep.fit.c_fiber = std::sqrt(fiber2);
        rep.fit.c_base = std::sqrt(base2);
        rep.fit.fiber_axis = ImQuat(Vec3(vectors.front().col(simple)));
        rep.fit_residual = berger_res;
        return rep;
    }
    rep.fit.kind = GeometryKind::Other;
    rep.fit_residual = std::min(round_res, berger_res);
    return rep;
}

RadiusAdmissibility admissible_round_radius(double r, double tol) {
    if (!(r > 0.0)) throw DomainError("admissible_round_radius: radius must be positive");
    const double three_r = 3.0 * r;
    const double k = std::round(three_r);
    if (std::abs(three_r - k) <= tol && k >= 2.0) return {true, static_cast<int>(k)};
    return {false, std::nullopt};
}

std::vector<VolumeClass> component_invariant(const std::vector<std::pair<std::string, GramReport>>& reports, double tol,
                                             double lagrangian_tol) {
    std::vector<std::pair<double, std::string>> vols;
    for (const auto& [name, rep] : reports) {
        if (rep.lagrangian_residual > lagrangian_tol) {
            std::ostringstream msg;
            msg << "component_invariant: " << name << " is not Lagrangian (max |Omega| = " << rep.lagrangian_residual
                << ")";
            throw PreconditionError(msg.str());
        }
        vols.emplace_back(rep.volume.estimate, name);
    }
    std::stable_sort(vols.begin(), vols.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    std::vector<VolumeClass> classes;
    for (const auto& [v, name] : vols) {
        if (classes.empty() || std::abs(v - classes.back().volume_ratio) > tol) classes.push_back({v, {}});
        classes.back().members.push_back(name);
    }
    return classes;
}

double point_set_distance(const LagrangianFamily& a, const LagrangianFamily& b, const SampleSet& samples) {
    double worst = 0.0;
    for (const auto& g : samples) {
        const auto p = family_point(a, g);
        const auto q = family_point(b, g);
        const double d = std::sqrt((p.g1.quat() - q.g1.quat()).norm2() + (p.g2.quat() - q.g2.quat()).norm2());
        worst = std::max(worst, d);
    }
    return worst;
}

}  // namespace nkspin
