#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "nkspin/quat.hpp"
#include "nkspin/s3calc.hpp"
#include "nkspin/sampling.hpp"
#include "nkspin/spinor.hpp"

// The homogeneous nearly Kaehler structure on S^3 x S^3. Tangent vectors at
// (g1, g2) are written (g1 x1, g2 x2) and every tensor is evaluated on the
// Lie components (x1, x2).

namespace nkspin {

/// -1/12 trace(ad_x o ad_x) for a unit x, computed from the Hamilton product.
double ad_square_trace(const ImQuat& x);

/// Ratio between <.,.> = -B0 = -B/12 and the Euclidean dot on Im H. Computed
/// once from ad-traces (equals 2/3).
double kappa();

struct ProductPoint {
    UnitQuat g1;
    UnitQuat g2;
};

struct ProductTangent {
    ProductPoint base;
    ImQuat x1;
    ImQuat x2;
};

/// g = 1/3 (2<X1,Y1> + 2<X2,Y2> - <X1,Y2> - <X2,Y1>); DomainError if the base
/// points differ.
double nk_metric(const ProductTangent& a, const ProductTangent& b);
/// J(X1, X2) = 1/sqrt(3) (X1 - 2 X2, 2 X1 - X2).
ProductTangent nk_J(const ProductTangent& a);
/// Omega = 1/sqrt(3) (<x1, y2> - <x2, y1>) on Lie components.
double nk_omega(const ProductTangent& a, const ProductTangent& b);

enum class FamilyKind { Gamma1, Gamma2, Gamma3, Gamma4, Lab, GraphInv };

/// One of the explicit three-dimensional submanifolds, parametrized by g in S^3.
class LagrangianFamily {
public:
    static LagrangianFamily gamma1();
    static LagrangianFamily gamma2();
    /// {(g, g^{-1} b g)}, |b| = 1.
    static LagrangianFamily gamma3(const ImQuat& b);
    /// {(g, g b)}, |b| = 1.
    static LagrangianFamily gamma4(const ImQuat& b);
    /// {(g a g^{-1}, g b g^{-1})}, |a| = |b| = 1, a orthogonal to b.
    static LagrangianFamily lab(const ImQuat& a, const ImQuat& b);
    /// Graph {(g, f(g)^{-1})} of the inverse of an S^3-valued map.
    static LagrangianFamily graph_inv(SpinorField f);

    FamilyKind kind() const { return kind_; }
    const std::string& name() const { return name_; }
    const ImQuat& a() const { return a_; }
    const ImQuat& b() const { return b_; }
    const SpinorField& map() const { return map_; }

private:
    FamilyKind kind_{FamilyKind::Gamma1};
    std::string name_;
    ImQuat a_;
    ImQuat b_;
    SpinorField map_;
};

ProductPoint family_point(const LagrangianFamily& F, const UnitQuat& g);
/// Closed-form image of g x under the parametrization. For GraphInv the second
/// component is -f_*(g x) f(g)^{-1}, using `opts` for f_*.
ProductTangent family_tangent(const LagrangianFamily& F, const UnitQuat& g, const ImQuat& x,
                              const DerivOptions& opts = {});
/// Same, by central differences of family_point.
ProductTangent family_tangent_fd(const LagrangianFamily& F, const UnitQuat& g, const ImQuat& x, double h = 1e-4);

/// max over samples and basis pairs of |Omega(T_x, T_y)|.
double lagrangian_residual(const LagrangianFamily& F, const SampleSet& samples, const DerivOptions& opts = {});

/// G_ij = g(T_{e_i}, T_{e_j}).
Mat3 induced_gram(const LagrangianFamily& F, const UnitQuat& g, const DerivOptions& opts = {});

/// Expected fibre direction (in the parameter frame at g) for families whose
/// Berger structure is known in closed form.
std::optional<ImQuat> fiber_axis(const LagrangianFamily& F, const UnitQuat& g);

enum class GeometryKind { Round, Berger, Other };

struct GeometryFit {
    GeometryKind kind{GeometryKind::Other};
    double radius{0.0};   // Round
    double c_base{0.0};   // Berger: length scale on the base directions
    double c_fiber{0.0};  // Berger: length scale along the fibre
    ImQuat fiber_axis;    // Berger: simple eigenvector at the first sample
};

struct VolumeEstimate {
    double estimate{0.0};
    double standard_error{0.0};
    std::size_t n{0};
    /// True when the integrand was constant and the value was returned directly.
    bool exact{false};
};

struct GramReport {
    std::vector<Mat3> grams;
    GeometryFit fit;
    double fit_residual{0.0};
    /// Largest misalignment of the simple eigenvector with fiber_axis(); 0 when
    /// no closed-form axis is known.
    double axis_residual{0.0};
    VolumeEstimate volume;
    double lagrangian_residual{0.0};
};

struct FitTolerances {
    double shape{1e-6};
    double axis{1e-6};
    double degenerate_det{1e-10};
};

/// Classifies the induced metric as a round sphere of radius c (G = c^2 I),
/// a Berger sphere (spectrum (c_f^2, c_b^2, c_b^2) constant over the samples,
/// simple eigenvector along the fibre) or neither. DegeneracyError when
/// det G <= degenerate_det somewhere.
GramReport fit_geometry(const LagrangianFamily& F, const SampleSet& samples, const FitTolerances& tol = {},
                        const DerivOptions& opts = {});

/// Mean of sqrt(det G) over uniform samples, i.e. vol(L) / vol(S^3) for the
/// pullback metric on the unit parameter sphere. When the integrand is
/// constant within `constant_tol` the common value is returned with
/// standard_error 0 and exact = true.
VolumeEstimate volume_ratio(const LagrangianFamily& F, const SampleSet& samples, const DerivOptions& opts = {},
                            bool allow_short_circuit = true, double constant_tol = 1e-10);

struct RadiusAdmissibility {
    bool admissible{false};
    std::optional<int> k;
};

/// Round Lagrangian spheres have radius k/3 with integer k >= 2.
RadiusAdmissibility admissible_round_radius(double r, double tol = 1e-6);

struct VolumeClass {
    double volume_ratio{0.0};
    std::vector<std::string> members;
};

/// Groups named reports by volume ratio (within `tol`), ordered by volume.
/// PreconditionError if a report fails its Lagrangian check.
std::vector<VolumeClass> component_invariant(const std::vector<std::pair<std::string, GramReport>>& reports,
                                             double tol = 1e-6, double lagrangian_tol = 1e-8);

/// Distance between family_point(a, g) and family_point(b, g), maximized over samples.
double point_set_distance(const LagrangianFamily& a, const LagrangianFamily& b, const SampleSet& samples);

}  // namespace nkspin
