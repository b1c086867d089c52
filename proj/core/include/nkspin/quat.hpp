#pragma once

#include <array>
#include <cmath>
#include <iosfwd>

#include <Eigen/Dense>

namespace nkspin {

using Mat3 = Eigen::Matrix3d;
using Vec3 = Eigen::Vector3d;

/// Imaginary quaternion x i + y j + z k, i.e. an element of the Lie algebra
/// su(2) = Im H = R^3.
struct ImQuat {
    double x{0.0};
    double y{0.0};
    double z{0.0};

    constexpr ImQuat() = default;
    constexpr ImQuat(double x_, double y_, double z_) : x(x_), y(y_), z(z_) {}
    explicit ImQuat(const Vec3& v) : x(v[0]), y(v[1]), z(v[2]) {}

    double operator[](int idx) const { return idx == 0 ? x : (idx == 1 ? y : z); }
    Vec3 vec() const { return {x, y, z}; }

    double norm2() const { return x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }

    ImQuat& operator+=(const ImQuat& o) { x += o.x; y += o.y; z += o.z; return *this; }
    ImQuat& operator-=(const ImQuat& o) { x -= o.x; y -= o.y; z -= o.z; return *this; }
    ImQuat& operator*=(double s) { x *= s; y *= s; z *= s; return *this; }

    friend constexpr ImQuat operator+(ImQuat a, const ImQuat& b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr ImQuat operator-(ImQuat a, const ImQuat& b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr ImQuat operator-(const ImQuat& a) { return {-a.x, -a.y, -a.z}; }
    friend constexpr ImQuat operator*(double s, const ImQuat& a) { return {s * a.x, s * a.y, s * a.z}; }
    friend constexpr ImQuat operator*(const ImQuat& a, double s) { return s * a; }
    friend constexpr ImQuat operator/(const ImQuat& a, double s) { return {a.x / s, a.y / s, a.z / s}; }
    friend constexpr bool operator==(const ImQuat&, const ImQuat&) = default;
};

/// Ambient quaternion w + x i + y j + z k.
struct Quat {
    double w{0.0};
    double x{0.0};
    double y{0.0};
    double z{0.0};

    constexpr Quat() = default;
    constexpr Quat(double w_, double x_, double y_, double z_) : w(w_), x(x_), y(y_), z(z_) {}
    constexpr explicit Quat(double real) : w(real) {}
    constexpr Quat(double real, const ImQuat& v) : w(real), x(v.x), y(v.y), z(v.z) {}
    // Implicit: an imaginary quaternion is a quaternion.
    constexpr Quat(const ImQuat& v) : x(v.x), y(v.y), z(v.z) {}  // NOLINT

    double real() const { return w; }
    ImQuat imag() const { return {x, y, z}; }
    Eigen::Vector4d vec() const { return {w, x, y, z}; }

    double norm2() const { return w * w + x * x + y * y + z * z; }
    double norm() const { return std::sqrt(norm2()); }
    Quat conj() const { return {w, -x, -y, -z}; }

    friend constexpr Quat operator+(const Quat& a, const Quat& b) { return {a.w + b.w, a.x + b.x, a.y + b.y, a.z + b.z}; }
    friend constexpr Quat operator-(const Quat& a, const Quat& b) { return {a.w - b.w, a.x - b.x, a.y - b.y, a.z - b.z}; }
    friend constexpr Quat operator-(const Quat& a) { return {-a.w, -a.x, -a.y, -a.z}; }
    friend constexpr Quat operator*(double s, const Quat& a) { return {s * a.w, s * a.x, s * a.y, s * a.z}; }
    friend constexpr Quat operator*(const Quat& a, double s) { return s * a; }
    friend constexpr Quat operator/(const Quat& a, double s) { return {a.w / s, a.x / s, a.y / s, a.z / s}; }
    friend constexpr bool operator==(const Quat&, const Quat&) = default;
};

/// Point of S^3, the unit sphere in H. Construction renormalizes; a zero or
/// non-finite input raises DomainError.
class UnitQuat {
public:
    UnitQuat() = default;
    explicit UnitQuat(const Quat& q);
    UnitQuat(double w, double x, double y, double z) : UnitQuat(Quat{w, x, y, z}) {}

    static UnitQuat identity() { return {}; }

    const Quat& quat() const { return q_; }
    operator const Quat&() const { return q_; }  // NOLINT

    double w() const { return q_.w; }
    ImQuat imag() const { return q_.imag(); }
    UnitQuat inverse() const;

    friend UnitQuat operator*(const UnitQuat& a, const UnitQuat& b);
    friend bool operator==(const UnitQuat& a, const UnitQuat& b) { return a.q_ == b.q_; }

private:
    Quat q_{1.0, 0.0, 0.0, 0.0};
};

inline constexpr ImQuat kI{1.0, 0.0, 0.0};
inline constexpr ImQuat kJ{0.0, 1.0, 0.0};
inline constexpr ImQuat kK{0.0, 0.0, 1.0};
/// Positively oriented basis (e1, e2, e3) = (i, j, k).
inline constexpr std::array<ImQuat, 3> kBasis{kI, kJ, kK};

/// Hamilton product.
Quat mul(const Quat& p, const Quat& q);
inline Quat operator*(const Quat& p, const Quat& q) { return mul(p, q); }

/// conj(q) / |q|^2; DomainError for q = 0.
Quat inverse(const Quat& q);

double dot(const ImQuat& x, const ImQuat& y);
ImQuat cross(const ImQuat& x, const ImQuat& y);
/// Lie bracket on Im H: [x, y] = xy - yx = 2 cross(x, y).
ImQuat bracket(const ImQuat& x, const ImQuat& y);

/// exp(theta n) = cos(theta) + n sin(theta) for |n| = 1.
UnitQuat exp_im(const ImQuat& x);
/// Principal logarithm with |result| < pi. BranchError at q = -1.
ImQuat log_unit(const UnitQuat& q, double branch_tol = 1e-12);

/// q a q^{-1} for imaginary a.
ImQuat conjugate_by(const Quat& q, const ImQuat& a);
/// Matrix of a -> q a q^{-1} on Im H in the basis (i, j, k).
Mat3 conjugation_matrix(const Quat& q);
/// Inverse of conjugation_matrix up to sign. Sign convention: w >= 0, ties
/// broken by making the first nonzero imaginary component positive.
/// DomainError unless R is special orthogonal within `tol`.
UnitQuat rotation_to_unit_quat(const Mat3& R, double tol = 1e-8);

/// Picks the sign of q used by rotation_to_unit_quat.
Quat canonical_sign(const Quat& q);

std::ostream& operator<<(std::ostream& os, const Quat& q);
std::ostream& operator<<(std::ostream& os, const ImQuat& q);
std::ostream& operator<<(std::ostream& os, const UnitQuat& q);

}  // namespace nkspin
