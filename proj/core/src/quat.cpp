#include "nkspin/quat.hpp"

#include <numbers>
#include <ostream>
#include <sstream>

#include "nkspin/errors.hpp"

namespace nkspin {

UnitQuat::UnitQuat(const Quat& q) {
    const double n = q.norm();
    if (!(n > 0.0) || !std::isfinite(n)) {
        std::ostringstream msg;
        msg << "cannot normalize quaternion " << q << " onto S^3";
        throw DomainError(msg.str());
    }
    q_ = q / n;
}

UnitQuat UnitQuat::inverse() const {
    UnitQuat r;
    r.q_ = q_.conj();
    return r;
}

UnitQuat operator*(const UnitQuat& a, const UnitQuat& b) { return UnitQuat(mul(a.q_, b.q_)); }

Quat mul(const Quat& p, const Quat& q) {
    return {p.w * q.w - p.x * q.x - p.y * q.y - p.z * q.z,
            p.w * q.x + p.x * q.w + p.y * q.z - p.z * q.y,
            p.w * q.y - p.x * q.z + p.y * q.w + p.z * q.x,
            p.w * q.z + p.x * q.y - p.y * q.x + p.z * q.w};
}

Quat inverse(const Quat& q) {
    const double n2 = q.norm2();
    if (!(n2 > 0.0)) throw DomainError("inverse of the zero quaternion");
    return q.conj() / n2;
}

double dot(const ImQuat& x, const ImQuat& y) { return x.x * y.x + x.y * y.y + x.z * y.z; }

ImQuat cross(const ImQuat& x, const ImQuat& y) {
    return {x.y * y.z - x.z * y.y, x.z * y.x - x.x * y.z, x.x * y.y - x.y * y.x};
}

ImQuat bracket(const ImQuat& x, const ImQuat& y) { return 2.0 * cross(x, y); }

UnitQuat exp_im(const ImQuat& x) {
    const double theta = x.norm();
    if (theta == 0.0) return UnitQuat::identity();
    return UnitQuat(Quat{std::cos(theta), (std::sin(theta) / theta) * x});
}

ImQuat log_unit(const UnitQuat& q, double branch_tol) {
    const ImQuat v = q.imag();
    const double s = v.norm();
    const double c = q.w();
    if (c < 0.0 && s <= branch_tol) throw BranchError("log_unit: quaternion -1 has no principal logarithm");
    if (s == 0.0) return {};
    return (std::atan2(s, c) / s) * v;
}

ImQuat conjugate_by(const Quat& q, const ImQuat& a) { return (q * Quat(a) * inverse(q)).imag(); }

Mat3 conjugation_matrix(const Quat& q) {
    Mat3 r;
    for (int col = 0; col < 3; ++col) r.col(col) = conjugate_by(q, kBasis[col]).vec();
    return r;
}

Quat canonical_sign(const Quat& q) {
    const std::array<double, 4> c{q.w, q.x, q.y, q.z};
    for (double v : c) {
        if (v > 0.0) return q;
        if (v < 0.0) return -q;
    }
    return q;
}

UnitQuat rotation_to_unit_quat(const Mat3& R, double tol) {
    if (!R.allFinite()) throw DomainError("rotation_to_unit_quat: non-finite matrix");
    const double orth = (R.transpose() * R - Mat3::Identity()).cwiseAbs().maxCoeff();
    const double det = R.determinant();
    if (orth > tol || std::abs(det - 1.0) > tol) {
        std::ostringstream msg;
        msg << "rotation_to_unit_quat: matrix is not special orthogonal (|R^T R - I| = " << orth
            << ", det = " << det << ")";
        throw DomainError(msg.str());
    }
    // Shepperd: branch on the largest diagonal quantity for stability.
    const double tr = R.trace();
    Quat q;
    if (tr >= R(0, 0) && tr >= R(1, 1) && tr >= R(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + tr);
        q = {0.25 * s, (R(2, 1) - R(1, 2)) / s, (R(0, 2) - R(2, 0)) / s, (R(1, 0) - R(0, 1)) / s};
    } else if (R(0, 0) >= R(1, 1) && R(0, 0) >= R(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + R(0, 0) - R(1, 1) - R(2, 2));
        q = {(R(2, 1) - R(1, 2)) / s, 0.25 * s, (R(0, 1) + R(1, 0)) / s, (R(0, 2) + R(2, 0)) / s};
    } else if (R(1, 1) >= R(2, 2)) {
        const double s = 2.0 * std::sqrt(1.0 + R(1, 1) - R(0, 0) - R(2, 2));
        q = {(R(0, 2) - R(2, 0)) / s, (R(0, 1) + R(1, 0)) / s, 0.25 * s, (R(1, 2) + R(2, 1)) / s};
    } else {
        const double s = 2.0 * std::sqrt(1.0 + R(2, 2) - R(0, 0) - R(1, 1));
        q = {(R(1, 0) - R(0, 1)) / s, (R(0, 2) + R(2, 0)) / s, (R(1, 2) + R(2, 1)) / s, 0.25 * s};
    }
    return UnitQuat(canonical_sign(q));
}

std::ostream& operator<<(std::ostream& os, const Quat& q) {
    return os << '(' << q.w << ", " << q.x << ", " << q.y << ", " << q.z << ')';
}

std::ostream& operator<<(std::ostream& os, const ImQuat& q) {
    return os << '(' << q.x << ", " << q.y << ", " << q.z << ')';
}

std::ostream& operator<<(std::ostream& os, const UnitQuat& q) { return os << q.quat(); }

}  // namespace nkspin
