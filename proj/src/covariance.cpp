#include "pulsepair/covariance.hpp"

#include <cmath>

namespace pulsepair {

Blocks split_blocks(const CovMatrix4& V) {
    Blocks b;
    b.A = V.block<2, 2>(0, 0);
    b.B = V.block<2, 2>(2, 2);
    b.C = V.block<2, 2>(0, 2);
    return b;
}

double sigma_invariant(const CovMatrix4& V, double c_sign) {
    const Blocks b = split_blocks(V);
    return b.A.determinant() + b.B.determinant() + c_sign * 2.0 * b.C.determinant();
}

SymplecticPair symplectic_eigenvalues(const CovMatrix4& V, bool partial_transpose) {
    SymplecticPair out;
    const double sig = sigma_invariant(V, partial_transpose ? -1.0 : +1.0);
    const double det = V.determinant();
    double disc = sig * sig - 4.0 * det;
    if (disc < 0.0) {
        out.discriminant_clamped = true;
        disc = 0.0;
    }
    const double rt = std::sqrt(disc);
    out.minus = std::sqrt(std::max(0.5 * (sig - rt), 0.0));
    out.plus = std::sqrt(std::max(0.5 * (sig + rt), 0.0));
    return out;
}

SymplecticPair symplectic_eigenvalues_eigensolver(const CovMatrix4& V,
                                                  bool partial_transpose) {
    CovMatrix4 W = V;
    if (partial_transpose) {
        // Momentum reversal of mode 2: P2 -> -P2.
        Eigen::Vector4d L(1.0, 1.0, 1.0, -1.0);
        W = L.asDiagonal() * W * L.asDiagonal();
    }
    Eigen::Matrix4d Om = Eigen::Matrix4d::Zero();
    Om(0, 1) = 1.0; Om(1, 0) = -1.0;
    Om(2, 3) = 1.0; Om(3, 2) = -1.0;
    Eigen::Matrix4cd M = std::complex<double>(0.0, 1.0) * (Om * W);
    Eigen::ComplexEigenSolver<Eigen::Matrix4cd> es(M, false);
    Eigen::Vector4d mags = es.eigenvalues().cwiseAbs();
    std::sort(mags.data(), mags.data() + 4);
    SymplecticPair out;
    out.minus = 0.5 * (mags(0) + mags(1));  // eigenvalues come in +/- pairs
    out.plus = 0.5 * (mags(2) + mags(3));
    return out;
}

bool is_physical(const CovMatrix4& V, double tol) {
    return symplectic_eigenvalues(V, false).minus >= 0.5 - tol;
}

CovMatrix4 rotate_local(const CovMatrix4& V, double phi1, double phi2) {
    auto rot = [](double phi) {
        Eigen::Matrix2d R;
        R << std::cos(phi), std::sin(phi), -std::sin(phi), std::cos(phi);
        return R;
    };
    CovMatrix4 S = CovMatrix4::Zero();
    S.block<2, 2>(0, 0) = rot(phi1);
    S.block<2, 2>(2, 2) = rot(phi2);
    return S * V * S.transpose();
}

CovMatrix4 tms_covariance(double r) {
    CovMatrix4 V = CovMatrix4::Zero();
    const double ch = 0.5 * std::cosh(2.0 * r);
    const double sh = 0.5 * std::sinh(2.0 * r);
    V.diagonal() << ch, ch, ch, ch;
    V(0, 2) = V(2, 0) = sh;
    V(1, 3) = V(3, 1) = -sh;
    return V;
}

}  // namespace pulsepair
