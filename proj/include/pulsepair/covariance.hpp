#pragma once

#include <Eigen/Dense>

namespace pulsepair {

// Real symmetric 4x4 correlation matrix in the quadrature basis
// (X1, P1, X2, P2); vacuum = I/2.
using CovMatrix4 = Eigen::Matrix4d;

inline CovMatrix4 vacuum_cov() { return 0.5 * CovMatrix4::Identity(); }

struct Blocks {
    Eigen::Matrix2d A, B, C;
};
Blocks split_blocks(const CovMatrix4& V);

// det A + det B + s * 2 det C; s = -1 gives the partial-transpose variant.
double sigma_invariant(const CovMatrix4& V, double c_sign);

struct SymplecticPair {
    double minus = 0.0;  // smaller symplectic eigenvalue
    double plus = 0.0;
    bool discriminant_clamped = false;  // Sigma^2 - 4 det V was slightly < 0
};

// Closed-form symplectic eigenvalues from the block invariants; pass
// partial_transpose = true for the separability test.
SymplecticPair symplectic_eigenvalues(const CovMatrix4& V, bool partial_transpose);

// Independent route: |eigenvalues of i Omega V| via a dense eigensolver.
SymplecticPair symplectic_eigenvalues_eigensolver(const CovMatrix4& V, bool partial_transpose);

// Physicality in the vacuum = 1/2 convention: both symplectic eigenvalues
// >= 1/2 - tol.
bool is_physical(const CovMatrix4& V, double tol = 1e-9);

// Independent symplectic phase rotations of the two modes (a local
// operation; entanglement measures must not change under it).
CovMatrix4 rotate_local(const CovMatrix4& V, double phi1, double phi2);

// Two-mode squeezed covariance with parameter r (test and demo fixture).
CovMatrix4 tms_covariance(double r);

}  // namespace pulsepair
