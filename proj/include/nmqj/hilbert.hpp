// hilbert.hpp — dense complex vectors/operators and the metrics built on them
#pragma once

#include <complex>
#include <utility>

#include <Eigen/Dense>

#include "nmqj/errors.hpp"

namespace nmqj {

using Complex = std::complex<double>;
using StateVector = Eigen::VectorXcd;   // |psi>, normalized when used as a trajectory state
using Operator = Eigen::MatrixXcd;      // square, H(t) Hermitian, C_m arbitrary
using DensityMatrix = Eigen::MatrixXcd; // Hermitian, trace one when normalized

inline constexpr int kMinDim = 2;
inline constexpr int kMaxDim = 64;  // dense small-system regime

// <a|b>, conjugate-linear in a.
Complex inner(const StateVector& a, const StateVector& b);

// A|v>, not renormalized.
StateVector apply(const Operator& A, const StateVector& v);

// Smallest eigenvalue and a unit eigenvector of (M + M†)/2. For a degenerate
// lowest eigenvalue any unit vector of the eigenspace may be returned.
std::pair<double, StateVector> hermitian_eigen_min(const DensityMatrix& M);

// (1/2) sum of |eigenvalues| of rho1 - rho2.
double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2);

// ---- small shared helpers ----

inline void require_same_dim(Eigen::Index a, Eigen::Index b, const char* where) {
    if (a != b) {
        throw ConfigError(std::string(where) + ": dimension mismatch (" +
                          std::to_string(a) + " vs " + std::to_string(b) + ")");
    }
}

bool is_normalized(const StateVector& psi, double tol = 1e-9);
bool is_hermitian(const Operator& A, double tol = 1e-10);

// kth basis vector of a dim-dimensional space.
StateVector basis_state(int dim, int k);

}  // namespace nmqj
