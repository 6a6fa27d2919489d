#include "nmqj/hilbert.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace nmqj {

Complex inner(const StateVector& a, const StateVector& b) {
    require_same_dim(a.size(), b.size(), "inner");
    return a.dot(b);  // Eigen's dot conjugates the left argument
}

StateVector apply(const Operator& A, const StateVector& v) {
    if (A.rows() != A.cols()) {
        throw ConfigError("apply: operator must be square");
    }
    require_same_dim(A.cols(), v.size(), "apply");
    return A * v;
}

std::pair<double, StateVector> hermitian_eigen_min(const DensityMatrix& M) {
    if (M.rows() != M.cols()) {
        throw ConfigError("hermitian_eigen_min: matrix must be square");
    }
    if (!M.allFinite()) {
        throw NumericalError("hermitian_eigen_min: non-finite entries");
    }
    // Symmetrize first to absorb accumulated integrator asymmetry.
    DensityMatrix sym = 0.5 * (M + M.adjoint());
    Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(sym);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("hermitian_eigen_min: eigensolver failed");
    }
    // Eigenvalues come out ascending.
    double lambda = solver.eigenvalues()(0);
    StateVector phi = solver.eigenvectors().col(0);
    phi.normalize();
    return {lambda, phi};
}

double trace_distance(const DensityMatrix& rho1, const DensityMatrix& rho2) {
    if (rho1.rows() != rho1.cols() || rho2.rows() != rho2.cols()) {
        throw ConfigError("trace_distance: matrices must be square");
    }
    require_same_dim(rho1.rows(), rho2.rows(), "trace_distance");
    DensityMatrix diff = rho1 - rho2;
    diff = 0.5 * (diff + diff.adjoint());
    Eigen::SelfAdjointEigenSolver<DensityMatrix> solver(diff);
    if (solver.info() != Eigen::Success) {
        throw NumericalError("trace_distance: eigensolver failed");
    }
    return 0.5 * solver.eigenvalues().cwiseAbs().sum();
}

bool is_normalized(const StateVector& psi, double tol) {
    return std::abs(psi.norm() - 1.0) <= tol;
}

bool is_hermitian(const Operator& A, double tol) {
    if (A.rows() != A.cols()) return false;
    return (A - A.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

StateVector basis_state(int dim, int k) {
    if (dim < 1 || k < 0 || k >= dim) {
        throw ConfigError("basis_state: index out of range");
    }
    StateVector e = StateVector::Zero(dim);
    e(k) = 1.0;
    return e;
}

}  // namespace nmqj
