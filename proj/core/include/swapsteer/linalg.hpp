#ifndef SWAPSTEER_LINALG_HPP
#define SWAPSTEER_LINALG_HPP

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "swapsteer/errors.hpp"

namespace swapsteer {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

namespace tol {
// Structural checks (unitarity, Hermiticity, normalization, POVM validity).
inline constexpr double structural = 1e-9;
// Optimizer convergence.
inline constexpr double convergence = 1e-6;
// Rank decisions (full-rank assumption, dropped eigenvalues).
inline constexpr double rank = 1e-8;
}  // namespace tol

/// Ordered list of tensor factors with human-readable labels, e.g.
/// {{2, "A1"}, {2, "A2"}, {4, "B"}}. Annotates vectors/matrices of the
/// matching total dimension.
struct SubsystemShape {
    std::vector<Eigen::Index> dims;
    std::vector<std::string> labels;

    Eigen::Index total() const;
    std::size_t index_of(const std::string& label) const;  // throws on unknown label
    void validate(Eigen::Index total_dim) const;
};

bool is_finite(const Matrix& m);
bool is_hermitian(const Matrix& m, double eps = 1e-10);
/// PSD + unit trace check for density operators.
bool is_density_operator(const Matrix& m, double eps = tol::structural);
bool is_unitary(const Matrix& m, double eps = tol::structural);
void require_unit_vector(const Vector& v, double eps = 1e-12);

/// Tensor (Kronecker) product; dimensions multiply.
Matrix kron(const Matrix& a, const Matrix& b);
Vector kron(const Vector& a, const Vector& b);

Matrix projector(const Vector& v);

/// Reorders tensor factors. `new_order` lists the labels of `shape` in the
/// desired output order and must be a permutation of them.
Vector permute_subsystems(const Vector& v, const SubsystemShape& shape,
                          const std::vector<std::string>& new_order);
Matrix permute_subsystems(const Matrix& m, const SubsystemShape& shape,
                          const std::vector<std::string>& new_order);

/// Reduced operator on the subsystems named in `keep`; trace is preserved.
Matrix partial_trace(const Matrix& m, const SubsystemShape& shape,
                     const std::vector<std::string>& keep);

/// Schmidt data of a bipartite pure state. Coefficients are real
/// nonnegative, sorted descending; the global phase is absorbed into the
/// left basis.
struct SchmidtDecomposition {
    RealVector coefficients;
    std::vector<Vector> left_basis;
    std::vector<Vector> right_basis;
};

/// Decomposes `v` across the bipartition (`left_labels` | rest). The left
/// factors need not be contiguous in `shape`.
SchmidtDecomposition schmidt_decompose(const Vector& v, const SubsystemShape& shape,
                                       const std::vector<std::string>& left_labels);

/// Eigendecomposition of a Hermitian matrix; eigenvalues descending,
/// eigenvectors in the columns of the returned unitary.
std::pair<RealVector, Matrix> eig_hermitian(const Matrix& h);

/// Principal square root of a PSD matrix.
Matrix sqrt_psd(const Matrix& m);

/// Uhlmann fidelity (Tr sqrt(sqrt(rho) sigma sqrt(rho)))^2; equals
/// <psi|sigma|psi> when rho is the pure state psi.
double fidelity(const Matrix& rho, const Matrix& sigma);

}  // namespace swapsteer

#endif
