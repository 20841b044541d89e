#ifndef SWAPSTEER_SELFTEST_HPP
#define SWAPSTEER_SELFTEST_HPP

#include <array>
#include <utility>
#include <vector>

#include "swapsteer/witness.hpp"

namespace swapsteer {

/// Eigendecomposition of the two-source separable state: weights p_{s,s'}
/// together with the per-source eigenvector families on (A_i, B_i).
struct SourceEnsemble {
    Eigen::MatrixXd weights;  // p_{s,s'}
    std::vector<Vector> source1_vectors;
    std::vector<Vector> source2_vectors;

    Eigen::Index bob_dim1() const {
        return source1_vectors.empty() ? 0 : source1_vectors.front().size() / 2;
    }
    Eigen::Index bob_dim2() const {
        return source2_vectors.empty() ? 0 : source2_vectors.front().size() / 2;
    }
};

/// Validating constructor; also accepts correlated weight matrices, used by
/// fixtures exercising the general separable form.
SourceEnsemble make_source_ensemble(Eigen::MatrixXd weights, std::vector<Vector> v1,
                                    std::vector<Vector> v2);

SourceEnsemble eigendecompose_separable(const Matrix& source1, const Matrix& source2);

struct ProjectivityCheck {
    bool pass = false;
    double defect = 0.0;  // max(||B0 B0^dag - 1||, ||B0^dag B0 - 1||), Frobenius
};

/// Checks that Bob's first Fourier observable is unitary, which certifies a
/// projective measurement. Errors if Bob's local state is rank-deficient
/// (the measurement is only characterized on the local support).
ProjectivityCheck check_projective(const Strategy& s, double tolerance = tol::structural);

/// Block unitaries U_i mapping each right-Schmidt basis vector onto the
/// conjugated left basis, one 2-dim block per ensemble eigenvector; output
/// factor order (C^2)_{B_i'} (x) (C^{K_i})_{B_i''}. Requires every source
/// vector to have Schmidt rank 2 and the blocks to fill Bob's space.
std::pair<Matrix, Matrix> extract_local_unitaries(const SourceEnsemble& e);

/// The four Bell-side components |g^i_{ss'}> of |psi^1_s>|psi^2_{s'}> on
/// Bob's space, one array per (s,s') pair in row-major order.
std::vector<std::array<Vector, 4>> g_vectors(const SourceEnsemble& e);

struct SupportCheck {
    double g_defect = 0.0;          // max |<g^j_{ll'}|g^i_{ss'}>| over i != j
    double f_defect = 0.0;          // max cross-block overlap of right-Schmidt vectors
    std::array<int, 2> blocks{};    // number of 2-dim blocks per source
};

SupportCheck support_orthogonality_check(const SourceEnsemble& e, const Povm& bob);

struct ExtractionReport {
    ProjectivityCheck projective;
    Matrix u1, u2;
    double state_fidelity = 0.0;
    double measurement_defect = 0.0;
    double support_defect = 0.0;
    std::array<int, 2> block_counts{};
    std::array<Eigen::Index, 2> junk_dims{};  // traced-out block factors per source
    double witness = 0.0;
};

/// Runs the full extraction: projectivity, source eigendecomposition, local
/// unitaries, support orthogonality, then certifies the transformed state
/// against |phi+> (x) |phi+> and Bob's observable against A0 (x) 1.
/// Requires the maximal-violation premise W >= 1 - premise_tol.
ExtractionReport verify_selftest(const Strategy& s, double premise_tol = 1e-7);

}  // namespace swapsteer

#endif
