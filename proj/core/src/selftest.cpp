#include "swapsteer/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <random>

namespace swapsteer {

namespace {

constexpr double kEigenvalueCutoff = 1e-12;

std::vector<SchmidtDecomposition> source_schmidt(const std::vector<Vector>& vectors) {
    std::vector<SchmidtDecomposition> out;
    out.reserve(vectors.size());
    for (const Vector& v : vectors) {
        const Eigen::Index bob = v.size() / 2;
        SubsystemShape shape{{2, bob}, {"A", "B"}};
        out.push_back(schmidt_decompose(v, shape, {"A"}));
    }
    return out;
}

void require_schmidt_rank2(const SchmidtDecomposition& sd) {
    if (sd.coefficients.size() < 2 || sd.coefficients(1) <= 1e-6)
        throw AssumptionError(
            "extraction undefined: source eigenvector has Schmidt rank < 2");
}

}  // namespace

SourceEnsemble make_source_ensemble(Eigen::MatrixXd weights, std::vector<Vector> v1,
                                    std::vector<Vector> v2) {
    if (weights.rows() != static_cast<Eigen::Index>(v1.size()) ||
        weights.cols() != static_cast<Eigen::Index>(v2.size()))
        throw NumericalError("source ensemble: weight matrix shape mismatch");
    if (weights.minCoeff() < -1e-12 || std::abs(weights.sum() - 1.0) > 1e-10)
        throw NumericalError("source ensemble: weights must be nonnegative and sum to 1");
    for (const auto* family : {&v1, &v2}) {
        for (const Vector& v : *family) require_unit_vector(v, 1e-10);
        for (std::size_t i = 0; i < family->size(); ++i)
            for (std::size_t j = i + 1; j < family->size(); ++j)
                if (std::abs((*family)[i].dot((*family)[j])) > tol::structural)
                    throw NumericalError("source ensemble: eigenvectors not orthogonal");
    }
    SourceEnsemble e;
    e.weights = std::move(weights);
    e.source1_vectors = std::move(v1);
    e.source2_vectors = std::move(v2);
    return e;
}

SourceEnsemble eigendecompose_separable(const Matrix& source1, const Matrix& source2) {
    std::vector<Vector> vecs[2];
    std::vector<double> vals[2];
    const Matrix* sources[2] = {&source1, &source2};
    for (int i = 0; i < 2; ++i) {
        if (!is_density_operator(*sources[i], 1e-10))
            throw NumericalError("eigendecompose_separable: invalid density operator");
        auto [lambda, u] = eig_hermitian(*sources[i]);
        for (Eigen::Index s = 0; s < lambda.size(); ++s) {
            if (lambda(s) < kEigenvalueCutoff) continue;
            vals[i].push_back(lambda(s));
            vecs[i].push_back(u.col(s));
        }
    }
    Eigen::MatrixXd w(static_cast<Eigen::Index>(vals[0].size()),
                      static_cast<Eigen::Index>(vals[1].size()));
    for (std::size_t s = 0; s < vals[0].size(); ++s)
        for (std::size_t t = 0; t < vals[1].size(); ++t)
            w(static_cast<Eigen::Index>(s), static_cast<Eigen::Index>(t)) =
                vals[0][s] * vals[1][t];
    w /= w.sum();  // renormalize the tail dropped below the cutoff
    return make_source_ensemble(std::move(w), std::move(vecs[0]), std::move(vecs[1]));
}

ProjectivityCheck check_projective(const Strategy& s, double tolerance) {
    validate_strategy(s);
    const Matrix rho = arranged_state(s);
    SubsystemShape shape = arranged_shape(s);
    const Matrix rho_b = partial_trace(rho, shape, {"B1", "B2"});
    Eigen::SelfAdjointEigenSolver<Matrix> es(rho_b, Eigen::EigenvaluesOnly);
    if (es.eigenvalues().minCoeff() < tol::rank)
        throw AssumptionError("full-rank assumption violated: Bob's local state is rank-deficient");

    const Matrix b0 = observable_from_povm(s.bob, 1);
    const Matrix id = Matrix::Identity(b0.rows(), b0.rows());
    const double defect =
        std::max((b0 * b0.adjoint() - id).norm(), (b0.adjoint() * b0 - id).norm());
    return {defect <= tolerance, defect};
}

std::pair<Matrix, Matrix> extract_local_unitaries(const SourceEnsemble& e) {
    Matrix u[2];
    for (int i = 0; i < 2; ++i) {
        const auto& vectors = i == 0 ? e.source1_vectors : e.source2_vectors;
        if (vectors.empty()) throw NumericalError("extract_local_unitaries: empty ensemble");
        const Eigen::Index bob = vectors.front().size() / 2;
        const Eigen::Index blocks = static_cast<Eigen::Index>(vectors.size());
        if (2 * blocks != bob)
            throw AssumptionError(
                "extraction: block supports do not fill Bob's local space");
        auto schmidt = source_schmidt(vectors);

        // U_i |f_{j,s}> = |e*_{j,s}>_{B'} (x) |s>_{B''}
        Matrix ui = Matrix::Zero(bob, bob);
        for (Eigen::Index s = 0; s < blocks; ++s) {
            const auto& sd = schmidt[static_cast<std::size_t>(s)];
            require_schmidt_rank2(sd);
            Matrix block = Matrix::Zero(bob, bob);
            for (Eigen::Index j = 0; j < 2; ++j) {
                Vector target = Vector::Zero(bob);
                const Vector estar =
                    sd.left_basis[static_cast<std::size_t>(j)].conjugate();
                target(0 * blocks + s) = estar(0);
                target(1 * blocks + s) = estar(1);
                block += target * sd.right_basis[static_cast<std::size_t>(j)].adjoint();
            }
            // Fix the per-block phase: largest-magnitude entry real positive.
            Eigen::Index rmax = 0, cmax = 0;
            block.cwiseAbs().maxCoeff(&rmax, &cmax);
            const Complex top = block(rmax, cmax);
            if (std::abs(top) > 0) block *= std::abs(top) / top;
            ui += block;
        }
        if (!is_unitary(ui, tol::structural))
            throw AssumptionError(
                "extraction: source eigenvectors have non-orthogonal Bob supports");
        u[i] = std::move(ui);
    }
    return {u[0], u[1]};
}

std::vector<std::array<Vector, 4>> g_vectors(const SourceEnsemble& e) {
    auto sd1 = source_schmidt(e.source1_vectors);
    auto sd2 = source_schmidt(e.source2_vectors);
    for (const auto& sd : sd1) require_schmidt_rank2(sd);
    for (const auto& sd : sd2) require_schmidt_rank2(sd);
    const double s = 1.0 / std::sqrt(2.0);

    std::vector<std::array<Vector, 4>> out;
    out.reserve(sd1.size() * sd2.size());
    for (const auto& a : sd1) {
        const Vector& f01 = a.right_basis[0];
        const Vector& f11 = a.right_basis[1];
        for (const auto& b : sd2) {
            const Vector& f02 = b.right_basis[0];
            const Vector& f12 = b.right_basis[1];
            out.push_back({s * (kron(f01, f02) + kron(f11, f12)),
                           s * (kron(f01, f02) - kron(f11, f12)),
                           s * (kron(f01, f12) + kron(f11, f02)),
                           s * (kron(f01, f12) - kron(f11, f02))});
        }
    }
    return out;
}

SupportCheck support_orthogonality_check(const SourceEnsemble& e, const Povm& bob) {
    if (bob.dim() != e.bob_dim1() * e.bob_dim2())
        throw NumericalError("support check: Bob POVM dimension mismatch");
    auto g = g_vectors(e);

    SupportCheck check;
    check.blocks = {static_cast<int>(e.source1_vectors.size()),
                    static_cast<int>(e.source2_vectors.size())};
    for (std::size_t p = 0; p < g.size(); ++p)
        for (std::size_t q = 0; q < g.size(); ++q)
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    if (i == j) continue;
                    check.g_defect = std::max(
                        check.g_defect,
                        std::abs(g[p][static_cast<std::size_t>(j)].dot(
                            g[q][static_cast<std::size_t>(i)])));
                }

    // Cross-block overlaps of the right-Schmidt families, per source.
    auto sd1 = source_schmidt(e.source1_vectors);
    auto sd2 = source_schmidt(e.source2_vectors);
    for (const auto* family : {&sd1, &sd2}) {
        for (std::size_t s = 0; s < family->size(); ++s)
            for (std::size_t l = 0; l < family->size(); ++l) {
                if (s == l) continue;
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k)
                        check.f_defect = std::max(
                            check.f_defect,
                            std::abs((*family)[l]
                                         .right_basis[static_cast<std::size_t>(j)]
                                         .dot((*family)[s].right_basis[static_cast<std::size_t>(k)])));
            }
    }
    return check;
}

namespace {

// Support compression: restricts each source's Bob factor (and Bob's POVM)
// to the support of the corresponding local state. The witness value is
// unchanged; the measurement is only characterized there.
Strategy compress_to_support(const Strategy& s) {
    Matrix iso[2];
    const Matrix* sources[2] = {&s.source1, &s.source2};
    bool identity = true;
    for (int i = 0; i < 2; ++i) {
        const Eigen::Index bob = sources[i]->rows() / 2;
        SubsystemShape shape{{2, bob}, {"A", "B"}};
        auto [vals, vecs] = eig_hermitian(partial_trace(*sources[i], shape, {"B"}));
        Eigen::Index rank = 0;
        while (rank < vals.size() && vals(rank) > tol::rank) ++rank;
        if (rank == bob) {
            iso[i] = Matrix::Identity(bob, bob);
        } else {
            iso[i] = vecs.leftCols(rank);
            identity = false;
        }
    }
    if (identity) return s;

    Strategy out;
    out.alice = s.alice;
    out.source1 = kron(Matrix::Identity(2, 2), iso[0]).adjoint() * s.source1 *
                  kron(Matrix::Identity(2, 2), iso[0]);
    out.source2 = kron(Matrix::Identity(2, 2), iso[1]).adjoint() * s.source2 *
                  kron(Matrix::Identity(2, 2), iso[1]);
    const Matrix v = kron(iso[0], iso[1]);
    std::vector<Matrix> elements;
    for (const Matrix& n : s.bob.elements) elements.push_back(v.adjoint() * n * v);
    out.bob = make_povm(std::move(elements));
    return out;
}

// R (x) Q |phi+> = R Q^T (x) 1 |phi+>, checked on random R, Q.
void assert_transposition_identity() {
    std::mt19937_64 rng(0xC0FFEEULL);
    std::normal_distribution<double> gauss(0.0, 1.0);
    const Vector phip = bell_basis()[0];
    for (int trial = 0; trial < 8; ++trial) {
        Matrix r(2, 2), q(2, 2);
        for (Eigen::Index i = 0; i < 2; ++i)
            for (Eigen::Index j = 0; j < 2; ++j) {
                r(i, j) = Complex(gauss(rng), gauss(rng));
                q(i, j) = Complex(gauss(rng), gauss(rng));
            }
        const Vector lhs = kron(r, q) * phip;
        const Vector rhs = kron(Matrix(r * q.transpose()), Matrix::Identity(2, 2)) * phip;
        if ((lhs - rhs).norm() > 1e-10 * (1.0 + lhs.norm()))
            throw NumericalError("transposition identity violated");
    }
}

}  // namespace

ExtractionReport verify_selftest(const Strategy& input, double premise_tol) {
    validate_strategy(input);
    assert_transposition_identity();

    const Strategy s = compress_to_support(input);
    const WitnessResult w = witness_expectation_form(s);
    if (w.value < 1.0 - premise_tol)
        throw AssumptionError("self-test premise unmet: witness value " +
                              std::to_string(w.value) + " below maximal violation");

    ExtractionReport report;
    report.witness = w.value;
    report.projective = check_projective(s);

    const SourceEnsemble ensemble = eigendecompose_separable(s.source1, s.source2);
    auto [u1, u2] = extract_local_unitaries(ensemble);
    const SupportCheck support = support_orthogonality_check(ensemble, s.bob);
    report.support_defect = std::max(support.g_defect, support.f_defect);
    report.block_counts = support.blocks;
    report.junk_dims = {static_cast<Eigen::Index>(ensemble.source1_vectors.size()),
                        static_cast<Eigen::Index>(ensemble.source2_vectors.size())};

    // Transformed state on (A1, A2, B1', B1'', B2', B2'').
    const Eigen::Index k1 = report.junk_dims[0], k2 = report.junk_dims[1];
    const Matrix rho = arranged_state(s);
    const Matrix lift = kron(kron(Matrix::Identity(4, 4), u1), u2);
    const Matrix transformed = lift * rho * lift.adjoint();
    SubsystemShape shape{{2, 2, 2, k1, 2, k2}, {"A1", "A2", "B1p", "B1j", "B2p", "B2j"}};
    const Matrix visible = partial_trace(transformed, shape, {"A1", "A2", "B1p", "B2p"});
    report.state_fidelity = fidelity(visible, arranged_state(ideal_strategy()));

    // Transformed observable against A0 (x) 1 on (B1', B2' | junk).
    const Matrix b0 = observable_from_povm(s.bob, 1);
    const Matrix ub = kron(u1, u2);
    SubsystemShape bob_shape{{2, k1, 2, k2}, {"B1p", "B1j", "B2p", "B2j"}};
    const Matrix rotated = permute_subsystems(Matrix(ub * b0 * ub.adjoint()), bob_shape,
                                              {"B1p", "B2p", "B1j", "B2j"});
    report.measurement_defect =
        (rotated - kron(trusted_observable(), Matrix::Identity(k1 * k2, k1 * k2))).norm();
    report.u1 = std::move(u1);
    report.u2 = std::move(u2);
    return report;
}

}  // namespace swapsteer
