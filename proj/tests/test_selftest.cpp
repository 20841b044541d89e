#include <doctest.h>

#include <cmath>
#include <random>

#include "swapsteer/selftest.hpp"
#include "test_util.hpp"

using namespace swapsteer;
using namespace swapsteer::testutil;

namespace {

Vector phi_plus() { return bell_basis()[0]; }

Vector basis_vector(Eigen::Index dim, Eigen::Index k) {
    Vector v = Vector::Zero(dim);
    v(k) = 1.0;
    return v;
}

/// Ideal strategy with Bob-side unitaries V1, V2 applied to sources and POVM.
Strategy scrambled_ideal(const Matrix& v1, const Matrix& v2) {
    Strategy s;
    s.source1 = projector(Vector(kron(Matrix::Identity(2, 2), v1) * phi_plus()));
    s.source2 = projector(Vector(kron(Matrix::Identity(2, 2), v2) * phi_plus()));
    s.alice = bell_povm();
    const Matrix vb = kron(v1, v2);
    std::vector<Matrix> els;
    for (const Matrix& e : bell_povm().elements) els.push_back(vb * e * vb.adjoint());
    s.bob = make_povm(std::move(els));
    return s;
}

/// Bob POVM on B1 = (B1', J) (x) B2 acting as the Bell measurement on
/// (B1', B2) and trivially on the junk factor J.
Povm junk_bob_povm() {
    const SubsystemShape shape{{2, 2, 2}, {"B1p", "B2", "J"}};
    std::vector<Matrix> els;
    for (const Matrix& e : bell_povm().elements)
        els.push_back(permute_subsystems(Matrix(kron(e, Matrix::Identity(2, 2))), shape,
                                         {"B1p", "J", "B2"}));
    return make_povm(std::move(els));
}

Strategy junk_strategy(const Matrix& junk_state) {
    Strategy s;
    s.source1 = kron(projector(phi_plus()), junk_state);  // (A1, B1', J)
    s.source2 = projector(phi_plus());
    s.alice = bell_povm();
    s.bob = junk_bob_povm();
    return s;
}

Strategy partially_entangled_strategy(double theta) {
    Vector v = Vector::Zero(4);
    v(0) = std::cos(theta);
    v(3) = std::sin(theta);
    Strategy s;
    s.source1 = projector(v);
    s.source2 = projector(v);
    s.alice = bell_povm();
    s.bob = bell_povm();
    return s;
}

}  // namespace

TEST_CASE("check_projective") {
    const auto ideal = check_projective(ideal_strategy());
    CHECK(ideal.pass);
    CHECK(ideal.defect <= 1e-12);

    Strategy noisy = ideal_strategy();
    std::vector<Matrix> els;
    for (const Matrix& e : bell_povm().elements)
        els.push_back(0.9 * e + 0.1 * Matrix::Identity(4, 4) / 4.0);
    noisy.bob = make_povm(std::move(els));
    const auto bad = check_projective(noisy);
    CHECK_FALSE(bad.pass);
    CHECK(bad.defect > 0.01);

    // |00> sources leave Bob's local state rank-deficient.
    CHECK_THROWS_AS(check_projective(product_strategy()), AssumptionError);
}

TEST_CASE("eigendecompose_separable") {
    const SourceEnsemble pure =
        eigendecompose_separable(projector(phi_plus()), projector(phi_plus()));
    REQUIRE(pure.source1_vectors.size() == 1);
    REQUIRE(pure.source2_vectors.size() == 1);
    CHECK(pure.weights(0, 0) == doctest::Approx(1.0));

    const auto bell = bell_basis();
    const Matrix two_term = 0.5 * projector(bell[0]) + 0.5 * projector(bell[3]);
    const SourceEnsemble mixed = eigendecompose_separable(two_term, projector(phi_plus()));
    REQUIRE(mixed.source1_vectors.size() == 2);
    CHECK(mixed.weights(0, 0) == doctest::Approx(0.5));
    CHECK(mixed.weights(1, 0) == doctest::Approx(0.5));

    const SourceEnsemble iso =
        eigendecompose_separable(isotropic_source(0.8), isotropic_source(0.8));
    REQUIRE(iso.source1_vectors.size() == 4);
    Eigen::VectorXd marginal = iso.weights.rowwise().sum();
    std::sort(marginal.begin(), marginal.end(), std::greater<double>());
    CHECK(marginal(0) == doctest::Approx(0.85));
    for (int k = 1; k < 4; ++k) CHECK(marginal(k) == doctest::Approx(0.05));

    CHECK_THROWS_AS(eigendecompose_separable(Matrix::Identity(4, 4), projector(phi_plus())),
                    NumericalError);
}

TEST_CASE("make_source_ensemble validation") {
    const std::vector<Vector> one{phi_plus()};
    CHECK_THROWS_AS(make_source_ensemble(Eigen::MatrixXd::Constant(1, 1, 2.0), one, one),
                    NumericalError);
    CHECK_THROWS_AS(make_source_ensemble(Eigen::MatrixXd::Constant(2, 1, 0.5),
                                         {phi_plus(), phi_plus()}, one),
                    NumericalError);  // non-orthogonal family
}

TEST_CASE("extract_local_unitaries on the ideal ensemble") {
    const SourceEnsemble e =
        eigendecompose_separable(projector(phi_plus()), projector(phi_plus()));
    auto [u1, u2] = extract_local_unitaries(e);
    CHECK((u1 - Matrix::Identity(2, 2)).norm() < 1e-9);
    CHECK((u2 - Matrix::Identity(2, 2)).norm() < 1e-9);
}

TEST_CASE("extract_local_unitaries undoes a known scrambling") {
    std::mt19937_64 rng(83);
    for (int trial = 0; trial < 10; ++trial) {
        const Matrix v = random_unitary(rng, 2);
        const Vector scrambled = kron(Matrix::Identity(2, 2), v) * phi_plus();
        const SourceEnsemble e = make_source_ensemble(
            Eigen::MatrixXd::Constant(1, 1, 1.0), {scrambled}, {phi_plus()});
        auto [u1, u2] = extract_local_unitaries(e);
        // u1 = V^dag up to a global phase: u1 * V is proportional to identity.
        const Matrix w = u1 * v;
        CHECK(std::abs(w(0, 1)) < 1e-9);
        CHECK(std::abs(w(1, 0)) < 1e-9);
        CHECK(std::abs(std::abs(w(0, 0)) - 1.0) < 1e-9);
        CHECK(std::abs(w(0, 0) - w(1, 1)) < 1e-9);
    }
}

TEST_CASE("extraction requires Schmidt rank 2 and filled supports") {
    // Product source vector: rank 1.
    const SourceEnsemble prod = make_source_ensemble(
        Eigen::MatrixXd::Constant(1, 1, 1.0), {basis_vector(4, 0)}, {phi_plus()});
    CHECK_THROWS_AS(extract_local_unitaries(prod), AssumptionError);

    // Two blocks cannot fit into a 2-dim Bob space.
    const auto bell = bell_basis();
    const SourceEnsemble crowded = make_source_ensemble(
        Eigen::MatrixXd::Constant(2, 1, 0.5), {bell[0], bell[1]}, {phi_plus()});
    CHECK_THROWS_AS(extract_local_unitaries(crowded), AssumptionError);
}

TEST_CASE("partially entangled sources extract but certify poorly") {
    const double theta = 0.3;
    Vector v = Vector::Zero(4);
    v(0) = std::cos(theta);
    v(3) = std::sin(theta);
    const SourceEnsemble e = eigendecompose_separable(projector(v), projector(v));
    auto [u1, u2] = extract_local_unitaries(e);
    CHECK(is_unitary(u1));
    CHECK(is_unitary(u2));

    Strategy s = partially_entangled_strategy(theta);
    const Matrix lift = kron(kron(Matrix::Identity(4, 4), u1), u2);
    const Matrix transformed = lift * arranged_state(s) * lift.adjoint();
    CHECK(fidelity(transformed, arranged_state(ideal_strategy())) < 0.999);
}

TEST_CASE("support orthogonality check") {
    const SourceEnsemble ideal =
        eigendecompose_separable(projector(phi_plus()), projector(phi_plus()));
    const SupportCheck single = support_orthogonality_check(ideal, bell_povm());
    CHECK(single.g_defect < 1e-12);
    CHECK(single.blocks[0] == 1);
    CHECK(single.blocks[1] == 1);

    // Orthogonal Bob supports: phi+ on disjoint junk levels, defect vanishes.
    const Strategy junk = junk_strategy(Matrix::Identity(2, 2) / 2.0);
    const SourceEnsemble two =
        eigendecompose_separable(junk.source1, junk.source2);
    const SupportCheck split = support_orthogonality_check(two, junk.bob);
    CHECK(split.g_defect <= 1e-10);
    CHECK(split.f_defect <= 1e-10);
    CHECK(split.blocks[0] == 2);
    CHECK(split.blocks[1] == 1);

    // Overlapping Bob supports: shared right-Schmidt vectors, large defect.
    const auto bell = bell_basis();
    const SourceEnsemble overlap = make_source_ensemble(
        Eigen::MatrixXd::Constant(2, 1, 0.5), {bell[0], bell[1]}, {phi_plus()});
    const SupportCheck bad = support_orthogonality_check(overlap, bell_povm());
    CHECK(std::max(bad.g_defect, bad.f_defect) > 0.1);
}

TEST_CASE("verify_selftest on the ideal strategy") {
    const ExtractionReport r = verify_selftest(ideal_strategy());
    CHECK(r.projective.pass);
    CHECK(r.state_fidelity >= 1.0 - 1e-9);
    CHECK(r.measurement_defect <= 1e-9);
    CHECK(r.support_defect <= 1e-10);
    CHECK(r.witness == doctest::Approx(1.0).epsilon(1e-10));
    CHECK(is_unitary(r.u1));
    CHECK(is_unitary(r.u2));
}

TEST_CASE("verify_selftest is sound under Bob-local scrambling") {
    std::mt19937_64 rng(89);
    for (int trial = 0; trial < 20; ++trial) {
        const Strategy s = scrambled_ideal(random_unitary(rng, 2), random_unitary(rng, 2));
        const ExtractionReport r = verify_selftest(s);
        CHECK(r.state_fidelity >= 1.0 - 1e-9);
        CHECK(r.measurement_defect <= 1e-8);
    }
}

TEST_CASE("verify_selftest handles junk factors") {
    // Junk qubit pinned to |0>: compressed away, full certificate.
    const ExtractionReport pinned = verify_selftest(junk_strategy(
        projector(basis_vector(2, 0))));
    CHECK(pinned.state_fidelity >= 1.0 - 1e-9);
    CHECK(pinned.measurement_defect <= 1e-8);

    // Maximally mixed junk qubit: survives as a genuine block factor.
    const ExtractionReport mixed = verify_selftest(junk_strategy(
        Matrix::Identity(2, 2) / 2.0));
    CHECK(mixed.state_fidelity >= 1.0 - 1e-9);
    CHECK(mixed.measurement_defect <= 1e-8);
    CHECK(mixed.junk_dims[0] == 2);
    CHECK(mixed.junk_dims[1] == 1);
    CHECK(mixed.block_counts[0] == 2);
}

TEST_CASE("verify_selftest refuses below maximal violation") {
    for (const double theta : {M_PI / 4.0 - 0.2, M_PI / 4.0 + 0.2}) {
        const Strategy s = partially_entangled_strategy(theta);
        CHECK(witness_expectation_form(s).value < 1.0 - 1e-3);
        CHECK_THROWS_AS(verify_selftest(s), AssumptionError);
    }
    CHECK_THROWS_AS(verify_selftest(isotropic_strategy(0.999)), AssumptionError);
}

TEST_CASE("per-eigenvector maximal-violation residuals on the ideal ensemble") {
    const Vector psi = permute_subsystems(
        kron(phi_plus(), phi_plus()), SubsystemShape{{2, 2, 2, 2}, {"A1", "B1", "A2", "B2"}},
        {"A1", "A2", "B1", "B2"});
    const Matrix a0 = trusted_observable();
    const Matrix b0 = observable_from_povm(bell_povm(), 1);
    Matrix apow = Matrix::Identity(4, 4);
    for (int k = 0; k < 4; ++k) {
        Matrix bpow = Matrix::Identity(4, 4);
        for (int m = 0; m < (4 - k) % 4; ++m) bpow = bpow * b0;
        CHECK((kron(apow, bpow) * psi - psi).norm() <= 1e-10);
        apow = apow * a0;
    }
}

TEST_CASE("g-vector fixed-point relation on the ideal ensemble") {
    const SourceEnsemble e =
        eigendecompose_separable(projector(phi_plus()), projector(phi_plus()));
    const auto g = g_vectors(e);
    REQUIRE(g.size() == 1);
    const Matrix b0 = observable_from_povm(bell_povm(), 1);
    const Matrix b03 = b0 * b0 * b0;
    const Complex omega(0.0, 1.0);
    Complex phase(1.0, 0.0);
    for (int i = 0; i < 4; ++i) {
        CHECK((phase * (b03 * g[0][static_cast<std::size_t>(i)]) -
               g[0][static_cast<std::size_t>(i)])
                  .norm() <= 1e-10);
        phase *= omega;
    }
}

TEST_CASE("commuting squared product operators are trivial") {
    // Diagonal full-rank P1, P2 whose squared product commutes with A0 must
    // be proportional to the identity; normalized, they equal it.
    const Matrix a0 = trusted_observable();
    const double grid[] = {0.25, 0.5, 0.75, 1.0, 1.3, 1.7};
    for (double b : grid)
        for (double x : grid)
            for (double y : grid) {
                Matrix p1 = Matrix::Zero(2, 2), p2 = Matrix::Zero(2, 2);
                p1(0, 0) = 1.0;
                p1(1, 1) = b;
                p2(0, 0) = x;
                p2(1, 1) = y;
                Matrix q = kron(p1, p2);
                const Matrix sq = q * q;
                if ((sq * a0 - a0 * sq).norm() > 1e-10) continue;
                q *= std::sqrt(4.0 / sq.trace().real());
                CHECK((q - Matrix::Identity(4, 4)).norm() <= 1e-8);
            }
}
