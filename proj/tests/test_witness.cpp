#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>

#include "swapsteer/witness.hpp"
#include "test_util.hpp"

using namespace swapsteer;
using namespace swapsteer::testutil;

namespace {

/// Independent witness oracle: builds the arranged 16-dim density operator by
/// explicit index arithmetic and evaluates sum_a Tr[(Pi_a (x) Pi_a) rho].
double density_matrix_witness_oracle(const Matrix& source1, const Matrix& source2) {
    Matrix rho = Matrix::Zero(16, 16);
    for (int a1 = 0; a1 < 2; ++a1)
        for (int b1 = 0; b1 < 2; ++b1)
            for (int a2 = 0; a2 < 2; ++a2)
                for (int b2 = 0; b2 < 2; ++b2)
                    for (int c1 = 0; c1 < 2; ++c1)
                        for (int d1 = 0; d1 < 2; ++d1)
                            for (int c2 = 0; c2 < 2; ++c2)
                                for (int d2 = 0; d2 < 2; ++d2)
                                    rho(((a1 * 2 + a2) * 2 + b1) * 2 + b2,
                                        ((c1 * 2 + c2) * 2 + d1) * 2 + d2) =
                                        source1(a1 * 2 + b1, c1 * 2 + d1) *
                                        source2(a2 * 2 + b2, c2 * 2 + d2);
    const auto bell = bell_basis();
    double w = 0.0;
    for (int a = 0; a < 4; ++a) {
        const Matrix op = kron(projector(bell[a]), projector(bell[a]));
        w += (op * rho).trace().real();
    }
    return w;
}

Strategy scrambled_ideal(std::mt19937_64& rng) {
    const Matrix v1 = random_unitary(rng, 2);
    const Matrix v2 = random_unitary(rng, 2);
    const auto bell = bell_basis();
    Strategy s;
    s.source1 = projector(Vector(kron(Matrix::Identity(2, 2), v1) * bell[0]));
    s.source2 = projector(Vector(kron(Matrix::Identity(2, 2), v2) * bell[0]));
    s.alice = bell_povm();
    const Matrix vb = kron(v1, v2);
    std::vector<Matrix> els;
    for (const Matrix& e : bell_povm().elements) els.push_back(vb * e * vb.adjoint());
    s.bob = make_povm(std::move(els));
    return s;
}

}  // namespace

TEST_CASE("witness_value on named tables") {
    CorrelationTable ideal;
    ideal.p = Eigen::Matrix4d::Identity() / 4.0;
    CHECK(witness_value(ideal) == doctest::Approx(1.0).epsilon(1e-12));

    CorrelationTable uniform;
    uniform.p.setConstant(1.0 / 16.0);
    CHECK(witness_value(uniform) == doctest::Approx(0.25).epsilon(1e-12));

    // v = 0.8 isotropic: oracle first, closed form (1 + 3 v^2)/4 second.
    const double v = 0.8;
    const double oracle =
        density_matrix_witness_oracle(isotropic_source(v), isotropic_source(v));
    const double w = witness_value(correlations(isotropic_strategy(v)));
    CHECK(w == doctest::Approx(oracle).epsilon(1e-12));
    CHECK(oracle == doctest::Approx((1.0 + 3.0 * v * v) / 4.0).epsilon(1e-12));
    CHECK(w == doctest::Approx(0.73).epsilon(1e-12));
}

TEST_CASE("closed form matches the oracle across the visibility range") {
    for (int i = 0; i <= 10; ++i) {
        const double v = i / 10.0;
        const double oracle =
            density_matrix_witness_oracle(isotropic_source(v), isotropic_source(v));
        CHECK(witness_value(correlations(isotropic_strategy(v))) ==
              doctest::Approx(oracle).epsilon(1e-10));
        CHECK(oracle == doctest::Approx((1.0 + 3.0 * v * v) / 4.0).epsilon(1e-10));
    }
}

TEST_CASE("witness expectation form on named strategies") {
    const WitnessResult ideal = witness_expectation_form(ideal_strategy());
    CHECK(ideal.value == doctest::Approx(1.0).epsilon(1e-12));
    for (const Complex& term : ideal.term) {
        CHECK(term.real() == doctest::Approx(1.0).epsilon(1e-12));
        CHECK(std::abs(term.imag()) < 1e-12);
    }

    const WitnessResult prod = witness_expectation_form(product_strategy());
    Vector zz = Vector::Zero(4);
    zz(0) = 1.0;
    CHECK(prod.value ==
          doctest::Approx(density_matrix_witness_oracle(projector(zz), projector(zz)))
              .epsilon(1e-12));
    CHECK(prod.value == doctest::Approx(0.5).epsilon(1e-12));

    CHECK(witness_expectation_form(isotropic_strategy(0.0)).value ==
          doctest::Approx(0.25).epsilon(1e-12));
}

TEST_CASE("equivalence of the probability and expectation forms") {
    std::mt19937_64 rng(61);
    for (int trial = 0; trial < 200; ++trial) {
        const Strategy s = random_strategy(rng);
        const WitnessResult r = witness_expectation_form(s);
        CHECK(std::abs(r.value - witness_value(correlations(s))) < 1e-10);
        CHECK(r.value <= 1.0 + 1e-10);
        double sum = 0.0;
        for (const Complex& t : r.term) sum += t.real();
        CHECK(std::abs(r.value - sum / 4.0) < 1e-10);
    }
}

TEST_CASE("maximal violation residuals") {
    const auto ideal = max_violation_residuals(ideal_strategy());
    for (double r : ideal) CHECK(r <= 1e-10);

    // k = 0 is structurally zero for any strategy.
    std::mt19937_64 rng(67);
    for (int trial = 0; trial < 10; ++trial)
        CHECK(max_violation_residuals(random_strategy(rng))[0] < 1e-10);

    const auto noisy = max_violation_residuals(isotropic_strategy(0.8));
    for (int k = 1; k < 4; ++k) CHECK(noisy[k] > 1e-3);
}

TEST_CASE("residuals vanish iff the witness is maximal") {
    std::mt19937_64 rng(71);
    for (int trial = 0; trial < 20; ++trial) {
        const Strategy s = scrambled_ideal(rng);
        const WitnessResult r = witness_expectation_form(s);
        const bool residuals_small =
            *std::max_element(r.residual.begin(), r.residual.end()) <= 1e-9;
        const bool witness_maximal = r.value >= 1.0 - 1e-8;
        CHECK(residuals_small == witness_maximal);
        CHECK(residuals_small);  // scrambled ideal stays maximal
    }
    const WitnessResult noisy = witness_expectation_form(isotropic_strategy(0.9));
    CHECK(*std::max_element(noisy.residual.begin(), noisy.residual.end()) > 1e-9);
    CHECK(noisy.value < 1.0 - 1e-8);
}

TEST_CASE("lhs point values") {
    // sigma (x) tau = |00>: best response overlaps phi+- at 1/2.
    CHECK(lhs_point_value(0.0, 0.0, 0.0, 0.0) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("lhs bound hits 1/2 and never exceeds it") {
    LhsConfig config;
    const LhsBoundEstimate est = lhs_bound(config, 1);
    CHECK(est.beta == doctest::Approx(0.5).epsilon(1e-6));
    CHECK_FALSE(est.argmax.empty());

    LhsConfig quick;
    quick.restarts = 2;
    quick.max_iterations = 120;
    for (std::uint64_t seed = 0; seed < 50; ++seed) {
        const LhsBoundEstimate e = lhs_bound(quick, seed);
        CHECK(e.beta <= 0.5 + 1e-6);
    }
}

TEST_CASE("lhs optimizer trace is monotone within each restart") {
    LhsConfig config;
    config.restarts = 4;
    const LhsBoundEstimate est = lhs_bound(config, 99);
    double best = -1.0;
    int restart = -1;
    for (const auto& [r, value] : est.trace) {
        if (r != restart) {
            restart = r;
            best = -1.0;
        }
        CHECK(value >= best - 1e-15);
        best = value;
    }
    CHECK_THROWS_AS(lhs_bound(LhsConfig{.restarts = 0}, 0), NumericalError);
}

TEST_CASE("mixtures of deterministic points never beat the best point") {
    // Convexity reduction behind lhs_bound: a discrete ensemble of hidden
    // variables with optimal deterministic responses is dominated by its best
    // single point.
    std::mt19937_64 rng(73);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<std::array<double, 2>> lambda1(3), lambda2(3);
        std::vector<double> q1(3), q2(3);
        double s1 = 0.0, s2 = 0.0;
        for (int i = 0; i < 3; ++i) {
            lambda1[i] = {angle(rng) / 2.0, angle(rng)};
            lambda2[i] = {angle(rng) / 2.0, angle(rng)};
            s1 += q1[i] = unif(rng);
            s2 += q2[i] = unif(rng);
        }
        double mixture = 0.0, best_point = 0.0;
        for (int i = 0; i < 3; ++i)
            for (int j = 0; j < 3; ++j) {
                const double value = lhs_point_value(lambda1[i][0], lambda1[i][1],
                                                     lambda2[j][0], lambda2[j][1]);
                mixture += (q1[i] / s1) * (q2[j] / s2) * value;
                best_point = std::max(best_point, value);
            }
        CHECK(mixture <= best_point + 1e-12);
        CHECK(best_point <= 0.5 + 1e-12);
    }
}

TEST_CASE("separable sources respect the lhs bound") {
    std::mt19937_64 rng(79);
    for (int trial = 0; trial < 30; ++trial) {
        Strategy s;
        s.source1 = kron(random_density(rng, 2), random_density(rng, 2));
        s.source2 = kron(random_density(rng, 2), random_density(rng, 2));
        s.alice = bell_povm();
        s.bob = (trial % 2 == 0) ? random_povm(rng) : random_projective_povm(rng);
        CHECK(witness_expectation_form(s).value <= 0.5 + 1e-8);
    }
}
