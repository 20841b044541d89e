#include "swapsteer/scenario.hpp"

#include <cmath>

namespace swapsteer {

Povm make_povm(std::vector<Matrix> elements) {
    if (elements.empty()) throw NumericalError("povm: no elements");
    const Eigen::Index d = elements.front().rows();
    Matrix sum = Matrix::Zero(d, d);
    bool projective = true;
    for (const Matrix& e : elements) {
        if (e.rows() != d || e.cols() != d)
            throw NumericalError("povm: inconsistent element dimensions");
        if (!is_hermitian(e, 1e-10))
            throw NumericalError("povm: element not Hermitian");
        Eigen::SelfAdjointEigenSolver<Matrix> es(e, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -1e-10)
            throw NumericalError("povm: element not positive semidefinite");
        if ((e * e - e).cwiseAbs().maxCoeff() > tol::structural) projective = false;
        sum += e;
    }
    if ((sum - Matrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-10)
        throw NumericalError("povm: elements do not sum to identity");
    Povm p;
    p.elements = std::move(elements);
    p.projective = projective;
    return p;
}

std::array<Vector, 4> bell_basis() {
    const double s = 1.0 / std::sqrt(2.0);
    Vector phip(4), phim(4), psip(4), psim(4);
    phip << s, 0, 0, s;
    phim << s, 0, 0, -s;
    psip << 0, s, s, 0;
    psim << 0, s, -s, 0;
    return {phip, phim, psip, psim};
}

Povm bell_povm() {
    auto basis = bell_basis();
    std::vector<Matrix> els;
    for (const Vector& v : basis) els.push_back(projector(v));
    return make_povm(std::move(els));
}

Matrix trusted_observable() {
    auto basis = bell_basis();
    const Complex i(0.0, 1.0);
    Matrix a0 = Matrix::Zero(4, 4);
    Complex w(1.0, 0.0);
    for (int k = 0; k < 4; ++k) {
        a0 += w * projector(basis[static_cast<std::size_t>(k)]);
        w *= i;
    }
    return a0;
}

Matrix observable_from_povm(const Povm& p, int k) {
    const int d = p.outcomes();
    if (k < 0 || k >= d) throw NumericalError("observable index out of range");
    const double two_pi = 2.0 * M_PI;
    Matrix out = Matrix::Zero(p.dim(), p.dim());
    for (int a = 0; a < d; ++a) {
        const double ang = two_pi * a * k / d;
        out += Complex(std::cos(ang), std::sin(ang)) * p.elements[static_cast<std::size_t>(a)];
    }
    return out;
}

Observable observable_family(const Povm& p) {
    Observable obs;
    for (int k = 0; k < p.outcomes(); ++k) obs.component.push_back(observable_from_povm(p, k));
    return obs;
}

void validate_strategy(const Strategy& s) {
    if (s.source1.rows() % 2 != 0 || s.source2.rows() % 2 != 0)
        throw NumericalError("strategy: Alice's local dimension per source must be 2");
    if (!is_density_operator(s.source1, 1e-10) || !is_density_operator(s.source2, 1e-10))
        throw NumericalError("strategy: source is not a valid density operator");
    if (s.alice.dim() != 4)
        throw NumericalError("strategy: Alice POVM must act on dimension 4");
    if (s.bob.dim() != s.bob_dim1() * s.bob_dim2())
        throw NumericalError("strategy: Bob POVM dimension mismatch with sources");
}

namespace {
SubsystemShape pair_shape(const Strategy& s) {
    return SubsystemShape{{2, s.bob_dim1(), 2, s.bob_dim2()}, {"A1", "B1", "A2", "B2"}};
}
}  // namespace

SubsystemShape arranged_shape(const Strategy& s) {
    return SubsystemShape{{2, 2, s.bob_dim1(), s.bob_dim2()}, {"A1", "A2", "B1", "B2"}};
}

Matrix arranged_state(const Strategy& s) {
    Matrix joint = kron(s.source1, s.source2);  // (A1,B1,A2,B2)
    return permute_subsystems(joint, pair_shape(s), {"A1", "A2", "B1", "B2"});
}

void validate_table(const CorrelationTable& t) {
    double sum = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const double v = t.p(a, b);
            if (!std::isfinite(v) || v < -1e-12 || v > 1.0 + 1e-12)
                throw NumericalError("correlation table entry out of [0,1]");
            sum += v;
        }
    if (std::abs(sum - 1.0) > 1e-10)
        throw NumericalError("correlation table does not sum to 1");
}

CorrelationTable correlations(const Strategy& s) {
    validate_strategy(s);
    const Matrix rho = arranged_state(s);
    CorrelationTable t;
    for (int a = 0; a < 4; ++a) {
        for (int b = 0; b < 4; ++b) {
            Matrix op = kron(s.alice.elements[static_cast<std::size_t>(a)],
                             s.bob.elements[static_cast<std::size_t>(b)]);
            t.p(a, b) = (op * rho).trace().real();
        }
    }
    validate_table(t);
    return t;
}

Eigen::Matrix4cd expectation_values(const CorrelationTable& t) {
    validate_table(t);
    Eigen::Matrix4cd e = Eigen::Matrix4cd::Zero();
    for (int k = 0; k < 4; ++k)
        for (int l = 0; l < 4; ++l)
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b) {
                    const double ang = M_PI_2 * (a * k + b * l);
                    e(k, l) += Complex(std::cos(ang), std::sin(ang)) * t.p(a, b);
                }
    return e;
}

CorrelationTable probabilities_from_expectations(const Eigen::Matrix4cd& e) {
    CorrelationTable t;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            Complex p(0.0, 0.0);
            for (int k = 0; k < 4; ++k)
                for (int l = 0; l < 4; ++l) {
                    const double ang = -M_PI_2 * (a * k + b * l);
                    p += Complex(std::cos(ang), std::sin(ang)) * e(k, l);
                }
            p /= 16.0;
            if (std::abs(p.imag()) > 1e-10 || p.real() < -1e-10)
                throw NumericalError("expectation table is not the image of a distribution");
            t.p(a, b) = std::max(p.real(), 0.0);
        }
    validate_table(t);
    return t;
}

Matrix isotropic_source(double v) {
    if (v < 0.0 || v > 1.0) throw NumericalError("isotropic visibility out of [0,1]");
    auto basis = bell_basis();
    return v * projector(basis[0]) + (1.0 - v) * Matrix::Identity(4, 4) / 4.0;
}

Strategy ideal_strategy() {
    auto basis = bell_basis();
    Strategy s;
    s.source1 = projector(basis[0]);
    s.source2 = projector(basis[0]);
    s.alice = bell_povm();
    s.bob = bell_povm();
    return s;
}

Strategy isotropic_strategy(double v) {
    Strategy s = ideal_strategy();
    s.source1 = isotropic_source(v);
    s.source2 = isotropic_source(v);
    return s;
}

Strategy product_strategy() {
    Strategy s = ideal_strategy();
    Matrix zero = Matrix::Zero(4, 4);
    zero(0, 0) = 1.0;  // |00><00|
    s.source1 = zero;
    s.source2 = zero;
    return s;
}

}  // namespace swapsteer
