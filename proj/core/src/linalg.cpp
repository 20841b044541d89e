#include "swapsteer/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace swapsteer {

Eigen::Index SubsystemShape::total() const {
    Eigen::Index n = 1;
    for (Eigen::Index d : dims) n *= d;
    return n;
}

std::size_t SubsystemShape::index_of(const std::string& label) const {
    for (std::size_t i = 0; i < labels.size(); ++i)
        if (labels[i] == label) return i;
    throw NumericalError("unknown subsystem label: " + label);
}

void SubsystemShape::validate(Eigen::Index total_dim) const {
    if (dims.size() != labels.size())
        throw NumericalError("subsystem shape: dims/labels size mismatch");
    if (total() != total_dim)
        throw NumericalError("subsystem shape does not match dimension " +
                             std::to_string(total_dim));
}

bool is_finite(const Matrix& m) { return m.allFinite(); }

bool is_hermitian(const Matrix& m, double eps) {
    if (m.rows() != m.cols()) return false;
    return (m - m.adjoint()).cwiseAbs().maxCoeff() <= eps;
}

bool is_density_operator(const Matrix& m, double eps) {
    if (!is_hermitian(m, eps)) return false;
    if (std::abs(m.trace().real() - 1.0) > eps || std::abs(m.trace().imag()) > eps)
        return false;
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().minCoeff() >= -eps;
}

bool is_unitary(const Matrix& m, double eps) {
    if (m.rows() != m.cols()) return false;
    Matrix d = m * m.adjoint() - Matrix::Identity(m.rows(), m.rows());
    return d.cwiseAbs().maxCoeff() <= eps;
}

void require_unit_vector(const Vector& v, double eps) {
    if (!v.allFinite()) throw NumericalError("vector has non-finite entries");
    if (std::abs(v.squaredNorm() - 1.0) > eps)
        throw NumericalError("vector is not normalized");
}

Matrix kron(const Matrix& a, const Matrix& b) {
    if (!a.allFinite() || !b.allFinite())
        throw NumericalError("kron: non-finite input");
    Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
    for (Eigen::Index i = 0; i < a.rows(); ++i)
        for (Eigen::Index j = 0; j < a.cols(); ++j)
            out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    return out;
}

Vector kron(const Vector& a, const Vector& b) {
    Vector out(a.size() * b.size());
    for (Eigen::Index i = 0; i < a.size(); ++i)
        out.segment(i * b.size(), b.size()) = a(i) * b;
    return out;
}

Matrix projector(const Vector& v) { return v * v.adjoint(); }

namespace {

// Linear-index map realizing the factor reordering: out[i] = in[map[i]].
std::vector<Eigen::Index> permutation_map(const SubsystemShape& shape,
                                          const std::vector<std::string>& new_order) {
    const std::size_t n = shape.dims.size();
    if (new_order.size() != n)
        throw NumericalError("permute_subsystems: order must list every label once");
    std::vector<std::size_t> perm(n);   // new position -> old factor
    std::vector<bool> used(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        perm[i] = shape.index_of(new_order[i]);
        if (used[perm[i]])
            throw NumericalError("permute_subsystems: repeated label " + new_order[i]);
        used[perm[i]] = true;
    }
    std::vector<Eigen::Index> old_stride(n, 1);
    for (std::size_t i = n; i-- > 1;)
        old_stride[i - 1] = old_stride[i] * shape.dims[i];

    std::vector<Eigen::Index> new_dims(n);
    for (std::size_t i = 0; i < n; ++i) new_dims[i] = shape.dims[perm[i]];

    const Eigen::Index total = shape.total();
    std::vector<Eigen::Index> map(static_cast<std::size_t>(total));
    for (Eigen::Index idx = 0; idx < total; ++idx) {
        Eigen::Index rem = idx, old_idx = 0;
        for (std::size_t i = n; i-- > 0;) {
            Eigen::Index digit = rem % new_dims[i];
            rem /= new_dims[i];
            old_idx += digit * old_stride[perm[i]];
        }
        map[static_cast<std::size_t>(idx)] = old_idx;
    }
    return map;
}

}  // namespace

Vector permute_subsystems(const Vector& v, const SubsystemShape& shape,
                          const std::vector<std::string>& new_order) {
    shape.validate(v.size());
    auto map = permutation_map(shape, new_order);
    Vector out(v.size());
    for (Eigen::Index i = 0; i < v.size(); ++i) out(i) = v(map[i]);
    return out;
}

Matrix permute_subsystems(const Matrix& m, const SubsystemShape& shape,
                          const std::vector<std::string>& new_order) {
    if (m.rows() != m.cols()) throw NumericalError("permute_subsystems: matrix not square");
    shape.validate(m.rows());
    auto map = permutation_map(shape, new_order);
    Matrix out(m.rows(), m.cols());
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) out(i, j) = m(map[i], map[j]);
    return out;
}

Matrix partial_trace(const Matrix& m, const SubsystemShape& shape,
                     const std::vector<std::string>& keep) {
    if (m.rows() != m.cols()) throw NumericalError("partial_trace: matrix not square");
    shape.validate(m.rows());
    const std::size_t n = shape.dims.size();
    std::vector<bool> kept(n, false);
    for (const auto& label : keep) kept[shape.index_of(label)] = true;

    std::vector<Eigen::Index> stride(n, 1);
    for (std::size_t i = n; i-- > 1;) stride[i - 1] = stride[i] * shape.dims[i];

    Eigen::Index keep_dim = 1, trace_dim = 1;
    std::vector<std::size_t> keep_factors, trace_factors;
    for (std::size_t i = 0; i < n; ++i) {
        if (kept[i]) {
            keep_dim *= shape.dims[i];
            keep_factors.push_back(i);
        } else {
            trace_dim *= shape.dims[i];
            trace_factors.push_back(i);
        }
    }

    auto offset = [&](const std::vector<std::size_t>& factors, Eigen::Index linear) {
        Eigen::Index off = 0;
        for (std::size_t i = factors.size(); i-- > 0;) {
            std::size_t f = factors[i];
            off += (linear % shape.dims[f]) * stride[f];
            linear /= shape.dims[f];
        }
        return off;
    };

    Matrix out = Matrix::Zero(keep_dim, keep_dim);
    for (Eigen::Index t = 0; t < trace_dim; ++t) {
        const Eigen::Index toff = offset(trace_factors, t);
        for (Eigen::Index i = 0; i < keep_dim; ++i) {
            const Eigen::Index ioff = offset(keep_factors, i) + toff;
            for (Eigen::Index j = 0; j < keep_dim; ++j)
                out(i, j) += m(ioff, offset(keep_factors, j) + toff);
        }
    }
    return out;
}

SchmidtDecomposition schmidt_decompose(const Vector& v, const SubsystemShape& shape,
                                       const std::vector<std::string>& left_labels) {
    require_unit_vector(v);
    shape.validate(v.size());

    // Bring the left factors to the front, then reshape to a dL x dR matrix.
    std::vector<std::string> order = left_labels;
    Eigen::Index dl = 1;
    for (const auto& label : left_labels) dl *= shape.dims[shape.index_of(label)];
    for (const auto& label : shape.labels)
        if (std::find(left_labels.begin(), left_labels.end(), label) == left_labels.end())
            order.push_back(label);
    if (order.size() != shape.labels.size())
        throw NumericalError("schmidt_decompose: bipartition must cover all factors");
    Vector w = permute_subsystems(v, shape, order);
    const Eigen::Index dr = v.size() / dl;

    Matrix coeff(dl, dr);
    for (Eigen::Index l = 0; l < dl; ++l)
        for (Eigen::Index r = 0; r < dr; ++r) coeff(l, r) = w(l * dr + r);

    Eigen::JacobiSVD<Matrix> svd(coeff, Eigen::ComputeThinU | Eigen::ComputeThinV);
    const Eigen::Index k = svd.singularValues().size();

    SchmidtDecomposition out;
    out.coefficients = svd.singularValues();
    out.left_basis.reserve(k);
    out.right_basis.reserve(k);
    for (Eigen::Index j = 0; j < k; ++j) {
        out.left_basis.push_back(svd.matrixU().col(j));
        // psi = sum_j s_j u_j (x) conj(v_j)
        out.right_basis.push_back(svd.matrixV().col(j).conjugate());
    }
    return out;
}

std::pair<RealVector, Matrix> eig_hermitian(const Matrix& h) {
    if (!is_hermitian(h, 1e-10))
        throw NumericalError("eig_hermitian: input not Hermitian within 1e-10");
    Eigen::SelfAdjointEigenSolver<Matrix> es(h);
    if (es.info() != Eigen::Success)
        throw NumericalError("eig_hermitian: eigensolver failed");
    // Eigen sorts ascending; flip to descending.
    const Eigen::Index n = h.rows();
    RealVector vals(n);
    Matrix vecs(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        vals(i) = es.eigenvalues()(n - 1 - i);
        vecs.col(i) = es.eigenvectors().col(n - 1 - i);
    }
    return {vals, vecs};
}

Matrix sqrt_psd(const Matrix& m) {
    auto [vals, vecs] = eig_hermitian(m);
    RealVector s = vals.cwiseMax(0.0).cwiseSqrt();
    return vecs * s.asDiagonal() * vecs.adjoint();
}

double fidelity(const Matrix& rho, const Matrix& sigma) {
    for (const Matrix* m : {&rho, &sigma}) {
        if (!is_hermitian(*m, tol::structural) ||
            std::abs(m->trace().real() - 1.0) > tol::structural)
            throw NumericalError("fidelity: input is not a unit-trace Hermitian operator");
        Eigen::SelfAdjointEigenSolver<Matrix> es(*m, Eigen::EigenvaluesOnly);
        if (es.eigenvalues().minCoeff() < -tol::structural)
            throw NumericalError("fidelity: input is not positive semidefinite");
    }
    Matrix sr = sqrt_psd(rho);
    Matrix inner = sqrt_psd(sr * sigma * sr);
    double f = inner.trace().real();
    f = f * f;
    return std::clamp(f, 0.0, 1.0);
}

}  // namespace swapsteer
