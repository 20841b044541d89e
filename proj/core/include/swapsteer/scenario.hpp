#ifndef SWAPSTEER_SCENARIO_HPP
#define SWAPSTEER_SCENARIO_HPP

#include <array>
#include <vector>

#include "swapsteer/linalg.hpp"

namespace swapsteer {

/// d-outcome positive-operator-valued measure. Construction validates PSD
/// and completeness; invalid element sets are rejected, never renormalized.
struct Povm {
    std::vector<Matrix> elements;
    bool projective = false;

    int outcomes() const { return static_cast<int>(elements.size()); }
    Eigen::Index dim() const { return elements.empty() ? 0 : elements.front().rows(); }
};

Povm make_povm(std::vector<Matrix> elements);

/// Fourier observable family A^(k) = sum_a w^{ak} P^(a), k = 0..d-1.
struct Observable {
    std::vector<Matrix> component;
    int d() const { return static_cast<int>(component.size()); }
};

/// Bell vectors in the fixed order phi+ , phi- , psi+ , psi- .
std::array<Vector, 4> bell_basis();
Povm bell_povm();

/// Alice's trusted observable A0 = sum_k i^k |phi_k><phi_k|.
Matrix trusted_observable();

/// k-th Fourier component of a POVM, with w = exp(2 pi i / d).
Matrix observable_from_povm(const Povm& p, int k);
Observable observable_family(const Povm& p);

/// A full physical configuration: two source states supplied in (A_i, B_i)
/// pair order with Alice-side dimension 2 each, Alice's POVM on A1A2 and
/// Bob's POVM on B1B2 (Bob-side junk factors allowed).
struct Strategy {
    Matrix source1;  // on (A1, B1), dim 2*b1
    Matrix source2;  // on (A2, B2), dim 2*b2
    Povm alice;      // dim 4
    Povm bob;        // dim b1*b2

    Eigen::Index bob_dim1() const { return source1.rows() / 2; }
    Eigen::Index bob_dim2() const { return source2.rows() / 2; }
};

void validate_strategy(const Strategy& s);

/// source1 (x) source2 reindexed from (A1,B1,A2,B2) to the global
/// (A1,A2,B1,B2) order.
Matrix arranged_state(const Strategy& s);
SubsystemShape arranged_shape(const Strategy& s);

/// Joint distribution p(a,b) of one run of the experiment.
struct CorrelationTable {
    Eigen::Matrix4d p = Eigen::Matrix4d::Zero();
};

void validate_table(const CorrelationTable& t);

CorrelationTable correlations(const Strategy& s);

/// <A^(k) B^(l)> = sum_{a,b} w^{ak+bl} p(a,b).
Eigen::Matrix4cd expectation_values(const CorrelationTable& t);

/// Inverse Fourier transform; rejects tables whose reconstruction is
/// negative or non-real beyond tolerance.
CorrelationTable probabilities_from_expectations(const Eigen::Matrix4cd& e);

/// v |phi+><phi+| + (1-v) I/4.
Matrix isotropic_source(double v);

Strategy ideal_strategy();
Strategy isotropic_strategy(double v);
/// Both sources |00><00|, Bob measuring the Bell basis (W = 1/2).
Strategy product_strategy();

}  // namespace swapsteer

#endif
