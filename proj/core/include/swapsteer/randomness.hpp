#ifndef SWAPSTEER_RANDOMNESS_HPP
#define SWAPSTEER_RANDOMNESS_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "swapsteer/scenario.hpp"

namespace swapsteer {

/// Canonical purification of a density operator; purifier dimension equals
/// the rank, factor order (original, purifier).
Vector purify(const Matrix& rho);

/// Eve's side of the experiment: a joint pure state on (A1, A2, B, E)
/// together with the measurements of all three parties.
struct EveStrategy {
    Vector psi;            // |psi_ABE>
    SubsystemShape shape;  // labels A1, A2, B, E
    Povm alice;            // on A1A2, Bell unless a fixture overrides
    Povm bob;              // on B
    Povm eve;              // 4 outcomes on E

    Eigen::Index eve_dim() const { return eve.dim(); }
};

void validate_eve_strategy(const EveStrategy& e);

/// Visible statistics with Eve traced out.
CorrelationTable eve_visible_table(const EveStrategy& e);

/// Eve must remain invisible: recomputes p(a,b) = <psi| M_a (x) N_b (x) 1 |psi>
/// and compares against the target, max-entry deviation.
bool eve_consistency_check(const EveStrategy& e, const CorrelationTable& target,
                           double tolerance = 1e-8);

/// G = sum_b <psi| 1_A (x) N_b (x) E_b |psi>. Errors unless the strategy is
/// consistent with the visible statistics of `s`.
double guessing_probability(const Strategy& s, const EveStrategy& e);

/// Raw guessing probability of an already-validated Eve strategy.
double guessing_probability(const EveStrategy& e);

/// H_min = -log2(g), in bits.
double min_entropy(double g);

struct EveConfig {
    int eve_dim = 16;
    int restarts = 8;
    int iterations = 40;
    double consistency_tol = 1e-8;
    double premise_tol = 1e-7;
};

struct EveOptimum {
    EveStrategy strategy;
    double guessing = 0.0;
    std::vector<std::pair<int, double>> trace;  // (restart, value), monotone per restart
};

/// See-saw search over classically-correlated-source adversary strategies
/// reproducing `target`: alternates an exact eigenvector update of Eve's
/// POVM with perturbations of the hidden-variable ensemble, keeping only
/// consistent moves. The result is a heuristic lower bound on the guessing
/// probability, never an upper bound. Errors if no strategy in the model
/// family reproduces the target.
EveOptimum optimize_eve(const CorrelationTable& target, const EveConfig& config,
                        std::uint64_t seed);

enum class CertStatus { certified_2_bits, premise_unmet, heuristic_bound };

std::string to_string(CertStatus s);

struct CertificationResult {
    double guessing = 1.0;
    double min_entropy_bits = 0.0;
    double witness = 0.0;
    CertStatus status = CertStatus::premise_unmet;
    std::vector<std::string> caveats;
};

/// Certifies 2 bits iff the witness is maximally violated; otherwise falls
/// back to the heuristic see-saw bound.
CertificationResult certify(const Strategy& s, const EveConfig& config,
                            std::uint64_t seed);

struct AttackDemo {
    EveStrategy strategy;
    CorrelationTable table;
    double guessing = 0.0;
};

/// The entangled-source attack: the sources jointly prepare |phi_b> on
/// Alice's side correlated with Bob's predetermined outcome b and Eve's
/// record of it. The visible table equals the ideal one while G = 1,
/// exhibiting the necessity of the classical-sources assumption.
AttackDemo entangled_source_attack();

}  // namespace swapsteer

#endif
