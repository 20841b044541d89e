#include "swapsteer/randomness.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace swapsteer {

Vector purify(const Matrix& rho) {
    if (!is_density_operator(rho, tol::structural))
        throw NumericalError("purify: input is not a density operator");
    auto [vals, vecs] = eig_hermitian(rho);
    Eigen::Index rank = 0;
    while (rank < vals.size() && vals(rank) > 1e-12) ++rank;
    rank = std::max<Eigen::Index>(rank, 1);

    Vector psi = Vector::Zero(rho.rows() * rank);
    for (Eigen::Index k = 0; k < rank; ++k) {
        const double amp = std::sqrt(std::max(vals(k), 0.0));
        for (Eigen::Index x = 0; x < rho.rows(); ++x) psi(x * rank + k) = amp * vecs(x, k);
    }
    psi.normalize();
    return psi;
}

void validate_eve_strategy(const EveStrategy& e) {
    require_unit_vector(e.psi, 1e-10);
    e.shape.validate(e.psi.size());
    if (e.shape.labels != std::vector<std::string>{"A1", "A2", "B", "E"})
        throw NumericalError("eve strategy: shape must be labeled A1, A2, B, E");
    if (e.alice.dim() != e.shape.dims[0] * e.shape.dims[1] || e.bob.dim() != e.shape.dims[2] ||
        e.eve.dim() != e.shape.dims[3])
        throw NumericalError("eve strategy: POVM dimension mismatch");
    if (e.eve.outcomes() != 4)
        throw NumericalError("eve strategy: Eve must have 4 outcomes");
    const Matrix rho_ab = partial_trace(projector(e.psi), e.shape, {"A1", "A2", "B"});
    if (!is_density_operator(rho_ab, tol::structural))
        throw NumericalError("eve strategy: tracing Eve does not leave a valid state");
}

namespace {

double sandwich(const Vector& psi, const Matrix& op) {
    return (psi.adjoint() * op * psi).value().real();
}

}  // namespace

CorrelationTable eve_visible_table(const EveStrategy& e) {
    validate_eve_strategy(e);
    const Matrix id_e = Matrix::Identity(e.eve_dim(), e.eve_dim());
    CorrelationTable t;
    for (int a = 0; a < 4; ++a)
        for (int b = 0; b < 4; ++b) {
            const Matrix op = kron(e.alice.elements[static_cast<std::size_t>(a)],
                                   kron(e.bob.elements[static_cast<std::size_t>(b)], id_e));
            t.p(a, b) = sandwich(e.psi, op);
        }
    validate_table(t);
    return t;
}

bool eve_consistency_check(const EveStrategy& e, const CorrelationTable& target,
                           double tolerance) {
    validate_table(target);
    const CorrelationTable seen = eve_visible_table(e);
    return (seen.p - target.p).cwiseAbs().maxCoeff() <= tolerance;
}

double guessing_probability(const EveStrategy& e) {
    validate_eve_strategy(e);
    const Matrix id_a = Matrix::Identity(4, 4);
    double g = 0.0;
    for (int b = 0; b < 4; ++b)
        g += sandwich(e.psi, kron(id_a, kron(e.bob.elements[static_cast<std::size_t>(b)],
                                             e.eve.elements[static_cast<std::size_t>(b)])));
    if (g < -1e-10 || g > 1.0 + 1e-10)
        throw NumericalError("guessing probability out of [0,1]");
    return std::clamp(g, 0.0, 1.0);
}

double guessing_probability(const Strategy& s, const EveStrategy& e) {
    if (!eve_consistency_check(e, correlations(s)))
        throw NumericalError("eve strategy is not consistent with the visible statistics");
    return guessing_probability(e);
}

double min_entropy(double g) {
    if (!(g > 0.0) || g > 1.0 + 1e-12)
        throw NumericalError("min_entropy: guessing probability out of (0,1]");
    return -std::log2(std::min(g, 1.0)) + 0.0;  // +0.0 normalizes -log2(1) = -0
}

namespace {

// Classically-correlated-sources adversary model: hidden variable lambda
// with weights q, per-lambda pure product pair of two-qubit source states,
// a fixed Bob POVM, and Eve reading the purifier.
struct HiddenModel {
    std::vector<double> q;
    std::vector<Vector> psi1, psi2;  // 4-dim pure states on (A_i, B_i)
    Povm bob;
};

EveStrategy to_eve_strategy(const HiddenModel& m, const Povm& eve) {
    const Eigen::Index L = static_cast<Eigen::Index>(m.q.size());
    SubsystemShape pair_shape{{2, 2, 2, 2}, {"A1", "B1", "A2", "B2"}};
    Vector psi = Vector::Zero(16 * L);
    for (Eigen::Index lam = 0; lam < L; ++lam) {
        Vector prod = kron(m.psi1[static_cast<std::size_t>(lam)],
                           m.psi2[static_cast<std::size_t>(lam)]);
        prod = permute_subsystems(prod, pair_shape, {"A1", "A2", "B1", "B2"});
        const double amp = std::sqrt(std::max(m.q[static_cast<std::size_t>(lam)], 0.0));
        for (Eigen::Index x = 0; x < 16; ++x) psi(x * L + lam) = amp * prod(x);
    }
    psi.normalize();
    EveStrategy e;
    e.psi = std::move(psi);
    e.shape = SubsystemShape{{2, 2, 4, L}, {"A1", "A2", "B", "E"}};
    e.alice = bell_povm();
    e.bob = m.bob;
    e.eve = eve;
    return e;
}

Povm trivial_eve_povm(Eigen::Index dim) {
    std::vector<Matrix> els(4, Matrix::Zero(dim, dim));
    els[0] = Matrix::Identity(dim, dim);
    return make_povm(std::move(els));
}

// Subnormalized Eve-side operators rho_b with G = sum_b Tr(E_b rho_b).
std::array<Matrix, 4> eve_side_operators(const EveStrategy& e) {
    const Eigen::Index de = e.eve_dim();
    const Eigen::Index dab = e.psi.size() / de;
    Matrix c(dab, de);
    for (Eigen::Index x = 0; x < dab; ++x)
        for (Eigen::Index k = 0; k < de; ++k) c(x, k) = e.psi(x * de + k);
    std::array<Matrix, 4> rho;
    const Matrix id_a = Matrix::Identity(4, 4);
    for (int b = 0; b < 4; ++b) {
        const Matrix op = kron(id_a, e.bob.elements[static_cast<std::size_t>(b)]);
        rho[static_cast<std::size_t>(b)] = (c.adjoint() * op * c).transpose();
    }
    return rho;
}

// Exact eigenvector update of Eve's POVM for a fixed state: assigns each
// eigenvector of Eve's marginal to its best outcome; a pretty-good-
// measurement variant is tried as well and the better of the two kept.
std::pair<Povm, double> best_eve_update(const EveStrategy& e) {
    const auto rho = eve_side_operators(e);
    const Eigen::Index de = e.eve_dim();
    Matrix sigma = Matrix::Zero(de, de);
    for (const Matrix& r : rho) sigma += r;
    auto [vals, vecs] = eig_hermitian(sigma);

    std::vector<Matrix> assign(4, Matrix::Zero(de, de));
    for (Eigen::Index k = 0; k < de; ++k) {
        const Vector v = vecs.col(k);
        int best = 0;
        if (vals(k) > 1e-14) {
            double best_val = -1.0;
            for (int b = 0; b < 4; ++b) {
                const double val =
                    (v.adjoint() * rho[static_cast<std::size_t>(b)] * v).value().real();
                if (val > best_val) {
                    best_val = val;
                    best = b;
                }
            }
        }
        assign[static_cast<std::size_t>(best)] += projector(v);
    }
    Povm eig_povm = make_povm(std::move(assign));
    EveStrategy trial = e;
    trial.eve = eig_povm;
    double eig_g = guessing_probability(trial);

    // PGM on the support of sigma.
    Matrix inv_sqrt = Matrix::Zero(de, de);
    Matrix kernel = Matrix::Zero(de, de);
    for (Eigen::Index k = 0; k < de; ++k) {
        if (vals(k) > 1e-12)
            inv_sqrt += (1.0 / std::sqrt(vals(k))) * projector(Vector(vecs.col(k)));
        else
            kernel += projector(Vector(vecs.col(k)));
    }
    std::vector<Matrix> pgm;
    for (int b = 0; b < 4; ++b) {
        Matrix el = inv_sqrt * rho[static_cast<std::size_t>(b)] * inv_sqrt;
        el = 0.5 * (el + el.adjoint());
        if (b == 0) el += kernel;
        pgm.push_back(std::move(el));
    }
    try {
        Povm pgm_povm = make_povm(std::move(pgm));
        trial.eve = pgm_povm;
        const double pgm_g = guessing_probability(trial);
        if (pgm_g > eig_g) return {trial.eve, pgm_g};
    } catch (const NumericalError&) {
        // fall back to the eigenvector assignment
    }
    return {eig_povm, eig_g};
}

// Decomposes targets that are uniform along Bell-shift classes: mixtures of
// (B_s, phi+) source pairs with Bell Bob reproduce exactly the tables of the
// form p(a,b) = t_{class(a,b)} / 4.
bool fit_bell_shift(const CorrelationTable& target, double tolerance, HiddenModel& out) {
    auto basis = bell_basis();
    std::vector<Eigen::Matrix4d> base(4);
    for (int s = 0; s < 4; ++s) {
        Strategy st = ideal_strategy();
        st.source1 = projector(basis[static_cast<std::size_t>(s)]);
        base[static_cast<std::size_t>(s)] = correlations(st).p;
    }
    std::array<double, 4> t{};
    for (int s = 0; s < 4; ++s)
        for (int a = 0; a < 4; ++a)
            for (int b = 0; b < 4; ++b)
                if (base[static_cast<std::size_t>(s)](a, b) > 1e-9)
                    t[static_cast<std::size_t>(s)] += target.p(a, b);
    Eigen::Matrix4d recon = Eigen::Matrix4d::Zero();
    for (int s = 0; s < 4; ++s)
        recon += t[static_cast<std::size_t>(s)] * base[static_cast<std::size_t>(s)];
    if ((recon - target.p).cwiseAbs().maxCoeff() > tolerance) return false;

    out = HiddenModel{};
    out.bob = bell_povm();
    for (int s = 0; s < 4; ++s) {
        if (t[static_cast<std::size_t>(s)] < 1e-14) continue;
        out.q.push_back(t[static_cast<std::size_t>(s)]);
        out.psi1.push_back(basis[static_cast<std::size_t>(s)]);
        out.psi2.push_back(basis[0]);
    }
    return !out.q.empty();
}

// Fully classical strategies: Bob's outcome is a deterministic function of
// the hidden variable, so Eve guesses perfectly. Feasible whenever the
// target obeys p(0,b) = p(1,b) and p(2,b) = p(3,b).
bool fit_classical(const CorrelationTable& target, double tolerance, HiddenModel& out) {
    for (int b = 0; b < 4; ++b)
        if (std::abs(target.p(0, b) - target.p(1, b)) > tolerance ||
            std::abs(target.p(2, b) - target.p(3, b)) > tolerance)
            return false;

    out = HiddenModel{};
    std::vector<Matrix> comp(4, Matrix::Zero(4, 4));
    for (int b = 0; b < 4; ++b) comp[static_cast<std::size_t>(b)](b, b) = 1.0;
    out.bob = make_povm(std::move(comp));

    auto qubit = [](int z) {
        Vector v = Vector::Zero(2);
        v(z) = 1.0;
        return v;
    };
    for (int b = 0; b < 4; ++b) {
        const int b1 = b / 2, b0 = b % 2;
        // (z1, z2) in {00, 11} carries the phi+/phi- weight, {01, 10} the psi one.
        const std::array<std::pair<int, int>, 4> pairs{{{0, 0}, {1, 1}, {0, 1}, {1, 0}}};
        const std::array<double, 4> weight{target.p(0, b), target.p(0, b), target.p(2, b),
                                           target.p(2, b)};
        for (int i = 0; i < 4; ++i) {
            if (weight[static_cast<std::size_t>(i)] < 1e-14) continue;
            out.q.push_back(weight[static_cast<std::size_t>(i)]);
            out.psi1.push_back(kron(qubit(pairs[static_cast<std::size_t>(i)].first), qubit(b1)));
            out.psi2.push_back(kron(qubit(pairs[static_cast<std::size_t>(i)].second), qubit(b0)));
        }
    }
    if (out.q.empty()) return false;
    const double total = std::accumulate(out.q.begin(), out.q.end(), 0.0);
    for (double& w : out.q) w /= total;
    return true;
}

}  // namespace

EveOptimum optimize_eve(const CorrelationTable& target, const EveConfig& config,
                        std::uint64_t seed) {
    validate_table(target);
    if (config.restarts < 1) throw NumericalError("optimize_eve: restarts must be >= 1");

    std::vector<HiddenModel> candidates;
    HiddenModel m;
    if (fit_classical(target, config.consistency_tol, m)) candidates.push_back(m);
    if (fit_bell_shift(target, config.consistency_tol, m)) candidates.push_back(m);
    if (candidates.empty())
        throw AssumptionError(
            "infeasible target: no classically-correlated-source strategy reproduces it");

    EveOptimum best;
    best.guessing = -1.0;
    for (int r = 0; r < config.restarts; ++r) {
        const HiddenModel& start =
            candidates[static_cast<std::size_t>(r) % candidates.size()];
        if (static_cast<int>(start.q.size()) > config.eve_dim) continue;
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r) * 0x9E3779B97F4A7C15ULL);
        std::normal_distribution<double> gauss(0.0, 1.0);

        HiddenModel current = start;
        EveStrategy strat = to_eve_strategy(current, trivial_eve_povm(
                                                static_cast<Eigen::Index>(current.q.size())));
        auto [eve, g] = best_eve_update(strat);
        strat.eve = eve;
        std::vector<std::pair<int, double>> trace{{r, g}};

        // See-saw: jitter the hidden ensemble, keep consistent improving moves,
        // re-solve Eve's side exactly after each accepted move.
        for (int it = 0; it < config.iterations; ++it) {
            HiddenModel proposal = current;
            const double scale = 1e-8 * std::pow(0.5, it / 8);
            double total = 0.0;
            for (double& w : proposal.q) {
                w = std::max(w + scale * gauss(rng), 0.0);
                total += w;
            }
            for (double& w : proposal.q) w /= total;
            EveStrategy trial = to_eve_strategy(proposal, strat.eve);
            if (!eve_consistency_check(trial, target, config.consistency_tol)) continue;
            auto [trial_eve, trial_g] = best_eve_update(trial);
            if (trial_g > g) {
                current = proposal;
                strat = trial;
                strat.eve = trial_eve;
                g = trial_g;
                trace.emplace_back(r, g);
            }
        }
        if (g > best.guessing) {
            best.guessing = g;
            best.strategy = strat;
        }
        best.trace.insert(best.trace.end(), trace.begin(), trace.end());
    }
    if (best.guessing < 0.0)
        throw AssumptionError("infeasible target: hidden-variable count exceeds Eve dimension");
    return best;
}

std::string to_string(CertStatus s) {
    switch (s) {
        case CertStatus::certified_2_bits: return "certified-2-bits";
        case CertStatus::premise_unmet: return "premise-unmet";
        case CertStatus::heuristic_bound: return "heuristic-bound";
    }
    return "unknown";
}

CertificationResult certify(const Strategy& s, const EveConfig& config, std::uint64_t seed) {
    const CorrelationTable table = correlations(s);
    CertificationResult result;
    result.witness = 0.0;
    for (int a = 0; a < 4; ++a) result.witness += table.p(a, a);

    if (result.witness >= 1.0 - config.premise_tol) {
        result.guessing = 0.25;
        result.min_entropy_bits = 2.0;
        result.status = CertStatus::certified_2_bits;
        result.caveats = {
            "assumes the two sources are correlated only classically",
            "certificate holds at exact maximal violation; no robust statement is made"};
        return result;
    }
    try {
        const EveOptimum opt = optimize_eve(table, config, seed);
        result.guessing = opt.guessing;
        result.min_entropy_bits = min_entropy(opt.guessing);
        result.status = CertStatus::heuristic_bound;
        result.caveats = {
            "heuristic see-saw lower bound on Eve's guessing probability; not a certificate",
            "Eve search restricted to dimension " + std::to_string(config.eve_dim)};
    } catch (const AssumptionError&) {
        result.guessing = 1.0;
        result.min_entropy_bits = 0.0;
        result.status = CertStatus::premise_unmet;
        result.caveats = {"no constrained adversary strategy reproduces the observed table"};
    }
    return result;
}

AttackDemo entangled_source_attack() {
    auto basis = bell_basis();
    Vector psi = Vector::Zero(4 * 4 * 4);
    for (int b = 0; b < 4; ++b) {
        Vector eb = Vector::Zero(4);
        eb(b) = 1.0;
        psi += 0.5 * kron(basis[static_cast<std::size_t>(b)], kron(eb, eb));
    }
    std::vector<Matrix> comp(4, Matrix::Zero(4, 4));
    for (int b = 0; b < 4; ++b) comp[static_cast<std::size_t>(b)](b, b) = 1.0;
    Povm computational = make_povm(std::move(comp));

    AttackDemo demo;
    demo.strategy.psi = std::move(psi);
    demo.strategy.shape = SubsystemShape{{2, 2, 4, 4}, {"A1", "A2", "B", "E"}};
    demo.strategy.alice = bell_povm();
    demo.strategy.bob = computational;
    demo.strategy.eve = computational;
    demo.table = eve_visible_table(demo.strategy);
    demo.guessing = guessing_probability(demo.strategy);
    return demo;
}

}  // namespace swapsteer
