#ifndef SWAPSTEER_WITNESS_HPP
#define SWAPSTEER_WITNESS_HPP

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "swapsteer/scenario.hpp"

namespace swapsteer {

/// Witness evaluation in expectation form, with the maximal-violation
/// operator residuals alongside.
struct WitnessResult {
    double value = 0.0;                    // W, in [0, 1]
    std::array<Complex, 4> term{};         // <A0^k (x) B0^(4-k)>, k = 0..3
    std::array<double, 4> residual{};      // Frobenius defects per k
};

/// W = p(0,0) + p(1,1) + p(2,2) + p(3,3).
double witness_value(const CorrelationTable& t);

/// W = (1/4) sum_k <A0^k (x) B0^(4-k)> evaluated directly on operators.
WitnessResult witness_expectation_form(const Strategy& s);

/// || (A0^k (x) B0^(4-k)) rho - rho ||_F for k = 0..3.
std::array<double, 4> max_violation_residuals(const Strategy& s);

struct LhsConfig {
    int restarts = 32;
    int max_iterations = 400;
    double step_floor = 1e-9;
};

/// Numerical estimate of the classical local-hidden-state bound: maximum
/// of the witness over product qubit states held by Alice with a
/// deterministic classical Bob. By convexity the optimum sits at a single
/// product state and outcome, so the search runs over four Bloch angles
/// with an exact inner maximization over Bob's response.
struct LhsBoundEstimate {
    double beta = 0.0;
    std::string argmax;
    std::vector<std::pair<int, double>> trace;  // (restart, value) per accepted step
};

LhsBoundEstimate lhs_bound(const LhsConfig& config, std::uint64_t seed);

/// Witness value of one deterministic LHS point: Alice receives the product
/// state sigma(theta1,phi1) (x) tau(theta2,phi2), Bob announces his best
/// fixed outcome. Exposed for the dense-grid oracle used in tests.
double lhs_point_value(double theta1, double phi1, double theta2, double phi2);

}  // namespace swapsteer

#endif
