#include "swapsteer/witness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <random>
#include <sstream>
#include <thread>

namespace swapsteer {

double witness_value(const CorrelationTable& t) {
    validate_table(t);
    return t.p(0, 0) + t.p(1, 1) + t.p(2, 2) + t.p(3, 3);
}

WitnessResult witness_expectation_form(const Strategy& s) {
    validate_strategy(s);
    const Matrix rho = arranged_state(s);
    const Matrix a0 = trusted_observable();

    WitnessResult r;
    double sum = 0.0;
    Matrix ak = Matrix::Identity(4, 4);
    for (int k = 0; k < 4; ++k) {
        const Matrix bl = observable_from_povm(s.bob, (4 - k) % 4);
        const Matrix op = kron(ak, bl);
        const Complex e = (op * rho).trace();
        r.term[static_cast<std::size_t>(k)] = e;
        sum += e.real();
        r.residual[static_cast<std::size_t>(k)] = (op * rho - rho).norm();
        ak = ak * a0;
    }
    r.value = sum / 4.0;
    return r;
}

std::array<double, 4> max_violation_residuals(const Strategy& s) {
    return witness_expectation_form(s).residual;
}

namespace {

Vector bloch_state(double theta, double phi) {
    Vector v(2);
    v << std::cos(theta / 2.0),
        Complex(std::cos(phi), std::sin(phi)) * std::sin(theta / 2.0);
    return v;
}

}  // namespace

double lhs_point_value(double theta1, double phi1, double theta2, double phi2) {
    const Vector prod = kron(bloch_state(theta1, phi1), bloch_state(theta2, phi2));
    double best = 0.0;
    for (const Vector& phi : bell_basis())
        best = std::max(best, std::norm(phi.dot(prod)));
    return best;
}

LhsBoundEstimate lhs_bound(const LhsConfig& config, std::uint64_t seed) {
    if (config.restarts < 1) throw NumericalError("lhs_bound: restarts must be >= 1");

    struct RestartResult {
        double value = 0.0;
        std::array<double, 4> angles{};
        std::vector<double> trace;
    };
    std::vector<RestartResult> results(static_cast<std::size_t>(config.restarts));

    auto run_restart = [&](int r) {
        std::mt19937_64 rng(seed + static_cast<std::uint64_t>(r) * 0x9E3779B97F4A7C15ULL);
        std::uniform_real_distribution<double> uth(0.0, M_PI), uph(0.0, 2.0 * M_PI);
        std::array<double, 4> x{uth(rng), uph(rng), uth(rng), uph(rng)};
        double value = lhs_point_value(x[0], x[1], x[2], x[3]);

        RestartResult& res = results[static_cast<std::size_t>(r)];
        res.trace.push_back(value);
        // Pattern search over the four Bloch angles with shrinking step.
        double step = 0.4;
        for (int it = 0; it < config.max_iterations && step > config.step_floor; ++it) {
            bool improved = false;
            for (std::size_t i = 0; i < 4; ++i) {
                for (double sgn : {1.0, -1.0}) {
                    std::array<double, 4> y = x;
                    y[i] += sgn * step;
                    const double v = lhs_point_value(y[0], y[1], y[2], y[3]);
                    if (v > value) {
                        value = v;
                        x = y;
                        improved = true;
                        res.trace.push_back(value);
                    }
                }
            }
            if (!improved) step *= 0.5;
        }
        res.value = value;
        res.angles = x;
    };

    // Restarts are independent; fan out up to SWAPSTEER_THREADS workers and
    // merge in restart order so the result is seed-deterministic.
    unsigned workers = std::thread::hardware_concurrency();
    if (const char* env = std::getenv("SWAPSTEER_THREADS")) {
        const long n = std::strtol(env, nullptr, 10);
        if (n >= 1) workers = static_cast<unsigned>(n);
    }
    workers = std::max(1u, std::min<unsigned>(workers, static_cast<unsigned>(config.restarts)));
    if (workers == 1) {
        for (int r = 0; r < config.restarts; ++r) run_restart(r);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (unsigned w = 0; w < workers; ++w)
            pool.emplace_back([&] {
                for (int r = next.fetch_add(1); r < config.restarts; r = next.fetch_add(1))
                    run_restart(r);
            });
        for (auto& t : pool) t.join();
    }

    LhsBoundEstimate est;
    std::array<double, 4> best_angles{};
    for (int r = 0; r < config.restarts; ++r) {
        const RestartResult& res = results[static_cast<std::size_t>(r)];
        for (double v : res.trace) est.trace.emplace_back(r, v);
        if (res.value > est.beta) {
            est.beta = res.value;
            best_angles = res.angles;
        }
    }
    std::ostringstream os;
    os << "product state sigma(theta=" << best_angles[0] << ",phi=" << best_angles[1]
       << ") (x) tau(theta=" << best_angles[2] << ",phi=" << best_angles[3]
       << "), Bob answers his best fixed Bell outcome";
    est.argmax = os.str();
    return est;
}

}  // namespace swapsteer
