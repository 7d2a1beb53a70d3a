#include "adiacross/evolve.hpp"

#include "doctest.h"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

using namespace adiacross;

namespace {

const ModelSpec kSmallModified = ModelSpec::modified(1.0, 1.0, 1.0, 8);
const ModelSpec kSmallRwa = ModelSpec::rwa(1.0, 1.0, 8);

Vector start_state(const ModelSpec& spec, double s) {
    return exact_eigenvector(spec, s, Branch::plus, 0).vector;
}

PropagationConfig window(double eps, double s0, double s1) {
    PropagationConfig cfg;
    cfg.eps = eps;
    cfg.s_start = s0;
    cfg.s_end = s1;
    return cfg;
}

}  // namespace

TEST_CASE("constant generator reproduces the matrix exponential") {
    ModelSpec spec = ModelSpec::modified(1.0, 1.3, 0.8, 6);
    spec.chirp = {0.37, 0.0};
    const PropagationConfig cfg = window(0.05, -0.2, 0.3);
    const Matrix K = assemble_K(spec, 0.0).entries;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(K);
    const cplx minus_i{0.0, -1.0};
    const Vector phase =
        (minus_i * ((cfg.s_end - cfg.s_start) / cfg.eps) * solver.eigenvalues().cast<cplx>())
            .array()
            .exp();
    Vector psi0 = Vector::Zero(spec.dim());
    psi0(spec.index(0, 0)) = 0.6;
    psi0(spec.index(1, 2)) = cplx(0.0, 0.8);
    const Vector ref = solver.eigenvectors() * (phase.asDiagonal() * (solver.eigenvectors().adjoint() * psi0));
    for (Integrator integrator : {Integrator::exp_midpoint, Integrator::rk4}) {
        PropagationConfig c = cfg;
        c.integrator = integrator;
        c.c_step = integrator == Integrator::rk4 ? 0.05 : 0.1;
        const EvolutionResult r = propagate_exact(spec, c, psi0);
        CHECK((r.psi - ref).norm() <= 1e-8);
    }
}

TEST_CASE("exact propagation: unitarity, self-convergence and integrator agreement") {
    const PropagationConfig cfg = window(1e-2, -0.45, 0.45);
    const Vector psi0 = start_state(kSmallModified, cfg.s_start);
    const EvolutionResult base = propagate_exact(kSmallModified, cfg, psi0);
    CHECK(base.unitarity_drift <= 1e-8);
    CHECK(base.log.size() == 21);
    CHECK(base.step_size == doctest::Approx(policy_step(kSmallModified, cfg)));

    PropagationConfig half = cfg;
    half.fixed_h = 0.5 * base.step_size;
    const EvolutionResult fine = propagate_exact(kSmallModified, half, psi0);
    CHECK((fine.psi - base.psi).norm() <= 1e-6);

    PropagationConfig rk = cfg;
    rk.integrator = Integrator::rk4;
    const EvolutionResult r4 = propagate_exact(kSmallModified, rk, psi0);
    CHECK((r4.psi - fine.psi).norm() <= 1e-6);
    // Half-step Richardson oracle for rk4 (fourth order): the extrapolated
    // state matches the reference, and the norm drift is bounded by the
    // estimated error.
    PropagationConfig rk_half = rk;
    rk_half.fixed_h = 0.5 * r4.step_size;
    const EvolutionResult r4h = propagate_exact(kSmallModified, rk_half, psi0);
    const Vector richardson = r4h.psi + (r4h.psi - r4.psi) / 15.0;
    CHECK((richardson - fine.psi).norm() <= 1e-6);
    const double estimate = (16.0 / 15.0) * (r4.psi - r4h.psi).norm();
    CHECK(r4.unitarity_drift <= estimate + 1e-12);
}

TEST_CASE("adiabatic propagation stays in the followed eigenspace") {
    for (const ModelSpec& spec : {kSmallModified, kSmallRwa}) {
        const PropagationConfig cfg = window(1e-2, -0.45, 0.45);
        const EvolutionResult a = propagate_adiabatic(spec, cfg, start_state(spec, cfg.s_start));
        CHECK(a.intertwine_residual <= 1e-6);
        CHECK(a.unitarity_drift <= 1e-8);
        for (const auto& row : a.log) {
            CHECK(row.intertwine_residual <= 1e-6);
        }
    }
}

TEST_CASE("suppressing L makes the adiabatic run bit-identical to the exact one") {
    PropagationConfig cfg = window(2e-2, -0.3, 0.3);
    cfg.suppress_L = true;
    const Vector psi0 = start_state(kSmallModified, cfg.s_start);
    const EvolutionResult u = propagate_exact(kSmallModified, cfg, psi0);
    const EvolutionResult a = propagate_adiabatic(kSmallModified, cfg, psi0);
    CHECK(u.psi == a.psi);
}

TEST_CASE("global phase of the initial state") {
    const PropagationConfig cfg = window(2e-2, -0.45, 0.45);
    const cplx phase = std::polar(1.0, 0.7);
    const Vector psi0 = start_state(kSmallModified, cfg.s_start);
    const EvolutionResult u = propagate_exact(kSmallModified, cfg, psi0);
    const EvolutionResult v = propagate_exact(kSmallModified, cfg, phase * psi0);
    CHECK((phase * u.psi - v.psi).norm() <= 1e-12);
    const EvolutionResult a = propagate_adiabatic(kSmallModified, cfg, psi0);
    const EvolutionResult b = propagate_adiabatic(kSmallModified, cfg, phase * psi0);
    CHECK(std::abs((u.psi - a.psi).norm() - (v.psi - b.psi).norm()) <= 1e-12);
    // Re-phasing the reference eigenvector leaves the transition probability alone.
    const Vector ref = start_state(kSmallModified, cfg.s_end);
    const double p1 = 1.0 - std::norm(ref.dot(u.psi));
    const double p2 = 1.0 - std::norm((std::polar(1.0, -1.9) * ref).dot(v.psi));
    CHECK(std::abs(p1 - p2) <= 1e-12);
}

TEST_CASE("time reversal of the exact propagator") {
    const PropagationConfig cfg = window(1e-2, -0.45, 0.45);
    const Vector psi0 = start_state(kSmallModified, cfg.s_start);
    const EvolutionResult fwd = propagate_exact(kSmallModified, cfg, psi0);
    const EvolutionResult back = propagate_exact_backward(kSmallModified, cfg, fwd.psi);
    CHECK((back.psi - psi0).norm() <= 2e-6);
    CHECK(back.log.back().s == cfg.s_start);
}

TEST_CASE("adiabatic error metrics") {
    const PropagationConfig cfg = window(2e-2, -0.45, 0.45);
    const AdiabaticError e = adiabatic_error(kSmallModified, cfg);
    CHECK(e.vector_deviation > 0.0);
    CHECK(e.vector_deviation <= 2.0);
    CHECK(e.transition_prob >= 0.0);
    CHECK(e.transition_prob <= 1.0 + 1e-9);
    CHECK(e.metric_value(Metric::transition_probability) == e.transition_prob);
    // The operator norm dominates the action on one unit vector.
    ModelSpec tiny = ModelSpec::modified(1.0, 1.0, 1.0, 4);
    const AdiabaticError et = adiabatic_error(tiny, cfg);
    CHECK(full_operator_error(tiny, cfg) >= et.vector_deviation - 1e-12);
}

TEST_CASE("error decreases with eps") {
    double prev = 10.0;
    for (double eps : {4e-2, 2e-2, 1e-2}) {
        const double e = adiabatic_error(kSmallRwa, window(eps, -0.45, 0.45)).vector_deviation;
        CHECK(e < prev);
        prev = e;
    }
}

TEST_CASE("step-size probe") {
    PropagationConfig cfg = window(2e-2, -0.2, 0.2);
    cfg.global_tolerance = 1e-30;
    const Vector psi0 = start_state(kSmallModified, cfg.s_start);
    CHECK_THROWS_AS(propagate_exact(kSmallModified, cfg, psi0), StepPolicyError);
    cfg.global_tolerance = 1e-3;
    CHECK_NOTHROW(propagate_exact(kSmallModified, cfg, psi0));
}

TEST_CASE("truncation leak is reported") {
    const ModelSpec narrow = ModelSpec::modified(1.0, 1.0, 1.0, 2);
    const PropagationConfig cfg = window(2e-2, -0.2, 0.2);
    const EvolutionResult r = propagate_exact(narrow, cfg, start_state(narrow, cfg.s_start));
    CHECK(r.leak);
    CHECK_FALSE(r.warnings.empty());
}

TEST_CASE("crossing jump stays within the unitarity limit") {
    const CrossingLedger ledger = build_ledger(kSmallModified, 4, 6);
    for (const auto& rec : ledger.records) {
        const CrossingJump j = w_jump_across_crossing(kSmallModified, 1e-2, rec, ledger.alpha, 0.5);
        CHECK(j.measured_jump >= 0.0);
        CHECK(j.measured_jump <= 2.0);
        CHECK(j.lemma_bound > 0.0);
        CHECK(j.t < rec.z_k);
        CHECK(rec.z_k < j.s);
        CHECK(j.fitted_C == doctest::Approx(j.measured_jump / j.lemma_bound));
    }
}

TEST_CASE("configuration errors and checkpoint CSV") {
    PropagationConfig cfg;
    cfg.eps = 0.0;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = PropagationConfig{};
    cfg.s_end = cfg.s_start;
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    cfg = PropagationConfig{};
    cfg.checkpoints = {0.9};
    CHECK_THROWS_AS(cfg.validate(), std::invalid_argument);
    CHECK_THROWS_AS(propagate_exact(kSmallRwa, PropagationConfig{}, Vector::Zero(3)),
                    std::invalid_argument);
    CHECK(parse_integrator("rk4") == Integrator::rk4);
    CHECK(parse_metric("transition") == Metric::transition_probability);
    CHECK_THROWS_AS(parse_integrator("euler"), std::invalid_argument);

    std::ostringstream csv;
    write_checkpoint_csv(csv, {CheckpointRow{0.1, 1.0, 0.2, 0.0, 0.0}});
    CHECK(csv.str().rfind("s,norm,gap,intertwine_residual,pop_edge_modes\n", 0) == 0);
}
