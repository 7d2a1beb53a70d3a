#pragma once

// Exact and adiabatic propagation of the truncated Floquet model:
//   i eps psi' = K(s) psi              (exact)
//   i eps psi' = (K(s) + eps L(s)) psi (adiabatic, L = i[P', P])
//
// The truncation keeps every operator bounded, so the point varpi = 0 needs no
// special treatment.

#include "adiacross/model.hpp"
#include "adiacross/spectral.hpp"

#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace adiacross {

enum class Integrator { rk4, exp_midpoint };
enum class Metric { vector_deviation, transition_probability };

std::string to_string(Integrator integrator);
std::string to_string(Metric metric);
Integrator parse_integrator(const std::string& text);
Metric parse_metric(const std::string& text);

class StepPolicyError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct PropagationConfig {
    double eps{1e-2};
    double s_start{-0.45};
    double s_end{0.45};
    // Fixed step when > 0; otherwise h = c_step * eps / norm_estimate.
    double fixed_h{0.0};
    double c_step{0.1};
    Integrator integrator{Integrator::exp_midpoint};
    // Sorted, inside [s_start, s_end]; empty selects 21 evenly spaced points.
    std::vector<double> checkpoints;
    Metric metric{Metric::vector_deviation};
    // Step-doubling probe before the run: the estimated global error
    // (local error x step count) must stay below this, halving h up to
    // four times. Zero disables the probe.
    double global_tolerance{0.0};
    double leak_threshold{1e-6};
    // Drop L from the adiabatic generator.
    bool suppress_L{false};

    void validate() const;
};

struct CheckpointRow {
    double s{0.0};
    double norm{0.0};
    double gap{0.0};
    double intertwine_residual{0.0};
    double pop_edge_modes{0.0};
};

struct EvolutionResult {
    Vector psi;  // state at the end of the run
    double unitarity_drift{0.0};
    // max over checkpoints of ||(1 - P(s)) psi(s)||
    double intertwine_residual{0.0};
    double max_edge_population{0.0};
    bool leak{false};
    long steps{0};
    double step_size{0.0};
    double wall_time{0.0};
    std::vector<CheckpointRow> log;
    std::vector<std::string> warnings;
};

// ||K||_est = N max|varpi| + omega0 + Omega (1 + rho) over the window.
double norm_estimate(const ModelSpec& spec, double s_start, double s_end);

// Step size that the policy of cfg selects (before any probe refinement).
double policy_step(const ModelSpec& spec, const PropagationConfig& cfg);

EvolutionResult propagate_exact(const ModelSpec& spec, const PropagationConfig& cfg,
                                const Vector& psi0);
EvolutionResult propagate_adiabatic(const ModelSpec& spec, const PropagationConfig& cfg,
                                    const Vector& psi0);

// Exact propagation from cfg.s_end back to cfg.s_start.
EvolutionResult propagate_exact_backward(const ModelSpec& spec, const PropagationConfig& cfg,
                                         const Vector& psi_end);

struct AdiabaticError {
    double vector_deviation{0.0};
    double transition_prob{0.0};
    EvolutionResult exact;
    EvolutionResult adiabatic;

    double metric_value(Metric metric) const {
        return metric == Metric::vector_deviation ? vector_deviation : transition_prob;
    }
};

// Both propagations from psi_{+,0}(s_start).
AdiabaticError adiabatic_error(const ModelSpec& spec, const PropagationConfig& cfg);

// ||U(s_end) - A(s_end)|| in operator norm on the whole truncated space.
// Cost grows with dim^3 per step; meant for small N.
double full_operator_error(const ModelSpec& spec, const PropagationConfig& cfg);

struct CrossingJump {
    double measured_jump{0.0};
    double lemma_bound{0.0};  // C = 1
    double fitted_C{0.0};
    double t{0.0};
    double s{0.0};
    double g_t{0.0};
    double g_s{0.0};
    bool offset_clipped{false};
};

// ||(W(u_1) - W(u_0)) psi0|| over [u_0, u_1] = the record's partition
// interval, with W = A^{-1} U based at u_0 and psi0 = psi_{+,0}(u_0) when
// psi0 is empty. The bound places t, s at distance
// varsigma (eps tau_k)^{1/(1+2 alpha)} from z_k.
CrossingJump w_jump_across_crossing(const ModelSpec& spec, double eps,
                                    const CrossingRecord& record, double alpha,
                                    double varsigma, const Vector& psi0 = Vector(),
                                    double c_step = 0.1);

// CSV with columns s,norm,gap,intertwine_residual,pop_edge_modes.
void write_checkpoint_csv(std::ostream& out, const std::vector<CheckpointRow>& rows);

}  // namespace adiacross
