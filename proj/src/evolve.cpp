#include "adiacross/evolve.hpp"

#include "adiacross/bounds.hpp"
#include "adiacross/io.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <ostream>

namespace adiacross {

namespace {

constexpr int kDefaultCheckpoints = 21;
constexpr int kMaxProbeHalvings = 4;
constexpr int kProbePoints = 5;
constexpr int kGapGrid = 400;

// Generator G(s) of i eps psi' = G psi.
class Generator {
public:
    Generator(const ModelSpec& spec, double eps, bool with_L)
        : spec_(spec), eps_(eps), with_L_(with_L) {}

    Matrix operator()(double s) const {
        Matrix g = assemble_K(spec_, s).entries;
        if (with_L_) {
            g += eps_ * projector_and_L(spec_, s).L;
        }
        return g;
    }

private:
    const ModelSpec& spec_;
    double eps_;
    bool with_L_;
};

bool is_real(const Matrix& m) {
    return m.imag().cwiseAbs().maxCoeff() == 0.0;
}

// x <- exp(-i G h / eps) x through the Hermitian eigendecomposition of G.
template <typename State>
void apply_exponential(const Matrix& G, double h, double eps, State& x) {
    const cplx minus_i{0.0, -1.0};
    if (is_real(G)) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(G.real());
        if (solver.info() != Eigen::Success) {
            throw std::runtime_error("exp_midpoint: eigen decomposition failed");
        }
        const Matrix V = solver.eigenvectors().cast<cplx>();
        const Vector phase = (minus_i * (h / eps) * solver.eigenvalues().cast<cplx>()).array().exp();
        x = V * (phase.asDiagonal() * (V.adjoint() * x));
        return;
    }
    Eigen::SelfAdjointEigenSolver<Matrix> solver(G);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("exp_midpoint: eigen decomposition failed");
    }
    const Matrix& V = solver.eigenvectors();
    const Vector phase = (minus_i * (h / eps) * solver.eigenvalues().cast<cplx>()).array().exp();
    x = V * (phase.asDiagonal() * (V.adjoint() * x));
}

template <typename State>
void advance(const Generator& gen, Integrator integrator, double s, double h, double eps,
             State& x) {
    if (integrator == Integrator::exp_midpoint) {
        apply_exponential(gen(s + 0.5 * h), h, eps, x);
        return;
    }
    const cplx c{0.0, -1.0 / eps};
    const Matrix g0 = gen(s);
    const Matrix g1 = gen(s + 0.5 * h);
    const Matrix g2 = gen(s + h);
    const State k1 = c * (g0 * x);
    const State k2 = c * (g1 * (x + (0.5 * h) * k1));
    const State k3 = c * (g1 * (x + (0.5 * h) * k2));
    const State k4 = c * (g2 * (x + h * k3));
    x += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

// Integrates from `from` to `to` (either direction) with steps no longer
// than |h|. Returns the step count.
template <typename State>
long integrate_segment(const Generator& gen, Integrator integrator, double from, double to,
                       double h, double eps, State& x) {
    const double length = to - from;
    if (length == 0.0) {
        return 0;
    }
    const long n = std::max<long>(1, static_cast<long>(std::ceil(std::abs(length) / h - 1e-9)));
    const double step = length / static_cast<double>(n);
    for (long i = 0; i < n; ++i) {
        advance(gen, integrator, from + step * static_cast<double>(i), step, eps, x);
    }
    return n;
}

std::vector<double> checkpoint_grid(const PropagationConfig& cfg) {
    std::vector<double> pts = cfg.checkpoints;
    if (pts.empty()) {
        for (int i = 0; i < kDefaultCheckpoints; ++i) {
            pts.push_back(cfg.s_start + (cfg.s_end - cfg.s_start) * i / (kDefaultCheckpoints - 1));
        }
    }
    pts.push_back(cfg.s_end);
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

double edge_population(const ModelSpec& spec, const Vector& psi) {
    const int n = spec.n_modes;
    double pop = 0.0;
    for (int b = 0; b < 2; ++b) {
        for (int m = -n; m <= n; ++m) {
            if (std::abs(m) >= n - 1) {
                pop += std::norm(psi(spec.index(b, m)));
            }
        }
    }
    return pop;
}

CheckpointRow make_row(const ModelSpec& spec, double s, const Vector& psi) {
    CheckpointRow row;
    row.s = s;
    row.norm = psi.norm();
    row.gap = gap(spec, s, spec.n_modes).value;
    const Vector ref = exact_eigenvector(spec, s, Branch::plus, 0).vector;
    row.intertwine_residual = (psi - ref * ref.dot(psi)).norm();
    row.pop_edge_modes = edge_population(spec, psi);
    return row;
}

// Estimated global error of the policy step via step doubling at a few points.
double probe_global_error(const ModelSpec& spec, const Generator& gen, Integrator integrator,
                          double s_start, double s_end, double h, double eps) {
    const double n_steps = std::ceil(std::abs(s_end - s_start) / h);
    double worst = 0.0;
    for (int p = 0; p < kProbePoints; ++p) {
        const double s = s_start + (s_end - s_start) * (p + 0.5) / kProbePoints;
        Vector one = exact_eigenvector(spec, s, Branch::plus, 0).vector;
        Vector two = one;
        advance(gen, integrator, s, h, eps, one);
        advance(gen, integrator, s, 0.5 * h, eps, two);
        advance(gen, integrator, s + 0.5 * h, 0.5 * h, eps, two);
        worst = std::max(worst, (one - two).norm());
    }
    return worst * n_steps;
}

EvolutionResult run(const ModelSpec& spec, const PropagationConfig& cfg, const Vector& psi0,
                    bool with_L, bool backward) {
    cfg.validate();
    spec.validate();
    if (psi0.size() != spec.dim()) {
        throw std::invalid_argument("propagate: initial state has dimension " +
                                    std::to_string(psi0.size()) + ", expected " +
                                    std::to_string(spec.dim()));
    }
    const auto started = std::chrono::steady_clock::now();
    const Generator gen(spec, cfg.eps, with_L && !cfg.suppress_L);

    EvolutionResult result;
    double h = policy_step(spec, cfg);
    if (cfg.global_tolerance > 0.0) {
        int halvings = 0;
        while (probe_global_error(spec, gen, cfg.integrator, cfg.s_start, cfg.s_end, h, cfg.eps) >
               cfg.global_tolerance) {
            if (++halvings > kMaxProbeHalvings) {
                throw StepPolicyError("propagate: estimated error exceeds " +
                                      format_number(cfg.global_tolerance) +
                                      " at the minimum step " + format_number(h));
            }
            h *= 0.5;
        }
        if (halvings > 0) {
            result.warnings.push_back("step halved " + std::to_string(halvings) +
                                      " time(s) by the error probe");
        }
    }
    result.step_size = h;

    std::vector<double> pts = checkpoint_grid(cfg);
    if (backward) {
        pts.insert(pts.begin(), cfg.s_start);
        std::reverse(pts.begin(), pts.end());
        pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    }
    Vector x = psi0;
    double pos = backward ? cfg.s_end : cfg.s_start;
    for (double target : pts) {
        result.steps += integrate_segment(gen, cfg.integrator, pos, target, h, cfg.eps, x);
        pos = target;
        const CheckpointRow row = make_row(spec, pos, x);
        result.unitarity_drift = std::max(result.unitarity_drift, std::abs(row.norm - 1.0));
        result.intertwine_residual = std::max(result.intertwine_residual, row.intertwine_residual);
        result.max_edge_population = std::max(result.max_edge_population, row.pop_edge_modes);
        result.log.push_back(row);
    }
    result.psi = x;
    if (result.max_edge_population > cfg.leak_threshold) {
        result.leak = true;
        result.warnings.push_back("truncation leak: edge-mode population " +
                                  format_number(result.max_edge_population));
    }
    result.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return result;
}

}  // namespace

std::string to_string(Integrator integrator) {
    return integrator == Integrator::rk4 ? "rk4" : "exp-midpoint";
}

std::string to_string(Metric metric) {
    return metric == Metric::vector_deviation ? "deviation" : "transition";
}

Integrator parse_integrator(const std::string& text) {
    if (text == "rk4") {
        return Integrator::rk4;
    }
    if (text == "exp-midpoint" || text == "exp_midpoint") {
        return Integrator::exp_midpoint;
    }
    throw std::invalid_argument("unknown integrator '" + text + "'");
}

Metric parse_metric(const std::string& text) {
    if (text == "deviation" || text == "vector_deviation") {
        return Metric::vector_deviation;
    }
    if (text == "transition" || text == "transition_probability") {
        return Metric::transition_probability;
    }
    throw std::invalid_argument("unknown metric '" + text + "'");
}

void PropagationConfig::validate() const {
    if (!(eps > 0.0) || !std::isfinite(eps)) {
        throw std::invalid_argument("PropagationConfig: eps must be > 0");
    }
    if (!(s_start < s_end)) {
        throw std::invalid_argument("PropagationConfig: need s_start < s_end");
    }
    if (!(c_step > 0.0 && c_step <= 1.0)) {
        throw std::invalid_argument("PropagationConfig: c_step must lie in (0, 1]");
    }
    if (fixed_h < 0.0) {
        throw std::invalid_argument("PropagationConfig: fixed_h must be >= 0");
    }
    for (double c : checkpoints) {
        if (c < s_start || c > s_end) {
            throw std::invalid_argument("PropagationConfig: checkpoint outside [s_start, s_end]");
        }
    }
}

double norm_estimate(const ModelSpec& spec, double s_start, double s_end) {
    const double w = std::max(std::abs(spec.chirp(s_start)), std::abs(spec.chirp(s_end)));
    const double rho = std::max(std::abs(spec.rho_at(s_start)), std::abs(spec.rho_at(s_end)));
    return spec.n_modes * w + std::abs(spec.omega0) + spec.Omega * (1.0 + rho);
}

double policy_step(const ModelSpec& spec, const PropagationConfig& cfg) {
    if (cfg.fixed_h > 0.0) {
        return cfg.fixed_h;
    }
    return cfg.c_step * cfg.eps / norm_estimate(spec, cfg.s_start, cfg.s_end);
}

EvolutionResult propagate_exact(const ModelSpec& spec, const PropagationConfig& cfg,
                                const Vector& psi0) {
    return run(spec, cfg, psi0, false, false);
}

EvolutionResult propagate_adiabatic(const ModelSpec& spec, const PropagationConfig& cfg,
                                    const Vector& psi0) {
    return run(spec, cfg, psi0, true, false);
}

EvolutionResult propagate_exact_backward(const ModelSpec& spec, const PropagationConfig& cfg,
                                         const Vector& psi_end) {
    return run(spec, cfg, psi_end, false, true);
}

AdiabaticError adiabatic_error(const ModelSpec& spec, const PropagationConfig& cfg) {
    const Vector psi0 = exact_eigenvector(spec, cfg.s_start, Branch::plus, 0).vector;
    AdiabaticError err;
    err.exact = propagate_exact(spec, cfg, psi0);
    err.adiabatic = propagate_adiabatic(spec, cfg, psi0);
    err.vector_deviation = (err.exact.psi - err.adiabatic.psi).norm();
    const Vector ref = exact_eigenvector(spec, cfg.s_end, Branch::plus, 0).vector;
    err.transition_prob = std::max(0.0, 1.0 - std::norm(ref.dot(err.exact.psi)));
    return err;
}

double full_operator_error(const ModelSpec& spec, const PropagationConfig& cfg) {
    cfg.validate();
    const double h = policy_step(spec, cfg);
    Matrix u = Matrix::Identity(spec.dim(), spec.dim());
    Matrix a = u;
    integrate_segment(Generator(spec, cfg.eps, false), cfg.integrator, cfg.s_start, cfg.s_end, h,
                      cfg.eps, u);
    integrate_segment(Generator(spec, cfg.eps, !cfg.suppress_L), cfg.integrator, cfg.s_start,
                      cfg.s_end, h, cfg.eps, a);
    Eigen::JacobiSVD<Matrix> svd(u - a);
    return svd.singularValues()(0);
}

CrossingJump w_jump_across_crossing(const ModelSpec& spec, double eps,
                                    const CrossingRecord& record, double alpha,
                                    double varsigma, const Vector& psi0, double c_step) {
    const double lo = std::min(record.u_k, record.u_km1);
    const double hi = std::max(record.u_k, record.u_km1);
    const double z = record.z_k;

    PropagationConfig cfg;
    cfg.eps = eps;
    cfg.s_start = lo;
    cfg.s_end = hi;
    cfg.c_step = c_step;
    const Vector start =
        psi0.size() == 0 ? exact_eigenvector(spec, lo, Branch::plus, 0).vector : psi0;
    const EvolutionResult u = propagate_exact(spec, cfg, start);
    const EvolutionResult a = propagate_adiabatic(spec, cfg, start);

    CrossingJump jump;
    jump.measured_jump = (u.psi - a.psi).norm();

    double d = optimal_offset(eps, record.tau_k, varsigma, alpha);
    const double room = 0.999 * std::min(z - lo, hi - z);
    if (d > room) {
        d = room;
        jump.offset_clipped = true;
    }
    jump.t = z - d;
    jump.s = z + d;
    const int m_max = std::max(spec.n_modes, std::abs(record.k) + 2);
    auto min_gap = [&](double from, double to) {
        double m = std::min(gap(spec, from, m_max).value, gap(spec, to, m_max).value);
        for (int i = 1; i < kGapGrid; ++i) {
            m = std::min(m, gap(spec, from + (to - from) * i / kGapGrid, m_max).value);
        }
        return m;
    };
    jump.g_t = min_gap(lo, jump.t);
    jump.g_s = min_gap(jump.s, hi);
    jump.lemma_bound = lemma21_bound(eps, 1.0, lo, jump.t, jump.s, hi, jump.g_t, jump.g_s);
    jump.fitted_C = jump.measured_jump / jump.lemma_bound;
    return jump;
}

void write_checkpoint_csv(std::ostream& out, const std::vector<CheckpointRow>& rows) {
    out << "s,norm,gap,intertwine_residual,pop_edge_modes\n";
    for (const auto& r : rows) {
        out << format_number(r.s) << ',' << format_number(r.norm) << ',' << format_number(r.gap)
            << ',' << format_number(r.intertwine_residual) << ','
            << format_number(r.pop_edge_modes) << '\n';
    }
}

}  // namespace adiacross
