#include "adiacross/model.hpp"

#include "adiacross/bessel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace adiacross {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

// Closed-form components (up, down) of psi_{branch,0}(theta) or of its
// s-derivative, sampled on the uniform theta grid.
struct ThetaSamples {
    std::vector<cplx> up;
    std::vector<cplx> down;
};

ThetaSamples sample_mode0(const ModelSpec& spec, double s, Branch branch, bool derivative) {
    const int grid = spec.grid_size();
    const MixingAngle angle = mixing_angle(spec, s);
    const double cz = std::cos(angle.z);
    const double sz = std::sin(angle.z);
    const double zp = angle.z_prime;
    const double rho = spec.rho_at(s);
    const double rho_rate = spec.kind == ModelKind::rwa ? 0.0 : spec.rho_rate();
    const cplx i{0.0, 1.0};

    ThetaSamples out;
    out.up.resize(grid);
    out.down.resize(grid);
    for (int t = 0; t < grid; ++t) {
        const double theta = kTwoPi * t / grid;
        const double st = std::sin(theta);
        // x = -varrho/2, y = theta - varrho/2 with varrho = rho sin(theta)
        const double x = -0.5 * rho * st;
        const double y = theta - 0.5 * rho * st;
        const double dx = -0.5 * rho_rate * st;
        const double dy = dx;
        const cplx ex = std::polar(1.0, x);
        const cplx ey = std::polar(1.0, y);
        if (branch == Branch::plus) {
            if (!derivative) {
                out.up[t] = ex * cz;
                out.down[t] = ey * sz;
            } else {
                out.up[t] = ex * (i * dx * cz - sz * zp);
                out.down[t] = ey * (i * dy * sz + cz * zp);
            }
        } else {
            if (!derivative) {
                out.up[t] = -std::conj(ey) * sz;
                out.down[t] = std::conj(ex) * cz;
            } else {
                out.up[t] = -std::conj(ey) * (-i * dy * sz + cz * zp);
                out.down[t] = std::conj(ex) * (-i * dx * cz - sz * zp);
            }
        }
    }
    return out;
}

// Fourier coefficients c_j = (1/M) sum_t f(theta_t) e^{-i j theta_t} laid into
// the truncated basis with the mode shift applied (basis mode m holds c_{m-shift}).
Vector to_fourier(const ModelSpec& spec, const ThetaSamples& samples, int shift) {
    const int grid = spec.grid_size();
    const int n = spec.n_modes;
    std::vector<cplx> roots(grid);
    for (int t = 0; t < grid; ++t) {
        roots[t] = std::polar(1.0, -kTwoPi * t / grid);
    }
    Vector out = Vector::Zero(spec.dim());
    for (int m = -n; m <= n; ++m) {
        const int j = m - shift;
        if (2 * std::abs(j) >= grid) {
            continue;
        }
        cplx acc_up{0.0, 0.0};
        cplx acc_down{0.0, 0.0};
        const int step = ((j % grid) + grid) % grid;
        int phase = 0;
        for (int t = 0; t < grid; ++t) {
            acc_up += samples.up[t] * roots[phase];
            acc_down += samples.down[t] * roots[phase];
            phase += step;
            if (phase >= grid) {
                phase -= grid;
            }
        }
        out(spec.index(0, m)) = acc_up / static_cast<double>(grid);
        out(spec.index(1, m)) = acc_down / static_cast<double>(grid);
    }
    return out;
}

// log of the bound (x/2)^n / n! on |J_n(x)|
double log_bessel_bound(int n, double x) {
    if (x == 0.0) {
        return -std::numeric_limits<double>::infinity();
    }
    return n * std::log(0.5 * x) - std::lgamma(n + 1.0);
}

}  // namespace

std::string to_string(ModelKind kind) {
    return kind == ModelKind::rwa ? "rwa" : "modified";
}

ModelKind parse_model_kind(const std::string& text) {
    if (text == "rwa") {
        return ModelKind::rwa;
    }
    if (text == "modified") {
        return ModelKind::modified;
    }
    throw std::invalid_argument("unknown preset '" + text + "' (expected rwa or modified)");
}

ModelSpec ModelSpec::rwa(double omega0, double Omega, int n_modes) {
    ModelSpec spec;
    spec.omega0 = omega0;
    spec.Omega = Omega;
    spec.rho = {0.0, 0.0};
    spec.kind = ModelKind::rwa;
    spec.n_modes = n_modes;
    return spec;
}

ModelSpec ModelSpec::modified(double omega0, double Omega, double rho0, int n_modes) {
    ModelSpec spec;
    spec.omega0 = omega0;
    spec.Omega = Omega;
    spec.rho = {rho0, 0.0};
    spec.kind = ModelKind::modified;
    spec.n_modes = n_modes;
    return spec;
}

int ModelSpec::grid_size() const {
    return theta_grid > 0 ? theta_grid : std::max(4 * n_modes + 4, 256);
}

double ModelSpec::rho_at(double s) const {
    return kind == ModelKind::rwa ? 0.0 : rho(s);
}

double ModelSpec::rho_rate() const {
    return kind == ModelKind::rwa ? 0.0 : rho.derivative();
}

void ModelSpec::validate() const {
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(omega0) || !finite(Omega) || !finite(rho.offset) || !finite(rho.slope) ||
        !finite(chirp.offset) || !finite(chirp.slope)) {
        throw std::invalid_argument("ModelSpec: parameters must be finite");
    }
    if (!(Omega > 0.0)) {
        throw std::invalid_argument("ModelSpec: Omega must be > 0");
    }
    if (n_modes < 0 || n_modes > 64) {
        throw std::invalid_argument("ModelSpec: n_modes must lie in [0, 64]");
    }
    if (theta_grid != 0 && theta_grid < 4 * n_modes + 4) {
        throw std::invalid_argument("ModelSpec: theta_grid must be >= 4N+4");
    }
    if (kind == ModelKind::modified) {
        // Coefficients of exp(i rho sin(theta)/2) that alias into the window.
        const int distance = grid_size() / 2 - 2 * n_modes;
        if (distance <= 0 ||
            log_bessel_bound(distance, std::abs(rho.offset)) > std::log(1e-12)) {
            throw std::invalid_argument("ModelSpec: theta_grid too small for rho");
        }
    }
}

double eta(const ModelSpec& spec, double varpi) {
    return std::hypot(varpi - spec.omega0, spec.Omega);
}

FloquetOperator assemble_K(const ModelSpec& spec, double s) {
    if (!std::isfinite(s)) {
        throw std::invalid_argument("assemble_K: s must be finite");
    }
    spec.validate();
    const int n = spec.n_modes;
    const double w = spec.chirp(s);
    const double h = eta(spec, w);
    const double c = spec.kind == ModelKind::modified ? w * spec.rho_at(s) / (2.0 * h) : 0.0;

    Matrix upper = Matrix::Zero(spec.dim(), spec.dim());
    for (int m = -n; m <= n; ++m) {
        const int up = spec.index(0, m);
        const int down = spec.index(1, m);
        if (m + 1 <= n) {
            upper(up, spec.index(1, m + 1)) += 0.5 * spec.Omega;
            upper(up, spec.index(0, m + 1)) += 0.5 * c * (spec.omega0 - w);
            upper(down, spec.index(1, m + 1)) += 0.5 * c * (w - spec.omega0);
        }
        if (c != 0.0) {
            // Omega cos(theta) e^{-i theta} couples up m to down m and down m+2
            upper(up, down) += 0.5 * c * spec.Omega;
            if (m + 2 <= n) {
                upper(up, spec.index(1, m + 2)) += 0.5 * c * spec.Omega;
            }
        }
    }
    FloquetOperator op;
    op.s = s;
    op.entries = upper + upper.adjoint();
    for (int m = -n; m <= n; ++m) {
        op.entries(spec.index(0, m), spec.index(0, m)) = m * w + 0.5 * spec.omega0;
        op.entries(spec.index(1, m), spec.index(1, m)) = m * w - 0.5 * spec.omega0;
    }
    return op;
}

MixingAngle mixing_angle(const ModelSpec& spec, double s) {
    const double w = spec.chirp(s);
    const double h = eta(spec, w);
    MixingAngle angle;
    angle.cos2z = -(w - spec.omega0) / h;
    angle.sin2z = spec.Omega / h;
    angle.z = 0.5 * std::atan2(spec.Omega, spec.omega0 - w);
    angle.z_prime = spec.Omega / (2.0 * h * h) * spec.chirp.derivative();
    return angle;
}

double eigenvalue(const ModelSpec& spec, double s, Branch branch, int mode) {
    const double w = spec.chirp(s);
    const double half = 0.5 * (eta(spec, w) + w);
    return mode * w + (branch == Branch::plus ? half : -half);
}

EigenPair exact_eigenvector(const ModelSpec& spec, double s, Branch branch, int mode) {
    spec.validate();
    EigenPair pair;
    pair.branch = branch;
    pair.mode = mode;
    pair.value = eigenvalue(spec, s, branch, mode);
    pair.vector = to_fourier(spec, sample_mode0(spec, s, branch, false), mode);
    const double kept = pair.vector.squaredNorm();
    // Each closed-form component pair has unit pointwise modulus, so Parseval
    // gives total mass 1.
    pair.dropped_mass = std::max(0.0, 1.0 - kept);
    if (kept > 0.0) {
        pair.vector /= std::sqrt(kept);
    }
    return pair;
}

Vector exact_eigenvector_derivative(const ModelSpec& spec, double s, Branch branch, int mode) {
    spec.validate();
    const Vector raw = to_fourier(spec, sample_mode0(spec, s, branch, false), mode);
    const Vector draw = to_fourier(spec, sample_mode0(spec, s, branch, true), mode);
    const double norm = raw.norm();
    if (norm == 0.0) {
        return Vector::Zero(spec.dim());
    }
    const double dnorm = raw.dot(draw).real() / norm;
    return draw / norm - raw * (dnorm / (norm * norm));
}

cplx coupling(const ModelSpec& spec, double s, int k) {
    const double zp = mixing_angle(spec, s).z_prime;
    if (spec.kind == ModelKind::rwa) {
        return k == 0 ? cplx{-zp, 0.0} : cplx{0.0, 0.0};
    }
    // -(z'/2pi) int exp(i k theta + i rho sin theta) = -z' J_{-k}(rho)
    const int order = std::abs(k);
    double j = bessel_j(order, spec.rho_at(s));
    if (k > 0 && k % 2 == 1) {
        j = -j;
    }
    return {-zp * j, 0.0};
}

}  // namespace adiacross
