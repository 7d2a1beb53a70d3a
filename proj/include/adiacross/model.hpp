#pragma once

// Two-level Floquet model family with a chirped effective frequency.
//
// Basis convention for every vector and matrix in this library: index
//   branch * (2N+1) + (m + N),  branch 0 = up, 1 = down,  m = -N..N
// where m is the Fourier mode of the phase variable theta.

#include <Eigen/Dense>

#include <complex>
#include <string>

namespace adiacross {

using cplx = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;

enum class ModelKind { rwa, modified };
enum class Branch { plus, minus };

std::string to_string(ModelKind kind);
ModelKind parse_model_kind(const std::string& text);

// Affine profile f(s) = offset + slope * s with exact derivative.
struct AffineProfile {
    double offset{0.0};
    double slope{0.0};

    double operator()(double s) const { return offset + slope * s; }
    double derivative() const { return slope; }
};

struct ModelSpec {
    double omega0{1.0};
    double Omega{1.0};
    // Phase-modulation amplitude rho(s); ignored by the rwa preset.
    AffineProfile rho{1.0, 0.0};
    // Effective frequency varpi(s); identity by default.
    AffineProfile chirp{0.0, 1.0};
    ModelKind kind{ModelKind::rwa};
    int n_modes{16};
    // 0 selects max(4N+4, 256).
    int theta_grid{0};

    static ModelSpec rwa(double omega0, double Omega, int n_modes);
    static ModelSpec modified(double omega0, double Omega, double rho0, int n_modes);

    int dim() const { return 2 * (2 * n_modes + 1); }
    int modes() const { return 2 * n_modes + 1; }
    int grid_size() const;
    int index(int branch, int mode) const { return branch * modes() + mode + n_modes; }

    // rho(s) with the rwa preset forced to zero.
    double rho_at(double s) const;
    double rho_rate() const;
    bool chirp_is_identity() const { return chirp.offset == 0.0 && chirp.slope == 1.0; }

    // Throws std::invalid_argument when an invariant is violated.
    void validate() const;
};

// Frozen-time Floquet operator K(s), Hermitian.
struct FloquetOperator {
    double s{0.0};
    Matrix entries;

    int dim() const { return static_cast<int>(entries.rows()); }
};

struct EigenPair {
    Branch branch{Branch::plus};
    int mode{0};
    double value{0.0};
    Vector vector;
    // Squared coefficient mass that fell outside the truncation window.
    double dropped_mass{0.0};

    bool truncation_warning() const { return dropped_mass > 1e-10; }
};

struct MixingAngle {
    double cos2z{0.0};
    double sin2z{0.0};
    double z{0.0};
    double z_prime{0.0};
};

// eta(varpi) = sqrt((varpi - omega0)^2 + Omega^2)
double eta(const ModelSpec& spec, double varpi);

FloquetOperator assemble_K(const ModelSpec& spec, double s);

MixingAngle mixing_angle(const ModelSpec& spec, double s);

// lambda_{+-,k}(s) = k varpi +- (eta + varpi) / 2
double eigenvalue(const ModelSpec& spec, double s, Branch branch, int mode);

// Closed-form eigenvector sampled on the theta grid and transformed to Fourier
// coefficients. Normalized after truncation.
EigenPair exact_eigenvector(const ModelSpec& spec, double s, Branch branch, int mode);

// d/ds of the closed-form eigenvector in the same gauge as exact_eigenvector.
Vector exact_eigenvector_derivative(const ModelSpec& spec, double s, Branch branch, int mode);

// <psi_{+,0}(s) | d/ds psi_{-,k+1}(s)> from the closed form of each preset.
cplx coupling(const ModelSpec& spec, double s, int k);

}  // namespace adiacross
