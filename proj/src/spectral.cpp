#include "adiacross/spectral.hpp"

#include "adiacross/bounds.hpp"
#include "adiacross/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

namespace adiacross {

namespace {

constexpr double kBracketWidth = 1e-10;
constexpr double kSearchLimit = 1e8;
constexpr int kH1Grid = 200;

void require_identity_chirp(const ModelSpec& spec, const char* what) {
    if (!spec.chirp_is_identity()) {
        throw std::invalid_argument(std::string(what) + ": crossing analysis needs varpi(s) = s");
    }
}

double to_s(Side side, double t) {
    return side == Side::right ? t : -t;
}

// Root of an increasing function on [lo, hi] with f(lo) < 0 < f(hi).
template <typename F>
double bisect_increasing(F f, double lo, double hi) {
    while (hi - lo > kBracketWidth * std::max(1.0, hi)) {
        const double mid = 0.5 * (lo + hi);
        if (f(mid) < 0.0) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

// Same, bisecting until the bracket cannot shrink further.
template <typename F>
double bisect_to_roundoff(F f, double lo, double hi) {
    for (;;) {
        const double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) {
            return mid;
        }
        (f(mid) < 0.0 ? lo : hi) = mid;
    }
}

int ledger_m_max(const ModelSpec& spec, int k) {
    return std::max(spec.n_modes, std::abs(k) + 2);
}

}  // namespace

std::string to_string(Side side) {
    return side == Side::right ? "right" : "left";
}

GapValue gap(const ModelSpec& spec, double s, int m_max) {
    const double lambda0 = eigenvalue(spec, s, Branch::plus, 0);
    GapValue best;
    best.value = std::numeric_limits<double>::infinity();
    for (int m = -m_max; m <= m_max; ++m) {
        for (Branch b : {Branch::plus, Branch::minus}) {
            if (b == Branch::plus && m == 0) {
                continue;
            }
            const double d = std::abs(lambda0 - eigenvalue(spec, s, b, m));
            if (d < best.value) {
                best.value = d;
                best.branch = b;
                best.mode = m;
            }
        }
    }
    best.edge_minimizer = std::abs(best.mode) == m_max;
    return best;
}

double aleph(const ModelSpec& spec, Side side, double t) {
    return side == Side::right ? eta(spec, t) + t : eta(spec, -t) - t;
}

double aleph_prime(const ModelSpec& spec, Side side, double t) {
    if (side == Side::right) {
        return (t - spec.omega0) / eta(spec, t) + 1.0;
    }
    return (t + spec.omega0) / eta(spec, -t) - 1.0;
}

double solve_aleph_line(const ModelSpec& spec, Side side, double slope) {
    auto f = [&](double t) { return aleph(spec, side, t) - slope * t; };
    if (!(f(0.0) > 0.0)) {
        throw NoRootError("aleph(0) must be positive");
    }
    double hi = 1.0;
    while (f(hi) >= 0.0) {
        hi *= 2.0;
        if (hi > kSearchLimit) {
            throw NoRootError("aleph(t) - " + format_number(slope) +
                              " t does not change sign on (0, 1e8]; slope below the "
                              "monotonicity threshold");
        }
    }
    double lo = 0.0;
    auto g = [&](double t) { return -f(t); };  // increasing
    double t = bisect_increasing(g, lo, hi);
    for (int i = 0; i < 3; ++i) {
        const double d = aleph_prime(spec, side, t) - slope;
        if (d == 0.0) {
            break;
        }
        const double next = t - f(t) / d;
        if (!(next > 0.0) || std::abs(next - t) > 1e-8 * std::max(1.0, t)) {
            break;
        }
        t = next;
    }
    return t;
}

double find_crossing(const ModelSpec& spec, int k, Side side) {
    require_identity_chirp(spec, "find_crossing");
    return to_s(side, solve_aleph_line(spec, side, k));
}

std::vector<double> find_crossings(const ModelSpec& spec, int k_min, int k_max, Side side) {
    std::vector<double> out;
    for (int k = k_min; k <= k_max; ++k) {
        out.push_back(find_crossing(spec, k, side));
    }
    return out;
}

double partition_u(const ModelSpec& spec, int k, Side side) {
    require_identity_chirp(spec, "partition_u");
    return to_s(side, solve_aleph_line(spec, side, k + 0.5));
}

double u_asymptotic(const ModelSpec& spec, int k, Side side) {
    const double a0 = aleph(spec, side, 0.0);
    const double a1 = aleph_prime(spec, side, 0.0);
    return to_s(side, a0 / (k + 0.5 - a1));
}

LocalPower estimate_local_power(const std::function<double(double)>& gapfn,
                                const CrossingRecord& record, int samples_per_side) {
    if (samples_per_side < 8) {
        throw std::invalid_argument("estimate_local_power: need >= 8 samples per side");
    }
    const double z = record.z_k;
    const double widths[2] = {z - record.V_lo, record.V_hi - z};
    if (!(widths[0] > 0.0) || !(widths[1] > 0.0)) {
        throw std::invalid_argument("estimate_local_power: z_k must lie inside V_k");
    }
    LocalPower fit;
    for (int side = 0; side < 2; ++side) {
        const double w = widths[side];
        const double d_lo = std::max(1e-7, 1e-6 * w);
        const double d_hi = 0.98 * w;
        for (int i = 0; i < samples_per_side; ++i) {
            const double frac = static_cast<double>(i) / (samples_per_side - 1);
            const double d = d_lo * std::pow(d_hi / d_lo, frac);
            const double s = side == 0 ? z - d : z + d;
            const double g = gapfn(s);
            if (!(g > 0.0)) {
                throw std::runtime_error("estimate_local_power: gap vanishes at s=" +
                                         format_number(s) + " away from the crossing");
            }
            fit.offsets.push_back(d);
            fit.gaps.push_back(g);
        }
    }
    const std::size_t n = fit.offsets.size();
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += std::log(fit.offsets[i]);
        my += std::log(fit.gaps[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double dx = std::log(fit.offsets[i]) - mx;
        sxx += dx * dx;
        sxy += dx * (std::log(fit.gaps[i]) - my);
    }
    fit.alpha_hat = sxy / sxx;
    fit.G_hat = std::exp(my - fit.alpha_hat * mx);
    for (std::size_t i = 0; i < n; ++i) {
        fit.G_hat = std::min(fit.G_hat, fit.gaps[i] / std::pow(fit.offsets[i], fit.alpha_hat));
    }
    return fit;
}

double h1_margin(const ModelSpec& spec, const CrossingRecord& record) {
    const int m_max = ledger_m_max(spec, record.k);
    auto g = [&](double s) { return gap(spec, s, m_max).value; };
    double sup_v = 0.0;
    for (int i = 0; i < kH1Grid; ++i) {
        const double s = record.V_lo + (record.V_hi - record.V_lo) * i / (kH1Grid - 1);
        sup_v = std::max(sup_v, g(s));
    }
    // Complement of V_k in [u_k, u_{k-1}]: the near endpoint u_k plus the far
    // segment between V_k and u_{k-1}.
    const bool right = record.u_k < record.u_km1;
    const double far_lo = right ? record.V_hi : record.u_km1;
    const double far_hi = right ? record.u_km1 : record.V_lo;
    double inf_i = g(record.u_k);
    for (int i = 0; i < kH1Grid; ++i) {
        const double s = far_lo + (far_hi - far_lo) * i / (kH1Grid - 1);
        inf_i = std::min(inf_i, g(s));
    }
    return sup_v - inf_i;
}

bool h2_holds(const ModelSpec& spec, const CrossingRecord& record, double alpha) {
    const int m_max = ledger_m_max(spec, record.k);
    const LocalPower fit = estimate_local_power(
        [&](double s) { return gap(spec, s, m_max).value; }, record);
    for (std::size_t i = 0; i < fit.offsets.size(); ++i) {
        if (record.G_k * std::pow(fit.offsets[i], alpha) > fit.gaps[i] * (1.0 + 1e-9)) {
            return false;
        }
    }
    return true;
}

CrossingLedger build_ledger(const ModelSpec& spec, int k_min, int k_max, Side side) {
    require_identity_chirp(spec, "build_ledger");
    if (k_min < 2 || k_max < k_min) {
        throw std::invalid_argument("build_ledger: need 2 <= k_min <= k_max");
    }
    CrossingLedger ledger;
    ledger.side = side;
    ledger.a = 0.0;
    for (int k = k_min; k <= k_max; ++k) {
        // Distances t = |s| from the accumulation point.
        const double z = solve_aleph_line(spec, side, k);
        const double u = solve_aleph_line(spec, side, k + 0.5);
        const double u_prev = solve_aleph_line(spec, side, k - 0.5);
        // Far end of V_k: k t - aleph(t) = u_k / 2 on (z_k, u_{k-1}).
        auto excess = [&](double t) { return k * t - aleph(spec, side, t) - 0.5 * u; };
        double e = u_prev;
        if (excess(u_prev) > 0.0) {
            e = bisect_to_roundoff(excess, z, u_prev);
        }

        CrossingRecord r;
        r.k = k;
        r.z_k = to_s(side, z);
        r.u_k = to_s(side, u);
        r.u_km1 = to_s(side, u_prev);
        r.V_lo = std::min(to_s(side, u), to_s(side, e));
        r.V_hi = std::max(to_s(side, u), to_s(side, e));
        r.Delta_k = std::max(std::abs(r.u_k - r.z_k), std::abs(r.u_km1 - r.z_k));
        ledger.records.push_back(r);
    }

    double alpha = 0.0;
    for (auto& r : ledger.records) {
        const int m_max = ledger_m_max(spec, r.k);
        const LocalPower fit = estimate_local_power(
            [&](double s) { return gap(spec, s, m_max).value; }, r);
        r.alpha_hat = fit.alpha_hat;
        r.G_k = fit.G_hat;
        alpha = std::max(alpha, fit.alpha_hat);
        r.h1_ok = h1_margin(spec, r) <= 1e-10;
        if (!r.h1_ok) {
            ledger.h1_violations.push_back(r.k);
        }
    }
    ledger.alpha = alpha;
    for (auto& r : ledger.records) {
        r.tau_k = tau(r.Delta_k, r.G_k, ledger.alpha);
    }
    return ledger;
}

void write_ledger_csv(std::ostream& out, const CrossingLedger& ledger) {
    out << "k,z_k,u_k,u_km1,V_lo,V_hi,Delta_k,G_k,alpha_hat,tau_k\n";
    for (const auto& r : ledger.records) {
        out << r.k << ',' << format_number(r.z_k) << ',' << format_number(r.u_k) << ','
            << format_number(r.u_km1) << ',' << format_number(r.V_lo) << ','
            << format_number(r.V_hi) << ',' << format_number(r.Delta_k) << ','
            << format_number(r.G_k) << ',' << format_number(r.alpha_hat) << ','
            << format_number(r.tau_k) << '\n';
    }
}

ProjectorData projector_and_L(const ModelSpec& spec, double s) {
    ProjectorData d;
    d.psi = exact_eigenvector(spec, s, Branch::plus, 0).vector;
    d.dpsi = exact_eigenvector_derivative(spec, s, Branch::plus, 0);
    d.P = d.psi * d.psi.adjoint();
    d.Pprime = d.dpsi * d.psi.adjoint() + d.psi * d.dpsi.adjoint();
    const cplx i{0.0, 1.0};
    // [P', P] expanded into outer products, O(dim^2).
    const cplx pp = d.psi.dot(d.psi);
    const cplx dp = d.dpsi.dot(d.psi);
    const cplx pd = d.psi.dot(d.dpsi);
    d.L = i * (pp * (d.dpsi * d.psi.adjoint() - d.psi * d.dpsi.adjoint()) +
               (dp - pd) * d.P);
    return d;
}

Matrix reduced_commutator_RL(const ModelSpec& spec, double s, int m_max) {
    const double g = gap(spec, s, m_max).value;
    if (g < 1e-6) {
        throw NearCrossingError("reduced_commutator_RL: gap " + format_number(g) + " at s=" +
                                format_number(s) + " below 1e-6, contour degenerates");
    }
    const Matrix K = assemble_K(spec, s).entries;
    const Matrix L = projector_and_L(spec, s).L;
    Eigen::SelfAdjointEigenSolver<Matrix> solver(K);
    if (solver.info() != Eigen::Success) {
        throw std::runtime_error("reduced_commutator_RL: eigen decomposition failed");
    }
    const Eigen::VectorXd& e = solver.eigenvalues();
    const Matrix& V = solver.eigenvectors();
    const double lambda0 = eigenvalue(spec, s, Branch::plus, 0);
    const double radius = 0.5 * g;

    std::vector<int> inside;
    std::vector<int> outside;
    for (int j = 0; j < e.size(); ++j) {
        (std::abs(e(j) - lambda0) < radius ? inside : outside).push_back(j);
    }
    // In the eigenbasis, (1/2 pi i) oint dl / ((e_i - l)(e_j - l)) is
    // -1/(e_j - e_i) for e_i inside and e_j outside the circle, zero otherwise.
    const Matrix Lt = V.adjoint() * L * V;
    Matrix Rt = Matrix::Zero(K.rows(), K.cols());
    for (int i : inside) {
        for (int j : outside) {
            const double w = -1.0 / (e(j) - e(i));
            Rt(i, j) = w * Lt(i, j);
            Rt(j, i) = w * Lt(j, i);
        }
    }
    return V * Rt * V.adjoint();
}

}  // namespace adiacross
