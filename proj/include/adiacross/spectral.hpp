#pragma once

// Crossing and gap structure of the followed level lambda_{+,0}(s).
//
// Index convention: crossing k is a root of aleph(s) = k s with
// aleph(s) = eta(s) + s, i.e. lambda_{+,0} meets lambda_{-,k}. The form
// eta(s) = k' s used elsewhere corresponds to k' = k - 1.
//
// The accumulation point is a = 0 (varpi = 0). The left side (s < 0) is
// handled by the mirror t = -s, where aleph_left(t) = eta(-t) - t and the
// crossing condition becomes aleph_left(t) = k t. Crossing routines require
// the identity chirp varpi(s) = s.

#include "adiacross/model.hpp"

#include <functional>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <vector>

namespace adiacross {

enum class Side { left, right };

std::string to_string(Side side);

class NoRootError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class NearCrossingError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct GapValue {
    double value{0.0};
    Branch branch{Branch::minus};
    int mode{0};
    // The minimizing level sits on the truncation edge |m| = m_max.
    bool edge_minimizer{false};
};

// g(s) = min over (b, m) != (+, 0), |m| <= m_max of |lambda_{+,0} - lambda_{b,m}|.
GapValue gap(const ModelSpec& spec, double s, int m_max);

// aleph on the given side as a function of the distance t = |s| >= 0.
double aleph(const ModelSpec& spec, Side side, double t);
double aleph_prime(const ModelSpec& spec, Side side, double t);

// Unique positive root (in t) of aleph(t) - slope * t. Throws NoRootError when
// the sign does not change on the search interval.
double solve_aleph_line(const ModelSpec& spec, Side side, double slope);

// Crossing time z_k in s (negative on the left side).
double find_crossing(const ModelSpec& spec, int k, Side side = Side::right);
std::vector<double> find_crossings(const ModelSpec& spec, int k_min, int k_max,
                                   Side side = Side::right);

// Partition point u_k: aleph(u) = (k + 1/2) u, returned in s.
double partition_u(const ModelSpec& spec, int k, Side side = Side::right);

// aleph(0) / (k + 1/2 - aleph'(0)), returned in s.
double u_asymptotic(const ModelSpec& spec, int k, Side side = Side::right);

struct CrossingRecord {
    int k{0};
    double z_k{0.0};
    double u_k{0.0};
    double u_km1{0.0};
    double V_lo{0.0};
    double V_hi{0.0};
    double Delta_k{0.0};
    double G_k{0.0};
    double alpha_hat{0.0};
    double tau_k{0.0};
    bool h1_ok{true};

    double V_length() const { return V_hi - V_lo; }
};

struct CrossingLedger {
    Side side{Side::right};
    double a{0.0};
    std::vector<CrossingRecord> records;
    double alpha{1.0};
    std::vector<int> h1_violations;

    bool h1_ok() const { return h1_violations.empty(); }
};

struct LocalPower {
    double alpha_hat{0.0};
    double G_hat{0.0};
    std::vector<double> offsets;  // |s - z| at each sample
    std::vector<double> gaps;     // g(s) at each sample
};

// Least-squares fit of log g against log|s - z| on log-spaced samples inside
// (V_lo, V_hi), then G_hat lowered until G_hat |s-z|^alpha_hat <= g(s) at
// every sample. Throws std::runtime_error if g vanishes at a sample.
LocalPower estimate_local_power(const std::function<double(double)>& gapfn,
                                const CrossingRecord& record, int samples_per_side = 16);

CrossingLedger build_ledger(const ModelSpec& spec, int k_min, int k_max, Side side = Side::right);

// max over a 200-point grid of g on V_k minus min over a 200-point grid of g
// on [u_k, u_{k-1}] \ V_k. H1 holds when this is <= 1e-10.
double h1_margin(const ModelSpec& spec, const CrossingRecord& record);

// G_k |s - z_k|^alpha <= g(s) (1 + 1e-9) at the fit samples.
bool h2_holds(const ModelSpec& spec, const CrossingRecord& record, double alpha);

// CSV with columns k,z_k,u_k,u_km1,V_lo,V_hi,Delta_k,G_k,alpha_hat,tau_k.
void write_ledger_csv(std::ostream& out, const CrossingLedger& ledger);

// Maps [lo, hi] onto [0, 1].
struct AffineMap {
    double lo{0.0};
    double hi{1.0};

    double forward(double s) const { return (s - lo) / (hi - lo); }
    double inverse(double x) const { return lo + x * (hi - lo); }
};

struct ProjectorData {
    Vector psi;
    Vector dpsi;
    Matrix P;
    Matrix Pprime;
    Matrix L;
};

// P = |psi><psi| for psi = psi_{+,0}(s), P' from the analytic derivative,
// L = i [P', P].
ProjectorData projector_and_L(const ModelSpec& spec, double s);

// Contour integral (1/2 pi i) oint R L R over a circle of radius g/2 about
// lambda(s). With S = Q (K - lambda)^{-1} Q the residue at lambda gives
// R_L = -(P L S + S L P). Throws NearCrossingError when g(s) < 1e-6.
Matrix reduced_commutator_RL(const ModelSpec& spec, double s, int m_max);

}  // namespace adiacross
