#pragma once

// Error-bound pipeline for the adiabatic theorem with accumulating crossings.
// All functions are plain arithmetic on their inputs. Unspecified constants
// are taken as C = 1 and flagged in the reports.

#include "adiacross/spectral.hpp"

#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace adiacross {

class EpsTooLargeError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// C (eps|u0-t|/g_t^2 + eps|u1-s|/g_s^2 + eps/g_t + eps/g_s + |s-t|)
// Requires u0 <= t < s <= u1, g_t, g_s > 0, C > 0; throws std::domain_error.
double lemma21_bound(double eps, double C, double u0, double t, double s, double u1,
                     double g_t, double g_s);

// C eps^{1/(1+2 alpha)}
double startup_bound(double eps, double alpha, double C);

// max{Delta/G^2, Delta^alpha/G}; throws std::domain_error for G <= 0 or Delta < 0.
double tau(double Delta, double G, double alpha);

// varsigma (eps tau_k)^{1/(1+2 alpha)}
double optimal_offset(double eps, double tau_k, double varsigma, double alpha);

// Per-crossing data in the order k = 1, 2, ... as seen by the selector.
struct CrossingSequence {
    std::vector<double> distance;  // |u_k - a|, strictly decreasing
    std::vector<double> tau;       // tau(k) > 0
    std::vector<double> V_length;  // |V_k|, may be empty
    double alpha{1.0};

    static CrossingSequence from_ledger(const CrossingLedger& ledger);
};

struct KSelection {
    int K{0};
    // Criterion still held at the last available entry.
    bool saturated{false};
};

// Greatest K with |u_K - a| / sum_{k<=K} tau(k)^{1/(1+2a)} >= eps^{1/(1+2a)}.
// Throws EpsTooLargeError when K = 1 already fails.
KSelection k_of_eps(double eps, std::span<const double> u_minus_a,
                    std::span<const double> tau_seq, double alpha);

struct VkCheck {
    bool ok{true};
    int first_failure{-1};  // 1-based position in the sequence, -1 if none
    double max_varsigma{0.0};
};

// varsigma (eps tau(k))^{1/(1+2 alpha)} <= |V_k| / 2 for 1 <= k <= K.
VkCheck vk_condition(double varsigma, double eps, const CrossingSequence& seq, int K);
VkCheck vk_condition(double varsigma, double eps, const CrossingLedger& ledger, int K);

struct BoundReport {
    double eps{0.0};
    int K_minus{0};
    int K_plus{0};
    double bound_value{0.0};
    double varsigma{0.0};
    bool condition_ok{false};
    std::vector<std::string> notes;
};

// varsigma <= 0 selects half of the largest feasible value on both sides.
BoundReport theorem_bound(double eps, const CrossingSequence& minus,
                          const CrossingSequence& plus, double varsigma = 0.0);
BoundReport theorem_bound(double eps, const CrossingLedger& ledger_minus,
                          const CrossingLedger& ledger_plus, double varsigma = 0.0);

enum class ExponentCase { supercritical, critical, subcritical };

std::string to_string(ExponentCase c);

struct ExponentReport {
    double alpha{0.0};
    double beta{0.0};
    double gamma{0.0};
    double delta{0.0};
    double mu{0.0};
    ExponentCase exponent_case{ExponentCase::critical};
    double p{0.0};
    // Critical case: every exponent strictly below p holds.
    bool minus_nu{false};
    bool delta_ok{false};
    double delta_min{0.0};
    double delta_max{0.0};
};

ExponentReport exponent_p(double alpha, double beta, double gamma, double delta);

std::string to_key_value(const BoundReport& report);
std::string to_key_value(const ExponentReport& report);

// eps,K_minus,K_plus,bound_value,varsigma,condition_ok
std::string bound_csv_header();
std::string bound_csv_row(const BoundReport& report);

}  // namespace adiacross
