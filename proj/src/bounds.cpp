#include "adiacross/bounds.hpp"

#include "adiacross/io.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace adiacross {

double lemma21_bound(double eps, double C, double u0, double t, double s, double u1,
                     double g_t, double g_s) {
    if (!(u0 <= t && t < s && s <= u1)) {
        throw std::domain_error("lemma21_bound: need u0 <= t < s <= u1");
    }
    if (!(g_t > 0.0) || !(g_s > 0.0)) {
        throw std::domain_error("lemma21_bound: gaps must be positive");
    }
    if (!(C > 0.0)) {
        throw std::domain_error("lemma21_bound: C must be positive");
    }
    return C * (eps * std::abs(u0 - t) / (g_t * g_t) + eps * std::abs(u1 - s) / (g_s * g_s) +
                eps / g_t + eps / g_s + std::abs(s - t));
}

double startup_bound(double eps, double alpha, double C) {
    return C * std::pow(eps, 1.0 / (1.0 + 2.0 * alpha));
}

double tau(double Delta, double G, double alpha) {
    if (!(G > 0.0)) {
        throw std::domain_error("tau: G must be positive");
    }
    if (!(Delta >= 0.0)) {
        throw std::domain_error("tau: Delta must be non-negative");
    }
    return std::max(Delta / (G * G), std::pow(Delta, alpha) / G);
}

double optimal_offset(double eps, double tau_k, double varsigma, double alpha) {
    return varsigma * std::pow(eps * tau_k, 1.0 / (1.0 + 2.0 * alpha));
}

CrossingSequence CrossingSequence::from_ledger(const CrossingLedger& ledger) {
    CrossingSequence seq;
    seq.alpha = ledger.alpha;
    for (const auto& r : ledger.records) {
        seq.distance.push_back(std::abs(r.u_k - ledger.a));
        seq.tau.push_back(r.tau_k);
        seq.V_length.push_back(r.V_length());
    }
    return seq;
}

KSelection k_of_eps(double eps, std::span<const double> u_minus_a,
                    std::span<const double> tau_seq, double alpha) {
    if (u_minus_a.size() != tau_seq.size() || u_minus_a.empty()) {
        throw std::invalid_argument("k_of_eps: sequences must be aligned and non-empty");
    }
    const double power = 1.0 / (1.0 + 2.0 * alpha);
    const double target = std::pow(eps, power);
    double sum = 0.0;
    KSelection sel;
    for (std::size_t k = 0; k < u_minus_a.size(); ++k) {
        if (!(tau_seq[k] > 0.0)) {
            throw std::invalid_argument("k_of_eps: tau must be positive");
        }
        sum += std::pow(tau_seq[k], power);
        if (u_minus_a[k] / sum >= target) {
            sel.K = static_cast<int>(k) + 1;
        } else {
            break;
        }
    }
    if (sel.K == 0) {
        throw EpsTooLargeError("k_of_eps: eps=" + format_number(eps) +
                               " too large, K=1 already violates the selector inequality");
    }
    sel.saturated = sel.K == static_cast<int>(u_minus_a.size());
    return sel;
}

VkCheck vk_condition(double varsigma, double eps, const CrossingSequence& seq, int K) {
    if (K > static_cast<int>(seq.tau.size()) || K > static_cast<int>(seq.V_length.size())) {
        throw std::invalid_argument("vk_condition: K exceeds the sequence length");
    }
    const double power = 1.0 / (1.0 + 2.0 * seq.alpha);
    VkCheck check;
    check.max_varsigma = std::numeric_limits<double>::infinity();
    for (int k = 0; k < K; ++k) {
        const double reach = std::pow(eps * seq.tau[k], power);
        const double half = 0.5 * seq.V_length[k];
        if (varsigma * reach > half && check.ok) {
            check.ok = false;
            check.first_failure = k + 1;
        }
        check.max_varsigma = std::min(check.max_varsigma, half / reach);
    }
    return check;
}

VkCheck vk_condition(double varsigma, double eps, const CrossingLedger& ledger, int K) {
    return vk_condition(varsigma, eps, CrossingSequence::from_ledger(ledger), K);
}

BoundReport theorem_bound(double eps, const CrossingSequence& minus,
                          const CrossingSequence& plus, double varsigma) {
    BoundReport report;
    report.eps = eps;
    const KSelection km = k_of_eps(eps, minus.distance, minus.tau, minus.alpha);
    const KSelection kp = k_of_eps(eps, plus.distance, plus.tau, plus.alpha);
    report.K_minus = km.K;
    report.K_plus = kp.K;
    report.notes.push_back("bound_value uses the C=1 convention");
    if (km.saturated || kp.saturated) {
        report.notes.push_back("K saturated at the available sequence length");
    }
    const bool have_lengths = minus.V_length.size() >= static_cast<std::size_t>(km.K) &&
                              plus.V_length.size() >= static_cast<std::size_t>(kp.K);
    if (have_lengths) {
        if (varsigma <= 0.0) {
            const double feasible = std::min(vk_condition(0.0, eps, minus, km.K).max_varsigma,
                                             vk_condition(0.0, eps, plus, kp.K).max_varsigma);
            varsigma = 0.5 * feasible;
            report.notes.push_back("varsigma set to half the largest feasible value");
        }
        const VkCheck cm = vk_condition(varsigma, eps, minus, km.K);
        const VkCheck cp = vk_condition(varsigma, eps, plus, kp.K);
        report.condition_ok = cm.ok && cp.ok;
        if (!cm.ok) {
            report.notes.push_back("V_k condition fails on the minus side at k=" +
                                   std::to_string(cm.first_failure));
        }
        if (!cp.ok) {
            report.notes.push_back("V_k condition fails on the plus side at k=" +
                                   std::to_string(cp.first_failure));
        }
    } else {
        report.condition_ok = false;
        report.notes.push_back("no V_k lengths supplied; V_k condition not checked");
    }
    report.varsigma = varsigma;
    report.bound_value = std::max(minus.distance[km.K - 1], plus.distance[kp.K - 1]);
    return report;
}

BoundReport theorem_bound(double eps, const CrossingLedger& ledger_minus,
                          const CrossingLedger& ledger_plus, double varsigma) {
    return theorem_bound(eps, CrossingSequence::from_ledger(ledger_minus),
                         CrossingSequence::from_ledger(ledger_plus), varsigma);
}

std::string to_string(ExponentCase c) {
    switch (c) {
    case ExponentCase::supercritical:
        return "supercritical";
    case ExponentCase::critical:
        return "critical";
    case ExponentCase::subcritical:
        return "subcritical";
    }
    return "unknown";
}

ExponentReport exponent_p(double alpha, double beta, double gamma, double delta) {
    ExponentReport r;
    r.alpha = alpha;
    r.beta = beta;
    r.gamma = gamma;
    r.delta = delta;
    const double threshold = 1.0 + 2.0 * alpha;
    r.mu = std::min(beta + 1.0 + 2.0 * gamma, alpha * (beta + 1.0) + gamma);
    const double tol = 1e-12 * std::max(1.0, threshold);
    if (std::abs(r.mu - threshold) <= tol) {
        r.exponent_case = ExponentCase::critical;
        r.p = 1.0 / threshold;
        r.minus_nu = true;
    } else if (r.mu > threshold) {
        r.exponent_case = ExponentCase::supercritical;
        r.p = 1.0 / threshold;
    } else {
        r.exponent_case = ExponentCase::subcritical;
        r.p = beta / ((beta + 1.0) * threshold - r.mu);
    }
    r.delta_min = beta + 1.0;
    r.delta_max = beta + std::max(1.0, r.mu / threshold);
    r.delta_ok = r.delta_min <= delta && delta <= r.delta_max;
    return r;
}

std::string to_key_value(const BoundReport& report) {
    std::ostringstream out;
    out << "eps=" << format_number(report.eps) << '\n'
        << "K_minus=" << report.K_minus << '\n'
        << "K_plus=" << report.K_plus << '\n'
        << "bound_value=" << format_number(report.bound_value) << '\n'
        << "varsigma=" << format_number(report.varsigma) << '\n'
        << "condition_ok=" << (report.condition_ok ? "true" : "false") << '\n';
    for (const auto& note : report.notes) {
        out << "note=" << note << '\n';
    }
    return out.str();
}

std::string to_key_value(const ExponentReport& report) {
    std::ostringstream out;
    out << "alpha=" << format_number(report.alpha) << '\n'
        << "beta=" << format_number(report.beta) << '\n'
        << "gamma=" << format_number(report.gamma) << '\n'
        << "delta=" << format_number(report.delta) << '\n'
        << "mu=" << format_number(report.mu) << '\n'
        << "case=" << to_string(report.exponent_case) << '\n'
        << "p=" << format_number(report.p) << (report.minus_nu ? " (minus-nu)" : "") << '\n'
        << "minus_nu=" << (report.minus_nu ? "true" : "false") << '\n'
        << "delta_range=[" << format_number(report.delta_min) << ", "
        << format_number(report.delta_max) << "]\n"
        << "delta_ok=" << (report.delta_ok ? "true" : "false") << '\n';
    return out.str();
}

std::string bound_csv_header() {
    return "eps,K_minus,K_plus,bound_value,varsigma,condition_ok";
}

std::string bound_csv_row(const BoundReport& report) {
    return format_number(report.eps) + "," + std::to_string(report.K_minus) + "," +
           std::to_string(report.K_plus) + "," + format_number(report.bound_value) + "," +
           format_number(report.varsigma) + "," + (report.condition_ok ? "true" : "false");
}

}  // namespace adiacross
