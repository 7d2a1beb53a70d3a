#include "adiacross/spectral.hpp"

#include "doctest.h"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

using namespace adiacross;

namespace {

// Positive root of a t^2 + b t + c = 0 (linear when a = 0).
double positive_root(double a, double b, double c) {
    if (a == 0.0) {
        return -c / b;
    }
    return (-b + std::sqrt(b * b - 4 * a * c)) / (2 * a);
}

// With omega0 = Omega = 1 the crossing conditions are quadratics in t = |s|:
// right: (t - 1)^2 + 1 = (slope - 1)^2 t^2, left: (t + 1)^2 + 1 = (slope + 1)^2 t^2.
double line_root_oracle(Side side, double slope) {
    if (side == Side::right) {
        return positive_root((slope - 1) * (slope - 1) - 1, 2.0, -2.0);
    }
    return positive_root((slope + 1) * (slope + 1) - 1, -2.0, -2.0);
}

const ModelSpec kModified = ModelSpec::modified(1.0, 1.0, 1.0, 16);

}  // namespace

TEST_CASE("crossing times and partition points against closed-form roots") {
    CHECK(std::abs(find_crossing(kModified, 2) - 1.0) <= 1e-10);
    CHECK(std::abs(find_crossing(kModified, 3) - (-1.0 + std::sqrt(7.0)) / 3.0) <= 1e-10);
    CHECK(std::abs(partition_u(kModified, 3) - (-2.0 + std::sqrt(46.0)) / 10.5) <= 1e-10);
    for (Side side : {Side::left, Side::right}) {
        const double sign = side == Side::right ? 1.0 : -1.0;
        for (int k = 2; k <= 40; ++k) {
            CHECK(std::abs(find_crossing(kModified, k, side) - sign * line_root_oracle(side, k)) <=
                  1e-12);
            CHECK(std::abs(partition_u(kModified, k, side) -
                           sign * line_root_oracle(side, k + 0.5)) <= 1e-12);
        }
    }
    const auto zs = find_crossings(kModified, 4, 9);
    REQUIRE(zs.size() == 6);
    for (std::size_t i = 1; i < zs.size(); ++i) {
        CHECK(zs[i] < zs[i - 1]);
    }
}

TEST_CASE("crossings are level degeneracies") {
    for (int k = 2; k <= 12; ++k) {
        const double z = find_crossing(kModified, k);
        CHECK(std::abs(eigenvalue(kModified, z, Branch::plus, 0) -
                       eigenvalue(kModified, z, Branch::minus, k)) <= 1e-12);
        CHECK(gap(kModified, z, 16).value <= 1e-12);
    }
}

TEST_CASE("partition points approach the asymptotic form at third order") {
    double lo = 1e300;
    double hi = 0.0;
    for (int k = 4; k <= 40; ++k) {
        const double d = std::pow(k, 3) * std::abs(partition_u(kModified, k) - u_asymptotic(kModified, k));
        lo = std::min(lo, d);
        hi = std::max(hi, d);
    }
    CHECK(hi < 10.0);
    CHECK(hi / lo < 3.0);
}

TEST_CASE("aleph derivative and missing roots") {
    for (Side side : {Side::left, Side::right}) {
        for (double t : {0.01, 0.2, 0.7}) {
            const double h = 1e-6;
            const double fd = (aleph(kModified, side, t + h) - aleph(kModified, side, t - h)) / (2 * h);
            CHECK(aleph_prime(kModified, side, t) == doctest::Approx(fd).epsilon(1e-8));
        }
    }
    CHECK_THROWS_AS(solve_aleph_line(kModified, Side::right, 0.5), NoRootError);
}

TEST_CASE("gap agrees with the dense spectrum of a wide truncation") {
    ModelSpec wide = kModified;
    wide.n_modes = 40;
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> dist(-0.45, 0.45);
    for (int i = 0; i < 15; ++i) {
        const double s = dist(rng);
        Eigen::SelfAdjointEigenSolver<Matrix> solver(assemble_K(wide, s).entries);
        const Eigen::VectorXd e = solver.eigenvalues();
        const double lam = eigenvalue(wide, s, Branch::plus, 0);
        std::vector<double> dist_to_lam;
        for (int j = 0; j < e.size(); ++j) {
            dist_to_lam.push_back(std::abs(e(j) - lam));
        }
        std::sort(dist_to_lam.begin(), dist_to_lam.end());
        CHECK(dist_to_lam[0] <= 1e-9);  // the followed level itself
        CHECK(std::abs(gap(wide, s, 40).value - dist_to_lam[1]) <= 1e-9);
    }
}

TEST_CASE("local power fit recovers a synthetic power law") {
    CrossingRecord r;
    r.z_k = 0.3;
    r.V_lo = 0.25;
    r.V_hi = 0.36;
    const LocalPower p = estimate_local_power(
        [](double s) { return 3.0 * std::pow(std::abs(s - 0.3), 1.5); }, r);
    CHECK(p.alpha_hat == doctest::Approx(1.5).epsilon(1e-10));
    CHECK(p.G_hat == doctest::Approx(3.0).epsilon(1e-9));
    CHECK(p.offsets.size() == p.gaps.size());
    CHECK_THROWS_AS(estimate_local_power([](double) { return 0.0; }, r), std::runtime_error);
}

TEST_CASE("ledger satisfies the spectral hypotheses with linear gap opening") {
    for (Side side : {Side::left, Side::right}) {
        const CrossingLedger ledger = build_ledger(kModified, 4, 20, side);
        REQUIRE(ledger.records.size() == 17);
        CHECK(ledger.h1_ok());
        CHECK(ledger.alpha == doctest::Approx(1.0).epsilon(1e-3));
        double lo = 1e300;
        double hi = 0.0;
        for (const auto& r : ledger.records) {
            CHECK(r.h1_ok);
            CHECK(h2_holds(kModified, r, ledger.alpha));
            CHECK(std::min(r.u_k, r.u_km1) <= r.V_lo);
            CHECK(r.V_hi <= std::max(r.u_k, r.u_km1));
            CHECK(r.V_lo < r.z_k);
            CHECK(r.z_k < r.V_hi);
            CHECK(r.tau_k > 0.0);
            lo = std::min(lo, r.G_k / r.k);
            hi = std::max(hi, r.G_k / r.k);
        }
        CHECK(hi / lo < 2.0);
        for (std::size_t i = 1; i < ledger.records.size(); ++i) {
            CHECK(std::abs(ledger.records[i].u_k) < std::abs(ledger.records[i - 1].u_k));
        }
        std::ostringstream csv;
        write_ledger_csv(csv, ledger);
        CHECK(csv.str().rfind("k,z_k,u_k,u_km1,V_lo,V_hi,Delta_k,G_k,alpha_hat,tau_k\n", 0) == 0);
    }
    CHECK_THROWS_AS(build_ledger(kModified, 1, 5), std::invalid_argument);
}

TEST_CASE("projector, generator and reduced commutator identities") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> dist(-0.45, 0.45);
    for (const ModelSpec& spec : {kModified, ModelSpec::rwa(1.0, 1.0, 16)}) {
        int done = 0;
        while (done < 10) {
            const double s = dist(rng);
            const double g = gap(spec, s, spec.n_modes).value;
            if (g <= 1e-3) {
                continue;
            }
            ++done;
            const ProjectorData d = projector_and_L(spec, s);
            const Matrix I = Matrix::Identity(spec.dim(), spec.dim());
            const Matrix Q = I - d.P;
            CHECK((d.P * d.P - d.P).norm() <= 1e-13);
            CHECK(std::abs(d.P.trace() - 1.0) <= 1e-13);
            CHECK((d.L - d.L.adjoint()).norm() <= 1e-12);
            // P' against a central difference of P.
            const double h = 1e-6;
            const Matrix Pp = projector_and_L(spec, s + h).P;
            const Matrix Pm = projector_and_L(spec, s - h).P;
            CHECK((d.Pprime - (Pp - Pm) / (2 * h)).norm() <= 1e-7);
            const double lnorm = d.L.norm();
            CHECK((d.P * d.L * d.P).norm() <= 1e-10);
            CHECK((Q * d.L * Q).norm() <= 1e-10);
            const Matrix K = assemble_K(spec, s).entries;
            const Matrix R = reduced_commutator_RL(spec, s, spec.n_modes);
            CHECK((R * K - K * R - (d.L * d.P - d.P * d.L)).norm() <= 1e-8 * lnorm);
            CHECK(R.norm() <= 2.0 * lnorm / g);
        }
    }
    CHECK_THROWS_AS(reduced_commutator_RL(kModified, find_crossing(kModified, 5), 16),
                    NearCrossingError);
}

TEST_CASE("affine map round trip") {
    const AffineMap map{-0.45, 0.45};
    CHECK(map.forward(-0.45) == 0.0);
    CHECK(map.forward(0.45) == 1.0);
    CHECK(map.inverse(map.forward(0.123)) == doctest::Approx(0.123));
}
