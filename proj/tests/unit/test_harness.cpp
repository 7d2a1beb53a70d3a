#include "adiacross/harness.hpp"
#include "adiacross/io.hpp"

#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <random>
#include <regex>

using namespace adiacross;

namespace {

std::vector<double> grid(int n) {
    EpsGrid g;
    g.eps_max = 1e-1;
    g.eps_min = 3e-3;
    g.points = n;
    return g.values();
}

SweepResult synthetic_result(double c, double p, int n) {
    SweepResult r;
    for (double eps : grid(n)) {
        SweepRow row;
        row.eps = eps;
        row.error = c * std::pow(eps, p);
        row.transition_prob = row.error * row.error;
        row.bound_value = std::nan("");
        row.steps = 100;
        r.rows.push_back(row);
    }
    r.fit = fit_power_law(r.rows);
    return r;
}

std::vector<std::pair<double, double>> circles(const std::string& svg) {
    std::vector<std::pair<double, double>> out;
    const std::regex re("<circle cx=\"([-0-9.]+)\" cy=\"([-0-9.]+)\"");
    for (auto it = std::sregex_iterator(svg.begin(), svg.end(), re); it != std::sregex_iterator(); ++it) {
        out.emplace_back(std::stod((*it)[1]), std::stod((*it)[2]));
    }
    return out;
}

}  // namespace

TEST_CASE("eps grid is geometric and descending") {
    const auto g = grid(8);
    REQUIRE(g.size() == 8);
    CHECK(g.front() == 1e-1);
    CHECK(g.back() == 3e-3);
    for (std::size_t i = 2; i < g.size(); ++i) {
        CHECK(g[i] / g[i - 1] == doctest::Approx(g[1] / g[0]).epsilon(1e-13));
    }
}

TEST_CASE("fit recovers exact power laws") {
    const auto eps = grid(8);
    std::vector<double> lin;
    std::vector<double> third;
    for (double e : eps) {
        lin.push_back(e);
        third.push_back(3.0 * std::cbrt(e));
    }
    const PowerFit a = fit_power_law(eps, lin);
    CHECK(std::abs(a.p_hat - 1.0) <= 1e-12);
    CHECK(std::abs(a.log_prefactor) <= 1e-12);
    CHECK(a.r_squared == doctest::Approx(1.0).epsilon(1e-12));
    const PowerFit b = fit_power_law(eps, third);
    CHECK(std::abs(b.p_hat - 1.0 / 3.0) <= 1e-12 / 3.0);
    CHECK(std::abs(b.log_prefactor - std::log(3.0)) <= 1e-12 * std::log(3.0));
}

TEST_CASE("fit on noisy data") {
    std::mt19937_64 rng(2024);
    std::uniform_real_distribution<double> noise(-1.0, 1.0);
    const auto eps = grid(8);
    std::vector<double> err;
    for (double e : eps) {
        err.push_back(std::cbrt(e) * (1.0 + 0.01 * noise(rng)));
    }
    const PowerFit f = fit_power_law(eps, err);
    CHECK(std::abs(f.p_hat - 1.0 / 3.0) <= 0.02);
    CHECK(f.stderr_p > 0.0);
    CHECK(f.stderr_p < 0.02);
}

TEST_CASE("fit exclusions and window") {
    SweepResult r = synthetic_result(1.0, 1.0, 8);
    r.rows[6].flags = {"leak"};
    r.rows[6].error = 1e3;
    r.rows[7].error = 0.0;
    const PowerFit f = fit_power_law(r.rows);
    CHECK(f.n_used == 6);
    CHECK(f.p_hat == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(f.notes.size() == 2);
    const PowerFit w = fit_power_law(r.rows, r.rows[5].eps, r.rows[0].eps);
    CHECK(w.n_used == 6);
    CHECK_THROWS_AS(fit_power_law(r.rows, r.rows[5].eps, r.rows[3].eps), std::invalid_argument);
}

TEST_CASE("CSV export and round trip") {
    SweepResult empty;
    CHECK(to_csv(empty) == csv_header() + "\n");
    CHECK(csv_header() == "eps,error,transition_prob,bound_value,K_minus,K_plus,steps,wall_time,flags");

    SweepResult r = synthetic_result(0.7, 0.4, 6);
    r.rows[1].flags = {"leak"};
    r.rows[2].flags = {"leak", "drift"};
    r.rows[3].bound_value = 0.0123456789012345;
    r.rows[3].K_minus = 4;
    r.rows[3].K_plus = 5;
    const auto back = parse_sweep_csv(to_csv(r));
    REQUIRE(back.size() == r.rows.size());
    for (std::size_t i = 0; i < back.size(); ++i) {
        const auto& a = r.rows[i];
        const auto& b = back[i];
        CHECK(std::abs(b.eps - a.eps) <= 1e-14 * a.eps);
        CHECK(std::abs(b.error - a.error) <= 1e-14 * a.error);
        CHECK(std::abs(b.transition_prob - a.transition_prob) <= 1e-14 * a.transition_prob);
        CHECK(b.steps == a.steps);
        CHECK(b.flags == a.flags);
        CHECK(std::isnan(b.bound_value) == std::isnan(a.bound_value));
    }
    CHECK(back[3].bound_value == doctest::Approx(0.0123456789012345).epsilon(1e-14));
    CHECK(back[3].K_plus == 5);
    CHECK(to_csv(SweepResult{back, {}, {}, 0.0, false, ""}) == to_csv(r));

    const auto path = (std::filesystem::temp_directory_path() / "adiacross_sweep_test.csv").string();
    export_csv(r, path);
    CHECK(parse_sweep_csv(read_file(path)).size() == r.rows.size());
    std::filesystem::remove(path);
    CHECK_THROWS_AS(export_csv(r, "/nonexistent-dir/x.csv"), std::runtime_error);
}

TEST_CASE("SVG rendering") {
    SweepResult one;
    one.rows.push_back(SweepRow{});
    one.rows[0].eps = 1e-2;
    one.rows[0].error = 1e-3;
    const std::string s1 = to_svg(one);
    CHECK(s1.find("<svg") != std::string::npos);
    CHECK(s1.find("id=\"fit\"") == std::string::npos);
    CHECK(s1.find("id=\"bound\"") == std::string::npos);
    CHECK(circles(s1).size() == 1);
    CHECK_THROWS_AS(to_svg(SweepResult{}), std::invalid_argument);

    // Exact power law: every point lies on the fitted line.
    SweepResult r = synthetic_result(2.0, 0.5, 8);
    const std::string svg = to_svg(r);
    const std::regex path_re("id=\"fit\" d=\"M ([-0-9.]+) ([-0-9.]+) L ([-0-9.]+) ([-0-9.]+)\"");
    std::smatch m;
    REQUIRE(std::regex_search(svg, m, path_re));
    const double x0 = std::stod(m[1]);
    const double y0 = std::stod(m[2]);
    const double x1 = std::stod(m[3]);
    const double y1 = std::stod(m[4]);
    const auto pts = circles(svg);
    REQUIRE(pts.size() == 8);
    for (const auto& [x, y] : pts) {
        const double on_line = y0 + (y1 - y0) * (x - x0) / (x1 - x0);
        CHECK(std::abs(y - on_line) <= 2e-3);
    }
    CHECK(svg.find("id=\"bound\"") == std::string::npos);
    r.bound_rows.push_back({1e-2, 3, 3, 0.5});
    r.bound_rows.push_back({5e-3, 4, 4, 0.4});
    r.calibrated_C = 0.1;
    CHECK(to_svg(r).find("id=\"bound\"") != std::string::npos);
}

TEST_CASE("JSON config ingestion") {
    const SweepConfig cfg = SweepConfig::from_json(R"({
        "spec": {"kind": "modified", "omega0": 1.0, "Omega": 1.0, "rho0": 1.0, "n_modes": 12},
        "eps_grid": {"eps_max": 0.1, "eps_min": 0.01, "points": 5},
        "s_window": [-0.4, 0.4],
        "metric": "transition",
        "bound_overlay": true,
        "output_dir": "out",
        "seed": 3
    })");
    CHECK(cfg.spec.kind == ModelKind::modified);
    CHECK(cfg.spec.n_modes == 12);
    CHECK(cfg.spec.rho.offset == 1.0);
    CHECK(cfg.eps_grid.points == 5);
    CHECK(cfg.s_start == -0.4);
    CHECK(cfg.metric == Metric::transition_probability);
    CHECK(cfg.bound_overlay);
    CHECK(cfg.output_dir == "out");
    const SweepConfig again = SweepConfig::from_json(cfg.to_json());
    CHECK(again.to_json() == cfg.to_json());
    CHECK_THROWS_AS(SweepConfig::from_json(R"({"bogus": 1})"), std::invalid_argument);
    CHECK_THROWS_AS(SweepConfig::from_json(R"({"spec": {"omega": 1}})"), std::invalid_argument);
    CHECK_THROWS_AS(SweepConfig::from_json("{not json"), std::invalid_argument);
    SweepConfig bad = cfg;
    bad.eps_grid.points = 3;
    CHECK_THROWS_AS(bad.validate(), std::invalid_argument);
}

TEST_CASE("small sweep is deterministic and ordered") {
    SweepConfig cfg;
    cfg.spec = ModelSpec::modified(1.0, 1.0, 1.0, 8);
    cfg.eps_grid = {1e-1, 2e-2, 4};
    cfg.bound_overlay = true;
    cfg.ledger_k_min = 3;
    cfg.ledger_k_max = 12;
    cfg.threads = 2;
    const SweepResult a = run_sweep(cfg);
    const SweepResult b = run_sweep(cfg);
    CHECK(to_csv(a) == to_csv(b));
    REQUIRE(a.rows.size() == 4);
    for (std::size_t i = 1; i < a.rows.size(); ++i) {
        CHECK(a.rows[i].eps < a.rows[i - 1].eps);
    }
    for (const auto& r : a.rows) {
        CHECK(r.error > 0.0);
        CHECK(r.wall_time == 0.0);
    }
    CHECK_FALSE(a.bound_rows.empty());
    CHECK(a.calibrated_C > 0.0);
    const std::string summary = fit_summary(a);
    CHECK(summary.find("fit_window=") != std::string::npos);
}
