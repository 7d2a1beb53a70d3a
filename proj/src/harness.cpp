#include "adiacross/harness.hpp"

#include "adiacross/bounds.hpp"
#include "adiacross/io.hpp"
#include "adiacross/spectral.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>
#include <optional>
#include <set>
#include <sstream>
#include <thread>

namespace adiacross {

using nlohmann::json;

namespace {

constexpr double kLeakThreshold = 1e-6;
constexpr double kDriftThreshold = 1e-8;

// Strict reader: every key must be known.
void check_keys(const json& obj, const std::set<std::string>& known, const std::string& where) {
    if (!obj.is_object()) {
        throw std::invalid_argument("config: '" + where + "' must be an object");
    }
    for (const auto& [key, value] : obj.items()) {
        if (!known.count(key)) {
            throw std::invalid_argument("config: unknown field '" + where + "." + key + "'");
        }
    }
}

AffineProfile read_profile(const json& j, const std::string& where) {
    if (j.is_number()) {
        return {j.get<double>(), 0.0};
    }
    check_keys(j, {"offset", "slope"}, where);
    AffineProfile p;
    p.offset = j.value("offset", 0.0);
    p.slope = j.value("slope", 0.0);
    return p;
}

ModelSpec read_spec(const json& j) {
    check_keys(j, {"omega0", "Omega", "kind", "rho0", "rho", "chirp", "n_modes", "theta_grid"},
               "spec");
    const ModelKind kind = parse_model_kind(j.value("kind", std::string("rwa")));
    const double omega0 = j.value("omega0", 1.0);
    const double Omega = j.value("Omega", 1.0);
    const int n = j.value("n_modes", 16);
    ModelSpec spec = kind == ModelKind::rwa ? ModelSpec::rwa(omega0, Omega, n)
                                            : ModelSpec::modified(omega0, Omega, 1.0, n);
    if (j.contains("rho0")) {
        spec.rho = {j.at("rho0").get<double>(), 0.0};
    }
    if (j.contains("rho")) {
        spec.rho = read_profile(j.at("rho"), "spec.rho");
    }
    if (j.contains("chirp")) {
        spec.chirp = read_profile(j.at("chirp"), "spec.chirp");
    }
    spec.theta_grid = j.value("theta_grid", 0);
    return spec;
}

json profile_json(const AffineProfile& p) {
    return json{{"offset", p.offset}, {"slope", p.slope}};
}

std::string join(const std::vector<std::string>& parts, char sep) {
    std::string out;
    for (std::size_t i = 0; i < parts.size(); ++i) {
        if (i) {
            out += sep;
        }
        out += parts[i];
    }
    return out;
}

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    if (text.empty()) {
        return out;
    }
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

SweepRow sweep_row(const SweepConfig& cfg, double eps) {
    SweepRow row;
    row.eps = eps;
    row.bound_value = std::numeric_limits<double>::quiet_NaN();
    PropagationConfig pc;
    pc.eps = eps;
    pc.s_start = cfg.s_start;
    pc.s_end = cfg.s_end;
    pc.c_step = cfg.c_step;
    pc.integrator = cfg.integrator;
    pc.metric = cfg.metric;
    pc.leak_threshold = kLeakThreshold;
    try {
        const AdiabaticError err = adiabatic_error(cfg.spec, pc);
        row.error = err.metric_value(cfg.metric);
        row.transition_prob = err.transition_prob;
        row.steps = err.exact.steps + err.adiabatic.steps;
        if (cfg.record_timing) {
            row.wall_time = err.exact.wall_time + err.adiabatic.wall_time;
        }
        const double edge = std::max(err.exact.max_edge_population, err.adiabatic.max_edge_population);
        if (err.exact.leak || err.adiabatic.leak) {
            row.flags.push_back("leak");
        }
        const double drift = std::max(err.exact.unitarity_drift, err.adiabatic.unitarity_drift);
        if (drift > kDriftThreshold) {
            row.flags.push_back("drift");
        }
        row.diagnostics = "h=" + format_number(err.exact.step_size) +
                          " edge_pop=" + format_number(edge) +
                          " intertwine=" + format_number(err.adiabatic.intertwine_residual) +
                          " drift=" + format_number(drift);
    } catch (const std::exception& e) {
        row.error = std::numeric_limits<double>::quiet_NaN();
        row.transition_prob = std::numeric_limits<double>::quiet_NaN();
        row.flags.push_back("failed");
        row.diagnostics = e.what();
    }
    return row;
}

template <typename F>
void parallel_for(int n, int threads, F&& body) {
    int workers = threads > 0 ? threads : static_cast<int>(std::thread::hardware_concurrency());
    workers = std::clamp(workers, 1, std::max(1, n));
    std::atomic<int> next{0};
    auto work = [&] {
        for (int i = next++; i < n; i = next++) {
            body(i);
        }
    };
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) {
        pool.emplace_back(work);
    }
    work();
    for (auto& t : pool) {
        t.join();
    }
}

}  // namespace

std::vector<double> EpsGrid::values() const {
    std::vector<double> out;
    for (int i = 0; i < points; ++i) {
        const double x = points == 1 ? 0.0 : static_cast<double>(i) / (points - 1);
        out.push_back(eps_max * std::pow(eps_min / eps_max, x));
    }
    if (!out.empty()) {
        out.front() = eps_max;
        out.back() = eps_min;
    }
    return out;
}

void SweepConfig::validate() const {
    spec.validate();
    if (!(eps_grid.eps_min > 0.0 && eps_grid.eps_min < eps_grid.eps_max)) {
        throw std::invalid_argument("SweepConfig: need 0 < eps_min < eps_max");
    }
    if (eps_grid.points < 4) {
        throw std::invalid_argument("SweepConfig: eps_grid.points must be >= 4");
    }
    if (!(s_start < s_end)) {
        throw std::invalid_argument("SweepConfig: need s_start < s_end");
    }
    if (fit_eps_min < 0.0 || fit_eps_max < 0.0 ||
        (fit_eps_min > 0.0 && fit_eps_max > 0.0 && fit_eps_min >= fit_eps_max)) {
        throw std::invalid_argument("SweepConfig: invalid fit window");
    }
    if (bound_overlay && (ledger_k_min < 2 || ledger_k_max < ledger_k_min)) {
        throw std::invalid_argument("SweepConfig: need 2 <= ledger_k_min <= ledger_k_max");
    }
}

SweepConfig SweepConfig::from_json(const std::string& text) {
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    check_keys(j,
               {"spec", "eps_grid", "s_window", "metric", "bound_overlay", "output_dir", "seed",
                "integrator", "c_step", "fit_eps_min", "fit_eps_max", "ledger_k_min",
                "ledger_k_max", "record_timing", "threads"},
               "config");
    SweepConfig cfg;
    try {
        if (j.contains("spec")) {
            cfg.spec = read_spec(j.at("spec"));
        }
        if (j.contains("eps_grid")) {
            const json& g = j.at("eps_grid");
            check_keys(g, {"eps_max", "eps_min", "points"}, "eps_grid");
            cfg.eps_grid.eps_max = g.value("eps_max", cfg.eps_grid.eps_max);
            cfg.eps_grid.eps_min = g.value("eps_min", cfg.eps_grid.eps_min);
            cfg.eps_grid.points = g.value("points", cfg.eps_grid.points);
        }
        if (j.contains("s_window")) {
            const json& w = j.at("s_window");
            if (!w.is_array() || w.size() != 2) {
                throw std::invalid_argument("config: s_window must be [s_start, s_end]");
            }
            cfg.s_start = w[0].get<double>();
            cfg.s_end = w[1].get<double>();
        }
        if (j.contains("metric")) {
            cfg.metric = parse_metric(j.at("metric").get<std::string>());
        }
        if (j.contains("integrator")) {
            cfg.integrator = parse_integrator(j.at("integrator").get<std::string>());
        }
        cfg.bound_overlay = j.value("bound_overlay", cfg.bound_overlay);
        cfg.output_dir = j.value("output_dir", cfg.output_dir);
        cfg.seed = j.value("seed", cfg.seed);
        cfg.c_step = j.value("c_step", cfg.c_step);
        cfg.fit_eps_min = j.value("fit_eps_min", cfg.fit_eps_min);
        cfg.fit_eps_max = j.value("fit_eps_max", cfg.fit_eps_max);
        cfg.ledger_k_min = j.value("ledger_k_min", cfg.ledger_k_min);
        cfg.ledger_k_max = j.value("ledger_k_max", cfg.ledger_k_max);
        cfg.record_timing = j.value("record_timing", cfg.record_timing);
        cfg.threads = j.value("threads", cfg.threads);
    } catch (const json::exception& e) {
        throw std::invalid_argument(std::string("config: ") + e.what());
    }
    return cfg;
}

std::string SweepConfig::to_json() const {
    json j;
    j["spec"] = {{"omega0", spec.omega0},       {"Omega", spec.Omega},
                 {"kind", to_string(spec.kind)}, {"rho", profile_json(spec.rho)},
                 {"chirp", profile_json(spec.chirp)}, {"n_modes", spec.n_modes},
                 {"theta_grid", spec.theta_grid}};
    j["eps_grid"] = {{"eps_max", eps_grid.eps_max},
                     {"eps_min", eps_grid.eps_min},
                     {"points", eps_grid.points}};
    j["s_window"] = {s_start, s_end};
    j["metric"] = to_string(metric);
    j["bound_overlay"] = bound_overlay;
    j["output_dir"] = output_dir;
    j["seed"] = seed;
    j["integrator"] = to_string(integrator);
    j["c_step"] = c_step;
    j["fit_eps_min"] = fit_eps_min;
    j["fit_eps_max"] = fit_eps_max;
    j["ledger_k_min"] = ledger_k_min;
    j["ledger_k_max"] = ledger_k_max;
    j["record_timing"] = record_timing;
    j["threads"] = threads;
    return j.dump();
}

void default_fit_window(const SweepConfig& cfg, double& eps_lo, double& eps_hi) {
    const std::vector<double> grid = cfg.eps_grid.values();
    eps_lo = cfg.fit_eps_min;
    eps_hi = cfg.fit_eps_max;
    if (eps_lo == 0.0 && eps_hi == 0.0) {
        // Lower half of the grid, widened to the four rows a fit needs.
        const std::size_t half = std::max((grid.size() + 1) / 2, std::min<std::size_t>(4, grid.size()));
        eps_lo = grid.back();
        eps_hi = grid[grid.size() - half];
    }
}

PowerFit fit_power_law(const std::vector<double>& eps, const std::vector<double>& error) {
    if (eps.size() != error.size()) {
        throw std::invalid_argument("fit_power_law: eps and error differ in length");
    }
    std::vector<SweepRow> rows(eps.size());
    for (std::size_t i = 0; i < eps.size(); ++i) {
        rows[i].eps = eps[i];
        rows[i].error = error[i];
    }
    return fit_power_law(rows);
}

PowerFit fit_power_law(const std::vector<SweepRow>& rows, double eps_lo, double eps_hi) {
    PowerFit fit;
    std::vector<double> x;
    std::vector<double> y;
    for (const auto& r : rows) {
        if ((eps_lo > 0.0 && r.eps < eps_lo * (1 - 1e-12)) ||
            (eps_hi > 0.0 && r.eps > eps_hi * (1 + 1e-12))) {
            continue;
        }
        if (r.flagged()) {
            fit.notes.push_back("excluded eps=" + format_number(r.eps) + " (" + join(r.flags, ';') +
                                ")");
            continue;
        }
        if (!(r.error > 0.0) || !(r.eps > 0.0)) {
            fit.notes.push_back("excluded eps=" + format_number(r.eps) + " (non-positive error)");
            continue;
        }
        x.push_back(std::log(r.eps));
        y.push_back(std::log(r.error));
    }
    const std::size_t n = x.size();
    if (n < 4) {
        throw std::invalid_argument("fit_power_law: need at least 4 usable rows, have " +
                                    std::to_string(n));
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0.0;
    double sxy = 0.0;
    double syy = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (!(sxx > 0.0)) {
        throw std::invalid_argument("fit_power_law: all eps values coincide");
    }
    fit.p_hat = sxy / sxx;
    fit.log_prefactor = my - fit.p_hat * mx;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (fit.log_prefactor + fit.p_hat * x[i]);
        sse += r * r;
    }
    fit.r_squared = syy > 0.0 ? 1.0 - sse / syy : 1.0;
    fit.stderr_p = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    fit.n_used = static_cast<int>(n);
    fit.eps_lo = std::exp(*std::min_element(x.begin(), x.end()));
    fit.eps_hi = std::exp(*std::max_element(x.begin(), x.end()));
    fit.valid = true;
    return fit;
}

SweepResult run_sweep(const SweepConfig& cfg) {
    cfg.validate();
    SweepResult result;
    result.config_echo = cfg.to_json();
    const std::vector<double> grid = cfg.eps_grid.values();
    result.rows.resize(grid.size());
    parallel_for(static_cast<int>(grid.size()), cfg.threads,
                 [&](int i) { result.rows[i] = sweep_row(cfg, grid[i]); });

    if (cfg.bound_overlay) {
        std::optional<CrossingLedger> left;
        std::optional<CrossingLedger> right;
        try {
            left = build_ledger(cfg.spec, cfg.ledger_k_min, cfg.ledger_k_max, Side::left);
            right = build_ledger(cfg.spec, cfg.ledger_k_min, cfg.ledger_k_max, Side::right);
        } catch (const std::exception& e) {
            for (auto& row : result.rows) {
                row.diagnostics += std::string(" bound: ") + e.what();
            }
        }
        if (left && right) {
            for (auto& row : result.rows) {
                try {
                    const BoundReport report = theorem_bound(row.eps, *left, *right);
                    row.bound_value = report.bound_value;
                    row.K_minus = report.K_minus;
                    row.K_plus = report.K_plus;
                    result.bound_rows.push_back(
                        {row.eps, report.K_minus, report.K_plus, report.bound_value});
                } catch (const EpsTooLargeError&) {
                    row.diagnostics += " bound: eps too large for the K selector";
                }
            }
        }
        for (const auto& row : result.rows) {
            if (!row.flagged() && std::isfinite(row.bound_value) && row.bound_value > 0.0) {
                result.calibrated_C = row.error / row.bound_value;
                break;
            }
        }
        result.overlay_holds = result.calibrated_C > 0.0;
        for (const auto& row : result.rows) {
            if (!row.flagged() && std::isfinite(row.bound_value) &&
                row.error > result.calibrated_C * row.bound_value * (1.0 + 1e-12)) {
                result.overlay_holds = false;
            }
        }
    }

    double lo = 0.0;
    double hi = 0.0;
    default_fit_window(cfg, lo, hi);
    try {
        result.fit = fit_power_law(result.rows, lo, hi);
    } catch (const std::invalid_argument& e) {
        result.fit.valid = false;
        result.fit.notes.push_back(e.what());
    }
    result.fit.eps_lo = lo;
    result.fit.eps_hi = hi;
    return result;
}

std::string csv_header() {
    return "eps,error,transition_prob,bound_value,K_minus,K_plus,steps,wall_time,flags";
}

std::string to_csv(const SweepResult& result) {
    std::ostringstream out;
    out << csv_header() << '\n';
    for (const auto& r : result.rows) {
        const bool has_bound = std::isfinite(r.bound_value);
        out << format_number(r.eps) << ',' << format_number(r.error) << ','
            << format_number(r.transition_prob) << ','
            << (has_bound ? format_number(r.bound_value) : "") << ','
            << (has_bound ? std::to_string(r.K_minus) : "") << ','
            << (has_bound ? std::to_string(r.K_plus) : "") << ',' << r.steps << ','
            << format_number(r.wall_time) << ',' << csv_field(join(r.flags, ';')) << '\n';
    }
    return out.str();
}

void export_csv(const SweepResult& result, const std::string& path) {
    write_file(path, to_csv(result));
}

std::vector<SweepRow> parse_sweep_csv(const std::string& text) {
    const auto table = parse_csv(text);
    if (table.empty() || join(table.front(), ',') != csv_header()) {
        throw std::invalid_argument("parse_sweep_csv: missing or unexpected header");
    }
    auto number = [](const std::string& f) {
        return f.empty() ? std::numeric_limits<double>::quiet_NaN() : std::stod(f);
    };
    std::vector<SweepRow> rows;
    for (std::size_t i = 1; i < table.size(); ++i) {
        const auto& f = table[i];
        if (f.size() != 9) {
            throw std::invalid_argument("parse_sweep_csv: row " + std::to_string(i) +
                                        " has " + std::to_string(f.size()) + " fields");
        }
        SweepRow r;
        r.eps = number(f[0]);
        r.error = number(f[1]);
        r.transition_prob = number(f[2]);
        r.bound_value = number(f[3]);
        r.K_minus = f[4].empty() ? 0 : std::stoi(f[4]);
        r.K_plus = f[5].empty() ? 0 : std::stoi(f[5]);
        r.steps = std::stol(f[6]);
        r.wall_time = number(f[7]);
        r.flags = split(f[8], ';');
        rows.push_back(r);
    }
    return rows;
}

std::string fit_summary(const SweepResult& result) {
    std::ostringstream out;
    const PowerFit& f = result.fit;
    out << "fit_valid=" << (f.valid ? "true" : "false") << '\n';
    if (f.valid) {
        out << "p_hat=" << format_number(f.p_hat) << '\n'
            << "log_prefactor=" << format_number(f.log_prefactor) << '\n'
            << "r_squared=" << format_number(f.r_squared) << '\n'
            << "stderr_p=" << format_number(f.stderr_p) << '\n'
            << "n_used=" << f.n_used << '\n';
    }
    out << "fit_window=[" << format_number(f.eps_lo) << ", " << format_number(f.eps_hi) << "]\n";
    for (const auto& n : f.notes) {
        out << "fit_note=" << n << '\n';
    }
    if (!result.bound_rows.empty()) {
        out << "calibrated_C=" << format_number(result.calibrated_C) << '\n'
            << "overlay_holds=" << (result.overlay_holds ? "true" : "false") << '\n';
    }
    return out.str();
}

namespace {

struct LogAxes {
    double x0{}, x1{}, y0{}, y1{};
    static constexpr double width = 640.0;
    static constexpr double height = 480.0;
    static constexpr double left = 80.0;
    static constexpr double right = 20.0;
    static constexpr double top = 20.0;
    static constexpr double bottom = 60.0;

    double px(double eps) const {
        return left + (std::log10(eps) - x0) / (x1 - x0) * (width - left - right);
    }
    double py(double v) const {
        return height - bottom - (std::log10(v) - y0) / (y1 - y0) * (height - top - bottom);
    }
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4f", v);
    return buf;
}

void widen(double& lo, double& hi) {
    if (hi - lo < 1e-9) {
        lo -= 0.5;
        hi += 0.5;
    }
    const double pad = 0.05 * (hi - lo);
    lo -= pad;
    hi += pad;
}

}  // namespace

std::string to_svg(const SweepResult& result) {
    if (result.rows.empty()) {
        throw std::invalid_argument("render_svg: need at least one row");
    }
    std::vector<const SweepRow*> pts;
    for (const auto& r : result.rows) {
        if (r.eps > 0.0 && r.error > 0.0 && std::isfinite(r.error)) {
            pts.push_back(&r);
        }
    }
    LogAxes ax;
    ax.x0 = ax.y0 = std::numeric_limits<double>::infinity();
    ax.x1 = ax.y1 = -std::numeric_limits<double>::infinity();
    auto include = [&](double eps, double v) {
        ax.x0 = std::min(ax.x0, std::log10(eps));
        ax.x1 = std::max(ax.x1, std::log10(eps));
        ax.y0 = std::min(ax.y0, std::log10(v));
        ax.y1 = std::max(ax.y1, std::log10(v));
    };
    for (const auto* r : pts) {
        include(r->eps, r->error);
    }
    const double C = result.calibrated_C > 0.0 ? result.calibrated_C : 1.0;
    for (const auto& b : result.bound_rows) {
        if (b.bound_value > 0.0) {
            include(b.eps, C * b.bound_value);
        }
    }
    if (!std::isfinite(ax.x0)) {
        ax.x0 = ax.y0 = -1.0;
        ax.x1 = ax.y1 = 0.0;
    }
    widen(ax.x0, ax.x1);
    widen(ax.y0, ax.y1);

    std::ostringstream out;
    out << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
        << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << LogAxes::width
        << "\" height=\"" << LogAxes::height << "\" viewBox=\"0 0 " << LogAxes::width << ' '
        << LogAxes::height << "\">\n"
        << "<rect x=\"0\" y=\"0\" width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
        << "<rect x=\"" << LogAxes::left << "\" y=\"" << LogAxes::top << "\" width=\""
        << LogAxes::width - LogAxes::left - LogAxes::right << "\" height=\""
        << LogAxes::height - LogAxes::top - LogAxes::bottom
        << "\" fill=\"none\" stroke=\"black\"/>\n";
    for (int d = static_cast<int>(std::ceil(ax.x0)); d <= std::floor(ax.x1); ++d) {
        const double x = ax.px(std::pow(10.0, d));
        out << "<text x=\"" << fmt(x) << "\" y=\"" << LogAxes::height - LogAxes::bottom + 18
            << "\" font-size=\"12\" text-anchor=\"middle\">1e" << d << "</text>\n";
    }
    for (int d = static_cast<int>(std::ceil(ax.y0)); d <= std::floor(ax.y1); ++d) {
        const double y = ax.py(std::pow(10.0, d));
        out << "<text x=\"" << LogAxes::left - 6 << "\" y=\"" << fmt(y + 4)
            << "\" font-size=\"12\" text-anchor=\"end\">1e" << d << "</text>\n";
    }
    out << "<text x=\"" << (LogAxes::width + LogAxes::left) / 2 << "\" y=\""
        << LogAxes::height - 15 << "\" font-size=\"14\" text-anchor=\"middle\">eps</text>\n"
        << "<text x=\"20\" y=\"" << LogAxes::height / 2
        << "\" font-size=\"14\" text-anchor=\"middle\" transform=\"rotate(-90 20 "
        << LogAxes::height / 2 << ")\">error</text>\n";

    out << "<g id=\"points\" fill=\"steelblue\">\n";
    for (const auto* r : pts) {
        out << "<circle cx=\"" << fmt(ax.px(r->eps)) << "\" cy=\"" << fmt(ax.py(r->error))
            << "\" r=\"4\"/>\n";
    }
    out << "</g>\n";

    if (pts.size() >= 2 && result.fit.valid) {
        double lo = pts.front()->eps;
        double hi = lo;
        for (const auto* r : pts) {
            lo = std::min(lo, r->eps);
            hi = std::max(hi, r->eps);
        }
        auto line = [&](double eps) {
            return std::exp(result.fit.log_prefactor) * std::pow(eps, result.fit.p_hat);
        };
        out << "<path id=\"fit\" d=\"M " << fmt(ax.px(lo)) << ' ' << fmt(ax.py(line(lo))) << " L "
            << fmt(ax.px(hi)) << ' ' << fmt(ax.py(line(hi)))
            << "\" stroke=\"firebrick\" fill=\"none\"/>\n"
            << "<text x=\"" << LogAxes::width - LogAxes::right - 6 << "\" y=\""
            << LogAxes::top + 16 << "\" font-size=\"12\" text-anchor=\"end\">p_hat = "
            << fmt(result.fit.p_hat) << "</text>\n";
    }

    if (!result.bound_rows.empty()) {
        out << "<path id=\"bound\" d=\"";
        bool first = true;
        for (const auto& b : result.bound_rows) {
            if (!(b.bound_value > 0.0)) {
                continue;
            }
            out << (first ? "M " : " L ") << fmt(ax.px(b.eps)) << ' '
                << fmt(ax.py(C * b.bound_value));
            first = false;
        }
        out << "\" stroke=\"darkgreen\" stroke-dasharray=\"6 4\" fill=\"none\"/>\n";
    }
    out << "</svg>\n";
    return out.str();
}

void render_svg(const SweepResult& result, const std::string& path) {
    write_file(path, to_svg(result));
}

}  // namespace adiacross
