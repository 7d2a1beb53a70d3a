#include "adiacross/cli.hpp"

#include "adiacross/bounds.hpp"
#include "adiacross/evolve.hpp"
#include "adiacross/harness.hpp"
#include "adiacross/io.hpp"
#include "adiacross/model.hpp"
#include "adiacross/spectral.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <functional>
#include <map>
#include <ostream>
#include <random>
#include <sstream>

namespace adiacross {

namespace {

class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

struct Options {
    std::string config;
    double omega0{1.0};
    double omega_rabi{1.0};
    double rho{1.0};
    std::string preset{"rwa"};
    int n_modes{16};
    double eps{1e-2};
    double eps_min{3e-3};
    double eps_max{1e-1};
    int eps_points{8};
    double s_start{-0.45};
    double s_end{0.45};
    double alpha{1.0};
    double beta{1.0};
    double gamma{1.0};
    double delta{2.0};
    std::string k;
    double varsigma{0.0};
    std::string out;
    std::string integrator{"exp-midpoint"};
    std::string metric{"deviation"};
    std::string side{"right"};
    int points{11};
    bool bound_overlay{false};
    int threads{0};
};

using OptionMap = std::map<std::string, CLI::Option*>;

struct Command {
    CLI::App* app{nullptr};
    OptionMap options;
    std::function<int(const Command&)> run;

    bool given(const std::string& name) const {
        const auto it = options.find(name);
        return it != options.end() && it->second->count() > 0;
    }
};

void add_model_options(CLI::App* app, Options& o, OptionMap& m) {
    m["config"] = app->add_option("--config", o.config, "JSON config mirroring SweepConfig");
    m["omega0"] = app->add_option("--omega0", o.omega0, "level splitting omega0");
    m["omega-rabi"] = app->add_option("--omega-rabi", o.omega_rabi, "Rabi frequency Omega");
    m["rho"] = app->add_option("--rho", o.rho, "phase-modulation amplitude rho0 (modified preset)");
    m["preset"] = app->add_option("--preset", o.preset, "model preset")
                      ->check(CLI::IsMember({"rwa", "modified"}));
    m["n-modes"] = app->add_option("--n-modes", o.n_modes, "Fourier truncation N (modes -N..N)");
    m["out"] = app->add_option("--out", o.out, "output file");
}

void add_window_options(CLI::App* app, Options& o, OptionMap& m) {
    m["s-start"] = app->add_option("--s-start", o.s_start, "start of the slow-time window");
    m["s-end"] = app->add_option("--s-end", o.s_end, "end of the slow-time window");
}

void add_evolve_options(CLI::App* app, Options& o, OptionMap& m) {
    m["integrator"] = app->add_option("--integrator", o.integrator, "time stepper")
                          ->check(CLI::IsMember({"rk4", "exp-midpoint"}));
    m["metric"] = app->add_option("--metric", o.metric, "error metric")
                      ->check(CLI::IsMember({"deviation", "transition"}));
}

void add_side_option(CLI::App* app, Options& o, OptionMap& m) {
    m["side"] = app->add_option("--side", o.side, "side of the accumulation point")
                    ->check(CLI::IsMember({"left", "right"}));
}

Side parse_side(const std::string& s) {
    return s == "left" ? Side::left : Side::right;
}

// "a..b" or a single integer.
std::pair<int, int> parse_range(const std::string& text) {
    const auto dots = text.find("..");
    try {
        std::size_t used = 0;
        if (dots == std::string::npos) {
            const int v = std::stoi(text, &used);
            if (used != text.size()) {
                throw std::invalid_argument(text);
            }
            return {v, v};
        }
        const std::string a = text.substr(0, dots);
        const std::string b = text.substr(dots + 2);
        const int lo = std::stoi(a, &used);
        if (used != a.size()) {
            throw std::invalid_argument(text);
        }
        const int hi = std::stoi(b, &used);
        if (used != b.size() || hi < lo) {
            throw std::invalid_argument(text);
        }
        return {lo, hi};
    } catch (const std::logic_error&) {
        throw UsageError("--k: expected an integer or a range a..b, got '" + text + "'");
    }
}

class Cli {
public:
    Cli(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int main(const std::vector<std::string>& args);

private:
    std::ostream& out_;
    std::ostream& err_;
    Options o_;
    std::string name_;

    SweepConfig effective_config(const Command& c) const;
    void echo(const Command& c, const SweepConfig& cfg, const nlohmann::json& extra) const;
    void emit(const std::string& text, const SweepConfig& cfg, const nlohmann::json& extra) const;

    int spectrum(const Command& c);
    int crossings(const Command& c);
    int analyze(const Command& c);
    int bound(const Command& c);
    int exponent(const Command& c);
    int evolve(const Command& c);
    int sweep(const Command& c);
    int verify(const Command& c);
};

SweepConfig Cli::effective_config(const Command& c) const {
    SweepConfig cfg;
    if (c.given("config")) {
        const std::string text = read_file(o_.config);
        try {
            cfg = SweepConfig::from_json(text);
        } catch (const std::invalid_argument& e) {
            throw UsageError(std::string(o_.config) + ": " + e.what());
        }
    }
    ModelSpec& spec = cfg.spec;
    if (c.given("preset")) {
        spec = o_.preset == "rwa"
                   ? ModelSpec::rwa(spec.omega0, spec.Omega, spec.n_modes)
                   : ModelSpec::modified(spec.omega0, spec.Omega, 1.0, spec.n_modes);
    }
    if (c.given("omega0")) {
        spec.omega0 = o_.omega0;
    }
    if (c.given("omega-rabi")) {
        spec.Omega = o_.omega_rabi;
    }
    if (c.given("rho")) {
        if (spec.kind == ModelKind::rwa) {
            throw UsageError("--rho applies to the modified preset only");
        }
        spec.rho = {o_.rho, 0.0};
    }
    if (c.given("n-modes")) {
        spec.n_modes = o_.n_modes;
    }
    if (c.given("eps-min")) {
        cfg.eps_grid.eps_min = o_.eps_min;
    }
    if (c.given("eps-max")) {
        cfg.eps_grid.eps_max = o_.eps_max;
    }
    if (c.given("eps-points")) {
        cfg.eps_grid.points = o_.eps_points;
    }
    if (c.given("s-start")) {
        cfg.s_start = o_.s_start;
    }
    if (c.given("s-end")) {
        cfg.s_end = o_.s_end;
    }
    if (c.given("integrator")) {
        cfg.integrator = parse_integrator(o_.integrator);
    }
    if (c.given("metric")) {
        cfg.metric = parse_metric(o_.metric);
    }
    if (c.given("bound-overlay")) {
        cfg.bound_overlay = o_.bound_overlay;
    }
    if (c.given("threads")) {
        cfg.threads = o_.threads;
    }
    try {
        spec.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    return cfg;
}

void Cli::echo(const Command&, const SweepConfig& cfg, const nlohmann::json& extra) const {
    nlohmann::json j = nlohmann::json::parse(cfg.to_json());
    for (const auto& [k, v] : extra.items()) {
        j[k] = v;
    }
    out_ << "# adiacross " << name_ << " config=" << j.dump() << '\n';
}

// Writes text to --out (plus a sidecar with the config) or to stdout.
void Cli::emit(const std::string& text, const SweepConfig& cfg, const nlohmann::json& extra) const {
    if (o_.out.empty()) {
        out_ << text;
        return;
    }
    write_file(o_.out, text);
    nlohmann::json j = nlohmann::json::parse(cfg.to_json());
    for (const auto& [k, v] : extra.items()) {
        j[k] = v;
    }
    j["subcommand"] = name_;
    write_file(o_.out + ".config.json", j.dump(2) + "\n");
    out_ << "wrote " << o_.out << '\n';
}

int Cli::spectrum(const Command& c) {
    const SweepConfig cfg = effective_config(c);
    const auto [lo, hi] = parse_range(o_.k.empty() ? "0..2" : o_.k);
    if (std::max(std::abs(lo), std::abs(hi)) > cfg.spec.n_modes) {
        throw UsageError("spectrum: mode range exceeds the truncation N");
    }
    const int points = std::max(o_.points, 1);
    const nlohmann::json extra = {{"modes", std::to_string(lo) + ".." + std::to_string(hi)},
                                  {"points", points}};
    echo(c, cfg, extra);
    std::ostringstream text;
    text << "s,branch,mode,eigenvalue,dropped_mass,gap\n";
    for (int i = 0; i < points; ++i) {
        const double s =
            points == 1 ? cfg.s_start : cfg.s_start + (cfg.s_end - cfg.s_start) * i / (points - 1);
        const double g = gap(cfg.spec, s, cfg.spec.n_modes).value;
        for (Branch b : {Branch::plus, Branch::minus}) {
            for (int m = lo; m <= hi; ++m) {
                const EigenPair ep = exact_eigenvector(cfg.spec, s, b, m);
                text << format_number(s) << ',' << (b == Branch::plus ? "+" : "-") << ',' << m
                     << ',' << format_number(ep.value) << ',' << format_number(ep.dropped_mass)
                     << ',' << format_number(g) << '\n';
            }
        }
    }
    emit(text.str(), cfg, extra);
    return 0;
}

int Cli::crossings(const Command& c) {
    const SweepConfig cfg = effective_config(c);
    const auto [lo, hi] = parse_range(o_.k.empty() ? "2..6" : o_.k);
    if (lo < 1) {
        throw UsageError("crossings: k must be >= 1");
    }
    const Side side = parse_side(o_.side);
    const nlohmann::json extra = {{"k", std::to_string(lo) + ".." + std::to_string(hi)},
                                  {"side", to_string(side)}};
    echo(c, cfg, extra);
    std::ostringstream text;
    text << "k,z,u,u_asymptotic\n";
    for (int k = lo; k <= hi; ++k) {
        text << k << ',' << format_number(find_crossing(cfg.spec, k, side)) << ','
             << format_number(partition_u(cfg.spec, k, side)) << ','
             << format_number(u_asymptotic(cfg.spec, k, side)) << '\n';
    }
    emit(text.str(), cfg, extra);
    return 0;
}

int Cli::analyze(const Command& c) {
    const SweepConfig cfg = effective_config(c);
    const auto [lo, hi] = parse_range(o_.k.empty() ? "4..20" : o_.k);
    if (lo < 2) {
        throw UsageError("analyze: k must be >= 2");
    }
    const Side side = parse_side(o_.side);
    const nlohmann::json extra = {{"k", std::to_string(lo) + ".." + std::to_string(hi)},
                                  {"side", to_string(side)}};
    echo(c, cfg, extra);
    const CrossingLedger ledger = build_ledger(cfg.spec, lo, hi, side);
    std::ostringstream csv;
    write_ledger_csv(csv, ledger);
    emit(csv.str(), cfg, extra);
    bool h2 = true;
    for (const auto& r : ledger.records) {
        const bool ok = h2_holds(cfg.spec, r, r.alpha_hat);
        h2 = h2 && ok;
        out_ << "record k=" << r.k << " h1=" << (r.h1_ok ? "ok" : "FAIL")
             << " h2=" << (ok ? "ok" : "FAIL") << " alpha_hat=" << format_number(r.alpha_hat)
             << " G_k/k=" << format_number(r.G_k / r.k) << '\n';
    }
    out_ << "alpha=" << format_number(ledger.alpha) << '\n'
         << "h1_ok=" << (ledger.h1_ok() ? "true" : "false") << '\n'
         << "h2_ok=" << (h2 ? "true" : "false") << '\n';
    return 0;
}

int Cli::bound(const Command& c) {
    const SweepConfig cfg = effective_config(c);
    const auto [lo, hi] = parse_range(o_.k.empty() ? "3..30" : o_.k);
    if (lo < 2) {
        throw UsageError("bound: k must be >= 2");
    }
    const nlohmann::json extra = {{"eps", o_.eps},
                                  {"k", std::to_string(lo) + ".." + std::to_string(hi)},
                                  {"varsigma", o_.varsigma}};
    echo(c, cfg, extra);
    const CrossingLedger left = build_ledger(cfg.spec, lo, hi, Side::left);
    const CrossingLedger right = build_ledger(cfg.spec, lo, hi, Side::right);
    for (const auto* ledger : {&left, &right}) {
        const CrossingSequence seq = CrossingSequence::from_ledger(*ledger);
        const double power = 1.0 / (1.0 + 2.0 * seq.alpha);
        double sum = 0.0;
        for (std::size_t i = 0; i < seq.tau.size(); ++i) {
            sum += std::pow(seq.tau[i], power);
            const double ratio = seq.distance[i] / sum;
            out_ << "trace side=" << to_string(ledger->side) << " K=" << i + 1
                 << " k=" << ledger->records[i].k << " ratio=" << format_number(ratio)
                 << " target=" << format_number(std::pow(o_.eps, power))
                 << (ratio >= std::pow(o_.eps, power) ? " ok" : " stop") << '\n';
        }
    }
    const BoundReport report = theorem_bound(o_.eps, left, right, o_.varsigma);
    out_ << to_key_value(report);
    if (!o_.out.empty()) {
        emit(bound_csv_header() + "\n" + bound_csv_row(report) + "\n", cfg, extra);
    }
    return 0;
}

int Cli::exponent(const Command& c) {
    const ExponentReport r = exponent_p(o_.alpha, o_.beta, o_.gamma, o_.delta);
    const std::string text = to_key_value(r);
    out_ << "# adiacross exponent alpha=" << format_number(o_.alpha)
         << " beta=" << format_number(o_.beta) << " gamma=" << format_number(o_.gamma)
         << " delta=" << format_number(o_.delta) << '\n';
    if (o_.out.empty()) {
        out_ << text;
    } else {
        write_file(o_.out, text);
        out_ << "wrote " << o_.out << '\n';
    }
    (void)c;
    return 0;
}

int Cli::evolve(const Command& c) {
    const SweepConfig cfg = effective_config(c);
    PropagationConfig pc;
    pc.eps = o_.eps;
    pc.s_start = cfg.s_start;
    pc.s_end = cfg.s_end;
    pc.c_step = cfg.c_step;
    pc.integrator = cfg.integrator;
    pc.metric = cfg.metric;
    try {
        pc.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    const nlohmann::json extra = {{"eps", o_.eps}};
    echo(c, cfg, extra);
    const AdiabaticError e = adiabatic_error(cfg.spec, pc);
    out_ << "vector_deviation=" << format_number(e.vector_deviation) << '\n'
         << "transition_prob=" << format_number(e.transition_prob) << '\n'
         << "metric=" << to_string(cfg.metric) << " value=" << format_number(e.metric_value(cfg.metric))
         << '\n'
         << "unitarity_drift=" << format_number(std::max(e.exact.unitarity_drift,
                                                          e.adiabatic.unitarity_drift))
         << '\n'
         << "intertwine_residual=" << format_number(e.adiabatic.intertwine_residual) << '\n'
         << "max_edge_population="
         << format_number(std::max(e.exact.max_edge_population, e.adiabatic.max_edge_population))
         << '\n'
         << "steps=" << e.exact.steps << '\n'
         << "step_size=" << format_number(e.exact.step_size) << '\n';
    for (const auto& w : e.exact.warnings) {
        out_ << "warning=" << w << '\n';
    }
    if (!o_.out.empty()) {
        std::ostringstream csv;
        write_checkpoint_csv(csv, e.exact.log);
        emit(csv.str(), cfg, extra);
    }
    return 0;
}

int Cli::sweep(const Command& c) {
    const SweepConfig cfg = effective_config(c);
    try {
        cfg.validate();
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    echo(c, cfg, nlohmann::json::object());
    const SweepResult result = run_sweep(cfg);
    std::string csv_path = o_.out;
    if (csv_path.empty()) {
        std::filesystem::create_directories(cfg.output_dir);
        csv_path = (std::filesystem::path(cfg.output_dir) / "sweep.csv").string();
    }
    const std::string svg_path = std::filesystem::path(csv_path).replace_extension(".svg").string();
    export_csv(result, csv_path);
    render_svg(result, svg_path);
    write_file(csv_path + ".config.json", cfg.to_json() + "\n");
    for (const auto& r : result.rows) {
        out_ << "row eps=" << format_number(r.eps) << " error=" << format_number(r.error)
             << " flags=" << (r.flags.empty() ? "-" : r.flags.front()) << " " << r.diagnostics
             << '\n';
    }
    out_ << fit_summary(result) << "wrote " << csv_path << '\n' << "wrote " << svg_path << '\n';
    return 0;
}

int Cli::verify(const Command& c) {
    const SweepConfig cfg = effective_config(c);
    echo(c, cfg, {{"eps", o_.eps}});
    const ModelSpec& spec = cfg.spec;
    bool all = true;
    auto report = [&](const std::string& name, bool ok, const std::string& detail) {
        all = all && ok;
        out_ << (ok ? "PASS " : "FAIL ") << name << ' ' << detail << '\n';
    };

    std::mt19937_64 rng(20240601);
    std::uniform_real_distribution<double> dist(cfg.s_start, cfg.s_end);
    std::vector<double> samples;
    while (samples.size() < 20) {
        const double s = dist(rng);
        if (gap(spec, s, spec.n_modes).value > 1e-3) {
            samples.push_back(s);
        }
    }

    double herm = 0.0;
    double ladder = 0.0;
    double ortho = 0.0;
    double plp = 0.0;
    double qlq = 0.0;
    double comm = 0.0;
    double esr = 0.0;
    // Modes well inside the truncation, where the closed forms are exact.
    const int inner = std::max(1, spec.n_modes / 8);
    for (double s : samples) {
        const Matrix K = assemble_K(spec, s).entries;
        herm = std::max(herm, (K - K.adjoint()).norm());
        Matrix vecs(spec.dim(), 2 * (2 * inner + 1));
        int col = 0;
        for (Branch b : {Branch::plus, Branch::minus}) {
            for (int m = -inner; m <= inner; ++m) {
                const EigenPair ep = exact_eigenvector(spec, s, b, m);
                vecs.col(col++) = ep.vector;
                ladder = std::max(ladder, (K * ep.vector - ep.value * ep.vector).norm());
            }
        }
        const Matrix gram = vecs.adjoint() * vecs;
        ortho = std::max(ortho, (gram - Matrix::Identity(gram.rows(), gram.cols())).norm());

        const ProjectorData pd = projector_and_L(spec, s);
        const Matrix Q = Matrix::Identity(spec.dim(), spec.dim()) - pd.P;
        const double lnorm = pd.L.norm();
        plp = std::max(plp, (pd.P * pd.L * pd.P).norm());
        qlq = std::max(qlq, (Q * pd.L * Q).norm());
        const Matrix R = reduced_commutator_RL(spec, s, spec.n_modes);
        const Matrix lhs = R * K - K * R;
        const Matrix rhs = pd.L * pd.P - pd.P * pd.L;
        comm = std::max(comm, (lhs - rhs).norm() / std::max(lnorm, 1e-300));
        const double g = gap(spec, s, spec.n_modes).value;
        esr = std::max(esr, R.norm() / (2.0 * lnorm / g));
    }
    report("hermiticity", herm == 0.0, "max|K-K^*|=" + format_number(herm));
    report("ladder", ladder <= 1e-8, "max|K psi - lambda psi|=" + format_number(ladder));
    report("orthonormality", ortho <= 1e-10, "max|G-I|=" + format_number(ortho));
    report("diagonal_blocks", plp <= 1e-10 && qlq <= 1e-10,
           "|PLP|=" + format_number(plp) + " |QLQ|=" + format_number(qlq));
    report("reduced_commutator", comm <= 1e-8, "|[R,H]-[L,P]|/|L|=" + format_number(comm));
    report("reduced_commutator_norm", esr <= 1.0, "|R|/(2|L|/g)=" + format_number(esr));

    PropagationConfig pc;
    pc.eps = o_.eps;
    pc.s_start = cfg.s_start;
    pc.s_end = cfg.s_end;
    pc.integrator = cfg.integrator;
    const Vector psi0 = exact_eigenvector(spec, pc.s_start, Branch::plus, 0).vector;
    const EvolutionResult a = propagate_adiabatic(spec, pc, psi0);
    report("intertwining", a.intertwine_residual <= 1e-6,
           "max|(1-P)psi_A|=" + format_number(a.intertwine_residual));
    report("unitarity", a.unitarity_drift <= 1e-8, "drift=" + format_number(a.unitarity_drift));
    const EvolutionResult u1 = propagate_exact(spec, pc, psi0);
    PropagationConfig half = pc;
    half.fixed_h = 0.5 * policy_step(spec, pc);
    const EvolutionResult u2 = propagate_exact(spec, half, psi0);
    const double conv = (u1.psi - u2.psi).norm();
    report("self_convergence", conv <= 1e-6, "|psi_h - psi_h/2|=" + format_number(conv));

    for (Side side : {Side::left, Side::right}) {
        const CrossingLedger ledger = build_ledger(spec, 4, 20, side);
        bool h2 = true;
        for (const auto& r : ledger.records) {
            h2 = h2 && h2_holds(spec, r, r.alpha_hat);
        }
        report("H1_" + to_string(side), ledger.h1_ok(),
               "violations=" + std::to_string(ledger.h1_violations.size()));
        report("H2_" + to_string(side), h2, "alpha=" + format_number(ledger.alpha));
    }
    out_ << "verify=" << (all ? "pass" : "fail") << '\n';
    return all ? 0 : 1;
}

int Cli::main(const std::vector<std::string>& args) {
    CLI::App app{"Adiabatic error with accumulating crossings: two-level Floquet models.\n"
                 "Symbols: --omega0 = omega0 (level splitting), --omega-rabi = Omega (Rabi\n"
                 "frequency), --rho = rho0 (phase-modulation amplitude), varpi(s) = s.",
                 "adiacross"};
    app.require_subcommand(1);
    std::vector<Command> commands;
    commands.reserve(8);
    auto make = [&](const std::string& name, const std::string& help,
                    int (Cli::*fn)(const Command&)) -> Command& {
        Command cmd;
        cmd.app = app.add_subcommand(name, help);
        cmd.run = [this, fn](const Command& c) { return (this->*fn)(c); };
        commands.push_back(cmd);
        return commands.back();
    };

    {
        Command& c = make("spectrum", "eigenvalue table of the followed levels", &Cli::spectrum);
        add_model_options(c.app, o_, c.options);
        add_window_options(c.app, o_, c.options);
        c.options["k"] = c.app->add_option("--k", o_.k, "mode range a..b (default 0..2)");
        c.options["points"] = c.app->add_option("--points", o_.points, "s grid points");
    }
    {
        Command& c = make("crossings", "crossing times z_k and partition points u_k",
                          &Cli::crossings);
        add_model_options(c.app, o_, c.options);
        add_side_option(c.app, o_, c.options);
        c.options["k"] = c.app->add_option("--k", o_.k, "crossing range a..b (default 2..6)");
    }
    {
        Command& c = make("analyze", "crossing ledger with H1/H2 checks", &Cli::analyze);
        add_model_options(c.app, o_, c.options);
        add_side_option(c.app, o_, c.options);
        c.options["k"] = c.app->add_option("--k", o_.k, "crossing range a..b (default 4..20)");
    }
    {
        Command& c = make("bound", "theorem bound and K(eps) selector trace", &Cli::bound);
        add_model_options(c.app, o_, c.options);
        c.options["eps"] = c.app->add_option("--eps", o_.eps, "adiabatic parameter");
        c.options["k"] = c.app->add_option("--k", o_.k, "crossing range a..b (default 3..30)");
        c.options["varsigma"] =
            c.app->add_option("--varsigma", o_.varsigma, "offset factor (<= 0: automatic)");
    }
    {
        Command& c = make("exponent", "exponent p from (alpha, beta, gamma, delta)",
                          &Cli::exponent);
        c.options["alpha"] = c.app->add_option("--alpha", o_.alpha, "gap exponent");
        c.options["beta"] = c.app->add_option("--beta", o_.beta, "crossing accumulation rate");
        c.options["gamma"] = c.app->add_option("--gamma", o_.gamma, "gap constant growth G(k)");
        c.options["delta"] = c.app->add_option("--delta", o_.delta, "window length decay");
        c.options["out"] = c.app->add_option("--out", o_.out, "output file");
    }
    {
        Command& c = make("evolve", "single exact/adiabatic propagation", &Cli::evolve);
        add_model_options(c.app, o_, c.options);
        add_window_options(c.app, o_, c.options);
        add_evolve_options(c.app, o_, c.options);
        c.options["eps"] = c.app->add_option("--eps", o_.eps, "adiabatic parameter");
    }
    {
        Command& c = make("sweep", "eps sweep with power-law fit, CSV and SVG", &Cli::sweep);
        add_model_options(c.app, o_, c.options);
        add_window_options(c.app, o_, c.options);
        add_evolve_options(c.app, o_, c.options);
        c.options["eps-min"] = c.app->add_option("--eps-min", o_.eps_min, "smallest eps");
        c.options["eps-max"] = c.app->add_option("--eps-max", o_.eps_max, "largest eps");
        c.options["eps-points"] = c.app->add_option("--eps-points", o_.eps_points, "grid points");
        c.options["bound-overlay"] =
            c.app->add_flag("--bound-overlay", o_.bound_overlay, "add the theorem bound overlay");
        c.options["threads"] = c.app->add_option("--threads", o_.threads, "worker threads");
    }
    {
        Command& c = make("verify", "invariant suite with pass/fail per check", &Cli::verify);
        add_model_options(c.app, o_, c.options);
        add_window_options(c.app, o_, c.options);
        add_evolve_options(c.app, o_, c.options);
        c.options["eps"] = c.app->add_option("--eps", o_.eps, "adiabatic parameter");
    }

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out_, err_);
        return code == 0 ? 0 : 2;
    }
    for (const auto& c : commands) {
        if (c.app->parsed()) {
            name_ = c.app->get_name();
            try {
                return c.run(c);
            } catch (const UsageError& e) {
                err_ << "usage error: " << e.what() << '\n';
                return 2;
            } catch (const std::exception& e) {
                err_ << "error in " << name_ << ": " << e.what() << '\n';
                return 1;
            }
        }
    }
    return 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Cli cli(out, err);
    return cli.main(args);
}

}  // namespace adiacross
