#include "aqrm_cli/cli.hpp"
#include "aqrm_cli/output.hpp"
#include "aqrm_cli/verify.hpp"

#include <aqrm/aqrm.hpp>

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace aqrm::cli {

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    ModelParams params;
    std::string output = "-";
};

struct Sweep {
    double g_min = 0.0;
    double g_max = 1.0;
    int steps = 101;
    int levels = 8;
    int truncation = 200;

    std::vector<double> grid() const
    {
        if (!(g_min >= 0.0) || !(g_max > g_min))
            throw UsageError("need 0 <= g-min < g-max");
        std::vector<double> gs(steps);
        for (int k = 0; k < steps; ++k)
            gs[k] = steps == 1 ? g_min : g_min + (g_max - g_min) * k / (steps - 1);
        return gs;
    }
};

// Consumed by expand_config before parsing; registered so it shows in --help.
void add_config_option(CLI::App* sub)
{
    sub->add_option("--config", "key=value file (keys are long flag names); command-line flags take precedence");
}

std::string trim(const std::string& s)
{
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos)
        return {};
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

// Replaces --config FILE by one --key=value argument per line of FILE, placed
// right after the subcommand so explicit flags can be checked for precedence.
std::vector<std::string> expand_config(const std::vector<std::string>& args)
{
    std::vector<std::string> rest;
    std::string path;
    bool found = false;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config") {
            if (i + 1 >= args.size())
                throw UsageError("--config needs a file");
            path = args[++i];
            found = true;
        } else if (args[i].rfind("--config=", 0) == 0) {
            path = args[i].substr(9);
            found = true;
        } else {
            rest.push_back(args[i]);
        }
    }
    if (!found)
        return args;

    std::ifstream f(path);
    if (!f)
        throw UsageError("cannot read config file " + path);
    auto given = [&rest](const std::string& flag) {
        return std::any_of(rest.begin(), rest.end(),
                           [&](const std::string& a) { return a == flag || a.rfind(flag + "=", 0) == 0; });
    };
    std::vector<std::string> injected;
    std::string line;
    int lineno = 0;
    while (std::getline(f, line)) {
        ++lineno;
        line = trim(line);
        if (line.empty() || line[0] == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw UsageError(path + ":" + std::to_string(lineno) + ": expected key=value");
        std::string key = trim(line.substr(0, eq));
        while (!key.empty() && key[0] == '-')
            key.erase(0, 1);
        std::replace(key.begin(), key.end(), '_', '-');
        if (key.empty())
            throw UsageError(path + ":" + std::to_string(lineno) + ": empty key");
        if (!given("--" + key))
            injected.push_back("--" + key + "=" + trim(line.substr(eq + 1)));
    }
    const auto at = rest.empty() || rest[0].rfind("-", 0) == 0 ? rest.end() : rest.begin() + 1;
    rest.insert(at, injected.begin(), injected.end());
    return rest;
}

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--delta", c.params.delta, "level splitting")->capture_default_str();
    sub->add_option("--epsilon", c.params.epsilon, "asymmetry")->capture_default_str();
    sub->add_option("--omega", c.params.omega, "mode frequency")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("-o,--output", c.output, "output path, - for stdout")->capture_default_str();
    add_config_option(sub);
}

void add_sweep(CLI::App* sub, Sweep& s)
{
    sub->add_option("--g-min", s.g_min, "smallest coupling")->capture_default_str();
    sub->add_option("--g-max", s.g_max, "largest coupling")->capture_default_str();
    sub->add_option("--steps", s.steps, "couplings on the grid")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--levels", s.levels, "levels per coupling")->check(CLI::PositiveNumber)->capture_default_str();
    sub->add_option("--truncation", s.truncation, "initial photon cutoff")
        ->check(CLI::PositiveNumber)
        ->capture_default_str();
}

std::vector<Branch> branches(const std::string& text)
{
    if (text == "both")
        return {Branch::plus, Branch::minus};
    try {
        return {parse_branch(text.c_str())};
    } catch (const InvalidArgument&) {
        throw UsageError("branch must be plus, minus or both");
    }
}

Branch one_branch(const std::string& text)
{
    const auto b = branches(text);
    if (b.size() != 1)
        throw UsageError("this command takes a single branch");
    return b.front();
}

const char* branch_word(Branch b)
{
    return b == Branch::plus ? "plus" : "minus";
}

Json params_json(const ModelParams& p, bool with_g)
{
    Json j;
    j["delta"] = rounded(p.delta);
    j["epsilon"] = rounded(p.epsilon);
    j["omega"] = rounded(p.omega);
    if (with_g)
        j["g"] = rounded(p.g);
    return j;
}

Json complex_list(const std::vector<cplx>& zs)
{
    Json a = Json::array();
    for (const auto& z : zs)
        a.push_back({{"re", rounded(z.real())}, {"im", rounded(z.imag())}});
    return a;
}

QesPoint pick_point(const ModelParams& p, int n, Branch b, int index)
{
    const auto set = qes_points(p, n, b);
    if (set.points.empty())
        throw UsageError("no QES point for n = " + std::to_string(n) + " on branch " + branch_word(b));
    if (index < 0 || index >= static_cast<int>(set.points.size()))
        throw UsageError("index " + std::to_string(index) + " out of range; " + std::to_string(set.points.size()) +
                         " point(s), valid 0.." + std::to_string(set.points.size() - 1));
    return set.points[index];
}

// ---- qes-points

struct QesPointsArgs {
    Common common;
    int n_max = 5;
    std::string branch = "both";
    std::string format = "csv";
};

int cmd_qes_points(const QesPointsArgs& a, std::ostream& out, std::ostream& err)
{
    if (a.n_max > max_constraint_degree)
        throw UsageError("n-max above " + std::to_string(max_constraint_degree) + " is not supported");
    const ModelParams& p = a.common.params;
    CsvTable table({"n", "branch", "g", "E", "E_plus_g2", "constraint_residual"});
    Json rows = Json::array();
    bool degenerate = false;
    for (int n = 1; n <= a.n_max; ++n) {
        for (Branch b : branches(a.branch)) {
            const auto set = qes_points(p, n, b);
            degenerate = degenerate || set.degenerate_atomic_limit;
            for (const auto& q : set.points) {
                const double lifted = rescaled_level(q.energy, q.g, p.omega);
                table.add_row({std::to_string(n), to_string(b), format_number(q.g), format_number(q.energy),
                               format_number(lifted), format_number(q.constraint_residual)});
                rows.push_back({{"n", n},
                                {"branch", branch_word(b)},
                                {"g", rounded(q.g)},
                                {"E", rounded(q.energy)},
                                {"E_plus_g2", rounded(lifted)},
                                {"constraint_residual", rounded(q.constraint_residual)}});
            }
        }
    }
    if (degenerate)
        err << "note: delta = 0 is the degenerate atomic limit; its Juddian family solves the Q truncation, "
               "not P_n = 0, so no roots are listed\n";
    if (a.format == "json") {
        Json j;
        j["params"] = params_json(p, false);
        j["degenerate_atomic_limit"] = degenerate;
        j["points"] = std::move(rows);
        write_output(a.common.output, dump(j), out);
    } else {
        write_output(a.common.output, table.str(), out);
    }
    return exit_ok;
}

// ---- spectrum

struct SpectrumArgs {
    Common common;
    Sweep sweep;
    std::string crossings;
};

int cmd_spectrum(const SpectrumArgs& a, std::ostream& out)
{
    const ModelParams& p = a.common.params;
    p.validate();
    if (!a.crossings.empty() && p.epsilon != 0.0)
        throw UsageError("--crossings needs epsilon = 0 (exact crossings only exist in the symmetric model)");
    std::vector<std::string> header{"g"};
    for (int i = 0; i < a.sweep.levels; ++i)
        header.push_back("level_" + std::to_string(i));
    CsvTable table(header);
    for (double g : a.sweep.grid()) {
        const auto s = regular_spectrum(p.with_g(g), a.sweep.levels, std::max(a.sweep.truncation, a.sweep.levels + 50));
        std::vector<double> row{g};
        for (double e : s.values())
            row.push_back(rescaled_level(e, g, p.omega));
        table.add_row(row);
    }
    if (!a.crossings.empty()) {
        if (a.sweep.steps < 2)
            throw UsageError("--crossings needs steps >= 2");
        CsvTable c({"g", "E", "E_plus_g2", "n", "even_index", "odd_index"});
        for (const auto& x : symmetric_crossings(p, a.sweep.g_min, a.sweep.g_max, a.sweep.steps, a.sweep.levels,
                                                 std::max(a.sweep.truncation, a.sweep.levels + 50))) {
            const double lifted = rescaled_level(x.energy, x.g, p.omega);
            c.add_row({format_number(x.g), format_number(x.energy), format_number(lifted),
                       std::to_string(static_cast<long>(std::lround(lifted / p.omega))),
                       std::to_string(x.even_index), std::to_string(x.odd_index)});
        }
        write_output(a.crossings, c.str(), out);
    }
    write_output(a.common.output, table.str(), out);
    return exit_ok;
}

// ---- pt-energies

struct PtArgs {
    Common common;
    Sweep sweep;
    std::string branch = "both";
    std::string format = "csv";
    std::string markers;
    int n_max = 5;
};

int cmd_pt_energies(const PtArgs& a, std::ostream& out)
{
    const ModelParams& p = a.common.params;
    p.validate();
    if (a.n_max > max_constraint_degree)
        throw UsageError("n-max above " + std::to_string(max_constraint_degree) + " is not supported");
    const auto bs = branches(a.branch);
    const auto gs = a.sweep.grid();
    const double w2 = p.omega * p.omega;

    std::vector<std::string> header{"g"};
    for (Branch b : bs)
        for (int i = 0; i < a.sweep.levels; ++i)
            header.push_back(std::string("calE_") + branch_word(b) + "_" + std::to_string(i));
    CsvTable table(header);
    Json curves;
    for (Branch b : bs)
        curves[branch_word(b)] = Json::array();
    for (double g : gs) {
        const ModelParams pg = p.with_g(g);
        const auto levels =
            regular_spectrum(pg, a.sweep.levels, std::max(a.sweep.truncation, a.sweep.levels + 50)).values();
        std::vector<double> row{g};
        for (Branch b : bs) {
            Json col = Json::array();
            for (double e : levels) {
                const double c = full_energy(pg, e, b);
                row.push_back(c);
                col.push_back(rounded(c));
            }
            curves[branch_word(b)].push_back(std::move(col));
        }
        table.add_row(row);
    }

    CsvTable marks({"n", "branch", "g", "calE"});
    Json jmarks = Json::array();
    for (int n = 1; n <= a.n_max; ++n) {
        for (Branch b : bs) {
            for (const auto& q : qes_points(p, n, b).points) {
                if (q.g < a.sweep.g_min || q.g > a.sweep.g_max)
                    continue;
                const double c = -p.delta * p.delta / w2 - 2.0 * n * q.g * q.g / w2;
                marks.add_row({std::to_string(n), to_string(b), format_number(q.g), format_number(c)});
                jmarks.push_back({{"n", n}, {"branch", branch_word(b)}, {"g", rounded(q.g)}, {"calE", rounded(c)}});
            }
        }
    }
    if (!a.markers.empty())
        write_output(a.markers, marks.str(), out);

    if (a.format == "json") {
        Json j;
        j["params"] = params_json(p, false);
        Json jg = Json::array();
        for (double g : gs)
            jg.push_back(rounded(g));
        j["g"] = std::move(jg);
        j["curves"] = std::move(curves);
        j["qes_markers"] = std::move(jmarks);
        write_output(a.common.output, dump(j), out);
    } else {
        write_output(a.common.output, table.str(), out);
    }
    return exit_ok;
}

// ---- bethe

struct BetheArgs {
    Common common;
    int n = 1;
    std::string branch = "plus";
    int index = 0;
};

int cmd_bethe(const BetheArgs& a, std::ostream& out)
{
    const Branch b = one_branch(a.branch);
    const QesPoint q = pick_point(a.common.params, a.n, b, a.index);
    const ModelParams p = a.common.params.with_g(q.g);
    const BetheRoots r = solve_bethe(p, a.n, b);
    const GaudinParams gp = to_gaudin(r);
    const double identity = -p.delta * p.delta / (p.omega * p.omega) - 2.0 * a.n * p.g * p.g / (p.omega * p.omega);

    Json j;
    j["n"] = a.n;
    j["branch"] = branch_word(b);
    j["index"] = a.index;
    j["params"] = params_json(p, true);
    j["energy"] = rounded(q.energy);
    j["roots"] = complex_list(r.roots);
    j["gaudin"] = {{"A", rounded(gp.A)},
                   {"B", rounded(gp.B)},
                   {"C", rounded(gp.C)},
                   {"gamma", rounded(gp.gamma)},
                   {"M", gp.M},
                   {"v", complex_list(gp.v)}};
    j["calE"] = rounded(gp.calE);
    j["residuals"] = {{"bethe", rounded(r.residual_norm)},
                      {"constraint", rounded(r.constraint_residual)},
                      {"route_agreement", rounded(r.route_agreement)},
                      {"energy_identity", rounded(std::abs(gp.calE - identity))}};
    write_output(a.common.output, dump(j), out);
    return exit_ok;
}

// ---- potential

struct PotentialArgs {
    Common common;
    std::string kind = "qes";
    std::string branch = "plus";
    int n = 1;
    int index = 0;
    std::optional<double> g;
    std::optional<double> energy;
    double x_min = 0.3;
    double x_max = 6.0;
    int samples = 100;
    std::string form = "partial_fraction";
    bool psi = false;
};

int cmd_potential(const PotentialArgs& a, std::ostream& out)
{
    if (!(a.x_min > 0.0) || !(a.x_max >= a.x_min))
        throw UsageError("need 0 < x-min <= x-max");
    const Branch b = one_branch(a.branch);
    const PotentialForm form = a.form == "hyperbolic" ? PotentialForm::hyperbolic : PotentialForm::partial_fraction;
    ModelParams p = a.common.params;

    std::function<double(double)> V, Psi;
    if (a.kind == "full") {
        if (a.psi)
            throw UsageError("--psi is only available for kind qes or gaudin");
        double E;
        if (a.energy) {
            p.g = a.g.value_or(0.0);
            E = *a.energy;
        } else {
            if (a.g)
                throw UsageError("kind full needs --energy, or --n/--index without --g to use a Juddian energy");
            const QesPoint q = pick_point(p, a.n, b, a.index);
            p.g = q.g;
            E = q.energy;
        }
        V = [p, E, b, form](double x) { return full_potential(p, E, b, x, form); };
    } else if (a.kind == "qes" || a.kind == "gaudin") {
        if (a.energy)
            throw UsageError("--energy applies to kind full only");
        if (a.g) {
            if (a.psi || a.kind == "gaudin")
                throw UsageError("Bethe data need a QES coupling; drop --g and select one with --index");
            p.g = *a.g;
        } else {
            p.g = pick_point(p, a.n, b, a.index).g;
        }
        if (a.kind == "qes") {
            const int n = a.n;
            V = [p, n, b, form](double x) { return qes_potential(p, n, b, x, form); };
        }
        if (a.psi || a.kind == "gaudin") {
            const GaudinParams gp = to_gaudin(solve_bethe(p, a.n, b));
            if (a.kind == "gaudin")
                V = [gp](double x) { return gaudin_potential(gp, x); };
            if (a.kind == "gaudin")
                Psi = [gp](double x) { return gaudin_wavefunction(gp, x); };
            else
                Psi = [p, n = a.n, b, v = gp.v](double x) { return qes_wavefunction(p, n, b, v, x); };
        }
    } else {
        throw UsageError("kind must be qes, full or gaudin");
    }

    std::vector<std::string> header{"x", "V"};
    if (a.psi)
        header.push_back("psi");
    CsvTable table(header);
    for (int k = 0; k < a.samples; ++k) {
        const double x = a.samples == 1 ? a.x_min : a.x_min + (a.x_max - a.x_min) * k / (a.samples - 1);
        std::vector<double> row{x, V(x)};
        if (a.psi)
            row.push_back(Psi(x));
        table.add_row(row);
    }
    write_output(a.common.output, table.str(), out);
    return exit_ok;
}

// ---- verify

struct VerifyArgs {
    VerifyOptions opts;
    std::string report = "-";
    bool no_timings = false;
};

int cmd_verify(VerifyArgs a, std::ostream& out, std::ostream& err)
{
    if (a.opts.n_max < 1 || a.opts.n_max > 5)
        throw UsageError("n-max must be in 1..5");
    if (!(a.opts.tol_scale >= 0.0))
        throw UsageError("tol-scale must be non-negative");
    a.opts.timings = !a.no_timings;
    const Json report = run_verify(a.opts);
    write_output(a.report, dump(report), out);
    if (report["passed"].get<bool>())
        return exit_ok;
    for (const auto& c : report["checks"])
        if (!c["passed"].get<bool>())
            err << "FAILED: " << c["name"].get<std::string>() << "\n";
    return exit_failure;
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exceptional (QES) spectrum of the asymmetric quantum Rabi model", "aqrm"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "expand all help");

    QesPointsArgs qa;
    auto* qes = app.add_subcommand("qes-points", "Juddian couplings and energies");
    add_common(qes, qa.common);
    qes->add_option("--n-max", qa.n_max, "largest level n")->check(CLI::PositiveNumber)->capture_default_str();
    qes->add_option("--branch", qa.branch, "plus, minus or both")->capture_default_str();
    qes->add_option("--format", qa.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();

    SpectrumArgs sa;
    auto* spec = app.add_subcommand("spectrum", "regular spectrum as E + g^2/omega over a coupling grid");
    add_common(spec, sa.common);
    add_sweep(spec, sa.sweep);
    spec->add_option("--crossings", sa.crossings, "also write exact parity crossings here (epsilon = 0)");

    PtArgs pa;
    auto* pt = app.add_subcommand("pt-energies", "Schroedinger energies calE of the regular levels");
    add_common(pt, pa.common);
    add_sweep(pt, pa.sweep);
    pt->add_option("--branch", pa.branch, "plus, minus or both")->capture_default_str();
    pt->add_option("--format", pa.format, "csv or json")->check(CLI::IsMember({"csv", "json"}))->capture_default_str();
    pt->add_option("--markers", pa.markers, "write QES markers (n, branch, g, calE) here");
    pt->add_option("--n-max", pa.n_max, "largest level for markers")->check(CLI::PositiveNumber)->capture_default_str();

    BetheArgs ba;
    auto* bethe = app.add_subcommand("bethe", "Bethe roots and Gaudin data at one QES point");
    add_common(bethe, ba.common);
    bethe->add_option("--n", ba.n, "level n")->check(CLI::PositiveNumber)->capture_default_str();
    bethe->add_option("--branch", ba.branch, "plus or minus")->capture_default_str();
    bethe->add_option("--index", ba.index, "QES point index, ascending in g")->capture_default_str();

    PotentialArgs va;
    auto* pot = app.add_subcommand("potential", "tabulate V(x) and optionally psi(x)");
    add_common(pot, va.common);
    pot->add_option("--kind", va.kind, "qes, full or gaudin")
        ->check(CLI::IsMember({"qes", "full", "gaudin"}))
        ->capture_default_str();
    pot->add_option("--branch", va.branch, "plus or minus")->capture_default_str();
    pot->add_option("--n", va.n, "level n")->check(CLI::PositiveNumber)->capture_default_str();
    pot->add_option("--index", va.index, "QES point index")->capture_default_str();
    pot->add_option("--g", va.g, "coupling; defaults to the selected QES point");
    pot->add_option("--energy", va.energy, "regular energy E (kind full)");
    pot->add_option("--x-min", va.x_min, "first sample")->capture_default_str();
    pot->add_option("--x-max", va.x_max, "last sample")->capture_default_str();
    pot->add_option("--samples", va.samples, "sample count")->check(CLI::PositiveNumber)->capture_default_str();
    pot->add_option("--form", va.form, "partial_fraction or hyperbolic")
        ->check(CLI::IsMember({"partial_fraction", "hyperbolic"}))
        ->capture_default_str();
    pot->add_flag("--psi", va.psi, "add the closed-form wavefunction column");

    VerifyArgs ya;
    auto* ver = app.add_subcommand("verify", "run every check suite, write a JSON report");
    ver->add_option("--n-max", ya.opts.n_max, "largest level")->capture_default_str();
    ver->add_option("--seed", ya.opts.seed, "seed for random parameter draws")->capture_default_str();
    ver->add_option("--report", ya.report, "report path, - for stdout")->capture_default_str();
    ver->add_option("--tol-scale", ya.opts.tol_scale, "multiply every tolerance")->capture_default_str();
    ver->add_flag("--no-timings", ya.no_timings, "omit timings so reports compare byte for byte");
    add_config_option(ver);

    std::vector<std::string> expanded;
    try {
        expanded = expand_config(args);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    std::vector<const char*> argv{"aqrm"};
    for (const auto& s : expanded)
        argv.push_back(s.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return exit_ok;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return exit_ok;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << "\n";
        if (!app.get_subcommands().empty())
            err << "run 'aqrm " << app.get_subcommands().front()->get_name() << " --help' for usage\n";
        return exit_usage;
    }

    try {
        if (qes->parsed())
            return cmd_qes_points(qa, out, err);
        if (spec->parsed())
            return cmd_spectrum(sa, out);
        if (pt->parsed())
            return cmd_pt_energies(pa, out);
        if (bethe->parsed())
            return cmd_bethe(ba, out);
        if (pot->parsed())
            return cmd_potential(va, out);
        if (ver->parsed())
            return cmd_verify(ya, out, err);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const InvalidArgument& e) {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return exit_failure;
    }
    return exit_usage;
}

} // namespace aqrm::cli
