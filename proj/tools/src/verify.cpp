#include "aqrm_cli/verify.hpp"

#include <aqrm/aqrm.hpp>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <functional>
#include <random>
#include <string>

namespace aqrm::cli {

namespace {

const ModelParams reference{1.2, 0.3, 1.0, 0.0};

struct Outcome {
    double error = 0.0;      // worst deviation seen
    double tolerance = 0.0;  // already scaled
    bool exact = false;      // integer check; tolerance ignored
    bool ok = true;
    std::string detail;
};

// [0, 1) from the top 53 bits, identical on every standard library
double unit(std::mt19937_64& rng)
{
    return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

struct QesState {
    QesPoint point;
    BetheRoots roots;
};

std::vector<QesState> solved_points(int n_max)
{
    std::vector<QesState> out;
    for (int n = 1; n <= n_max; ++n)
        for (Branch b : {Branch::plus, Branch::minus})
            for (const auto& q : qes_points(reference, n, b).points)
                out.push_back({q, solve_bethe(reference.with_g(q.g), n, b)});
    return out;
}

Outcome check_counts(int n_max)
{
    Outcome o;
    o.exact = true;
    for (int n = 1; n <= n_max; ++n) {
        const auto plus = qes_points(reference, n, Branch::plus).points.size();
        const auto minus = qes_points(reference, n, Branch::minus).points.size();
        if (plus != static_cast<std::size_t>(n) || minus != static_cast<std::size_t>(n - 1)) {
            o.ok = false;
            o.detail += "n=" + std::to_string(n) + ": " + std::to_string(plus) + "/" + std::to_string(minus) + "; ";
        }
    }
    return o;
}

Outcome check_juddian(const std::vector<QesState>& pts, double tol)
{
    Outcome o;
    o.tolerance = tol;
    for (const auto& s : pts) {
        const int count = 2 * s.point.n + 6;
        const auto levels = regular_spectrum(reference.with_g(s.point.g), count, std::max(200, count + 50)).values();
        double best = INFINITY;
        for (double e : levels)
            best = std::min(best, std::abs(e - s.point.energy));
        o.error = std::max(o.error, best);
    }
    const auto n1 = qes_points(reference, 1, Branch::plus).points;
    if (n1.size() != 1 || std::abs(n1[0].g - 0.2) > 1e-12) {
        o.ok = false;
        o.detail = "n=1 point not at g = 0.2";
    }
    o.ok = o.ok && o.error <= tol;
    return o;
}

Outcome check_bethe(const std::vector<QesState>& pts, double tol)
{
    Outcome o;
    o.tolerance = tol;
    for (const auto& s : pts) {
        const auto& r = s.roots;
        const double g = s.point.g, n = s.point.n;
        const double energy = std::abs(to_gaudin(r, INFINITY).calE - (-reference.delta * reference.delta - 2 * n * g * g));
        o.error = std::max({o.error, r.residual_norm, r.constraint_residual, r.route_agreement, energy});
        if (s.point.n == 1 && s.point.branch == Branch::plus) {
            const double dz = std::abs(r.roots[0] - cplx(-3.8, 0.0));
            if (dz > 1e-10 * (tol / 1e-8)) {
                o.ok = false;
                o.detail = "z_1 off -3.8 by " + format_number(dz);
            }
        }
    }
    o.ok = o.ok && o.error <= tol;
    return o;
}

Outcome check_qp(std::uint64_t seed, double tol)
{
    Outcome o;
    o.tolerance = tol;
    std::mt19937_64 rng(seed);
    int drawn = 0;
    while (drawn < 100) {
        ModelParams p;
        p.delta = -2.0 + 4.0 * unit(rng);
        p.epsilon = -0.45 + 0.9 * unit(rng);
        p.omega = 1.0;
        p.g = unit(rng);
        const int n = 1 + static_cast<int>(8 * unit(rng));
        const Branch b = unit(rng) < 0.5 ? Branch::plus : Branch::minus;
        // keep 2 eps' + (n - k) omega away from zero for k = 0..n
        if (std::abs(2 * sign(b) * p.epsilon) < 0.05)
            continue;
        o.error = std::max(o.error, qp_proportionality_residual(n, p, b));
        ++drawn;
    }
    o.ok = o.error <= tol;
    return o;
}

Outcome check_symmetric_polynomial(const std::vector<QesState>& pts, double tol)
{
    Outcome o;
    o.tolerance = tol;
    for (const auto& s : pts) {
        const auto rec = q_sequence_truncated(s.point.n, reference.with_g(s.point.g), s.point.branch);
        const auto fr = q_from_roots(s.roots);
        for (int k = 0; k <= s.point.n; ++k) {
            const double a = rec.values[k] / rec.values[0];
            const double b = fr.q.values[k] / fr.q.values[0];
            o.error = std::max(o.error, std::abs(a - b) / std::max(1.0, std::abs(a)));
        }
    }
    o.ok = o.error <= tol;
    return o;
}

Outcome check_residual(const std::vector<QesState>& pts, double tol)
{
    Outcome o;
    o.tolerance = tol;
    const Grid grid = Grid::uniform(0.3, 6.0, 300);
    for (const auto& s : pts) {
        const ModelParams p = reference.with_g(s.point.g);
        const auto gp = to_gaudin(s.roots);
        const int n = s.point.n;
        const Branch b = s.point.branch;
        const double r = residual_check_extended([&](long double x) { return qes_potential(p, n, b, x); },
                                                 [&](long double x) { return qes_wavefunction(p, n, b, gp.v, x); },
                                                 gp.calE, grid);
        o.error = std::max(o.error, r);
    }
    o.ok = o.error <= tol;
    return o;
}

Outcome check_equivalence(double tol)
{
    Outcome o;
    o.tolerance = tol;
    for (double g : {0.4, 0.7, 1.0}) {
        const ModelParams p = reference.with_g(g);
        const auto oracle = regular_spectrum(p, 5).values();
        const double lo = oracle[0] - 1.0;
        const double hi = oracle[3] + 0.5 * (oracle[4] - oracle[3]);
        for (Branch b : {Branch::plus, Branch::minus}) {
            const auto scan = eigenvalue_scan(p, b, lo, hi, 300);
            if (scan.levels.size() < 4) {
                o.ok = false;
                o.detail += "g=" + format_number(g) + " " + to_string(b) + ": " +
                            std::to_string(scan.levels.size()) + " levels; ";
                continue;
            }
            for (int i = 0; i < 4; ++i)
                o.error = std::max(o.error, std::abs(scan.levels[i].energy - oracle[i]));
        }
    }
    o.ok = o.ok && o.error <= tol;
    return o;
}

Outcome check_symmetric_model(double tol)
{
    Outcome o;
    o.tolerance = tol;
    const ModelParams p = reference.with_epsilon(0.0);
    for (int n = 1; n <= 8; ++n) {
        const auto a = constraint_poly_coefficients(n, p.delta * p.delta, p.epsilon, p.omega);
        const auto b = constraint_poly_coefficients(n, p.delta * p.delta, -p.epsilon, p.omega);
        if (a != b) {
            o.ok = false;
            o.detail = "branch polynomials differ at n=" + std::to_string(n);
        }
    }
    const auto crossings = symmetric_crossings(p, 0.0, 1.0, 101, 6);
    if (crossings.empty()) {
        o.ok = false;
        o.detail += "no crossings found; ";
    }
    for (const auto& c : crossings) {
        const double lifted = rescaled_level(c.energy, c.g, p.omega);
        const double n = std::round(lifted);
        const ModelParams pc = p.with_g(c.g);
        const double plus = full_energy(pc, c.energy, Branch::plus);
        const double minus = full_energy(pc, c.energy, Branch::minus);
        const double marker = -p.delta * p.delta - 2 * n * c.g * c.g;
        o.error = std::max({o.error, std::abs(lifted - n), std::abs(plus - minus), std::abs(plus - marker)});
        if (n < 2) {
            o.ok = false;
            o.detail += "crossing below the n = 2 line; ";
        }
    }
    o.ok = o.ok && o.error <= tol;
    return o;
}

Outcome check_fd_oracle(double tol)
{
    Outcome o;
    o.tolerance = tol;
    const auto ho = fd_eigensolve([](double x) { return x * x; }, -10.0, 10.0, FdBoundary::dirichlet, 3);
    const auto well =
        fd_eigensolve([](double x) { return -6.0 / (std::cosh(x) * std::cosh(x)); }, -15.0, 15.0, FdBoundary::dirichlet, 2);
    const double exact_ho[] = {1.0, 3.0, 5.0};
    const double exact_well[] = {-4.0, -1.0};
    for (int i = 0; i < 3; ++i)
        o.error = std::max(o.error, std::abs(ho[i] - exact_ho[i]));
    for (int i = 0; i < 2; ++i)
        o.error = std::max(o.error, std::abs(well[i] - exact_well[i]));
    o.ok = o.error <= tol;
    return o;
}

Outcome check_potential_forms(std::uint64_t seed, double tol)
{
    Outcome o;
    o.tolerance = tol;
    std::mt19937_64 rng(seed ^ 0x5bd1e995u);
    for (int i = 0; i < 1000; ++i) {
        ModelParams p;
        p.delta = -2.0 + 4.0 * unit(rng);
        p.epsilon = -0.45 + 0.9 * unit(rng);
        p.omega = 1.0;
        p.g = unit(rng);
        const Branch b = unit(rng) < 0.5 ? Branch::plus : Branch::minus;
        const double x = 0.2 + 7.8 * unit(rng);
        const int n = 1 + static_cast<int>(5 * unit(rng));
        const double E = -2.0 + 8.0 * unit(rng);
        const double q1 = qes_potential(p, n, b, x, PotentialForm::partial_fraction);
        const double q2 = qes_potential(p, n, b, x, PotentialForm::hyperbolic);
        const double f1 = full_potential(p, E, b, x, PotentialForm::partial_fraction);
        const double f2 = full_potential(p, E, b, x, PotentialForm::hyperbolic);
        o.error = std::max(o.error, std::abs(q1 - q2) / std::max(1.0, std::abs(q1)));
        o.error = std::max(o.error, std::abs(f1 - f2) / std::max(1.0, std::abs(f1)));
    }
    o.ok = o.error <= tol;
    return o;
}

} // namespace

Json run_verify(const VerifyOptions& opts)
{
    Json report;
    report["seed"] = opts.seed;
    report["n_max"] = opts.n_max;
    report["tol_scale"] = rounded(opts.tol_scale);
    report["params"] = {{"delta", reference.delta}, {"epsilon", reference.epsilon}, {"omega", reference.omega}};
    Json checks = Json::array();
    bool all = true;
    const double s = opts.tol_scale;

    std::vector<QesState> pts;
    auto run = [&](const std::string& name, const std::function<Outcome()>& fn) {
        Json c;
        c["name"] = name;
        const auto t0 = std::chrono::steady_clock::now();
        try {
            const Outcome o = fn();
            c["passed"] = o.ok;
            if (!o.exact) {
                c["max_error"] = rounded(o.error);
                c["tolerance"] = rounded(o.tolerance);
            }
            if (!o.detail.empty())
                c["detail"] = o.detail;
            all = all && o.ok;
        } catch (const std::exception& e) {
            c["passed"] = false;
            c["error"] = e.what();
            all = false;
        }
        if (opts.timings)
            c["seconds"] = rounded(std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
        checks.push_back(std::move(c));
    };

    run("qes_counts", [&] { return check_counts(opts.n_max); });
    run("bethe_solve", [&] {
        pts = solved_points(opts.n_max);
        Outcome o;
        o.exact = true;
        return o;
    });
    run("juddian_consistency", [&] { return check_juddian(pts, 1e-6 * s); });
    run("bethe_constraint_energy", [&] { return check_bethe(pts, 1e-8 * s); });
    run("qp_proportionality", [&] { return check_qp(opts.seed, 1e-10 * s); });
    run("symmetric_polynomial", [&] { return check_symmetric_polynomial(pts, 1e-6 * s); });
    run("potential_forms", [&] { return check_potential_forms(opts.seed, 1e-11 * s); });
    run("schrodinger_residual", [&] { return check_residual(pts, 1e-6 * s); });
    run("spectral_equivalence", [&] { return check_equivalence(1e-4 * s); });
    run("symmetric_model", [&] { return check_symmetric_model(1e-6 * s); });
    run("fd_oracle", [&] { return check_fd_oracle(1e-6 * s); });

    report["checks"] = std::move(checks);
    report["passed"] = all;
    return report;
}

} // namespace aqrm::cli
