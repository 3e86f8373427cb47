#include "aqrm/bethe.hpp"

#include "aqrm/errors.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>

namespace aqrm {
namespace {

void check_level(int n, const ModelParams& p)
{
    p.validate();
    if (n < 1)
        throw InvalidArgument("Bethe level n must be >= 1");
    if (!(p.g > 0.0))
        throw InvalidArgument("Bethe roots need g > 0");
}

double max_abs(const std::vector<cplx>& v)
{
    double m = 0.0;
    for (const auto& c : v)
        m = std::max(m, std::abs(c));
    return m;
}

// f and f' by Horner, ascending coefficients
std::pair<cplx, cplx> horner2(const std::vector<double>& c, cplx u)
{
    cplx f = 0.0, df = 0.0;
    for (auto it = c.rbegin(); it != c.rend(); ++it) {
        df = df * u + f;
        f = f * u + *it;
    }
    return {f, df};
}

// Hungarian algorithm, square cost matrix; returns column assigned to each row
std::vector<int> assign(const std::vector<std::vector<double>>& cost)
{
    const int n = static_cast<int>(cost.size());
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> u(n + 1), v(n + 1);
    std::vector<int> p(n + 1), way(n + 1);
    for (int i = 1; i <= n; ++i) {
        p[0] = i;
        int j0 = 0;
        std::vector<double> minv(n + 1, inf);
        std::vector<char> used(n + 1, false);
        do {
            used[j0] = true;
            const int i0 = p[j0];
            double delta = inf;
            int j1 = 0;
            for (int j = 1; j <= n; ++j) {
                if (used[j])
                    continue;
                const double cur = cost[i0 - 1][j - 1] - u[i0] - v[j];
                if (cur < minv[j]) {
                    minv[j] = cur;
                    way[j] = j0;
                }
                if (minv[j] < delta) {
                    delta = minv[j];
                    j1 = j;
                }
            }
            for (int j = 0; j <= n; ++j) {
                if (used[j]) {
                    u[p[j]] += delta;
                    v[j] -= delta;
                } else {
                    minv[j] -= delta;
                }
            }
            j0 = j1;
        } while (p[j0] != 0);
        do {
            const int j1 = way[j0];
            p[j0] = p[j1];
            j0 = j1;
        } while (j0);
    }
    std::vector<int> row(n);
    for (int j = 1; j <= n; ++j)
        row[p[j] - 1] = j - 1;
    return row;
}

std::string describe(const std::vector<cplx>& z)
{
    std::ostringstream os;
    os.precision(10);
    os << "[";
    for (std::size_t i = 0; i < z.size(); ++i)
        os << (i ? ", " : "") << z[i].real() << (z[i].imag() < 0 ? "" : "+") << z[i].imag() << "i";
    os << "]";
    return os.str();
}

} // namespace

void sort_roots(std::vector<cplx>& roots)
{
    std::sort(roots.begin(), roots.end(), [](const cplx& a, const cplx& b) {
        if (a.real() != b.real())
            return a.real() < b.real();
        return a.imag() < b.imag();
    });
}

std::vector<cplx> bethe_residuals(const std::vector<cplx>& z, const ModelParams& p, int n, Branch branch)
{
    p.validate();
    if (static_cast<int>(z.size()) != n)
        throw InvalidArgument("number of roots must equal n");
    const double w = p.omega, g = p.g, s = sign(branch);
    const double num_a = n * w * w + 2 * s * p.epsilon * w;
    const double num_b = n * w * w - w * w;
    std::vector<cplx> out(n);
    for (int i = 0; i < n; ++i) {
        const cplx da = w * z[i] - s * g, db = w * z[i] + s * g;
        if (da == 0.0 || (num_b != 0.0 && db == 0.0))
            throw BetheError("root " + std::to_string(i) + " sits on a pole omega z = +-g", i);
        cplx lhs = 0.0;
        for (int j = 0; j < n; ++j) {
            if (j == i)
                continue;
            if (z[i] == z[j])
                throw BetheError("coincident roots " + std::to_string(i) + " and " + std::to_string(j), i, j);
            lhs += 2 * w / (z[i] - z[j]);
        }
        cplx rhs = num_a / da + 2 * s * g;
        if (num_b != 0.0)
            rhs += num_b / db;
        out[i] = lhs - rhs;
    }
    return out;
}

cplx bethe_constraint(const std::vector<cplx>& z, const ModelParams& p, int n, Branch branch)
{
    const cplx sum = std::accumulate(z.begin(), z.end(), cplx(0.0));
    return p.delta * p.delta + 2.0 * n * p.g * p.g + 2.0 * sign(branch) * p.omega * p.g * sum;
}

std::vector<cplx> newton_bethe(std::vector<cplx> z, const ModelParams& p, int n, Branch branch, int max_iterations)
{
    const double w = p.omega, g = p.g, s = sign(branch);
    const double num_a = n * w * w + 2 * s * p.epsilon * w;
    const double num_b = n * w * w - w * w;
    auto norm = [](const std::vector<cplx>& f) { return max_abs(f); };

    std::vector<cplx> f = bethe_residuals(z, p, n, branch);
    double fn = norm(f);
    for (int it = 0; it < max_iterations && fn > 1e-14; ++it) {
        Eigen::MatrixXcd J = Eigen::MatrixXcd::Zero(n, n);
        Eigen::VectorXcd rhs(n);
        for (int i = 0; i < n; ++i) {
            cplx diag = w * num_a / ((w * z[i] - s * g) * (w * z[i] - s * g));
            if (num_b != 0.0)
                diag += w * num_b / ((w * z[i] + s * g) * (w * z[i] + s * g));
            for (int j = 0; j < n; ++j) {
                if (j == i)
                    continue;
                const cplx d2 = (z[i] - z[j]) * (z[i] - z[j]);
                diag -= 2 * w / d2;
                J(i, j) = 2 * w / d2;
            }
            J(i, i) = diag;
            rhs(i) = -f[i];
        }
        const Eigen::VectorXcd step = J.partialPivLu().solve(rhs);
        double lambda = 1.0;
        bool improved = false;
        std::vector<cplx> trial(n);
        while (lambda > 1e-6) {
            for (int i = 0; i < n; ++i)
                trial[i] = z[i] + lambda * step(i);
            try {
                auto ft = bethe_residuals(trial, p, n, branch);
                const double tn = norm(ft);
                if (tn < fn) {
                    z = trial;
                    f = std::move(ft);
                    fn = tn;
                    improved = true;
                    break;
                }
            } catch (const BetheError&) {
            }
            lambda *= 0.5;
        }
        if (!improved)
            break;
        if (lambda == 1.0 && step.cwiseAbs().maxCoeff() <= 1e-15 * std::max(1.0, max_abs(z)))
            break;
    }
    if (!(fn <= 1e-10)) {
        std::ostringstream os;
        os << "Newton on the Bethe equations did not converge (residual " << fn << "), best iterate "
           << describe(z);
        throw BetheError(os.str());
    }
    return z;
}

namespace {

// Real-coefficient f(u): snap near-real roots onto the axis and pair the rest.
void close_under_conjugation(std::vector<cplx>& z, double tol)
{
    const std::size_t n = z.size();
    std::vector<bool> done(n, false);
    for (std::size_t i = 0; i < n; ++i) {
        if (done[i])
            continue;
        done[i] = true;
        if (std::abs(z[i].imag()) <= tol * std::max(1.0, std::abs(z[i]))) {
            z[i].imag(0.0);
            continue;
        }
        std::size_t best = n;
        double dist = INFINITY;
        for (std::size_t j = 0; j < n; ++j) {
            if (done[j])
                continue;
            const double d = std::abs(z[j] - std::conj(z[i]));
            if (d < dist) {
                dist = d;
                best = j;
            }
        }
        if (best == n)
            continue;
        done[best] = true;
        z[i] = 0.5 * (z[i] + std::conj(z[best]));
        z[best] = std::conj(z[i]);
    }
}

} // namespace

BetheRoots solve_bethe(const ModelParams& p, int n, Branch branch, const BetheOptions& opts)
{
    check_level(n, p);
    const double s = sign(branch);
    BetheRoots out;
    out.n = n;
    out.branch = branch;
    out.params = p;

    if (p.delta == 0.0) {
        // degenerate atomic limit: every root on the pole z = -sign g/omega
        out.roots.assign(n, cplx(-s * p.g / p.omega, 0.0));
        out.constraint_residual = std::abs(bethe_constraint(out.roots, p, n, branch));
        return out;
    }

    // Route 1. The Q recurrence is written for the first family; the second
    // family is its mirror (eps -> -eps, z -> -z), which q_sequence applies.
    const QSequence q = q_sequence_truncated(n, p, branch);
    const std::vector<double>& c = q.values;
    double cmax = 0.0;
    for (double v : c)
        cmax = std::max(cmax, std::abs(v));
    if (std::abs(c[n]) <= 1e-14 * cmax)
        throw BetheError("f(u) drops degree: a root sits at z = -g/omega with Delta != 0");

    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    Eigen::VectorXd coeffs = Eigen::Map<const Eigen::VectorXd>(c.data(), n + 1);
    solver.compute(coeffs);
    std::vector<cplx> poly_roots;
    for (int i = 0; i < n; ++i) {
        cplx u = solver.roots()(i);
        for (int it = 0; it < 4; ++it) {
            auto [f, df] = horner2(c, u);
            if (df == 0.0)
                break;
            const cplx next = u - f / df;
            if (std::abs(horner2(c, next).first) >= std::abs(f))
                break;
            u = next;
        }
        if (std::abs(u - 1.0) < 1e-12)
            throw BetheError("root u = 1 maps to the Bargmann point at infinity", i);
        const cplx z = -(p.g / p.omega) * (u + 1.0) / (u - 1.0);
        poly_roots.push_back(s * z);
    }

    // Route 2
    std::vector<cplx> seed = poly_roots;
    for (int i = 0; i < n; ++i)
        seed[i] += opts.seed_perturbation * std::max(1.0, std::abs(seed[i])) * cplx(1.0, 0.5) * double(i + 1) / double(n);
    std::vector<cplx> newton;
    try {
        newton = newton_bethe(seed, p, n, branch, opts.max_newton_iterations);
    } catch (const BetheError& e) {
        throw BetheError(std::string("parameters are not at a QES point or roots are ill-conditioned: ") + e.what());
    }

    out.route_agreement = match_root_sets(poly_roots, newton);
    out.roots = newton;
    close_under_conjugation(out.roots, 1e-9);
    sort_roots(out.roots);
    out.residual_norm = max_abs(bethe_residuals(out.roots, p, n, branch));
    out.constraint_residual = std::abs(bethe_constraint(out.roots, p, n, branch));

    if (out.constraint_residual > opts.tolerance || out.route_agreement > opts.tolerance) {
        std::ostringstream os;
        os << "Bethe solution rejected: constraint residual " << out.constraint_residual << ", route distance "
           << out.route_agreement << " (is g a QES point for n=" << n << ", branch " << to_string(branch)
           << "?)";
        throw BetheError(os.str());
    }
    return out;
}

GaudinParams to_gaudin(const BetheRoots& r, double tolerance)
{
    const ModelParams& p = r.params;
    const double w = p.omega, g = p.g, eps = p.epsilon;
    GaudinParams gp;
    gp.M = r.n;
    gp.gamma = 2 * g / w;
    if (r.branch == Branch::plus) {
        gp.A = -2 * g / w;
        gp.B = r.n + 2 * eps / w;
        gp.C = r.n - 1;
    } else {
        gp.A = 2 * g / w;
        gp.B = r.n - 1;
        gp.C = r.n - 2 * eps / w;
    }
    cplx sum = 0.0;
    for (const auto& z : r.roots) {
        gp.v.push_back(-z);
        sum -= z;
    }
    gp.calE = gp.A * sum.real();
    const double expected = -(p.delta * p.delta + 2.0 * r.n * g * g) / (w * w);
    const double err = std::max(std::abs(gp.calE - expected), std::abs(gp.A * sum.imag()));
    if (err > tolerance * std::max(1.0, std::abs(expected))) {
        std::ostringstream os;
        os << "Gaudin energy A*sum(v) = " << gp.calE << " disagrees with " << expected << " (root set invalid)";
        throw BetheError(os.str());
    }
    return gp;
}

RootsQSequence q_from_roots(const BetheRoots& r)
{
    const ModelParams& p = r.params;
    const double w = p.omega, go = p.g / w, s = sign(r.branch);
    const int n = r.n;
    // second family: the printed expression applies to the mirrored roots
    std::vector<cplx> z;
    for (const auto& zi : r.roots)
        z.push_back(s * zi);

    RootsQSequence out;
    for (const auto& zi : z)
        if (std::abs(go + zi) <= 1e-10 * std::max(1.0, go))
            ++out.degenerate_factors;

    std::vector<cplx> q(n + 1, 0.0);
    if (out.degenerate_factors == 0) {
        std::vector<cplx> e(n + 1, 0.0);  // e[j] = S_j(w)
        e[0] = 1.0;
        cplx prod = 1.0;
        for (const auto& zi : z) {
            const cplx wi = (p.g - w * zi) / (p.g + w * zi);
            for (int j = n; j >= 1; --j)
                e[j] += wi * e[j - 1];
            prod *= go + zi;
        }
        const double pre = (n % 2 ? -1.0 : 1.0) / w;
        for (int k = 0; k <= n; ++k)
            q[k] = pre * e[n - k] * prod;
    } else {
        // deflated: expand prod((g/w + z)u + (g/w - z)) directly
        q[0] = 1.0;
        int deg = 0;
        for (const auto& zi : z) {
            const cplx a = go + zi, b = go - zi;
            for (int j = deg + 1; j >= 1; --j)
                q[j] = q[j] * b + q[j - 1] * a;
            q[0] *= b;
            ++deg;
        }
    }
    if (std::abs(q[0]) == 0.0)
        throw BetheError("Q_0 vanishes: a root sits at z = g/omega");
    out.q.n = n;
    out.q.normalization = 1.0;
    for (int k = 0; k <= n; ++k) {
        const cplx v = q[k] / q[0];
        out.q.values.push_back(v.real());
    }
    return out;
}

double match_root_sets(const std::vector<cplx>& a_in, const std::vector<cplx>& b_in)
{
    if (a_in.size() != b_in.size())
        throw InvalidArgument("root sets differ in size");
    if (a_in.empty())
        return 0.0;
    std::vector<cplx> a = a_in, b = b_in;
    sort_roots(a);
    sort_roots(b);
    std::vector<std::vector<double>> cost(a.size(), std::vector<double>(b.size()));
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j)
            cost[i][j] = std::abs(a[i] - b[j]);
    const auto row = assign(cost);
    double worst = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        worst = std::max(worst, cost[i][row[i]]);
    return worst;
}

} // namespace aqrm
