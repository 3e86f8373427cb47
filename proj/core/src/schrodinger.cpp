#include "aqrm/schrodinger.hpp"

#include "aqrm/errors.hpp"
#include "frobenius.hpp"

#include <boost/math/tools/toms748_solve.hpp>
#include <boost/numeric/odeint.hpp>
#include <lapacke.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>

namespace aqrm {
namespace {

using State = std::array<double, 2>;

double norm(const State& y)
{
    return std::hypot(y[0], y[1]);
}

State normalized(State y)
{
    const double n = norm(y);
    if (!(n > 0.0) || !std::isfinite(n))
        throw RangeError("connection state vanished or overflowed");
    return {y[0] / n, y[1] / n};
}

// Psi'' = q(x) Psi from x0 to x1 (either direction)
State propagate(const RealFunction& q, State y, double x0, double x1, double rel_tol, double abs_tol)
{
    namespace ode = boost::numeric::odeint;
    auto rhs = [&](const State& s, State& ds, double x) {
        ds[0] = s[1];
        ds[1] = q(x) * s[0];
    };
    const double dx = (x1 > x0 ? 1.0 : -1.0) * 1e-3 * std::max(1e-3, std::abs(x1 - x0));
    ode::integrate_adaptive(ode::make_controlled<ode::runge_kutta_dopri5<State>>(abs_tol, rel_tol), rhs, y, x0, x1,
                            dx);
    if (!std::isfinite(y[0]) || !std::isfinite(y[1]))
        throw RangeError("connection integration overflowed");
    return y;
}

double wronskian(const State& l, const State& r)
{
    return (l[0] * r[1] - l[1] * r[0]) / (norm(l) * norm(r));
}

double cosh_m1(double x)
{
    const double s = std::sinh(0.5 * x);
    return 2.0 * s * s;
}

double dV(const PoschlTellerCoefficients& c, double x)
{
    const double ch = std::cosh(x), sh = std::sinh(x), cm = cosh_m1(x);
    return c.K1 * sh + 2.0 * c.G * sh * ch - c.a * sh / (cm * cm) - c.b * sh / ((ch + 1) * (ch + 1));
}

// recessive start: Psi'/Psi ~ -sqrt(q) - q'/(4 q)
State recessive_start(double q, double dq)
{
    if (!(q > 0.0))
        throw InvalidArgument("x_max is not in the classically forbidden region");
    return normalized({1.0, -std::sqrt(q) - dq / (4.0 * q)});
}

template <class T, class F>
T fd_second(const F& f, T x, T h)
{
    const T s = 2 * (f(x - 3 * h) + f(x + 3 * h)) - 27 * (f(x - 2 * h) + f(x + 2 * h)) +
                270 * (f(x - h) + f(x + h)) - 490 * f(x);
    return s / (180 * h * h);
}

template <class T, class F>
double residual_at_step(const F& V, const F& Psi, T calE, const Grid& grid, T h0, T scale)
{
    T worst = 0;
    for (double xd : grid.points) {
        const T x = xd;
        const T v = V(x);
        const T kappa = std::sqrt(std::abs(v - calE)) + 1;
        const T h = std::min({h0, T(0.05) / kappa, x / 8});
        // 6th-order stencil, one Richardson step h -> h/2
        const T d1 = fd_second(Psi, x, h);
        const T d2 = fd_second(Psi, x, h / 2);
        const T d = (64 * d2 - d1) / 63;
        const T r = std::abs(-d + (v - calE) * Psi(x));
        if (!std::isfinite(r))
            throw RangeError("residual not finite; narrow the grid");
        worst = std::max(worst, r);
    }
    return static_cast<double>(worst / scale);
}

template <class T, class F>
double residual_impl(const F& V, const F& Psi, double calE, const Grid& grid, const ResidualOptions& opts)
{
    if (grid.points.empty())
        throw InvalidArgument("empty grid");
    if (!(grid.points.front() > 0.0))
        throw SingularPointError("residual grid must avoid x = 0");
    T scale = 0;
    for (double x : grid.points) {
        const T v = Psi(T(x));
        if (!std::isfinite(v))
            throw RangeError("wavefunction overflows on the grid; narrow the grid");
        scale = std::max(scale, std::abs(v));
    }
    if (!(scale > std::numeric_limits<T>::min()))
        throw RangeError("wavefunction underflows on the grid; narrow the grid");

    T h = opts.h;
    double prev = residual_at_step<T>(V, Psi, T(calE), grid, h, scale);
    double best = prev;
    for (int i = 0; i < opts.max_halvings; ++i) {
        h /= 2;
        const double cur = residual_at_step<T>(V, Psi, T(calE), grid, h, scale);
        best = std::min(best, cur);
        if (std::abs(cur - prev) <= 0.1 * prev)
            break;
        prev = cur;
    }
    return best;
}

} // namespace

Grid Grid::uniform(double x_min, double x_max, int count)
{
    if (!(x_min > 0.0) || !(x_max > x_min) || count < 2)
        throw InvalidArgument("grid needs 0 < x_min < x_max and at least two points");
    Grid g;
    g.x_min = x_min;
    g.x_max = x_max;
    g.points.resize(count);
    for (int i = 0; i < count; ++i)
        g.points[i] = x_min + (x_max - x_min) * i / (count - 1);
    g.points.back() = x_max;
    return g;
}

double residual_check(const RealFunction& V, const RealFunction& Psi, double calE, const Grid& grid,
                      const ResidualOptions& opts)
{
    return residual_impl<double>(V, Psi, calE, grid, opts);
}

double residual_check_extended(const ExtendedFunction& V, const ExtendedFunction& Psi, double calE,
                               const Grid& grid, const ResidualOptions& opts)
{
    return residual_impl<long double>(V, Psi, calE, grid, opts);
}

double indicial_exponent(const ModelParams& p, double E, Branch branch)
{
    p.validate();
    const double w = p.omega;
    return E / w + p.g * p.g / (w * w) + p.epsilon / w + 0.5 * sign(branch);
}

double far_exponent(const ModelParams& p, double E, Branch branch)
{
    p.validate();
    const double w = p.omega;
    return E / w + p.g * p.g / (w * w) - p.epsilon / w - 0.5 * sign(branch);
}

ConnectionResult connection_wronskian(const PotentialSpec& spec, double calE, double x_min, double x_max,
                                      const ConnectionOptions& opts)
{
    spec.validate();
    if (!(x_min > 0.0) || !(x_min < opts.x_match) || !(opts.x_match < x_max))
        throw InvalidArgument("need 0 < x_min < x_match < x_max");
    if (x_max > max_potential_abs_x)
        throw RangeError("x_max beyond the overflow-safe bound");
    const PoschlTellerCoefficients c = spec.coefficients();

    ConnectionResult res;
    res.calE = calE;
    res.energy = std::numeric_limits<double>::quiet_NaN();
    switch (spec.kind) {
    case PotentialKind::full:
        res.energy = *spec.E;
        res.left_exponent = indicial_exponent(spec.params, *spec.E, spec.branch);
        break;
    case PotentialKind::qes:
        res.energy = qes_energy(spec.params, *spec.n, spec.branch);
        res.left_exponent = indicial_exponent(spec.params, res.energy, spec.branch);
        break;
    case PotentialKind::gaudin:
        res.left_exponent = spec.gaudin->B + 0.5;
        break;
    }

    const double t0 = cosh_m1(x_min);
    const detail::FrobeniusSeries series(c, calE, -0.5 * res.left_exponent, t0);
    const auto [s, ds] = series.solution(t0);
    const State left0 = normalized({s, ds * std::sinh(x_min)});

    auto q = [&](double x) { return c(x) - calE; };
    const State right0 = recessive_start(q(x_max), dV(c, x_max));

    const State l = propagate(q, left0, x_min, opts.x_match, opts.rel_tol, opts.abs_tol);
    const State r = propagate(q, right0, x_max, opts.x_match, opts.rel_tol, opts.abs_tol);
    res.wronskian = wronskian(l, r);
    res.converged = std::isfinite(res.wronskian);
    return res;
}

ConnectionResult connection_wronskian(const RealFunction& V, double calE, LeftBoundary left, double x_max,
                                      const ConnectionOptions& opts)
{
    if (!(opts.x_match > 0.0) || !(opts.x_match < x_max))
        throw InvalidArgument("need 0 < x_match < x_max");
    auto q = [&](double x) { return V(x) - calE; };
    const double h = 1e-5 * std::max(1.0, x_max);
    const double dq = (q(x_max + h) - q(x_max - h)) / (2 * h);
    const State left0 = left == LeftBoundary::even_parity ? State{1.0, 0.0} : State{0.0, 1.0};
    const State l = propagate(q, left0, 0.0, opts.x_match, opts.rel_tol, opts.abs_tol);
    const State r = propagate(q, recessive_start(q(x_max), dq), x_max, opts.x_match, opts.rel_tol, opts.abs_tol);
    ConnectionResult res;
    res.energy = std::numeric_limits<double>::quiet_NaN();
    res.calE = calE;
    res.left_exponent = 0.0;
    res.wronskian = wronskian(l, r);
    res.converged = std::isfinite(res.wronskian);
    return res;
}

ConnectionResult segment_wronskian(const ModelParams& p, double E, Branch branch, const SegmentOptions& opts)
{
    p.validate();
    if (!(p.g > 0.0))
        throw InvalidArgument("segment connection problem needs g > 0");
    if (!(0.0 < opts.theta_left && opts.theta_left < opts.theta_match && opts.theta_match < opts.theta_right &&
          opts.theta_right < std::numbers::pi))
        throw InvalidArgument("need 0 < theta_left < theta_match < theta_right < pi");
    const PoschlTellerCoefficients c = full_coefficients(p, E, branch);
    const double calE = full_energy(p, E, branch);
    const double l = indicial_exponent(p, E, branch);
    const double m = far_exponent(p, E, branch);

    // theta = 0 end: t = cos theta - 1, dt/dtheta = -sin theta
    const double tl = std::cos(opts.theta_left) - 1.0;
    const detail::FrobeniusSeries left(c, calE, -0.5 * l, tl);
    const auto [ls, lds] = left.solution(tl);
    const State left0 = normalized({ls, -lds * std::sin(opts.theta_left)});

    // theta = pi end: t = -(cos theta + 1), dt/dtheta = sin theta
    const double tr = -(std::cos(opts.theta_right) + 1.0);
    const detail::FrobeniusSeries right(detail::mirror(c), calE, -0.5 * m, tr);
    const auto [rs, rds] = right.solution(tr);
    const State right0 = normalized({rs, rds * std::sin(opts.theta_right)});

    auto q = [&](double theta) { return calE - c.on_segment(theta); };
    const State a = propagate(q, left0, opts.theta_left, opts.theta_match, opts.rel_tol, opts.abs_tol);
    const State b = propagate(q, right0, opts.theta_right, opts.theta_match, opts.rel_tol, opts.abs_tol);

    ConnectionResult res;
    res.energy = E;
    res.calE = calE;
    res.left_exponent = l;
    res.wronskian = wronskian(a, b);
    res.converged = std::isfinite(res.wronskian);
    return res;
}

std::vector<double> resonance_energies(const ModelParams& p, Branch branch, double E_lo, double E_hi)
{
    const double w = p.omega;
    // exponent(E) = E/w + offset; resonance when exponent = N - 1/2, N >= 1
    const double offsets[2] = {indicial_exponent(p, 0.0, branch), far_exponent(p, 0.0, branch)};
    std::vector<double> out;
    for (double off : offsets) {
        const int n_lo = std::max(1, static_cast<int>(std::floor(E_lo / w + off + 0.5)));
        for (int N = n_lo;; ++N) {
            const double E = w * (N - 0.5 - off);
            if (E >= E_hi)
                break;
            if (E > E_lo)
                out.push_back(E);
        }
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) < 1e-12; }),
              out.end());
    return out;
}

bool log_free_resonance(const ModelParams& p, double E, Branch branch, double tolerance)
{
    const PoschlTellerCoefficients c = full_coefficients(p, E, branch);
    const double calE = full_energy(p, E, branch);
    const double exps[2] = {indicial_exponent(p, E, branch), far_exponent(p, E, branch)};
    for (int end = 0; end < 2; ++end) {
        const double k = exps[end] + 0.5;
        const long N = std::lround(k);
        if (N < 1 || std::abs(k - N) > 1e-9)
            continue;
        const PoschlTellerCoefficients ce = end == 0 ? c : detail::mirror(c);
        if (detail::resonance_obstruction(ce, calE, -0.5 * exps[end], static_cast<int>(N)) <= tolerance)
            return true;
    }
    return false;
}

ScanResult eigenvalue_scan(const ModelParams& p, Branch branch, double E_lo, double E_hi, int steps,
                           const ScanOptions& opts)
{
    p.validate();
    ScanResult out;
    if (!std::isfinite(E_lo) || !std::isfinite(E_hi))
        throw InvalidArgument("energy range must be finite");
    if (steps < 1)
        throw InvalidArgument("scan needs at least one step");
    if (!(E_hi > E_lo)) {
        out.trace.push_back("empty energy range");
        return out;
    }

    double x_max = opts.x_max;
    if (opts.domain == ScanDomain::half_line && x_max <= 0.0) {
        const double go2 = p.g * p.g / (p.omega * p.omega);
        if (!(go2 > 0.0))
            throw InvalidArgument("half-line scan needs g > 0");
        x_max = std::acosh(std::max(30.0 / go2, 2.0));
    }

    auto eval = [&](double E) -> ConnectionResult {
        if (opts.domain == ScanDomain::segment)
            return segment_wronskian(p, E, branch, opts.segment);
        return connection_wronskian(PotentialSpec::full(p, E, branch), full_energy(p, E, branch), opts.x_min,
                                    x_max, opts.half_line);
    };
    auto W = [&](double E) { return eval(E).wronskian; };

    std::vector<double> breaks = resonance_energies(p, branch, E_lo, E_hi);
    if (opts.domain == ScanDomain::half_line) {
        // only the origin end is a regular singular point on the half-line
        std::vector<double> left;
        const double off = indicial_exponent(p, 0.0, branch);
        for (double E : breaks) {
            const double l = E / p.omega + off;
            if (std::abs(l + 0.5 - std::round(l + 0.5)) < 1e-9)
                left.push_back(E);
        }
        breaks = left;
    }

    auto gap = [&](double E) { return 1e-7 * std::max(1.0, std::abs(E)); };
    auto add_level = [&](double E, const std::string& how) {
        ConnectionResult r = eval(E);
        r.converged = true;
        out.levels.push_back(r);
        std::ostringstream os;
        os.precision(12);
        os << "level E=" << E << " (" << how << ", W=" << r.wronskian << ")";
        out.trace.push_back(os.str());
    };

    const double step = (E_hi - E_lo) / steps;
    std::vector<std::pair<double, double>> pieces;
    double lo = E_lo;
    for (double r : breaks) {
        pieces.emplace_back(lo, r - gap(r));
        lo = r + gap(r);
    }
    pieces.emplace_back(lo, E_hi);

    for (const auto& [a, b] : pieces) {
        if (!(b > a))
            continue;
        const int n = std::max(1, static_cast<int>(std::ceil((b - a) / step)));
        double xa = a, wa = W(a);
        if (wa == 0.0)
            add_level(a, "grid point");
        for (int i = 1; i <= n; ++i) {
            const double xb = i == n ? b : a + (b - a) * i / n;
            const double wb = W(xb);
            if (wb == 0.0) {
                add_level(xb, "grid point");
            } else if (wa * wb < 0.0) {
                std::uintmax_t iters = 100;
                auto tol = [](double u, double v) { return std::abs(u - v) <= 1e-13 * std::max(1.0, std::abs(u)); };
                const auto br = boost::math::tools::toms748_solve(W, xa, xb, wa, wb, tol, iters);
                const double root = 0.5 * (br.first + br.second);
                const double wr = W(root);
                if (std::abs(wr) <= opts.accept) {
                    add_level(root, "bracket");
                } else {
                    std::ostringstream os;
                    os.precision(12);
                    os << "rejected sign change near E=" << root << " (|W|=" << std::abs(wr) << ", discontinuity)";
                    out.trace.push_back(os.str());
                }
            }
            xa = xb;
            wa = wb;
        }
    }

    for (double r : breaks) {
        if (opts.domain == ScanDomain::segment && log_free_resonance(p, r, branch, opts.log_free_accept)) {
            // every solution regular at one end is regular at the other: an exceptional level
            ConnectionResult level;
            level.energy = r;
            level.calE = full_energy(p, r, branch);
            level.left_exponent = indicial_exponent(p, r, branch);
            level.wronskian = 0.0;
            level.converged = true;
            out.levels.push_back(level);
            std::ostringstream os;
            os.precision(12);
            os << "level E=" << r << " (log-free exponent resonance)";
            out.trace.push_back(os.str());
            continue;
        }
        const double a = r - gap(r), b = r + gap(r);
        const double wa = W(a), wb = W(b);
        if (wa * wb < 0.0 && std::max(std::abs(wa), std::abs(wb)) <= opts.gap_accept)
            add_level(a + (b - a) * wa / (wa - wb), "resonance gap");
    }

    std::sort(out.levels.begin(), out.levels.end(),
              [](const ConnectionResult& x, const ConnectionResult& y) { return x.energy < y.energy; });
    out.levels.erase(std::unique(out.levels.begin(), out.levels.end(),
                                 [](const ConnectionResult& x, const ConnectionResult& y) {
                                     return std::abs(x.energy - y.energy) < 1e-9;
                                 }),
                     out.levels.end());
    if (out.levels.empty())
        out.trace.push_back("no sign change of the connection Wronskian in range");
    return out;
}

std::vector<double> fd_eigensolve(const RealFunction& V, double a, double b, FdBoundary boundary, int count,
                                  int mesh)
{
    if (!(b > a))
        throw InvalidArgument("fd_eigensolve needs a < b");
    if (count < 1 || mesh < count + 2)
        throw InvalidArgument("fd_eigensolve needs count >= 1 and mesh > count + 1");

    // lowest `count` eigenvalues by Sturm bisection (LAPACK dstebz)
    auto solve = [&](int N) {
        std::vector<double> diag(N), off(N - 1);
        double h;
        if (boundary == FdBoundary::dirichlet) {
            h = (b - a) / (N + 1);
            for (int i = 0; i < N; ++i)
                diag[i] = 2.0 / (h * h) + V(a + (i + 1) * h);
        } else {
            // cell-centred nodes: Neumann at a, Dirichlet on the face at b
            h = (b - a) / N;
            for (int i = 0; i < N; ++i)
                diag[i] = 2.0 / (h * h) + V(a + (i + 0.5) * h);
            diag[0] -= 1.0 / (h * h);
            diag[N - 1] += 1.0 / (h * h);
        }
        for (double d : diag)
            if (!std::isfinite(d))
                throw InvalidArgument("potential not finite on the mesh");
        std::fill(off.begin(), off.end(), -1.0 / (h * h));
        std::vector<double> w(N);
        std::vector<lapack_int> iblock(N), isplit(N);
        lapack_int m = 0, nsplit = 0;
        const lapack_int info =
            LAPACKE_dstebz('I', 'E', N, 0.0, 0.0, 1, count, 2 * LAPACKE_dlamch('S'), diag.data(), off.data(), &m,
                           &nsplit, w.data(), iblock.data(), isplit.data());
        if (info != 0 || m != count)
            throw ConvergenceError("tridiagonal bisection failed (info " + std::to_string(info) + ")");
        w.resize(count);
        return w;
    };

    const std::vector<double> coarse = solve(mesh);
    const std::vector<double> fine = solve(boundary == FdBoundary::dirichlet ? 2 * mesh + 1 : 2 * mesh);
    std::vector<double> out(count);
    for (int i = 0; i < count; ++i) {
        if (std::abs(fine[i] - coarse[i]) > 0.05 * std::max(1.0, std::abs(fine[i]))) {
            std::ostringstream os;
            os << "mesh too coarse: level " << i << " moves " << fine[i] - coarse[i] << " under refinement";
            throw ConvergenceError(os.str());
        }
        out[i] = (4.0 * fine[i] - coarse[i]) / 3.0;
    }
    return out;
}

} // namespace aqrm
