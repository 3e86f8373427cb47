#include "aqrm/model.hpp"

#include "aqrm/errors.hpp"

#include <boost/math/tools/roots.hpp>
#include <lapacke.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

namespace aqrm {

void ModelParams::validate() const
{
    if (!std::isfinite(delta) || !std::isfinite(epsilon) || !std::isfinite(omega) || !std::isfinite(g))
        throw InvalidArgument("model parameters must be finite");
    if (!(omega > 0.0))
        throw InvalidArgument("omega must be positive");
    if (g < 0.0)
        throw InvalidArgument("coupling g must be non-negative");
}

ModelParams ModelParams::with_g(double coupling) const
{
    ModelParams p = *this;
    p.g = coupling;
    return p;
}

ModelParams ModelParams::with_epsilon(double eps) const
{
    ModelParams p = *this;
    p.epsilon = eps;
    return p;
}

const char* to_string(Branch b) noexcept
{
    return b == Branch::plus ? "+" : "-";
}

Branch parse_branch(const char* text)
{
    if (!std::strcmp(text, "+") || !std::strcmp(text, "plus") || !std::strcmp(text, "1") || !std::strcmp(text, "+1"))
        return Branch::plus;
    if (!std::strcmp(text, "-") || !std::strcmp(text, "minus") || !std::strcmp(text, "-1"))
        return Branch::minus;
    throw InvalidArgument(std::string("unknown branch '") + text + "'");
}

std::vector<double> Spectrum::values() const
{
    std::vector<double> v;
    v.reserve(levels.size());
    for (const auto& l : levels)
        v.push_back(l.value);
    return v;
}

double qes_energy(const ModelParams& p, int n, Branch branch)
{
    p.validate();
    if (n < 0)
        throw InvalidArgument("level n must be non-negative");
    return n * p.omega - p.g * p.g / p.omega + sign(branch) * p.epsilon;
}

double rescaled_level(double E, double g, double omega)
{
    return E + g * g / omega;
}

ModelParams from_cqed(double Omega, double theta, double omega, double g)
{
    ModelParams p;
    p.delta = 0.5 * Omega * std::sin(theta);
    p.epsilon = 0.5 * Omega * std::cos(theta);
    p.omega = omega;
    p.g = g;
    return p;
}

std::vector<double> truncated_levels(const ModelParams& p, int level_count, int truncation)
{
    p.validate();
    if (level_count < 1 || truncation < 1)
        throw InvalidArgument("level_count and truncation must be positive");
    // basis index 2m + s, s = 0 for sigma_x = +1, s = 1 for sigma_x = -1
    const int dim = 2 * (truncation + 1);
    if (level_count > dim)
        throw InvalidArgument("level_count exceeds matrix dimension");
    // banded upper storage, half-bandwidth 2: ab[kd + i - j + j * ldab] = H(i, j)
    constexpr int kd = 2;
    constexpr int ldab = kd + 1;
    std::vector<double> ab(static_cast<std::size_t>(ldab) * dim, 0.0);
    auto at = [&](int i, int j) -> double& { return ab[kd + i - j + static_cast<std::size_t>(j) * ldab]; };
    for (int m = 0; m <= truncation; ++m) {
        for (int s = 0; s < 2; ++s) {
            const double sx = s == 0 ? 1.0 : -1.0;
            const int i = 2 * m + s;
            at(i, i) = p.omega * m + p.epsilon * sx;
            if (m < truncation)
                at(i, i + 2) = p.g * sx * std::sqrt(m + 1.0);
        }
        at(2 * m, 2 * m + 1) = p.delta;
    }
    std::vector<double> w(dim);
    std::vector<lapack_int> ifail(dim);
    double q = 0.0, z = 0.0;
    lapack_int found = 0;
    const lapack_int info =
        LAPACKE_dsbevx(LAPACK_COL_MAJOR, 'N', 'I', 'U', dim, kd, ab.data(), ldab, &q, 1, 0.0, 0.0, 1, level_count,
                       2 * LAPACKE_dlamch('S'), &found, w.data(), &z, 1, ifail.data());
    if (info != 0 || found != level_count)
        throw ConvergenceError("banded symmetric eigensolver failed (info " + std::to_string(info) + ")");
    w.resize(level_count);
    return w;
}

Spectrum regular_spectrum(const ModelParams& p, int level_count, int truncation, const SpectrumOptions& opts)
{
    p.validate();
    if (level_count < 1)
        throw InvalidArgument("level_count must be positive");
    if (truncation < level_count + opts.margin) {
        std::ostringstream os;
        os << "truncation " << truncation << " below level_count + margin = " << level_count + opts.margin;
        throw InvalidArgument(os.str());
    }

    std::vector<double> older;
    std::vector<double> prev = truncated_levels(p, level_count, truncation);
    double shift = 0.0;
    for (int t = 2 * truncation; t <= opts.max_truncation; t *= 2) {
        std::vector<double> cur = truncated_levels(p, level_count, t);
        shift = 0.0;
        for (int i = 0; i < level_count; ++i)
            shift = std::max(shift, std::abs(cur[i] - prev[i]));
        if (shift < opts.tolerance) {
            Spectrum s;
            s.params = p;
            s.truncation = t;
            s.levels.reserve(level_count);
            for (int i = 0; i < level_count; ++i)
                s.levels.push_back({cur[i], i});
            return s;
        }
        older = std::move(prev);
        prev = std::move(cur);
    }
    std::ostringstream os;
    os << "spectrum not converged to " << opts.tolerance << " below truncation " << opts.max_truncation
       << " (last shift " << shift << ")";
    throw SpectrumConvergenceError(os.str(), std::move(older), std::move(prev));
}

std::vector<double> parity_levels(const ModelParams& p, int parity, int level_count, int truncation)
{
    p.validate();
    if (p.epsilon != 0.0)
        throw InvalidArgument("parity sectors exist only at epsilon = 0");
    if (parity != 1 && parity != -1)
        throw InvalidArgument("parity must be +1 or -1");
    if (level_count < 1 || truncation < level_count)
        throw InvalidArgument("need 1 <= level_count <= truncation");
    const int dim = truncation + 1;
    std::vector<double> diag(dim), off(dim - 1);
    for (int m = 0; m < dim; ++m) {
        diag[m] = p.omega * m + parity * p.delta * (m % 2 ? -1.0 : 1.0);
        if (m + 1 < dim)
            off[m] = p.g * std::sqrt(m + 1.0);
    }
    std::vector<double> w(dim);
    std::vector<lapack_int> iblock(dim), isplit(dim);
    lapack_int found = 0, nsplit = 0;
    const lapack_int info = LAPACKE_dstebz('I', 'E', dim, 0.0, 0.0, 1, level_count, 2 * LAPACKE_dlamch('S'),
                                           diag.data(), off.data(), &found, &nsplit, w.data(), iblock.data(),
                                           isplit.data());
    if (info != 0 || found != level_count)
        throw ConvergenceError("tridiagonal bisection failed (info " + std::to_string(info) + ")");
    w.resize(level_count);
    return w;
}

std::vector<LevelCrossing> symmetric_crossings(const ModelParams& p, double g_min, double g_max, int steps,
                                               int level_count, int truncation)
{
    if (!(g_min >= 0.0) || !(g_max > g_min) || steps < 2)
        throw InvalidArgument("symmetric_crossings needs 0 <= g_min < g_max and steps >= 2");
    auto levels = [&](double g, int parity, int trunc) { return parity_levels(p.with_g(g), parity, level_count, trunc); };

    std::vector<double> gs(steps);
    std::vector<std::vector<double>> even(steps), odd(steps);
    for (int k = 0; k < steps; ++k) {
        gs[k] = g_min + (g_max - g_min) * k / (steps - 1);
        even[k] = levels(gs[k], 1, truncation);
        odd[k] = levels(gs[k], -1, truncation);
    }

    std::vector<LevelCrossing> out;
    for (int i = 0; i < level_count; ++i) {
        for (int j = 0; j < level_count; ++j) {
            auto gap = [&](double g) {
                return levels(g, 1, truncation)[i] - levels(g, -1, truncation)[j];
            };
            for (int k = 0; k + 1 < steps; ++k) {
                const double d0 = even[k][i] - odd[k][j];
                const double d1 = even[k + 1][i] - odd[k + 1][j];
                double gc;
                if (d0 == 0.0) {
                    // counted from the left end of the next interval unless at the grid start
                    if (k != 0)
                        continue;
                    gc = gs[k];
                } else if (d1 == 0.0) {
                    gc = gs[k + 1];
                } else if ((d0 < 0) != (d1 < 0)) {
                    boost::uintmax_t iters = 200;
                    auto r = boost::math::tools::toms748_solve(gap, gs[k], gs[k + 1], d0, d1,
                                                               boost::math::tools::eps_tolerance<double>(52), iters);
                    gc = 0.5 * (r.first + r.second);
                } else {
                    continue;
                }
                const double e_even = levels(gc, 1, truncation)[i];
                const double e_fine = levels(gc, 1, 2 * truncation)[i];
                if (std::abs(e_fine - e_even) > 1e-9) {
                    std::ostringstream os;
                    os << "crossing at g = " << gc << " not converged at truncation " << truncation;
                    throw SpectrumConvergenceError(os.str(), {e_even}, {e_fine});
                }
                const double e_odd = levels(gc, -1, truncation)[j];
                out.push_back({gc, 0.5 * (e_even + e_odd), i, j});
            }
        }
    }
    std::sort(out.begin(), out.end(), [](const LevelCrossing& a, const LevelCrossing& b) {
        return a.g != b.g ? a.g < b.g : a.energy < b.energy;
    });
    return out;
}

BargmannOde bargmann_ode(const ModelParams& p, double E, Branch branch)
{
    p.validate();
    const double w = p.omega, g = p.g, eps = p.epsilon, d2 = p.delta * p.delta;
    const double s = sign(branch);
    BargmannOde ode;
    ode.second = {-g * g, 0.0, w * w};
    // second family is the first with z -> -z, eps -> -eps
    ode.first = {s * (g / w) * (2 * g * g - w * w - 2 * s * eps * w), w * w - 2 * g * g - 2 * E * w,
                 -s * 2 * g * w};
    ode.zeroth = {E * E - d2 - eps * eps + s * 2 * eps * g * g / w - g * g * g * g / (w * w),
                  s * 2 * g * (g * g / w + E - s * eps)};
    return ode;
}

} // namespace aqrm
