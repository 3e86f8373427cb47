#include "frobenius.hpp"

#include "aqrm/errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace aqrm::detail {
namespace {

// sum_j t^j F_j(r): the t-equation applied to t^r
struct Recurrence {
    std::array<double, 5> q0{};

    Recurrence(const PoschlTellerCoefficients& pc, double calE)
    {
        const double A0 = pc.K0 - calE + pc.K1;
        q0 = {-2.0 * pc.a, -(2.0 * A0 + pc.a + pc.b), -(A0 + 2.0 * pc.K1 + 4.0 * pc.G), -(pc.K1 + 4.0 * pc.G), -pc.G};
    }

    double F(int j, double r) const
    {
        static constexpr std::array<double, 5> q2{4.0, 4.0, 1.0, 0.0, 0.0};
        static constexpr std::array<double, 5> q1{2.0, 3.0, 1.0, 0.0, 0.0};
        return r * (r - 1.0) * q2[j] + r * q1[j] + q0[j];
    }

    // magnitude scale of F_j(r) for relative tests
    double size(int j, double r) const
    {
        static constexpr std::array<double, 5> q2{4.0, 4.0, 1.0, 0.0, 0.0};
        static constexpr std::array<double, 5> q1{2.0, 3.0, 1.0, 0.0, 0.0};
        return std::abs(r * (r - 1.0) * q2[j]) + std::abs(r * q1[j]) + std::abs(q0[j]);
    }
};

} // namespace

FrobeniusSeries::FrobeniusSeries(const PoschlTellerCoefficients& pc, double calE, double rho, double t_max)
    : rho_(rho)
{
    if (!(std::abs(t_max) < 2.0))
        throw InvalidArgument("Frobenius series evaluated outside its radius of convergence");
    const Recurrence rec(pc, calE);
    auto F = [&](int j, double r) { return rec.F(j, r); };

    const double tabs = std::abs(t_max);
    c_.push_back(1.0);
    double peak = 1.0;
    int small = 0;
    for (int N = 1; N < 4000; ++N) {
        double acc = 0.0;
        for (int j = 1; j <= 4 && j <= N; ++j)
            acc += c_[N - j] * F(j, N - j + rho);
        const double r = N + rho;
        const double f0 = F(0, r);
        const double size = 4.0 * r * r + 2.0 * std::abs(r) + 2.0 * std::abs(pc.a);
        margin_ = std::min(margin_, std::abs(f0) / size);
        if (f0 == 0.0)
            throw SingularPointError("exact exponent resonance in the Frobenius recurrence");
        const double cn = -acc / f0;
        c_.push_back(cn);
        const double term = std::abs(cn) * std::pow(tabs, N);
        peak = std::max(peak, term);
        if (!std::isfinite(cn))
            throw RangeError("Frobenius coefficients overflow");
        small = term < 1e-18 * peak ? small + 1 : 0;
        if (small >= 6)
            break;
    }
}

std::pair<double, double> FrobeniusSeries::eval(double t) const
{
    double s = 0.0, ds = 0.0;
    for (std::size_t k = c_.size(); k-- > 0;) {
        ds = ds * t + s;
        s = s * t + c_[k];
    }
    return {s, ds};
}

std::pair<double, double> FrobeniusSeries::solution(double t) const
{
    auto [s, ds] = eval(t);
    return {s, rho_ * s / t + ds};
}

double resonance_obstruction(const PoschlTellerCoefficients& pc, double calE, double rho, int N)
{
    if (N < 1)
        throw InvalidArgument("resonance order must be >= 1");
    const Recurrence rec(pc, calE);
    std::vector<double> c{1.0};
    for (int k = 1; k <= N; ++k) {
        double acc = 0.0, size = 0.0;
        for (int j = 1; j <= 4 && j <= k; ++j) {
            acc += c[k - j] * rec.F(j, k - j + rho);
            size += std::abs(c[k - j]) * rec.size(j, k - j + rho);
        }
        if (k == N)
            return size > 0.0 ? std::abs(acc) / size : 0.0;
        const double f0 = rec.F(0, k + rho);
        if (f0 == 0.0)
            throw SingularPointError("resonance below the requested order");
        c.push_back(-acc / f0);
    }
    return 0.0;
}

PoschlTellerCoefficients mirror(const PoschlTellerCoefficients& c)
{
    PoschlTellerCoefficients m = c;
    m.K1 = -c.K1;
    m.a = -c.b;
    m.b = -c.a;
    return m;
}

} // namespace aqrm::detail
