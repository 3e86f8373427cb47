#include "aqrm/potentials.hpp"

#include "aqrm/errors.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace aqrm {
namespace {

template <class T>
void check_x(T x)
{
    if (!std::isfinite(x))
        throw InvalidArgument("x must be finite");
    if (x == 0)
        throw SingularPointError("potential and wavefunction are singular at x = 0");
    if (std::abs(x) > max_potential_abs_x) {
        std::ostringstream os;
        os << "|x| = " << static_cast<double>(std::abs(x)) << " exceeds the overflow-safe bound "
           << max_potential_abs_x;
        throw RangeError(os.str());
    }
}

// cosh x - 1 without cancellation near the origin
template <class T>
T cosh_m1(T x)
{
    const T s = std::sinh(x / 2);
    return 2 * s * s;
}

// exp(log_mag) * cos(phase), refusing overflow
template <class T>
T from_log(T log_mag, T phase)
{
    if (log_mag > T(0.99) * std::log(std::numeric_limits<T>::max()))
        throw RangeError("wavefunction overflows the floating-point range");
    return std::exp(log_mag) * std::cos(phase);
}

// (c-1)^-p (c+1)^-q exp(k c) prod(s c + v_j), c = cosh x
template <class T>
T product_wavefunction(T p, T q, T k, T s, const std::vector<cplx>& v, T x)
{
    check_x(x);
    const T c = std::cosh(x);
    T log_mag = -p * std::log(cosh_m1(x)) - q * std::log(c + 1) + k * c;
    T phase = 0;
    for (const auto& vj : v) {
        const std::complex<T> f = s * c + std::complex<T>(vj.real(), vj.imag());
        if (f == std::complex<T>(0))
            return 0;
        log_mag += std::log(std::abs(f));
        phase += std::arg(f);
    }
    return from_log(log_mag, phase);
}

template <class T>
T gaudin_potential_t(const GaudinParams& gp, T x)
{
    check_x(x);
    const T A = gp.A, B = gp.B, C = gp.C, y = gp.gamma;
    const T M = gp.M;
    const T c = std::cosh(x), sh = std::sinh(x);
    return M * (M - 1 - B - C + A * y * c / 2) + (B + C + 1) * (B + C + 1) / 4 + A * A * y * y / 16 * sh * sh +
           A * y * (C - B) / 4 - A * y * (B + C) * c / 4 + (2 * B + 1) * (2 * B + 3) / (8 * cosh_m1(x)) -
           (2 * C + 1) * (2 * C + 3) / (8 * (c + 1));
}

template <class T>
T gaudin_wavefunction_t(const GaudinParams& gp, T x)
{
    return product_wavefunction<T>(T(gp.B) / 2 + T(0.25), T(gp.C) / 2 + T(0.25), T(gp.A) * gp.gamma / 4,
                                   T(gp.gamma) / 2, gp.v, x);
}

template <class T>
T qes_potential_t(const ModelParams& p, int n, Branch branch, T x, PotentialForm form)
{
    p.validate();
    check_x(x);
    const T w = p.omega, e = p.epsilon / w, g2 = T(p.g) * p.g / (w * w);
    const T c = std::cosh(x), sh = std::sinh(x), cm1 = cosh_m1(x);
    const T nn = n;
    if (form == PotentialForm::partial_fraction) {
        if (branch == Branch::plus)
            return e * e + g2 * g2 * sh * sh + g2 * (1 - c) + 2 * g2 * e * (1 + c) -
                   (4 * nn * nn - 1) / (8 * (c + 1)) + (2 * nn + 1 + 4 * e) * (2 * nn + 3 + 4 * e) / (8 * cm1);
        return e * e + g2 * g2 * sh * sh + g2 * (1 + c) - 2 * g2 * e * (1 - c) + (4 * nn * nn - 1) / (8 * cm1) -
               (2 * nn + 1 - 4 * e) * (2 * nn + 3 - 4 * e) / (8 * (c + 1));
    }
    const T csch2 = 1 / (sh * sh), cc = c / (sh * sh);
    if (branch == Branch::plus)
        return e * e + g2 * (1 + 2 * e) - g2 * (1 - 2 * e) * c + g2 * g2 * sh * sh +
               ((2 * nn + 1) * (2 * nn + 1) + 8 * e * (1 + nn + e)) * csch2 / 4 +
               (2 * nn + 1 + 4 * e * (1 + nn + e)) * cc / 2;
    return e * e + g2 * (1 - 2 * e) + g2 * (1 + 2 * e) * c + g2 * g2 * sh * sh +
           ((2 * nn + 1) * (2 * nn + 1) - 8 * e * (1 + nn - e)) * csch2 / 4 -
           (2 * nn + 1 - 4 * e * (1 + nn - e)) * cc / 2;
}

template <class T>
T qes_wavefunction_t(const ModelParams& p, int n, Branch branch, const std::vector<cplx>& v, T x)
{
    p.validate();
    if (static_cast<int>(v.size()) != n)
        throw InvalidArgument("qes_wavefunction needs n values v_j");
    const T e = T(p.epsilon) / p.omega, go = T(p.g) / p.omega;
    if (branch == Branch::plus)
        return product_wavefunction<T>((2 * n + 1 + 4 * e) / 4, T(2 * n - 1) / 4, -go * go, go, v, x);
    return product_wavefunction<T>(T(2 * n - 1) / 4, (2 * n + 1 - 4 * e) / 4, go * go, go, v, x);
}

} // namespace

double PoschlTellerCoefficients::operator()(double x) const
{
    check_x(x);
    const double c = std::cosh(x);
    const double sh = std::sinh(x);
    return K0 + K1 * c + G * sh * sh + a / cosh_m1(x) + b / (c + 1.0);
}

double PoschlTellerCoefficients::on_segment(double theta) const
{
    const double s = std::sin(0.5 * theta), co = std::cos(0.5 * theta);
    const double st = std::sin(theta);
    return K0 + K1 * std::cos(theta) - G * st * st - a / (2.0 * s * s) + b / (2.0 * co * co);
}

PotentialSpec PotentialSpec::qes(const ModelParams& p, int n, Branch b)
{
    PotentialSpec s;
    s.kind = PotentialKind::qes;
    s.branch = b;
    s.params = p;
    s.n = n;
    return s;
}

PotentialSpec PotentialSpec::full(const ModelParams& p, double E, Branch b)
{
    PotentialSpec s;
    s.kind = PotentialKind::full;
    s.branch = b;
    s.params = p;
    s.E = E;
    return s;
}

PotentialSpec PotentialSpec::of_gaudin(const GaudinParams& gp)
{
    PotentialSpec s;
    s.kind = PotentialKind::gaudin;
    s.gaudin = gp;
    return s;
}

void PotentialSpec::validate() const
{
    const bool ok = (kind == PotentialKind::qes && n && !E && !gaudin) ||
                    (kind == PotentialKind::full && E && !n && !gaudin) ||
                    (kind == PotentialKind::gaudin && gaudin && !n && !E);
    if (!ok)
        throw InvalidArgument("PotentialSpec fields do not match its kind");
    if (kind != PotentialKind::gaudin)
        params.validate();
    if (kind == PotentialKind::qes && *n < 0)
        throw InvalidArgument("qes potential needs n >= 0");
}

double PotentialSpec::operator()(double x, PotentialForm form) const
{
    validate();
    switch (kind) {
    case PotentialKind::qes:
        return qes_potential(params, *n, branch, x, form);
    case PotentialKind::full:
        return full_potential(params, *E, branch, x, form);
    case PotentialKind::gaudin:
        return gaudin_potential(*gaudin, x);
    }
    return 0.0;
}

PoschlTellerCoefficients PotentialSpec::coefficients() const
{
    validate();
    switch (kind) {
    case PotentialKind::qes:
        return qes_coefficients(params, *n, branch);
    case PotentialKind::full:
        return full_coefficients(params, *E, branch);
    case PotentialKind::gaudin: {
        const GaudinParams& gp = *gaudin;
        const double Ag = gp.A * gp.gamma;
        PoschlTellerCoefficients c;
        c.K0 = gp.M * (gp.M - 1 - gp.B - gp.C) + 0.25 * (gp.B + gp.C + 1) * (gp.B + gp.C + 1) +
               0.25 * Ag * (gp.C - gp.B);
        c.K1 = 0.5 * gp.M * Ag - 0.25 * Ag * (gp.B + gp.C);
        c.G = Ag * Ag / 16.0;
        c.a = (2 * gp.B + 1) * (2 * gp.B + 3) / 8.0;
        c.b = -(2 * gp.C + 1) * (2 * gp.C + 3) / 8.0;
        return c;
    }
    }
    return {};
}

double gaudin_potential(const GaudinParams& gp, double x)
{
    return gaudin_potential_t(gp, x);
}

long double gaudin_potential(const GaudinParams& gp, long double x)
{
    return gaudin_potential_t(gp, x);
}

double gaudin_wavefunction(const GaudinParams& gp, double x)
{
    return gaudin_wavefunction_t(gp, x);
}

long double gaudin_wavefunction(const GaudinParams& gp, long double x)
{
    return gaudin_wavefunction_t(gp, x);
}

PoschlTellerCoefficients qes_coefficients(const ModelParams& p, int n, Branch branch)
{
    p.validate();
    const double w = p.omega, e = p.epsilon / w, g2 = p.g * p.g / (w * w);
    PoschlTellerCoefficients c;
    c.G = g2 * g2;
    if (branch == Branch::plus) {
        c.K0 = e * e + g2 + 2 * g2 * e;
        c.K1 = -g2 + 2 * g2 * e;
        c.a = (2 * n + 1 + 4 * e) * (2 * n + 3 + 4 * e) / 8.0;
        c.b = -(4.0 * n * n - 1) / 8.0;
    } else {
        c.K0 = e * e + g2 - 2 * g2 * e;
        c.K1 = g2 + 2 * g2 * e;
        c.a = (4.0 * n * n - 1) / 8.0;
        c.b = -(2 * n + 1 - 4 * e) * (2 * n + 3 - 4 * e) / 8.0;
    }
    return c;
}

double qes_potential(const ModelParams& p, int n, Branch branch, double x, PotentialForm form)
{
    return qes_potential_t(p, n, branch, x, form);
}

long double qes_potential(const ModelParams& p, int n, Branch branch, long double x, PotentialForm form)
{
    return qes_potential_t(p, n, branch, x, form);
}

double qes_wavefunction(const ModelParams& p, int n, Branch branch, const std::vector<cplx>& v, double x)
{
    return qes_wavefunction_t(p, n, branch, v, x);
}

long double qes_wavefunction(const ModelParams& p, int n, Branch branch, const std::vector<cplx>& v, long double x)
{
    return qes_wavefunction_t(p, n, branch, v, x);
}

PoschlTellerCoefficients full_coefficients(const ModelParams& p, double E, Branch branch)
{
    p.validate();
    const double w = p.omega, eps = p.epsilon, g2 = p.g * p.g;
    const double e = eps / w, gw = g2 / (w * w);
    const double w2 = w * w, w4 = w2 * w2;
    const double sp = 2 * E * w + 2 * eps * w + 2 * g2;  // enters the cosh x - 1 term
    const double sm = 2 * E * w - 2 * eps * w + 2 * g2;  // enters the cosh x + 1 term
    PoschlTellerCoefficients c;
    c.G = gw * gw;
    if (branch == Branch::plus) {
        c.K0 = e * e + gw + 2 * g2 * eps / (w2 * w);
        c.K1 = -gw + 2 * g2 * eps / (w2 * w);
        c.a = (sp + 3 * w2) * (sp + w2) / (8 * w4);
        c.b = -(sm + w2) * (sm - w2) / (8 * w4);
    } else {
        c.K0 = e * e + gw - 2 * g2 * eps / (w2 * w);
        c.K1 = gw + 2 * g2 * eps / (w2 * w);
        c.a = (sp + w2) * (sp - w2) / (8 * w4);
        c.b = -(sm + 3 * w2) * (sm + w2) / (8 * w4);
    }
    return c;
}

double full_potential(const ModelParams& p, double E, Branch branch, double x, PotentialForm form)
{
    p.validate();
    check_x(x);
    const double w = p.omega, eps = p.epsilon, g2 = p.g * p.g;
    const double c = std::cosh(x), sh = std::sinh(x), cm1 = cosh_m1(x);
    const double w2 = w * w, w3 = w2 * w, w4 = w2 * w2;
    const double base_sp = 2 * E * w + 2 * eps * w + 2 * g2;
    const double base_sm = 2 * E * w - 2 * eps * w + 2 * g2;
    if (form == PotentialForm::partial_fraction) {
        if (branch == Branch::plus)
            return eps * eps / w2 + g2 * g2 / w4 * sh * sh + g2 / w2 * (1 - c) + 2 * g2 * eps / w3 * (1 + c) +
                   (base_sp + 3 * w2) * (base_sp + w2) / (8 * w4 * cm1) -
                   (base_sm + w2) * (base_sm - w2) / (8 * w4 * (c + 1));
        return eps * eps / w2 + g2 * g2 / w4 * sh * sh + g2 / w2 * (1 + c) - 2 * g2 * eps / w3 * (1 - c) +
               (base_sp + w2) * (base_sp - w2) / (8 * w4 * cm1) -
               (base_sm + 3 * w2) * (base_sm + w2) / (8 * w4 * (c + 1));
    }
    // hyperbolic rewrite in dimensionless variables (reduces to the omega = 1 display)
    const double e = eps / w, gw = g2 / w2, s = E / w + gw + 0.5;
    const double csch2 = 1.0 / (sh * sh), cc = c / (sh * sh);
    if (branch == Branch::plus)
        return e * e + gw * (1 + 2 * e) - gw * (1 - 2 * e) * c + gw * gw * sh * sh + (s * s + e * e + e) * csch2 +
               (2 * e + 1) * s * cc;
    return e * e + gw * (1 - 2 * e) + gw * (1 + 2 * e) * c + gw * gw * sh * sh + (s * s + e * e - e) * csch2 +
           (2 * e - 1) * s * cc;
}

double full_energy(const ModelParams& p, double E, Branch branch)
{
    p.validate();
    const double w = p.omega, g2 = p.g * p.g, w3 = w * w * w;
    return -2 * E * g2 / w3 - 2 * g2 * g2 / (w3 * w) - p.delta * p.delta / (w * w) + sign(branch) * 2 * g2 * p.epsilon / w3;
}

CanonicalQesForm canonical_qes_form(const ModelParams& p, int n, Branch branch, double E)
{
    p.validate();
    const double w = p.omega, g = p.g, eps = p.epsilon, d2 = p.delta * p.delta;
    CanonicalQesForm f;
    f.n = n;
    f.E = E;
    f.P_coeffs = {-g * g, 0.0, w * w};
    const double rbase = n * n * w * w / 3.0 + n * w * w / 6.0 - 2.0 * n * g * g - d2;
    if (branch == Branch::plus) {
        f.Q_coeffs = {-(g / w) * (w * w + 2 * eps * w - 2 * g * g), -(n * w * w + 2 * eps * w), -2 * g * w};
        f.R = rbase + n * eps * w;
    } else {
        f.Q_coeffs = {(g / w) * (w * w - 2 * eps * w - 2 * g * g), -(n * w * w - 2 * eps * w), 2 * g * w};
        f.R = rbase - n * eps * w;
    }
    return f;
}

BargmannOde CanonicalQesForm::as_ode() const
{
    BargmannOde ode;
    ode.second = P_coeffs;
    const double nn = n;
    // P' = P1 + 2 P2 z, P'' = 2 P2, Q' = Q1 + 2 Q2 z
    ode.first = {Q_coeffs[0] - 0.5 * (nn - 1) * P_coeffs[1], Q_coeffs[1] - (nn - 1) * P_coeffs[2], Q_coeffs[2]};
    ode.zeroth = {R - 0.5 * nn * Q_coeffs[1] + nn * (nn - 1) / 6.0 * P_coeffs[2], -nn * Q_coeffs[2]};
    return ode;
}

double partner_component(const ModelParams& p, double E, Branch branch, const JetFunction& phi, double z)
{
    p.validate();
    if (p.delta == 0.0)
        throw InvalidArgument("partner component undefined for Delta = 0");
    const double w = p.omega, g = p.g;
    const FunctionJet f = phi(z);
    if (branch == Branch::plus)
        return -((w * z + g) * f.derivative - (g * g / w + E - p.epsilon) * f.value) / p.delta;
    return -((w * z - g) * f.derivative - (g * g / w + E + p.epsilon) * f.value) / p.delta;
}

KkConstants kk_constants(const ModelParams& p, double E, double A_free)
{
    p.validate();
    if (A_free == 0.0)
        throw InvalidArgument("A_free must be non-zero");
    const double w = p.omega, g2 = p.g * p.g, eps = p.epsilon;
    const double w2 = w * w, w3 = w2 * w, w4 = w2 * w2;
    KkConstants k;
    k.A_free = A_free;
    k.q = -4 * g2 / (A_free * A_free * w2);
    k.lambda = E * E / w2 - 2 * E * g2 / w3 + 4 * g2 * eps / w3 - 3 * g2 * g2 / w4 - p.delta * p.delta / w2 -
               eps * eps / w2;
    k.B_kk = -1 - 4 * g2 / w2 + 2 * eps / w;
    k.two_j = E / w + g2 / w2 - eps / w;
    k.L = -E / w - g2 / w2 - 0.5 + eps / w;
    return k;
}

} // namespace aqrm
