#include "aqrm/constraint.hpp"

#include "aqrm/errors.hpp"

#include <boost/math/tools/roots.hpp>
#include <boost/math/tools/toms748_solve.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace aqrm {
namespace {

using Poly = std::vector<long double>;  // ascending coefficients

void trim(Poly& p, long double tol)
{
    while (!p.empty() && std::abs(p.back()) <= tol)
        p.pop_back();
}

long double max_abs(const Poly& p)
{
    long double m = 0;
    for (auto c : p)
        m = std::max(m, std::abs(c));
    return m;
}

long double horner(const Poly& p, long double x)
{
    long double r = 0;
    for (auto it = p.rbegin(); it != p.rend(); ++it)
        r = r * x + *it;
    return r;
}

Poly derivative(const Poly& p)
{
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i)
        d.push_back(static_cast<long double>(i) * p[i]);
    return d;
}

// remainder of a / b, b non-empty with non-zero leading coefficient
Poly remainder(Poly a, const Poly& b)
{
    const long double lead = b.back();
    const std::size_t db = b.size() - 1;
    while (a.size() > db && !a.empty()) {
        const long double f = a.back() / lead;
        const std::size_t shift = a.size() - 1 - db;
        for (std::size_t i = 0; i <= db; ++i)
            a[shift + i] -= f * b[i];
        a.pop_back();
    }
    return a;
}

class SturmChain {
public:
    explicit SturmChain(const Poly& p)
    {
        chain_.push_back(p);
        chain_.push_back(derivative(p));
        const long double eps = std::numeric_limits<long double>::epsilon();
        while (chain_.back().size() > 1) {
            const Poly& a = chain_[chain_.size() - 2];
            Poly r = remainder(a, chain_.back());
            trim(r, 256 * eps * max_abs(a));
            if (r.empty())
                break;  // repeated root; chain ends at the gcd
            for (auto& c : r)
                c = -c;
            chain_.push_back(std::move(r));
        }
    }

    int variations(long double x) const
    {
        int count = 0;
        int last = 0;
        for (const auto& q : chain_) {
            const long double v = horner(q, x);
            const int s = (v > 0) - (v < 0);
            if (s == 0)
                continue;
            if (last != 0 && s != last)
                ++count;
            last = s;
        }
        return count;
    }

    // distinct roots in (a, b]
    int count(long double a, long double b) const { return variations(a) - variations(b); }

private:
    std::vector<Poly> chain_;
};

void check_degree(int n)
{
    if (n < 1)
        throw InvalidArgument("constraint polynomial needs n >= 1");
    if (n > max_constraint_degree) {
        std::ostringstream os;
        os << "n = " << n << " exceeds the double-precision limit " << max_constraint_degree;
        throw InvalidArgument(os.str());
    }
}

// absolute-value version of the recursion, the natural rounding scale of P_n
double constraint_poly_scale(int n, double x, double y, double eps, double omega)
{
    const double w2 = omega * omega;
    double pm2 = 0.0, pm1 = 1.0;
    for (int k = 1; k <= n; ++k) {
        const double a = std::abs(k * x) + std::abs(y) + std::abs(k * k * w2) + std::abs(2.0 * k * eps * omega);
        const double b = std::abs(double(k) * (k - 1) * (n - k + 1) * x * w2);
        const double pk = a * pm1 + b * pm2;
        pm2 = pm1;
        pm1 = pk;
    }
    return pm1;
}

struct Step {
    double lead, diag, lower;  // lead Q_{k+1} = -diag Q_k + lower Q_{k-1}
    double diag_abs;           // sum of |terms| in diag
};

Step q_step(int n, int k, const ModelParams& p, double eps)
{
    const double w = p.omega;
    Step s;
    s.lead = w * (k + 1) * (2 * eps + n * w - k * w);
    s.diag = w * w * (2.0 * k * k - 2.0 * k * n - k) - 2.0 * k * eps * w + 4.0 * k * p.g * p.g + p.delta * p.delta;
    s.lower = (1.0 - k) * w * w * (n - k + 1);
    s.diag_abs = std::abs(w * w * (2.0 * k * k - 2.0 * k * n - k)) + std::abs(2.0 * k * eps * w) +
                 4.0 * k * p.g * p.g + p.delta * p.delta;
    return s;
}

QSequence q_recurrence(int n, const ModelParams& p, Branch branch, int last_k)
{
    p.validate();
    if (n < 1)
        throw InvalidArgument("q_sequence needs n >= 1");
    const double eps = sign(branch) * p.epsilon;
    QSequence q;
    q.n = n;
    q.values.assign(1, 1.0);
    double qm1 = 0.0;
    for (int k = 0; k <= last_k; ++k) {
        const Step s = q_step(n, k, p, eps);
        if (std::abs(2 * eps + (n - k) * p.omega) <= 1e-13 * p.omega * (1 + n)) {
            std::ostringstream os;
            os << "resonant parameters: 2*eps + (n-k)*omega = 0 at n=" << n << ", k=" << k;
            throw ResonantParameterError(os.str(), k);
        }
        const double qk = q.values.back();
        q.values.push_back((-qk * s.diag + qm1 * s.lower) / s.lead);
        qm1 = qk;
    }
    return q;
}

} // namespace

double constraint_poly_eval(int n, double x, double y, double epsilon, double omega)
{
    if (n < 0)
        throw InvalidArgument("constraint polynomial needs n >= 0");
    const double w2 = omega * omega;
    double pm2 = 0.0, pm1 = 1.0;
    for (int k = 1; k <= n; ++k) {
        const double a = k * x + y - k * k * w2 - 2.0 * k * epsilon * omega;
        const double b = double(k) * (k - 1) * (n - k + 1) * x * w2;
        const double pk = std::fma(a, pm1, -b * pm2);
        pm2 = pm1;
        pm1 = pk;
    }
    return pm1;
}

std::vector<double> constraint_poly_coefficients(int n, double y, double epsilon, double omega)
{
    if (n < 0)
        throw InvalidArgument("constraint polynomial needs n >= 0");
    const long double w2 = static_cast<long double>(omega) * omega;
    Poly pm2, pm1{1.0L};
    for (int k = 1; k <= n; ++k) {
        const long double c = y - k * k * w2 - 2.0L * k * epsilon * omega;
        const long double d = static_cast<long double>(k) * (k - 1) * (n - k + 1) * w2;
        Poly pk(pm1.size() + 1, 0.0L);
        for (std::size_t i = 0; i < pm1.size(); ++i) {
            pk[i] += c * pm1[i];
            pk[i + 1] += k * pm1[i];
        }
        for (std::size_t i = 0; i < pm2.size(); ++i)
            pk[i + 1] -= d * pm2[i];
        pm2 = std::move(pm1);
        pm1 = std::move(pk);
    }
    return std::vector<double>(pm1.begin(), pm1.end());
}

QesPointSet qes_points(const ModelParams& params, int n, Branch branch)
{
    check_degree(n);
    ModelParams p = params.with_g(0.0);
    p.validate();
    QesPointSet out;
    if (p.delta == 0.0) {
        out.degenerate_atomic_limit = true;
        return out;
    }
    const double eps = sign(branch) * p.epsilon;
    const double y = p.delta * p.delta;
    const auto coeffs = constraint_poly_coefficients(n, y, eps, p.omega);

    // Cauchy bound, then rescale x = R xi so the search interval is (0, 1]
    long double bound = 0;
    for (int i = 0; i < n; ++i)
        bound = std::max(bound, std::abs(static_cast<long double>(coeffs[i]) / coeffs[n]));
    const long double R = 1 + bound;
    Poly scaled(coeffs.size());
    long double rp = 1;
    for (std::size_t i = 0; i < coeffs.size(); ++i, rp *= R)
        scaled[i] = coeffs[i] * rp;
    const long double norm = max_abs(scaled);
    for (auto& c : scaled)
        c /= norm;
    const SturmChain sturm(scaled);

    auto f = [&](double x) { return constraint_poly_eval(n, x, y, eps, p.omega); };

    std::vector<std::pair<long double, long double>> work{{0.0L, 1.0L}};
    std::vector<double> roots;
    while (!work.empty()) {
        auto [lo, hi] = work.back();
        work.pop_back();
        const int c = sturm.count(lo, hi);
        if (c == 0)
            continue;
        const long double mid = 0.5L * (lo + hi);
        if (hi - lo < 1e-15L) {
            roots.push_back(static_cast<double>(mid * R));  // unresolved cluster
            continue;
        }
        if (c > 1) {
            work.emplace_back(lo, mid);
            work.emplace_back(mid, hi);
            continue;
        }
        const double a = static_cast<double>(lo * R), b = static_cast<double>(hi * R);
        const double fa = f(a), fb = f(b);
        if (fb == 0.0) {
            roots.push_back(b);
        } else if (fa * fb < 0.0) {
            std::uintmax_t iters = 200;
            auto r = boost::math::tools::toms748_solve(f, a, b, fa, fb,
                                                       boost::math::tools::eps_tolerance<double>(52), iters);
            roots.push_back(0.5 * (r.first + r.second));
        } else {
            // one root but no double-precision sign change yet: narrow by counting
            if (sturm.count(lo, mid) == 1)
                work.emplace_back(lo, mid);
            else
                work.emplace_back(mid, hi);
        }
    }
    std::sort(roots.begin(), roots.end());
    for (double x : roots) {
        if (!(x > 0.0))
            continue;
        QesPoint q;
        q.n = n;
        q.branch = branch;
        q.g = 0.5 * std::sqrt(x);
        q.energy = qes_energy(p.with_g(q.g), n, branch);
        q.constraint_residual = constraint_residual(n, p.with_g(q.g), branch);
        out.points.push_back(q);
    }
    return out;
}

double constraint_residual(int n, const ModelParams& p, Branch branch)
{
    const double eps = sign(branch) * p.epsilon;
    const double x = 4.0 * p.g * p.g, y = p.delta * p.delta;
    const double scale = constraint_poly_scale(n, x, y, eps, p.omega);
    return scale > 0.0 ? std::abs(constraint_poly_eval(n, x, y, eps, p.omega)) / scale : 0.0;
}

QSequence q_sequence(int n, const ModelParams& p, Branch branch)
{
    return q_recurrence(n, p, branch, n);
}

QSequence q_sequence_truncated(int n, const ModelParams& p, Branch branch)
{
    return q_recurrence(n, p, branch, n - 1);
}

double qp_proportionality_residual(int n, const ModelParams& p, Branch branch)
{
    const QSequence q = q_sequence(n, p, branch);
    const double eps = sign(branch) * p.epsilon;
    const double w = p.omega;
    const double y = p.delta * p.delta;
    const double pn = constraint_poly_eval(n, 4.0 * p.g * p.g, y, eps, w);

    double denom = std::pow(2.0 * w, n + 1);
    for (int k = 0; k <= n; ++k)
        denom *= (k + 1) * (eps + 0.5 * k * w);
    const double rhs = ((n + 1) % 2 ? -1.0 : 1.0) * y * pn / denom;
    const double lhs = q.values[n + 1];

    // size of the terms that cancel on each side
    const Step s = q_step(n, n, p, eps);
    const double q_terms =
        (std::abs(q.values[n]) * s.diag_abs + std::abs(q.values[n - 1] * s.lower)) / std::abs(s.lead);
    const double p_terms = y * constraint_poly_scale(n, 4.0 * p.g * p.g, y, eps, w) / std::abs(denom);
    const double scale = std::max({std::abs(lhs), std::abs(rhs), q_terms, p_terms});
    return scale > 0.0 ? std::abs(lhs - rhs) / scale : 0.0;
}

} // namespace aqrm
