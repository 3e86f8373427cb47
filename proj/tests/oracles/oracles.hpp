#pragma once

// Independent reference computations for the test suites. Nothing here calls
// into the library: the Hamiltonian is built in the sigma_z basis (the library
// uses sigma_x) and solved densely.

#include <Eigen/Dense>
#include <unsupported/Eigen/Polynomials>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace oracle {

using cplx = std::complex<double>;

struct Model {
    double delta = 1.2;
    double epsilon = 0.3;
    double omega = 1.0;
    double g = 0.0;
};

// basis index 2m + t, t = 0 for sigma_z = +1
inline Eigen::MatrixXd hamiltonian(const Model& p, int truncation)
{
    const int dim = 2 * (truncation + 1);
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(dim, dim);
    for (int m = 0; m <= truncation; ++m) {
        h(2 * m, 2 * m) = p.omega * m + p.delta;
        h(2 * m + 1, 2 * m + 1) = p.omega * m - p.delta;
        h(2 * m, 2 * m + 1) = h(2 * m + 1, 2 * m) = p.epsilon;
        if (m < truncation) {
            const double c = p.g * std::sqrt(m + 1.0);
            // sigma_x (a + a^dag) links (m, up) with (m+1, down) and vice versa
            h(2 * m, 2 * m + 3) = h(2 * m + 3, 2 * m) = c;
            h(2 * m + 1, 2 * m + 2) = h(2 * m + 2, 2 * m + 1) = c;
        }
    }
    return h;
}

inline std::vector<double> levels(const Model& p, int count, int truncation = 200)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian(p, truncation), Eigen::EigenvaluesOnly);
    const auto& ev = es.eigenvalues();
    return std::vector<double>(ev.data(), ev.data() + count);
}

struct State {
    double energy = 0.0;
    Eigen::VectorXd vec;
};

inline State nearest_state(const Model& p, double E, int truncation = 120)
{
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(hamiltonian(p, truncation));
    Eigen::Index k;
    (es.eigenvalues().array() - E).abs().minCoeff(&k);
    return {es.eigenvalues()(k), es.eigenvectors().col(k)};
}

struct BargmannPolynomial {
    std::vector<double> coeffs;  // ascending, degree `degree`
    double tail = 0.0;           // largest dropped coefficient relative to the kept ones
};

// sigma_x = sx component of the state as a Bargmann function sum c_m z^m / sqrt(m!),
// multiplied by exp(a z) and cut to the given degree.
inline BargmannPolynomial bargmann_polynomial(const State& s, int sx, double a, int degree)
{
    const int M = static_cast<int>(s.vec.size()) / 2;
    std::vector<long double> b(M), e(M);
    long double fact = 1.0L;
    for (int m = 0; m < M; ++m) {
        if (m)
            fact *= m;
        const long double c = (s.vec(2 * m) + sx * s.vec(2 * m + 1)) / std::sqrt(2.0L);
        b[m] = c / std::sqrt(fact);
        e[m] = std::pow(static_cast<long double>(a), m) / fact;
    }
    const int keep = std::min(M, 40);
    std::vector<long double> prod(keep, 0.0L);
    for (int i = 0; i < keep; ++i)
        for (int j = 0; i + j < keep; ++j)
            prod[i + j] += b[i] * e[j];
    BargmannPolynomial out;
    long double scale = 0.0L, tail = 0.0L;
    for (int k = 0; k < keep; ++k) {
        if (k <= degree) {
            out.coeffs.push_back(static_cast<double>(prod[k]));
            scale = std::max(scale, std::abs(prod[k]));
        } else if (k < 30) {
            tail = std::max(tail, std::abs(prod[k]));
        }
    }
    out.tail = static_cast<double>(tail / scale);
    return out;
}

inline std::vector<cplx> roots(const std::vector<double>& ascending)
{
    Eigen::PolynomialSolver<double, Eigen::Dynamic> solver;
    solver.compute(Eigen::Map<const Eigen::VectorXd>(ascending.data(), static_cast<Eigen::Index>(ascending.size())));
    std::vector<cplx> r(solver.roots().data(), solver.roots().data() + solver.roots().size());
    return r;
}

// max over a of min over b |a - b|, both directions
inline double set_distance(const std::vector<cplx>& a, const std::vector<cplx>& b)
{
    auto one = [](const std::vector<cplx>& x, const std::vector<cplx>& y) {
        double worst = 0.0;
        for (const auto& u : x) {
            double best = INFINITY;
            for (const auto& v : y)
                best = std::min(best, std::abs(u - v));
            worst = std::max(worst, best);
        }
        return worst;
    };
    if (a.size() != b.size())
        return INFINITY;
    return std::max(one(a, b), one(b, a));
}

// e_0 .. e_n of the given values
inline std::vector<cplx> elementary_symmetric(const std::vector<cplx>& w)
{
    std::vector<cplx> e(w.size() + 1, 0.0);
    e[0] = 1.0;
    for (std::size_t i = 0; i < w.size(); ++i)
        for (std::size_t k = i + 1; k >= 1; --k)
            e[k] += e[k - 1] * w[i];
    return e;
}

// P_n(x, y) by its three-term recursion, long double
inline long double constraint_p(int n, long double x, long double y, long double eps, long double w)
{
    long double pm2 = 0.0L, pm1 = 1.0L;
    for (int k = 1; k <= n; ++k) {
        const long double a = k * x + y - k * k * w * w - 2.0L * k * eps * w;
        const long double pk = a * pm1 - static_cast<long double>(k) * (k - 1) * (n - k + 1) * x * w * w * pm2;
        pm2 = pm1;
        pm1 = pk;
    }
    return pm1;
}

// Q_0 = 1 .. Q_{n+1}, long double; eps is already branch-adjusted
inline std::vector<long double> coefficient_q(int n, long double delta, long double eps, long double w,
                                              long double g)
{
    std::vector<long double> q(n + 2, 0.0L);
    q[0] = 1.0L;
    for (int k = 0; k <= n; ++k) {
        const long double lead = w * (k + 1) * (2 * eps + n * w - k * w);
        if (lead == 0.0L)
            throw std::domain_error("resonant recurrence step");
        const long double diag = w * w * (2.0L * k * k - 2.0L * k * n - k) - 2.0L * k * eps * w + 4.0L * k * g * g +
                                 delta * delta;
        const long double prev = k ? q[k - 1] : 0.0L;
        q[k + 1] = (-q[k] * diag + prev * (1 - k) * w * w * (n - k + 1)) / lead;
    }
    return q;
}

} // namespace oracle
