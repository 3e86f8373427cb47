#pragma once

#include "aqrm/potentials.hpp"

#include <utility>
#include <vector>

namespace aqrm::detail {

// Series solution t^rho sum c_k t^k of
//   t^2 (2+t)^2 y'' + t (2+t)(1+t) y' - t (2+t) [V(t) - calE] y = 0,
// V(t) = K0 + K1 (1+t) + G t (2+t) + a/t + b/(2+t),
// which is -y_xx + V y = calE y with t = cosh x - 1. Radius of convergence 2.
class FrobeniusSeries {
public:
    FrobeniusSeries(const PoschlTellerCoefficients& c, double calE, double rho, double t_max);

    // (S, dS/dt) with y = |t|^rho S(t); derivative of y is |t|^rho (rho S / t + S')
    std::pair<double, double> eval(double t) const;

    // (y / |t|^rho, dy/dt / |t|^rho)
    std::pair<double, double> solution(double t) const;

    double rho() const { return rho_; }
    // smallest |F_0(N + rho)| relative to its size, N >= 1: ~0 near an exponent resonance
    double resonance_margin() const { return margin_; }
    std::size_t terms() const { return c_.size(); }

private:
    double rho_;
    double margin_ = 1.0;
    std::vector<double> c_;
};

// Exactly at a resonance F_0(N + rho) = 0 the rho series exists only if the
// order-N recurrence numerator vanishes. Returns that numerator relative to the
// magnitudes of its parts; ~0 means log-free.
double resonance_obstruction(const PoschlTellerCoefficients& c, double calE, double rho, int N);

// Same potential written around cosh x = -1, variable t = -(cosh x + 1).
PoschlTellerCoefficients mirror(const PoschlTellerCoefficients& c);

} // namespace aqrm::detail
