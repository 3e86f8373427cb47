#pragma once

#include "aqrm/model.hpp"

#include <vector>

namespace aqrm {

// Largest level accepted by the double-precision root isolation.
inline constexpr int max_constraint_degree = 12;

struct QesPoint {
    int n = 0;
    Branch branch = Branch::plus;
    double g = 0.0;
    double energy = 0.0;
    double constraint_residual = 0.0;  // |P_n| relative to its absolute-term scale
};

struct QesPointSet {
    std::vector<QesPoint> points;
    // Delta = 0: the Juddian family sits in the Q truncation, not in P_n = 0
    bool degenerate_atomic_limit = false;
};

struct QSequence {
    int n = 0;
    std::vector<double> values;  // Q_0 .. Q_{n+1}, or Q_0 .. Q_n when truncated
    double normalization = 1.0;  // Q_0
};

// P_n(x, y) by the three-term recursion; eps is the (branch-adjusted) asymmetry.
double constraint_poly_eval(int n, double x, double y, double epsilon, double omega);

// Coefficients of P_n in x, ascending, at fixed y.
std::vector<double> constraint_poly_coefficients(int n, double y, double epsilon, double omega);

// Roots g > 0 of P_n((2g)^2, Delta^2) with eps -> sign*eps, ascending. p.g is ignored.
QesPointSet qes_points(const ModelParams& p, int n, Branch branch);

// |P_n| / sum of absolute recursion terms at x = (2g)^2.
double constraint_residual(int n, const ModelParams& p, Branch branch);

// Q_0 = 1 .. Q_{n+1}. Throws ResonantParameterError when 2 sign*eps + (n-k)omega = 0.
QSequence q_sequence(int n, const ModelParams& p, Branch branch);

// Q_0 .. Q_n only; the k = n step (resonant at eps = 0) is skipped.
QSequence q_sequence_truncated(int n, const ModelParams& p, Branch branch);

double qp_proportionality_residual(int n, const ModelParams& p, Branch branch);

} // namespace aqrm
