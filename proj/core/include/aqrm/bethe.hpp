#pragma once

#include "aqrm/constraint.hpp"
#include "aqrm/model.hpp"

#include <complex>
#include <vector>

namespace aqrm {

using cplx = std::complex<double>;

struct BetheRoots {
    int n = 0;
    Branch branch = Branch::plus;
    ModelParams params;
    std::vector<cplx> roots;       // sorted by real part, then imaginary part
    double residual_norm = 0.0;    // max |Bethe residual|
    double constraint_residual = 0.0;
    double route_agreement = 0.0;  // max distance between polynomial and Newton roots
};

struct GaudinParams {
    double A = 0.0;
    double B = 0.0;
    double C = 0.0;
    double gamma = 0.0;
    int M = 0;
    std::vector<cplx> v;
    double calE = 0.0;
};

struct BetheOptions {
    double tolerance = 1e-8;    // residual, constraint and route agreement
    double seed_perturbation = 1e-3;
    int max_newton_iterations = 100;
};

// Component i of the branch's Bethe equations (rhs subtracted from lhs).
std::vector<cplx> bethe_residuals(const std::vector<cplx>& roots, const ModelParams& p, int n, Branch branch);

// Delta^2 + 2 n g^2 + 2 sign omega g sum z
cplx bethe_constraint(const std::vector<cplx>& roots, const ModelParams& p, int n, Branch branch);

// Roots at a QES coupling: polynomial route on f(u) = sum Q_k u^k, Newton cross-check.
BetheRoots solve_bethe(const ModelParams& p, int n, Branch branch, const BetheOptions& opts = {});

// Damped Newton on bethe_residuals from the given seed.
std::vector<cplx> newton_bethe(std::vector<cplx> seed, const ModelParams& p, int n, Branch branch,
                               int max_iterations = 100);

GaudinParams to_gaudin(const BetheRoots& roots, double tolerance = 1e-8);

struct RootsQSequence {
    QSequence q;                 // Q_0 .. Q_n, normalized to Q_0 = 1
    int degenerate_factors = 0;  // roots with z = -g/omega (deflated)
};

// Q_k from the elementary symmetric polynomials of w_i = (g - omega z_i)/(g + omega z_i).
RootsQSequence q_from_roots(const BetheRoots& roots);

// Optimal assignment under absolute distance; returns the largest matched distance.
double match_root_sets(const std::vector<cplx>& a, const std::vector<cplx>& b);

// Real-part then imaginary-part ordering used for every emitted root list.
void sort_roots(std::vector<cplx>& roots);

} // namespace aqrm
