#pragma once

#include "aqrm/model.hpp"
#include "aqrm/potentials.hpp"

#include <functional>
#include <numbers>
#include <string>
#include <vector>

namespace aqrm {

using RealFunction = std::function<double(double)>;
using ExtendedFunction = std::function<long double(long double)>;

struct Grid {
    double x_min = 0.3;
    double x_max = 6.0;
    std::vector<double> points;

    static Grid uniform(double x_min, double x_max, int count);
};

struct ResidualOptions {
    double h = 1e-3;
    int max_halvings = 4;
};

// max |-Psi'' + V Psi - calE Psi| / max |Psi| over the grid
double residual_check(const RealFunction& V, const RealFunction& Psi, double calE, const Grid& grid,
                      const ResidualOptions& opts = {});

// Same in long double. Needed when Psi spans hundreds of e-folds on the grid:
// double rounding noise in Psi, amplified by 1/h^2, then exceeds 1e-6.
double residual_check_extended(const ExtendedFunction& V, const ExtendedFunction& Psi, double calE,
                               const Grid& grid, const ResidualOptions& opts = {});

// l with V ~ l(l+1)/x^2 at the origin; the equivalence selects x^{-l}.
double indicial_exponent(const ModelParams& p, double E, Branch branch);
// Same at the other regular singular point x = i pi (z = -g/omega).
double far_exponent(const ModelParams& p, double E, Branch branch);

struct ConnectionResult {
    double energy = 0.0;  // AQRM energy E (NaN for a bare potential)
    double calE = 0.0;
    double wronskian = 0.0;  // normalized: |W| <= 1
    double left_exponent = 0.0;
    bool converged = false;
};

struct ConnectionOptions {
    double x_match = 1.0;
    double rel_tol = 1e-11;
    double abs_tol = 1e-14;
};

// Half-line problem: x^{-l} series branch at x_min, recessive (WKB) start at x_max.
ConnectionResult connection_wronskian(const PotentialSpec& spec, double calE, double x_min, double x_max,
                                      const ConnectionOptions& opts = {});

enum class LeftBoundary { even_parity, odd_parity };

// Half-line problem for a regular potential with a parity condition at x = 0.
ConnectionResult connection_wronskian(const RealFunction& V, double calE, LeftBoundary left, double x_max,
                                      const ConnectionOptions& opts = {});

struct SegmentOptions {
    double theta_left = std::numbers::pi / 3;
    double theta_right = 2 * std::numbers::pi / 3;
    double theta_match = std::numbers::pi / 2;
    double rel_tol = 1e-12;
    double abs_tol = 1e-15;
};

// Connection problem along x = i theta, theta in (0, pi): the x^{-l} branch at
// theta = 0 against the matching branch at theta = pi. Zero iff E is an AQRM level.
ConnectionResult segment_wronskian(const ModelParams& p, double E, Branch branch, const SegmentOptions& opts = {});

// Energies where a Frobenius exponent resonance makes the segment Wronskian jump.
std::vector<double> resonance_energies(const ModelParams& p, Branch branch, double E_lo, double E_hi);

// True if E puts an end of the segment at an exponent resonance whose Frobenius
// series is log-free. Then E is a level (the Juddian, exceptional case), which
// the Wronskian alone cannot see.
bool log_free_resonance(const ModelParams& p, double E, Branch branch, double tolerance = 1e-9);

enum class ScanDomain { segment, half_line };

struct ScanOptions {
    ScanDomain domain = ScanDomain::segment;
    SegmentOptions segment;
    ConnectionOptions half_line;
    double x_min = 0.05;       // half-line only
    double x_max = 0.0;        // half-line only; 0 picks (g/omega)^2 cosh x_max = 30
    double accept = 1e-6;      // |W| at a located root
    double gap_accept = 1e-4;  // |W| on both sides of a resonance gap
    double log_free_accept = 1e-9;  // relative obstruction at an exponent resonance
};

struct ScanResult {
    std::vector<ConnectionResult> levels;
    std::vector<std::string> trace;
};

ScanResult eigenvalue_scan(const ModelParams& p, Branch branch, double E_lo, double E_hi, int steps,
                           const ScanOptions& opts = {});

enum class FdBoundary { dirichlet, even_parity };

// Lowest eigenvalues of -psi'' + V psi on (a, b); even_parity puts a Neumann
// condition at a. Richardson over meshes with h and h/2.
std::vector<double> fd_eigensolve(const RealFunction& V, double a, double b, FdBoundary boundary, int count,
                                  int mesh = 2000);

} // namespace aqrm
