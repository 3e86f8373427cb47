#pragma once

#include <array>
#include <vector>

namespace aqrm {

// H = delta sigma_z + epsilon sigma_x + omega a^dag a + g sigma_x (a^dag + a)
struct ModelParams {
    double delta = 1.2;
    double epsilon = 0.3;
    double omega = 1.0;
    double g = 0.0;

    // throws InvalidArgument unless omega > 0, g >= 0 and all finite
    void validate() const;
    ModelParams with_g(double coupling) const;
    ModelParams with_epsilon(double eps) const;
};

// +1: first solution family, -1: second. Enters formulas as eps -> sign*eps.
enum class Branch : int { plus = 1, minus = -1 };

constexpr int sign(Branch b) noexcept { return static_cast<int>(b); }
constexpr Branch other(Branch b) noexcept { return b == Branch::plus ? Branch::minus : Branch::plus; }
const char* to_string(Branch b) noexcept;
Branch parse_branch(const char* text);

struct EnergyLevel {
    double value = 0.0;
    int index = 0;
};

struct Spectrum {
    ModelParams params;
    int truncation = 0;  // photon cutoff of the reported (finest) matrix
    std::vector<EnergyLevel> levels;

    std::vector<double> values() const;
};

struct SpectrumOptions {
    int margin = 50;              // truncation >= level_count + margin
    double tolerance = 1e-9;      // max level shift under truncation doubling
    int max_truncation = 3200;
};

double qes_energy(const ModelParams& p, int n, Branch branch);

// E + g^2/omega
double rescaled_level(double E, double g, double omega = 1.0);

// Delta = Omega/2 sin theta, eps = Omega/2 cos theta
ModelParams from_cqed(double Omega, double theta, double omega, double g);

// Lowest level_count eigenvalues of the truncated Fock representation, doubling
// the truncation until the levels settle.
Spectrum regular_spectrum(const ModelParams& p, int level_count, int truncation = 200,
                          const SpectrumOptions& opts = {});

// Single diagonalization at a fixed photon cutoff, no convergence loop.
std::vector<double> truncated_levels(const ModelParams& p, int level_count, int truncation);

// eps = 0 only. Lowest levels of the parity sector (+1 or -1): the tridiagonal
// block omega m + parity delta (-1)^m, coupling g sqrt(m+1).
std::vector<double> parity_levels(const ModelParams& p, int parity, int level_count, int truncation);

struct LevelCrossing {
    double g = 0.0;
    double energy = 0.0;
    int even_index = 0;  // level index inside the +1 sector
    int odd_index = 0;   // level index inside the -1 sector
};

// eps = 0 only. True crossings between the two parity sectors among their lowest
// level_count levels, bracketed on a uniform g grid and refined to machine precision.
// Sorted by g, then energy.
std::vector<LevelCrossing> symmetric_crossings(const ModelParams& p, double g_min, double g_max, int steps,
                                               int level_count, int truncation = 200);

// Bargmann-picture ODE a(z) phi'' + b(z) phi' + c(z) phi = 0 for the first
// component of the given family; coefficients ascending in z.
struct BargmannOde {
    std::array<double, 3> second{};
    std::array<double, 3> first{};
    std::array<double, 2> zeroth{};

    double eval_second(double z) const { return second[0] + z * (second[1] + z * second[2]); }
    double eval_first(double z) const { return first[0] + z * (first[1] + z * first[2]); }
    double eval_zeroth(double z) const { return zeroth[0] + z * zeroth[1]; }
};

BargmannOde bargmann_ode(const ModelParams& p, double E, Branch branch);

} // namespace aqrm
