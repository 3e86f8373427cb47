#pragma once

#include "aqrm/bethe.hpp"
#include "aqrm/model.hpp"

#include <array>
#include <complex>
#include <functional>
#include <optional>
#include <vector>

namespace aqrm {

enum class PotentialKind { gaudin, qes, full };
enum class PotentialForm { partial_fraction, hyperbolic };

// Beyond this |x| the sinh^2 term overflows; evaluation throws RangeError.
inline constexpr double max_potential_abs_x = 350.0;

// V(x) = K0 + K1 cosh x + G sinh^2 x + a/(cosh x - 1) + b/(cosh x + 1)
struct PoschlTellerCoefficients {
    double K0 = 0.0;
    double K1 = 0.0;
    double G = 0.0;
    double a = 0.0;
    double b = 0.0;

    double operator()(double x) const;
    // along x = i theta, theta in (0, pi)
    double on_segment(double theta) const;
    double csch2() const { return a - b; }        // csch^2 coefficient
    double coth_csch() const { return a + b; }    // coth csch coefficient
};

struct PotentialSpec {
    PotentialKind kind = PotentialKind::full;
    Branch branch = Branch::plus;
    ModelParams params;
    std::optional<int> n;                 // kind = qes
    std::optional<double> E;              // kind = full
    std::optional<GaudinParams> gaudin;   // kind = gaudin

    static PotentialSpec qes(const ModelParams& p, int n, Branch b);
    static PotentialSpec full(const ModelParams& p, double E, Branch b);
    static PotentialSpec of_gaudin(const GaudinParams& gp);

    // throws InvalidArgument unless exactly the fields for `kind` are set
    void validate() const;
    double operator()(double x, PotentialForm form = PotentialForm::partial_fraction) const;
    PoschlTellerCoefficients coefficients() const;
};

struct KkConstants {
    double q = 0.0;
    double lambda = 0.0;
    double B_kk = 0.0;
    double two_j = 0.0;
    double L = 0.0;
    double A_free = 1.0;
};

// Coefficients ascending in z.
struct CanonicalQesForm {
    std::array<double, 3> P_coeffs{};
    std::array<double, 3> Q_coeffs{};
    double R = 0.0;
    int n = 0;
    double E = 0.0;

    // P y'' + [Q - (n-1)/2 P'] y' + [R - n/2 Q' + n(n-1)/12 P''] y as a Bargmann ODE
    BargmannOde as_ode() const;
};

struct FunctionJet {
    double value = 0.0;
    double derivative = 0.0;
};
using JetFunction = std::function<FunctionJet(double)>;

// The long double overloads serve residual checks where Psi spans hundreds of e-folds.
double gaudin_potential(const GaudinParams& gp, double x);
long double gaudin_potential(const GaudinParams& gp, long double x);
double gaudin_wavefunction(const GaudinParams& gp, double x);
long double gaudin_wavefunction(const GaudinParams& gp, long double x);

double qes_potential(const ModelParams& p, int n, Branch branch, double x,
                     PotentialForm form = PotentialForm::partial_fraction);
long double qes_potential(const ModelParams& p, int n, Branch branch, long double x,
                          PotentialForm form = PotentialForm::partial_fraction);
double qes_wavefunction(const ModelParams& p, int n, Branch branch, const std::vector<cplx>& v, double x);
long double qes_wavefunction(const ModelParams& p, int n, Branch branch, const std::vector<cplx>& v, long double x);
PoschlTellerCoefficients qes_coefficients(const ModelParams& p, int n, Branch branch);

double full_potential(const ModelParams& p, double E, Branch branch, double x,
                      PotentialForm form = PotentialForm::partial_fraction);
PoschlTellerCoefficients full_coefficients(const ModelParams& p, double E, Branch branch);
double full_energy(const ModelParams& p, double E, Branch branch);

CanonicalQesForm canonical_qes_form(const ModelParams& p, int n, Branch branch, double E);

// The other spinor component from the first-order elimination relation.
double partner_component(const ModelParams& p, double E, Branch branch, const JetFunction& phi, double z);

KkConstants kk_constants(const ModelParams& p, double E, double A_free = 1.0);

} // namespace aqrm
