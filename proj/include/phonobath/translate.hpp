#pragma once

// DOS <-> coupling function translation.
//
// Equating the memory kernel written over bath wave vectors with the one
// written over bath frequencies gives C C^T = g^2 M D. In the isotropic
// case M = 1/d_s this is the scalar relation d_s C^2 = g^2 D.

#include <span>
#include <string_view>
#include <utility>

#include <Eigen/Dense>

#include "phonobath/coupling.hpp"
#include "phonobath/dos.hpp"

namespace phonobath {

// Scalar coupling function C(omega) = g(omega) sqrt(D(omega) / d_s).
class CouplingFunction {
public:
    CouplingFunction(DosModel dos, CouplingSpec spec) : dos_(std::move(dos)), spec_(std::move(spec)) {}

    // Throws DomainError if the DOS is negative at omega.
    double operator()(Frequency omega) const;

    const DosModel& dos() const { return dos_; }
    const CouplingSpec& spec() const { return spec_; }

private:
    DosModel dos_;
    CouplingSpec spec_;
};

// J(omega) = C(omega)^2 / omega. The proportionality constant is fixed to 1.
class SpectralDensity {
public:
    explicit SpectralDensity(CouplingFunction coupling) : coupling_(std::move(coupling)) {}

    // Throws DomainError for omega <= 0.
    double operator()(Frequency omega) const;

    const CouplingFunction& coupling() const { return coupling_; }

private:
    CouplingFunction coupling_;
};

enum class Ohmicity { ohmic, sub_ohmic, super_ohmic };

std::string_view to_string(Ohmicity c);

struct OhmicityReport {
    double s = 0.0;
    Ohmicity kind = Ohmicity::ohmic;
    Frequency window_lo;
    Frequency window_hi;
    double r_squared = 0.0;
};

// ohmic iff |s - 1| <= 0.1, otherwise sub/super by sign of s - 1.
Ohmicity classify_exponent(double s);

CouplingFunction coupling_from_dos(DosModel dos, CouplingSpec spec);

// Inverts d_s C^2 = g^2 D on the given grid. Nodes where g and C both
// vanish map to D = 0; g = 0 with C != 0 throws DomainError.
TabulatedDos dos_from_coupling(const CouplingFunction& coupling, std::span<const Frequency> grid);

// Least-squares slope of log J against log omega on n log-spaced points in
// [lo, hi]. Throws InputError on a bad window and DomainError when J <= 0
// anywhere in it.
OhmicityReport classify_ohmicity(const SpectralDensity& j, Frequency lo, Frequency hi, int n_samples = 64);

// A window inside the low-frequency regime of the model:
// Lorentzian [w0_min/100, w0_min/10], Debye [w_D/100, w_D/2],
// table [first node, first node + span/10] (excluding omega = 0).
std::pair<Frequency, Frequency> default_ohmicity_window(const DosModel& dos);

// d_s x d matrix C with C C^T = g(omega)^2 M D: the symmetric PSD square root
// of g^2 M D in the leading d_s columns, zero padded to d columns.
// M is passed per call; it must be symmetric PSD with unit trace.
Eigen::MatrixXd factor_coupling_tensor(double dos_value, const CouplingSpec& spec, Frequency omega,
                                       const Eigen::MatrixXd& polarization);

// Same, with the spec's own polarization matrix.
Eigen::MatrixXd factor_coupling_tensor(double dos_value, const CouplingSpec& spec, Frequency omega);

// Symmetric PSD square root via eigendecomposition; eigenvalues in
// [-1e-12 * scale, 0) are clamped to zero, more negative ones throw.
Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& a);

} // namespace phonobath
