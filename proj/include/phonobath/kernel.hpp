#pragma once

// Memory kernel of the bath (scalar, isotropic reduction):
//
//   K(tau) = Theta(tau) * integral_0^inf (g(w)^2 / d_s) D(w) sin(w tau) / w dw
//
// Two routes: closed forms (Lorentzian sums, Debye d = 2, 3 with constant g)
// and adaptive quadrature for any DOS model. Times in ps.

#include <span>
#include <string>
#include <vector>

#include "phonobath/coupling.hpp"
#include "phonobath/dos.hpp"

namespace phonobath {

enum class KernelMethod { analytic, quadrature };

struct KernelCurve {
    std::vector<double> taus;
    std::vector<double> values;
    KernelMethod method = KernelMethod::quadrature;
    std::vector<std::string> warnings;
};

struct MemoryTimeReport {
    std::vector<double> times;  // 1/Gamma_j in ps, model order
    double dominant = 0.0;      // max over peaks with |W_j / W_1| >= 0.05
};

struct QuadratureOptions {
    double rel_tol = 1e-13;        // per-panel Gauss-Kronrod tolerance
    int panels_per_period = 20;    // at the fastest oscillation w * tau
    double tail_phase = 200.0;     // Lorentzian panels run to X = w0_max + tail_phase / tau
};

// Quadrature value at a single tau. Lorentzian sums are integrated
// numerically out to w0_max + tail_phase/tau and closed with an asymptotic
// tail; a warning is appended when that tail does not decay and exceeds
// 1e-3 of the result.
double kernel_quadrature_at(const DosModel& dos, const CouplingSpec& spec, double tau,
                            std::vector<std::string>* warnings = nullptr, const QuadratureOptions& opts = {});

// Throws InputError for a negative tau.
KernelCurve kernel_quadrature(const DosModel& dos, const CouplingSpec& spec, std::span<const double> taus,
                              const QuadratureOptions& opts = {});

// (g^2 pi / (2 d_s)) sum_j W_j exp(-Gamma_j tau / 2) S_j(tau) for tau > 0 with
// S_j = sin(w1 tau)/w1, tau, or sinh(kappa tau)/kappa for under-, critically
// and overdamped peaks. Throws UnsupportedError for a frequency-dependent g.
double kernel_lorentzian_analytic(const LorentzianSumModel& model, const CouplingSpec& spec, double tau);

// Closed form for the Debye DOS with constant g, d = 2 or 3. d = 1 needs the
// sine integral and is left to the quadrature (UnsupportedError).
double kernel_debye_analytic(const DebyeParams& params, const CouplingSpec& spec, double tau);

// Dispatches to the closed forms above; UnsupportedError for tables.
KernelCurve kernel_analytic(const DosModel& dos, const CouplingSpec& spec, std::span<const double> taus);

MemoryTimeReport memory_times(const LorentzianSumModel& model);

// integral_0^inf (g^2/d_s) D dw = dK/dtau at 0+, for Lorentzian sums with
// constant g: (g^2 pi / (2 d_s)) sum_j W_j.
double kernel_initial_slope(const LorentzianSumModel& model, const CouplingSpec& spec);

} // namespace phonobath
