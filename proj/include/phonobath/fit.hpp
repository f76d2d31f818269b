#pragma once

// Multi-peak Lorentzian fits of tabulated DOS data.

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "phonobath/coupling.hpp"
#include "phonobath/dos.hpp"

namespace phonobath {

struct FitOptions {
    int n_peaks = 1;
    int max_iter = 200;
    double tol = 1e-10;
    bool allow_negative_weights = false;
    std::optional<std::vector<LorentzianPeak>> initial_guess;
    std::uint64_t seed = 0;
    int n_restarts = 8;
};

struct FitReport {
    std::vector<LorentzianPeak> peaks;  // ascending in omega0
    std::vector<double> ratios;         // W_j / W_1
    double cost = 0.0;                  // sum of squared residuals
    double rms_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool positivity_ok = false;
    std::vector<double> cost_history;   // winning restart: start, then each accepted step

    LorentzianSumModel model() const { return LorentzianSumModel(peaks); }
};

// Peak seeds from local maxima of the 5-point smoothed data (prominence
// >= 2% of max): omega0 at the maximum, Gamma from the local FWHM, W =
// height * Gamma. Missing peaks are spread evenly over the data span.
// Throws InputError when the table has fewer than 2*nu + 2 samples.
std::vector<LorentzianPeak> init_peaks(const TabulatedDos& data, int nu);

// Levenberg-Marquardt least squares of the Lorentzian sum against the data.
// A failed fit is reported through FitReport::converged, not an exception;
// InputError for invalid options or non-finite data.
FitReport fit_lorentzian(const TabulatedDos& data, const FitOptions& opts);

// Parameter vector layout used by the optimizer: per peak
// [log omega0, log Gamma, w] with w = W (signed) or log W (positive only).
struct LorentzianParametrization {
    bool signed_weights = false;

    Eigen::VectorXd pack(std::span<const LorentzianPeak> peaks) const;
    std::vector<LorentzianPeak> unpack(const Eigen::VectorXd& theta) const;
};

// Model values and analytic Jacobian d model(omega_i) / d theta_k.
void lorentzian_model_jacobian(const LorentzianParametrization& param, const Eigen::VectorXd& theta,
                               std::span<const double> omegas, Eigen::VectorXd& values, Eigen::MatrixXd& jacobian);

struct PositivityResult {
    bool ok = false;
    Frequency worst_omega;
    double worst_value = 0.0;
    double max_value = 0.0;
};

// Evaluates the total DOS on n nodes (half log-spaced, half linear) over
// [lo, hi]; ok iff min >= -1e-9 * max. Throws InputError for n < 100.
PositivityResult validate_positivity(const LorentzianSumModel& model, Frequency lo, Frequency hi, int n = 4096);

struct CalibrationInput {
    double eta = 0.0;           // Gilbert damping
    double gamma_e = 0.0;       // gyromagnetic ratio, Hz/T
    double kappa = 1.0;         // convention constant
};

struct CalibrationResult {
    double a1 = 0.0;                  // (rad THz T)^2 / meV
    LorentzianSumModel model;         // weights rescaled to W_j = 6 A_j / (g^2 pi)
    double ohmic_slope = 0.0;         // lim J / omega of the returned model
};

// Fixes the absolute amplitude from the Gilbert damping.
//
// The low-frequency Ohmic slope of the Lorentzian bath is
//   lim_{w->0} J/w = (g^2/d_s) sum_j W_j Gamma_j / w0_j^4
//                  = (6 / (pi d_s)) A_1 sum_j (A_j/A_1) Gamma_j / w0_j^4,
// independent of g. It is matched to the target
//   kappa * eta * gamma_e^2 * hbar/2
// with gamma_e in rad THz/T, hbar in meV ps and frequencies in rad/ps; the
// unit bookkeeping between the two sides is carried by kappa. Only the
// amplitude ratios of the input model matter. Throws DomainError when the
// model is not Ohmic at low frequency and InputError on eta, gamma_e <= 0.
CalibrationResult calibrate_amplitude(const LorentzianSumModel& model, const CouplingSpec& spec,
                                      const CalibrationInput& cal);

// sum_j (W_j/W_1) Gamma_j / w0_j^4 in (rad/ps)^-3.
double low_frequency_shape_factor(const LorentzianSumModel& model);

} // namespace phonobath
