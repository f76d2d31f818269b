#include <cmath>
#include <numbers>

#include "phonobath/errors.hpp"
#include "phonobath/fit.hpp"
#include "phonobath/translate.hpp"

namespace phonobath {

double low_frequency_shape_factor(const LorentzianSumModel& model) {
    const double w1 = model.peaks().front().weight;
    double s = 0.0;
    for (const auto& p : model.peaks()) {
        const double w0 = p.omega0.rad_per_ps();
        s += (p.weight / w1) * p.gamma.rad_per_ps() / (w0 * w0 * w0 * w0);
    }
    return s;
}

CalibrationResult calibrate_amplitude(const LorentzianSumModel& model, const CouplingSpec& spec,
                                      const CalibrationInput& cal) {
    if (!(cal.eta > 0.0) || !(cal.gamma_e > 0.0) || !(cal.kappa > 0.0))
        throw InputError("calibration needs eta > 0, gamma_e > 0 and kappa > 0");
    if (!spec.has_constant_g())
        throw UnsupportedError("amplitude calibration assumes a constant g");
    const double g = spec.g(Frequency(1.0));
    if (!(g > 0.0))
        throw InputError("amplitude calibration needs g > 0");

    const DosModel dos = model;
    const auto [lo, hi] = default_ohmicity_window(dos);
    const auto report = classify_ohmicity(SpectralDensity(coupling_from_dos(dos, spec)), lo, hi);
    if (report.s < 0.9 || report.s > 1.1)
        throw DomainError("calibration requires an Ohmic low-frequency limit, got s = " + std::to_string(report.s));

    const double shape = low_frequency_shape_factor(model);
    if (!(shape > 0.0))
        throw DomainError("model has a nonpositive low-frequency slope");

    const double gamma_rad_thz = two_pi * cal.gamma_e * 1e-12;
    const double target = cal.kappa * cal.eta * gamma_rad_thz * gamma_rad_thz * 0.5 * codata::hbar_mev_ps;
    const double ds = spec.system_dim();
    const double a1 = target * std::numbers::pi * ds / (6.0 * shape);

    const double w_per_a = 6.0 / (g * g * std::numbers::pi);
    auto peaks = model.peaks();
    const double w1 = peaks.front().weight;
    for (auto& p : peaks)
        p.weight = w_per_a * a1 * (p.weight / w1);
    return {a1, LorentzianSumModel(std::move(peaks)), target};
}

} // namespace phonobath
