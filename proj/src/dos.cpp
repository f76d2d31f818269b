#include "phonobath/dos.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "phonobath/errors.hpp"

namespace phonobath {

Frequency debye_from_temperature(double debye_temperature_kelvin) {
    if (!(debye_temperature_kelvin > 0.0))
        throw InputError("Debye temperature must be positive");
    // k_B T / hbar is in rad/s; 1 rad/ps = 1e12 rad/s.
    return Frequency(codata::boltzmann * debye_temperature_kelvin / codata::hbar * 1e-12);
}

DebyeParams::DebyeParams(double sound_speed, Frequency cutoff, int dimension)
    : sound_speed_(sound_speed), cutoff_(cutoff), dimension_(dimension) {
    if (!(sound_speed > 0.0) || !std::isfinite(sound_speed))
        throw InputError("sound speed must be positive");
    if (!(cutoff.rad_per_ps() > 0.0) || !std::isfinite(cutoff.rad_per_ps()))
        throw InputError("Debye cutoff must be positive");
    if (dimension < 1 || dimension > 3)
        throw InputError("Debye dimension must be 1, 2 or 3, got " + std::to_string(dimension));
}

double DebyeParams::solid_angle() const {
    switch (dimension_) {
        case 1: return 2.0;
        case 2: return two_pi;
        default: return 2.0 * two_pi;
    }
}

LorentzianSumModel::LorentzianSumModel(std::vector<LorentzianPeak> peaks) : peaks_(std::move(peaks)) {
    if (peaks_.empty())
        throw InputError("a Lorentzian sum needs at least one peak");
    for (const auto& p : peaks_) {
        if (!(p.omega0.rad_per_ps() > 0.0) || !std::isfinite(p.omega0.rad_per_ps()))
            throw InputError("peak frequency must be positive");
        if (!(p.gamma.rad_per_ps() > 0.0) || !std::isfinite(p.gamma.rad_per_ps()))
            throw InputError("peak width must be positive");
        if (!std::isfinite(p.weight))
            throw InputError("peak weight must be finite");
    }
}

std::vector<double> LorentzianSumModel::ratios() const {
    std::vector<double> out;
    out.reserve(peaks_.size());
    for (const auto& p : peaks_)
        out.push_back(p.weight / peaks_.front().weight);
    return out;
}

LorentzianSumModel LorentzianSumModel::scaled(double factor) const {
    auto peaks = peaks_;
    for (auto& p : peaks)
        p.weight *= factor;
    return LorentzianSumModel(std::move(peaks));
}

TabulatedDos::TabulatedDos(std::vector<Frequency> grid, std::vector<double> values, std::string unit_note)
    : grid_(std::move(grid)), values_(std::move(values)), unit_note_(std::move(unit_note)) {
    if (grid_.size() != values_.size())
        throw InputError("tabulated DOS: grid and values differ in length");
    if (grid_.size() < 2)
        throw InputError("tabulated DOS needs at least two samples");
    for (std::size_t i = 0; i < grid_.size(); ++i) {
        if (!std::isfinite(grid_[i].rad_per_ps()) || !std::isfinite(values_[i]))
            throw InputError("tabulated DOS contains a non-finite entry");
        if (values_[i] < 0.0)
            throw InputError("tabulated DOS values must be nonnegative");
        if (i > 0 && !(grid_[i] > grid_[i - 1]))
            throw InputError("tabulated DOS grid must be strictly increasing");
    }
}

double DebyeParams::prefactor() const {
    return dimension_ * solid_angle() / std::pow(two_pi * sound_speed_, dimension_);
}

double eval_debye_dos(const DebyeParams& params, Frequency omega) {
    const double w = omega.rad_per_ps();
    if (w > params.cutoff().rad_per_ps())
        return 0.0;
    return params.prefactor() * std::pow(w, params.dimension() - 1);
}

double eval_lorentzian_dos(const LorentzianSumModel& model, Frequency omega) {
    const double w2 = omega.rad_per_ps() * omega.rad_per_ps();
    double sum = 0.0;
    for (const auto& p : model.peaks()) {
        const double w0 = p.omega0.rad_per_ps();
        const double g = p.gamma.rad_per_ps();
        const double detune = w0 * w0 - w2;
        sum += p.weight * g * w2 / (detune * detune + g * g * w2);
    }
    return sum;
}

double eval_tabulated_dos(const TabulatedDos& table, Frequency omega) {
    const auto grid = table.grid();
    const auto values = table.values();
    if (omega < grid.front() || omega > grid.back())
        throw DomainError("frequency outside tabulated range (extrapolation is not supported)");
    auto hi = std::lower_bound(grid.begin(), grid.end(), omega);
    const auto i = static_cast<std::size_t>(hi - grid.begin());
    if (*hi == omega)
        return values[i];
    const double x0 = grid[i - 1].rad_per_ps();
    const double x1 = grid[i].rad_per_ps();
    const double t = (omega.rad_per_ps() - x0) / (x1 - x0);
    return values[i - 1] + t * (values[i] - values[i - 1]);
}

double eval_dos(const DosModel& model, Frequency omega) {
    return std::visit(
        [omega](const auto& m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DebyeParams>)
                return eval_debye_dos(m, omega);
            else if constexpr (std::is_same_v<T, LorentzianSumModel>)
                return eval_lorentzian_dos(m, omega);
            else
                return eval_tabulated_dos(m, omega);
        },
        model);
}

double total_weight(const LorentzianSumModel& model) {
    double sum = 0.0;
    for (const auto& p : model.peaks())
        sum += p.weight;
    return 0.5 * std::numbers::pi * sum;
}

void clean_dos_values(std::span<double> values) {
    if (values.empty())
        return;
    const double vmax = *std::max_element(values.begin(), values.end());
    const double tol = 1e-3 * std::max(vmax, 0.0);
    for (auto& v : values) {
        if (!std::isfinite(v))
            throw InputError("DOS value is not finite");
        if (v < 0.0) {
            if (-v > tol)
                throw InputError("DOS value " + std::to_string(v) + " is negative beyond the noise tolerance");
            v = 0.0;
        }
    }
}

std::pair<Frequency, Frequency> dos_support(const DosModel& model) {
    return std::visit(
        [](const auto& m) -> std::pair<Frequency, Frequency> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, DebyeParams>) {
                return {Frequency(0.0), m.cutoff()};
            } else if constexpr (std::is_same_v<T, LorentzianSumModel>) {
                double w0max = 0.0;
                double gmax = 0.0;
                for (const auto& p : m.peaks()) {
                    w0max = std::max(w0max, p.omega0.rad_per_ps());
                    gmax = std::max(gmax, p.gamma.rad_per_ps());
                }
                return {Frequency(0.0), Frequency(w0max + 50.0 * gmax)};
            } else {
                return {m.front(), m.back()};
            }
        },
        model);
}

bool has_unbounded_support(const DosModel& model) {
    return std::holds_alternative<LorentzianSumModel>(model);
}

} // namespace phonobath
