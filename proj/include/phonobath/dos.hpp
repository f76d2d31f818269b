#pragma once

// Bath density-of-states models and their pointwise evaluation.

#include <span>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "phonobath/units.hpp"

namespace phonobath {

// Acoustic-dispersion bath in d = 1, 2, 3 dimensions with a sharp cutoff.
class DebyeParams {
public:
    // sound_speed in km/s (nm/ps). Throws InputError on c <= 0, omega_D <= 0
    // or a dimension outside {1, 2, 3}.
    DebyeParams(double sound_speed, Frequency cutoff, int dimension);

    double sound_speed() const { return sound_speed_; }
    Frequency cutoff() const { return cutoff_; }
    int dimension() const { return dimension_; }

    // Solid angle of the unit sphere in d dimensions: 2, 2pi, 4pi.
    double solid_angle() const;

    // D(w) = prefactor * w^(d-1) below the cutoff: d acoustic branches, each
    // contributing Omega_d / (2 pi c)^d. In 3D this is 3 / (2 pi^2 c^3).
    double prefactor() const;

    friend bool operator==(const DebyeParams&, const DebyeParams&) = default;

private:
    double sound_speed_;
    Frequency cutoff_;
    int dimension_;
};

// One resonance W * Gamma * w^2 / ((w0^2 - w^2)^2 + Gamma^2 w^2).
// weight is the absolute amplitude W and may be negative.
struct LorentzianPeak {
    Frequency omega0;
    Frequency gamma;
    double weight = 0.0;

    friend bool operator==(const LorentzianPeak&, const LorentzianPeak&) = default;
};

class LorentzianSumModel {
public:
    // Throws InputError on an empty list or a nonpositive omega0 / gamma.
    explicit LorentzianSumModel(std::vector<LorentzianPeak> peaks);

    const std::vector<LorentzianPeak>& peaks() const { return peaks_; }
    std::size_t size() const { return peaks_.size(); }

    // W_j / W_1, i.e. the amplitude ratios A_j / A_1.
    std::vector<double> ratios() const;

    LorentzianSumModel scaled(double factor) const;

    friend bool operator==(const LorentzianSumModel&, const LorentzianSumModel&) = default;

private:
    std::vector<LorentzianPeak> peaks_;
};

// Measured DOS on a strictly increasing frequency grid, linearly interpolated.
class TabulatedDos {
public:
    // Requires a strictly increasing grid of >= 2 nodes matching values in
    // length, and values >= 0. Use clean_dos_values() on raw data first.
    TabulatedDos(std::vector<Frequency> grid, std::vector<double> values, std::string unit_note = {});

    std::span<const Frequency> grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    const std::string& unit_note() const { return unit_note_; }

    Frequency front() const { return grid_.front(); }
    Frequency back() const { return grid_.back(); }
    std::size_t size() const { return grid_.size(); }

    friend bool operator==(const TabulatedDos&, const TabulatedDos&) = default;

private:
    std::vector<Frequency> grid_;
    std::vector<double> values_;
    std::string unit_note_;
};

using DosModel = std::variant<DebyeParams, LorentzianSumModel, TabulatedDos>;

double eval_debye_dos(const DebyeParams& params, Frequency omega);
double eval_lorentzian_dos(const LorentzianSumModel& model, Frequency omega);

// Throws DomainError when omega lies outside [grid.front, grid.back].
double eval_tabulated_dos(const TabulatedDos& table, Frequency omega);

double eval_dos(const DosModel& model, Frequency omega);

// Exact integral over [0, inf) of the Lorentzian DOS: (pi/2) * sum_j W_j.
double total_weight(const LorentzianSumModel& model);

// Clamps small negative values (|v| <= 1e-3 * max) to zero in place; larger
// negative values throw InputError.
void clean_dos_values(std::span<double> values);

// Frequency interval on which the model is nonzero or defined:
// [0, omega_D] for Debye, the grid span for tables, and
// [0, omega0_max + 50 Gamma_max] for Lorentzian sums (which have unbounded
// support and a 1/omega^2 tail beyond that point).
std::pair<Frequency, Frequency> dos_support(const DosModel& model);

// True for models whose DOS extends beyond dos_support().
bool has_unbounded_support(const DosModel& model);

} // namespace phonobath
