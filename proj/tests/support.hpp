#pragma once

// Shared fixtures: reference parameter tables (THz, ratios) as models with
// first weight 1, plus small numeric helpers.

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <vector>

#include "phonobath/dos.hpp"

namespace fixtures {

using phonobath::Frequency;
using phonobath::LorentzianPeak;
using phonobath::LorentzianSumModel;

struct PeakRow {
    double nu0_thz;
    double gamma_thz;
    double ratio;
};

inline LorentzianSumModel model_from_rows(const std::vector<PeakRow>& rows, double first_weight = 1.0) {
    std::vector<LorentzianPeak> peaks;
    for (const auto& r : rows)
        peaks.push_back({Frequency::from_thz(r.nu0_thz), Frequency::from_thz(r.gamma_thz), first_weight * r.ratio});
    return LorentzianSumModel(std::move(peaks));
}

inline const std::vector<PeakRow> gold_rows{{2.11, 1.3, 1.0}, {4.05, 0.56, 0.15}};
inline const std::vector<PeakRow> iron1_rows{{6.27, 3.71, 1.0}};
inline const std::vector<PeakRow> iron3_rows{{5.23, 2.04, 1.0}, {6.77, 1.74, 0.50}, {8.45, 0.71, 0.62}};
inline const std::vector<PeakRow> iron5_rows{
    {4.67, 1.87, 1.0}, {5.46, 0.74, 0.34}, {6.63, 1.41, 1.20}, {8.03, 0.78, 0.27}, {8.49, 0.44, 0.68}};
inline const std::vector<PeakRow> yig1_rows{{5.91, 12.4, 1.0}};
inline const std::vector<PeakRow> yig18_rows{
    {2.56, 0.99, 1.00},   {3.66, 1.35, 16.20},  {4.89, 1.22, 10.10}, {6.45, 0.55, 1.47},  {7.16, 0.99, 7.75},
    {8.10, 1.20, 10.60},  {9.20, 1.18, 11.50},  {10.20, 0.54, 1.70}, {10.80, 1.82, 11.30}, {12.60, 1.67, 33.20},
    {13.70, 0.83, 9.07},  {13.80, 3.80, -86.60}, {14.40, 1.30, 19.60}, {16.10, 1.07, -13.70}, {16.40, 1.83, 40.10},
    {18.70, 1.46, 6.08},  {20.10, 0.94, 4.27},  {20.90, 0.45, 2.20}};

inline LorentzianSumModel gold() { return model_from_rows(gold_rows); }
inline LorentzianSumModel iron3() { return model_from_rows(iron3_rows); }
inline LorentzianSumModel yig1() { return model_from_rows(yig1_rows); }
inline LorentzianSumModel yig18() { return model_from_rows(yig18_rows); }

inline double rel_err(double got, double want) {
    if (got == want)
        return 0.0;
    return std::abs(got - want) / std::max(std::abs(got), std::abs(want));
}

// Term-by-term evaluation written independently of the library.
inline double lorentzian_reference(const std::vector<PeakRow>& rows, double nu_thz, double first_weight = 1.0) {
    const double two_pi = 2.0 * 3.14159265358979323846;
    const double w = two_pi * nu_thz;
    double sum = 0.0;
    for (const auto& r : rows) {
        const double w0 = two_pi * r.nu0_thz;
        const double g = two_pi * r.gamma_thz;
        const double a = w0 * w0 - w * w;
        sum += first_weight * r.ratio * g * w * w / (a * a + g * g * w * w);
    }
    return sum;
}

// Samples a model on n equally spaced THz nodes over [lo, hi].
inline phonobath::TabulatedDos sample(const LorentzianSumModel& m, double lo_thz, double hi_thz, int n) {
    std::vector<Frequency> grid;
    std::vector<double> values;
    for (int i = 0; i < n; ++i) {
        const auto f = Frequency::from_thz(lo_thz + (hi_thz - lo_thz) * i / (n - 1));
        grid.push_back(f);
        values.push_back(phonobath::eval_lorentzian_dos(m, f));
    }
    return phonobath::TabulatedDos(std::move(grid), std::move(values));
}

inline double uniform(std::mt19937_64& rng, double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace fixtures
