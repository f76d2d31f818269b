#include "phonobath/translate.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "phonobath/errors.hpp"

namespace phonobath {

double CouplingFunction::operator()(Frequency omega) const {
    const double d = eval_dos(dos_, omega);
    if (d < 0.0)
        throw DomainError("negative DOS " + std::to_string(d) + " at " + std::to_string(omega.thz()) + " THz");
    return spec_.g(omega) * std::sqrt(d / spec_.system_dim());
}

double SpectralDensity::operator()(Frequency omega) const {
    if (!(omega.rad_per_ps() > 0.0))
        throw DomainError("spectral density is defined for omega > 0 only");
    const double c = coupling_(omega);
    return c * c / omega.rad_per_ps();
}

std::string_view to_string(Ohmicity c) {
    switch (c) {
        case Ohmicity::ohmic: return "ohmic";
        case Ohmicity::sub_ohmic: return "sub_ohmic";
        default: return "super_ohmic";
    }
}

Ohmicity classify_exponent(double s) {
    // the slack keeps s = 0.9 and 1.1 (as typed) inside the band
    if (std::abs(s - 1.0) <= 0.1 + 1e-12)
        return Ohmicity::ohmic;
    return s < 1.0 ? Ohmicity::sub_ohmic : Ohmicity::super_ohmic;
}

CouplingFunction coupling_from_dos(DosModel dos, CouplingSpec spec) {
    return CouplingFunction(std::move(dos), std::move(spec));
}

TabulatedDos dos_from_coupling(const CouplingFunction& coupling, std::span<const Frequency> grid) {
    std::vector<Frequency> nodes(grid.begin(), grid.end());
    std::vector<double> values;
    values.reserve(nodes.size());
    const double ds = coupling.spec().system_dim();
    for (const auto w : nodes) {
        const double c = coupling(w);
        const double g = coupling.spec().g(w);
        if (g == 0.0) {
            if (c != 0.0)
                throw DomainError("g vanishes at " + std::to_string(w.thz()) + " THz but C does not");
            values.push_back(0.0);
            continue;
        }
        values.push_back(ds * c * c / (g * g));
    }
    return TabulatedDos(std::move(nodes), std::move(values), "recovered from coupling function");
}

OhmicityReport classify_ohmicity(const SpectralDensity& j, Frequency lo, Frequency hi, int n_samples) {
    if (!(lo.rad_per_ps() > 0.0) || !(hi > lo))
        throw InputError("classification window must satisfy 0 < lo < hi");
    if (n_samples < 2)
        throw InputError("classification needs at least two samples");

    const double llo = std::log(lo.rad_per_ps());
    const double lhi = std::log(hi.rad_per_ps());
    std::vector<double> xs(n_samples), ys(n_samples);
    for (int i = 0; i < n_samples; ++i) {
        // endpoints pinned exactly so a window ending at a cutoff stays inside it
        const double x = (i == 0) ? llo : (i == n_samples - 1) ? lhi : llo + (lhi - llo) * i / (n_samples - 1);
        const double w = (i == 0) ? lo.rad_per_ps() : (i == n_samples - 1) ? hi.rad_per_ps() : std::exp(x);
        const double jv = j(Frequency(w));
        if (!(jv > 0.0) || !std::isfinite(jv))
            throw DomainError("spectral density is not positive at " + std::to_string(w / two_pi) + " THz");
        xs[i] = x;
        ys[i] = std::log(jv);
    }

    double mx = 0.0, my = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= n_samples;
    my /= n_samples;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
        syy += (ys[i] - my) * (ys[i] - my);
    }
    OhmicityReport r;
    r.s = sxy / sxx;
    r.kind = classify_exponent(r.s);
    r.window_lo = lo;
    r.window_hi = hi;
    double ss_res = 0.0, yy = 0.0;
    for (int i = 0; i < n_samples; ++i) {
        const double e = ys[i] - my - r.s * (xs[i] - mx);
        ss_res += e * e;
        yy += ys[i] * ys[i];
    }
    // a residual at rounding level is an exact power law, even for a flat J
    r.r_squared = ss_res <= 1e-24 * (yy + n_samples) ? 1.0 : 1.0 - ss_res / syy;
    return r;
}

std::pair<Frequency, Frequency> default_ohmicity_window(const DosModel& dos) {
    if (const auto* lor = std::get_if<LorentzianSumModel>(&dos)) {
        double w0min = lor->peaks().front().omega0.rad_per_ps();
        for (const auto& p : lor->peaks())
            w0min = std::min(w0min, p.omega0.rad_per_ps());
        return {Frequency(w0min / 100.0), Frequency(w0min / 10.0)};
    }
    if (const auto* deb = std::get_if<DebyeParams>(&dos)) {
        const double wd = deb->cutoff().rad_per_ps();
        return {Frequency(wd / 100.0), Frequency(wd / 2.0)};
    }
    const auto& tab = std::get<TabulatedDos>(dos);
    const auto grid = tab.grid();
    const double span = tab.back().rad_per_ps() - tab.front().rad_per_ps();
    // first node with positive frequency
    auto it = std::find_if(grid.begin(), grid.end(), [](Frequency w) { return w.rad_per_ps() > 0.0; });
    if (it == grid.end())
        throw InputError("tabulated DOS has no positive frequencies");
    const double lo = it->rad_per_ps();
    const double hi = std::max(tab.front().rad_per_ps() + span / 10.0, lo * 2.0);
    return {Frequency(lo), Frequency(std::min(hi, tab.back().rad_per_ps()))};
}

namespace {

Eigen::MatrixXd psd_sqrt_with_tol(const Eigen::MatrixXd& a, double rel_tol) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(a);
    if (eig.info() != Eigen::Success)
        throw DomainError("eigendecomposition failed");
    Eigen::VectorXd lambda = eig.eigenvalues();
    const double scale = std::max(1.0, lambda.cwiseAbs().maxCoeff());
    for (Eigen::Index i = 0; i < lambda.size(); ++i) {
        if (lambda[i] < 0.0) {
            if (lambda[i] < -rel_tol * scale)
                throw DomainError("matrix is not positive semidefinite");
            lambda[i] = 0.0;
        }
    }
    const Eigen::MatrixXd& v = eig.eigenvectors();
    return v * lambda.cwiseSqrt().asDiagonal() * v.transpose();
}

} // namespace

Eigen::MatrixXd psd_sqrt(const Eigen::MatrixXd& a) { return psd_sqrt_with_tol(a, 1e-12); }

Eigen::MatrixXd factor_coupling_tensor(double dos_value, const CouplingSpec& spec, Frequency omega,
                                       const Eigen::MatrixXd& polarization) {
    const int ds = spec.system_dim();
    const int d = spec.bath_dim();
    if (ds > d)
        throw InputError("system dimension exceeds bath dimension");
    if (polarization.rows() != ds)
        throw InputError("polarization matrix must be d_s x d_s");
    validate_polarization(polarization);
    if (!(dos_value >= 0.0))
        throw DomainError("DOS value must be nonnegative");

    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(ds, d);
    const double g = spec.g(omega);
    const double scale = g * g * dos_value;
    if (scale == 0.0)
        return c;
    // M passed validation at 1e-9, so its small negative eigenvalues are clamped
    c.leftCols(ds) = std::sqrt(scale) * psd_sqrt_with_tol(polarization, 1e-9);
    return c;
}

Eigen::MatrixXd factor_coupling_tensor(double dos_value, const CouplingSpec& spec, Frequency omega) {
    return factor_coupling_tensor(dos_value, spec, omega, spec.polarization());
}

} // namespace phonobath
