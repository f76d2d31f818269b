#include "phonobath/coupling.hpp"

#include <cmath>
#include <string>

#include "phonobath/errors.hpp"

namespace phonobath {

double eval_g(const GModel& model, Frequency omega) {
    if (const auto* c = std::get_if<ConstantG>(&model))
        return c->g;
    const auto& pl = std::get<PowerLawG>(model);
    return pl.g0 * std::pow(omega.rad_per_ps() / pl.omega_ref.rad_per_ps(), pl.p);
}

void validate_polarization(const Eigen::MatrixXd& m, double tol) {
    if (m.rows() != m.cols() || m.rows() == 0)
        throw InputError("polarization matrix must be square and nonempty");
    if (!m.allFinite())
        throw InputError("polarization matrix has non-finite entries");
    if ((m - m.transpose()).cwiseAbs().maxCoeff() > tol)
        throw InputError("polarization matrix must be symmetric");
    if (std::abs(m.trace() - 1.0) > tol)
        throw InputError("polarization matrix must have unit trace");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(m, Eigen::EigenvaluesOnly);
    if (eig.eigenvalues().minCoeff() < -tol)
        throw InputError("polarization matrix must be positive semidefinite");
}

CouplingSpec::CouplingSpec(GModel g, int system_dim, int bath_dim, std::optional<Eigen::MatrixXd> polarization)
    : g_(g), ds_(system_dim), d_(bath_dim) {
    if (ds_ < 1)
        throw InputError("system dimension must be >= 1");
    if (d_ < ds_)
        throw InputError("bath dimension " + std::to_string(d_) + " is smaller than system dimension " +
                         std::to_string(ds_));
    if (const auto* c = std::get_if<ConstantG>(&g_)) {
        if (!(c->g >= 0.0) || !std::isfinite(c->g))
            throw InputError("coupling g must be finite and >= 0");
    } else {
        const auto& pl = std::get<PowerLawG>(g_);
        if (!(pl.g0 >= 0.0) || !std::isfinite(pl.g0) || !std::isfinite(pl.p))
            throw InputError("power-law g0 must be >= 0 and p finite");
        if (!(pl.omega_ref.rad_per_ps() > 0.0))
            throw InputError("power-law reference frequency must be positive");
    }
    if (polarization) {
        if (polarization->rows() != ds_)
            throw InputError("polarization matrix must be d_s x d_s");
        validate_polarization(*polarization);
        m_ = *polarization;
        explicit_m_ = true;
    } else {
        m_ = Eigen::MatrixXd::Identity(ds_, ds_) / ds_;
    }
}

} // namespace phonobath
