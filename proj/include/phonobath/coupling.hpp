#pragma once

#include <optional>
#include <variant>

#include <Eigen/Dense>

#include "phonobath/units.hpp"

namespace phonobath {

struct ConstantG {
    double g = 1.0;
    friend bool operator==(const ConstantG&, const ConstantG&) = default;
};

// g(omega) = g0 * (omega / omega_ref)^p
struct PowerLawG {
    double g0 = 1.0;
    double p = 0.0;
    Frequency omega_ref{1.0};
    friend bool operator==(const PowerLawG&, const PowerLawG&) = default;
};

using GModel = std::variant<ConstantG, PowerLawG>;

double eval_g(const GModel& model, Frequency omega);

// How the system couples to the bath: the scalar g(omega), the system and
// bath dimensions, and the unit-trace polarization matrix M (d_s x d_s).
class CouplingSpec {
public:
    // Isotropic M = 1/d_s when polarization is omitted. Throws InputError
    // when d_s < 1, d < d_s, or M is not symmetric PSD with unit trace
    // (tolerance 1e-9).
    CouplingSpec(GModel g, int system_dim, int bath_dim, std::optional<Eigen::MatrixXd> polarization = std::nullopt);

    static CouplingSpec isotropic(double g, int system_dim = 3, int bath_dim = 3) {
        return CouplingSpec(ConstantG{g}, system_dim, bath_dim);
    }

    const GModel& g_model() const { return g_; }
    double g(Frequency omega) const { return eval_g(g_, omega); }
    bool has_constant_g() const { return std::holds_alternative<ConstantG>(g_); }

    int system_dim() const { return ds_; }
    int bath_dim() const { return d_; }

    bool has_explicit_polarization() const { return explicit_m_; }
    const Eigen::MatrixXd& polarization() const { return m_; }

private:
    GModel g_;
    int ds_;
    int d_;
    Eigen::MatrixXd m_;
    bool explicit_m_ = false;
};

// Throws InputError unless m is square, symmetric, PSD and of unit trace.
void validate_polarization(const Eigen::MatrixXd& m, double tol = 1e-9);

} // namespace phonobath
