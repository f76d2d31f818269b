#include "phonobath/kernel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "phonobath/errors.hpp"

namespace phonobath {

namespace {

constexpr double pi = std::numbers::pi;

// sin(x)/x
double sinc(double x) {
    if (std::abs(x) < 1e-4)
        return 1.0 - x * x / 6.0;
    return std::sin(x) / x;
}

// Integrand pieces shared by the panel quadrature and the tail expansion.
struct SineTransform {
    const DosModel& dos;
    const CouplingSpec& spec;
    double tau;

    // (g^2/d_s) D(w) / w, the slowly varying amplitude of sin(w tau)
    double amplitude(double w) const {
        const Frequency f(w);
        const double g = spec.g(f);
        return g * g * eval_dos(dos, f) / (spec.system_dim() * w);
    }

    double integrand(double w) const {
        const Frequency f(w);
        const double g = spec.g(f);
        return g * g * eval_dos(dos, f) / spec.system_dim() * tau * sinc(w * tau);
    }
};

// Largest panel width allowed at the left edge a, from the model's own scales.
double model_width_limit(const DosModel& dos, double a) {
    if (const auto* lor = std::get_if<LorentzianSumModel>(&dos)) {
        double gmin = std::numeric_limits<double>::infinity();
        for (const auto& p : lor->peaks())
            gmin = std::min(gmin, p.gamma.rad_per_ps());
        return std::max(gmin, 0.25 * a);
    }
    return std::numeric_limits<double>::infinity();
}

std::vector<double> breakpoints(const DosModel& dos, double lo, double hi) {
    std::vector<double> pts{lo, hi};
    if (const auto* tab = std::get_if<TabulatedDos>(&dos)) {
        for (const auto w : tab->grid())
            pts.push_back(w.rad_per_ps());
    } else if (const auto* lor = std::get_if<LorentzianSumModel>(&dos)) {
        for (const auto& p : lor->peaks()) {
            const double w0 = p.omega0.rad_per_ps();
            const double g = p.gamma.rad_per_ps();
            for (double x : {w0 - 2.0 * g, w0, w0 + 2.0 * g})
                pts.push_back(x);
        }
    }
    std::erase_if(pts, [&](double x) { return x < lo || x > hi; });
    std::sort(pts.begin(), pts.end());
    pts.erase(std::unique(pts.begin(), pts.end()), pts.end());
    return pts;
}

// Bisects until the Gauss-Kronrod error estimate is below rel_tol times the
// panel's L1 norm. Boost's own recursion measures against the signed result,
// which never converges on panels integrating to ~0; its error estimate is
// also left in [-1, 1] units, hence the rescale.
template <class F>
double adaptive_gk(const F& f, double a, double b, double rel_tol, int depth) {
    using boost::math::quadrature::gauss_kronrod;
    double err = 0.0;
    double l1 = 0.0;
    const double v = gauss_kronrod<double, 15>::integrate(f, a, b, 0, 0.0, &err, &l1);
    if (depth == 0 || 0.5 * (b - a) * err <= rel_tol * l1)
        return v;
    const double mid = 0.5 * (a + b);
    return adaptive_gk(f, a, mid, rel_tol, depth - 1) + adaptive_gk(f, mid, b, rel_tol, depth - 1);
}

// Integrates over [a, b] in panels no wider than the oscillation and model
// limits allow, each panel with adaptive Gauss-Kronrod.
template <class F>
double integrate_panels(const F& f, const DosModel& dos, double a, double b, double tau, const QuadratureOptions& opts) {
    const double osc_width = tau > 0.0 ? two_pi / (tau * opts.panels_per_period) : std::numeric_limits<double>::infinity();
    double sum = 0.0;
    double left = a;
    while (left < b) {
        const double width = std::min(osc_width, model_width_limit(dos, left));
        double right = std::min(b, left + width);
        // avoid a sliver panel at the end
        if (b - right < 1e-9 * width)
            right = b;
        sum += adaptive_gk(f, left, right, opts.rel_tol, 12);
        left = right;
    }
    return sum;
}

// integral_X^inf h(w) sin(w tau) dw by repeated integration by parts:
// h cos/tau - h' sin/tau^2 - h'' cos/tau^3 + h''' sin/tau^4 + ...
// Derivatives of h are taken by 5-point central differences with step d.
double asymptotic_tail(const SineTransform& st, double x, double d) {
    const double tau = st.tau;
    const double hm2 = st.amplitude(x - 2 * d);
    const double hm1 = st.amplitude(x - d);
    const double h0 = st.amplitude(x);
    const double hp1 = st.amplitude(x + d);
    const double hp2 = st.amplitude(x + 2 * d);
    const double h1 = (-hp2 + 8 * hp1 - 8 * hm1 + hm2) / (12 * d);
    const double h2 = (-hp2 + 16 * hp1 - 30 * h0 + 16 * hm1 - hm2) / (12 * d * d);
    const double h3 = (hp2 - 2 * hp1 + 2 * hm1 - hm2) / (2 * d * d * d);
    const double c = std::cos(x * tau);
    const double s = std::sin(x * tau);
    return h0 * c / tau - h1 * s / (tau * tau) - h2 * c / std::pow(tau, 3) + h3 * s / std::pow(tau, 4);
}

} // namespace

double kernel_quadrature_at(const DosModel& dos, const CouplingSpec& spec, double tau, std::vector<std::string>* warnings,
                            const QuadratureOptions& opts) {
    if (tau < 0.0)
        throw InputError("kernel times must be nonnegative");
    if (tau == 0.0)
        return 0.0;

    const SineTransform st{dos, spec, tau};
    const auto f = [&st](double w) { return st.integrand(w); };
    const auto [lo, hi] = dos_support(dos);
    const double wlo = lo.rad_per_ps();
    const double whi = hi.rad_per_ps();

    if (!has_unbounded_support(dos)) {
        const auto pts = breakpoints(dos, wlo, whi);
        double value = 0.0;
        for (std::size_t i = 0; i + 1 < pts.size(); ++i)
            value += integrate_panels(f, dos, pts[i], pts[i + 1], tau, opts);
        return value;
    }

    // Lorentzian: panels out to X = w0max + tail_phase/tau, then the asymptotic
    // expansion on [X, inf). Past X the amplitude's poles are at least
    // tail_phase/tau away, so successive expansion terms shrink like n/tail_phase.
    const auto& lor = std::get<LorentzianSumModel>(dos);
    double w0max = 0.0;
    for (const auto& p : lor.peaks())
        w0max = std::max(w0max, p.omega0.rad_per_ps());
    const double x = w0max + opts.tail_phase / tau;
    const double end = std::min(x, whi);
    const auto pts = breakpoints(dos, wlo, end);
    double value = 0.0;
    for (std::size_t i = 0; i + 1 < pts.size(); ++i)
        value += integrate_panels(f, dos, pts[i], pts[i + 1], tau, opts);
    if (x > whi)
        value += integrate_panels(f, dos, whi, x, tau, opts);
    const auto tail = asymptotic_tail(st, x, 0.02 * (x - w0max));
    value += tail;

    // A non-decaying amplitude (g growing too fast) makes the integral
    // divergent; the tail expansion is then meaningless.
    if (warnings) {
        const bool decaying = std::abs(st.amplitude(2.0 * x)) < std::abs(st.amplitude(x));
        if (!decaying && std::abs(tail) > 1e-3 * std::abs(value))
            warnings->push_back("integrand does not decay beyond the truncation at tau = " + std::to_string(tau) +
                                " ps; kernel may be divergent");
    }
    return value;
}

KernelCurve kernel_quadrature(const DosModel& dos, const CouplingSpec& spec, std::span<const double> taus,
                              const QuadratureOptions& opts) {
    KernelCurve curve;
    curve.method = KernelMethod::quadrature;
    curve.taus.assign(taus.begin(), taus.end());
    curve.values.reserve(taus.size());
    for (const double t : taus)
        curve.values.push_back(kernel_quadrature_at(dos, spec, t, &curve.warnings, opts));
    return curve;
}

double kernel_lorentzian_analytic(const LorentzianSumModel& model, const CouplingSpec& spec, double tau) {
    if (!spec.has_constant_g())
        throw UnsupportedError("the analytic Lorentzian kernel needs a constant g; use kernel_quadrature");
    if (tau <= 0.0)
        return 0.0;
    const double g = spec.g(Frequency(1.0));
    double sum = 0.0;
    for (const auto& p : model.peaks()) {
        const double w0 = p.omega0.rad_per_ps();
        const double half_gamma = 0.5 * p.gamma.rad_per_ps();
        const double disc = w0 * w0 - half_gamma * half_gamma;
        double term;
        if (std::abs(disc) <= 1e-14 * w0 * w0) {
            term = std::exp(-half_gamma * tau) * tau;
        } else if (disc > 0.0) {
            const double w1 = std::sqrt(disc);
            term = std::exp(-half_gamma * tau) * std::sin(w1 * tau) / w1;
        } else {
            // exp(-G t/2) sinh(k t)/k without overflowing sinh
            const double kappa = std::sqrt(-disc);
            term = std::exp((kappa - half_gamma) * tau) * -std::expm1(-2.0 * kappa * tau) / (2.0 * kappa);
        }
        sum += p.weight * term;
    }
    return g * g * pi / (2.0 * spec.system_dim()) * sum;
}

double kernel_debye_analytic(const DebyeParams& params, const CouplingSpec& spec, double tau) {
    if (!spec.has_constant_g())
        throw UnsupportedError("the analytic Debye kernel needs a constant g; use kernel_quadrature");
    const int d = params.dimension();
    if (d == 1)
        throw UnsupportedError("no closed-form Debye kernel in 1D; use kernel_quadrature");
    if (tau <= 0.0)
        return 0.0;
    const double g = spec.g(Frequency(1.0));
    const double pref = g * g / spec.system_dim() * params.prefactor();
    const double x = params.cutoff().rad_per_ps() * tau;
    if (d == 2) {
        // integral_0^wD sin(w tau) dw
        const double s = std::sin(0.5 * x);
        return pref * 2.0 * s * s / tau;
    }
    // integral_0^wD w sin(w tau) dw = (sin x - x cos x) / tau^2
    double core;
    if (x < 1e-2) {
        const double x2 = x * x;
        core = x * x2 * (1.0 / 3.0 - x2 / 30.0 + x2 * x2 / 840.0);
    } else {
        core = std::sin(x) - x * std::cos(x);
    }
    return pref * core / (tau * tau);
}

KernelCurve kernel_analytic(const DosModel& dos, const CouplingSpec& spec, std::span<const double> taus) {
    KernelCurve curve;
    curve.method = KernelMethod::analytic;
    curve.taus.assign(taus.begin(), taus.end());
    curve.values.reserve(taus.size());
    for (const double t : taus) {
        if (t < 0.0)
            throw InputError("kernel times must be nonnegative");
        if (const auto* lor = std::get_if<LorentzianSumModel>(&dos))
            curve.values.push_back(kernel_lorentzian_analytic(*lor, spec, t));
        else if (const auto* deb = std::get_if<DebyeParams>(&dos))
            curve.values.push_back(kernel_debye_analytic(*deb, spec, t));
        else
            throw UnsupportedError("no analytic kernel for tabulated DOS; use kernel_quadrature");
    }
    return curve;
}

MemoryTimeReport memory_times(const LorentzianSumModel& model) {
    MemoryTimeReport r;
    const double w1 = model.peaks().front().weight;
    for (const auto& p : model.peaks()) {
        const double t = 1.0 / p.gamma.rad_per_ps();
        r.times.push_back(t);
        if (std::abs(p.weight / w1) >= 0.05)
            r.dominant = std::max(r.dominant, t);
    }
    return r;
}

double kernel_initial_slope(const LorentzianSumModel& model, const CouplingSpec& spec) {
    if (!spec.has_constant_g())
        throw UnsupportedError("initial slope closed form needs a constant g");
    const double g = spec.g(Frequency(1.0));
    return g * g / spec.system_dim() * total_weight(model);
}

} // namespace phonobath
