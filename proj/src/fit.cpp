#include "phonobath/fit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>

#include "phonobath/errors.hpp"

namespace phonobath {

namespace {

constexpr int params_per_peak = 3;

std::vector<double> moving_average5(std::span<const double> v) {
    const auto n = static_cast<std::ptrdiff_t>(v.size());
    std::vector<double> out(v.size());
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        const auto lo = std::max<std::ptrdiff_t>(0, i - 2);
        const auto hi = std::min<std::ptrdiff_t>(n - 1, i + 2);
        double s = 0.0;
        for (auto k = lo; k <= hi; ++k)
            s += v[k];
        out[i] = s / static_cast<double>(hi - lo + 1);
    }
    return out;
}

// Height above the higher of the two bounding valleys.
double prominence(const std::vector<double>& s, std::size_t i) {
    double left_min = s[i];
    for (std::size_t k = i; k-- > 0;) {
        if (s[k] > s[i])
            break;
        left_min = std::min(left_min, s[k]);
    }
    double right_min = s[i];
    for (std::size_t k = i + 1; k < s.size(); ++k) {
        if (s[k] > s[i])
            break;
        right_min = std::min(right_min, s[k]);
    }
    return s[i] - std::max(left_min, right_min);
}

// Distance from the maximum at i to the half-height crossing on one side,
// walking while the smoothed curve keeps descending. Negative if not found.
double half_width(const std::vector<double>& s, std::span<const Frequency> x, std::size_t i, int dir) {
    const double half = 0.5 * s[i];
    std::size_t prev = i;
    while (true) {
        if ((dir < 0 && prev == 0) || (dir > 0 && prev + 1 == s.size()))
            return -1.0;
        const std::size_t k = dir < 0 ? prev - 1 : prev + 1;
        if (s[k] > s[prev])
            return -1.0;
        if (s[k] <= half) {
            const double t = (s[prev] - half) / (s[prev] - s[k]);
            const double xc = x[prev].rad_per_ps() + t * (x[k].rad_per_ps() - x[prev].rad_per_ps());
            return std::abs(xc - x[i].rad_per_ps());
        }
        prev = k;
    }
}

// Uniform in [0, 1) from the top 53 bits, identical on every platform.
double unit_uniform(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

struct LmResult {
    Eigen::VectorXd theta;
    double cost = 0.0;
    int iterations = 0;
    bool converged = false;
    std::vector<double> costs;  // initial cost, then every accepted step
};

double sum_of_squares(const Eigen::VectorXd& r) { return r.squaredNorm(); }

LmResult levenberg_marquardt(const LorentzianParametrization& param, Eigen::VectorXd theta,
                             std::span<const double> omegas, const Eigen::VectorXd& y, const FitOptions& opts) {
    const auto n = static_cast<Eigen::Index>(omegas.size());
    const auto m = theta.size();
    Eigen::VectorXd model(n), trial_model(n);
    Eigen::MatrixXd jac(n, m), trial_jac(n, m);

    lorentzian_model_jacobian(param, theta, omegas, model, jac);
    Eigen::VectorXd r = model - y;
    double cost = sum_of_squares(r);
    const double cost_floor = 1e-28 * y.squaredNorm();

    LmResult res;
    res.costs.push_back(cost);
    double lambda = 1e-3;
    for (int it = 0; it < opts.max_iter; ++it) {
        if (!std::isfinite(cost))
            break;
        if (cost <= cost_floor) {
            res.converged = true;
            break;
        }
        res.iterations = it + 1;
        const Eigen::MatrixXd a = jac.transpose() * jac;
        const Eigen::VectorXd grad = jac.transpose() * r;
        Eigen::VectorXd diag = a.diagonal();
        const double dfloor = 1e-12 * std::max(diag.maxCoeff(), 1e-300);
        diag = diag.cwiseMax(dfloor);

        bool accepted = false;
        while (!accepted) {
            Eigen::MatrixXd damped = a;
            damped.diagonal() += lambda * diag;
            const Eigen::VectorXd step = damped.ldlt().solve(-grad);
            const Eigen::VectorXd trial = theta + step;
            lorentzian_model_jacobian(param, trial, omegas, trial_model, trial_jac);
            const Eigen::VectorXd trial_r = trial_model - y;
            const double trial_cost = sum_of_squares(trial_r);
            if (step.allFinite() && std::isfinite(trial_cost) && trial_cost < cost) {
                const double rel_decrease = (cost - trial_cost) / cost;
                const double rel_step = step.norm() / (theta.norm() + opts.tol);
                theta = trial;
                r = trial_r;
                model.swap(trial_model);
                jac.swap(trial_jac);
                cost = trial_cost;
                res.costs.push_back(cost);
                lambda = std::max(lambda / 10.0, 1e-15);
                accepted = true;
                if (rel_decrease < opts.tol || rel_step < opts.tol || cost <= cost_floor) {
                    res.converged = true;
                    res.theta = theta;
                    res.cost = cost;
                    return res;
                }
            } else {
                lambda *= 10.0;
                if (lambda > 1e16) {
                    // no descent direction left at working precision
                    res.converged = std::isfinite(cost);
                    res.theta = theta;
                    res.cost = cost;
                    return res;
                }
            }
        }
    }
    res.theta = theta;
    res.cost = cost;
    return res;
}

} // namespace

Eigen::VectorXd LorentzianParametrization::pack(std::span<const LorentzianPeak> peaks) const {
    Eigen::VectorXd theta(static_cast<Eigen::Index>(peaks.size()) * params_per_peak);
    for (std::size_t j = 0; j < peaks.size(); ++j) {
        const auto k = static_cast<Eigen::Index>(j) * params_per_peak;
        theta[k] = std::log(peaks[j].omega0.rad_per_ps());
        theta[k + 1] = std::log(peaks[j].gamma.rad_per_ps());
        if (signed_weights) {
            theta[k + 2] = peaks[j].weight;
        } else {
            if (!(peaks[j].weight > 0.0))
                throw InputError("positive-weight parametrization needs W > 0");
            theta[k + 2] = std::log(peaks[j].weight);
        }
    }
    return theta;
}

std::vector<LorentzianPeak> LorentzianParametrization::unpack(const Eigen::VectorXd& theta) const {
    std::vector<LorentzianPeak> peaks(static_cast<std::size_t>(theta.size() / params_per_peak));
    for (std::size_t j = 0; j < peaks.size(); ++j) {
        const auto k = static_cast<Eigen::Index>(j) * params_per_peak;
        peaks[j].omega0 = Frequency(std::exp(theta[k]));
        peaks[j].gamma = Frequency(std::exp(theta[k + 1]));
        peaks[j].weight = signed_weights ? theta[k + 2] : std::exp(theta[k + 2]);
    }
    return peaks;
}

void lorentzian_model_jacobian(const LorentzianParametrization& param, const Eigen::VectorXd& theta,
                               std::span<const double> omegas, Eigen::VectorXd& values, Eigen::MatrixXd& jacobian) {
    const auto n = static_cast<Eigen::Index>(omegas.size());
    const auto n_peaks = theta.size() / params_per_peak;
    values.setZero(n);
    jacobian.resize(n, theta.size());
    for (Eigen::Index j = 0; j < n_peaks; ++j) {
        const auto k = j * params_per_peak;
        const double w0 = std::exp(theta[k]);
        const double g = std::exp(theta[k + 1]);
        const double weight = param.signed_weights ? theta[k + 2] : std::exp(theta[k + 2]);
        const double w02 = w0 * w0;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double w2 = omegas[i] * omegas[i];
            const double detune = w02 - w2;
            const double q = detune * detune + g * g * w2;
            const double shape = g * w2 / q;  // d f / d W
            const double f = weight * shape;
            values[i] += f;
            jacobian(i, k) = -4.0 * weight * g * w2 * w02 * detune / (q * q);
            jacobian(i, k + 1) = f * (1.0 - 2.0 * g * g * w2 / q);
            jacobian(i, k + 2) = param.signed_weights ? shape : f;
        }
    }
}

std::vector<LorentzianPeak> init_peaks(const TabulatedDos& data, int nu) {
    if (nu < 1)
        throw InputError("number of peaks must be >= 1");
    if (data.size() < static_cast<std::size_t>(2 * nu + 2))
        throw InputError("too few samples to seed " + std::to_string(nu) + " peaks");

    const auto x = data.grid();
    const auto v = data.values();
    const auto s = moving_average5(v);
    const double smax = *std::max_element(s.begin(), s.end());
    const double span = data.back().rad_per_ps() - data.front().rad_per_ps();
    const double fallback_width = span / (4.0 * nu);

    struct Candidate {
        std::size_t index;
        double prominence;
    };
    std::vector<Candidate> maxima;
    for (std::size_t i = 1; i + 1 < s.size(); ++i) {
        if (s[i] > s[i - 1] && s[i] >= s[i + 1]) {
            const double p = prominence(s, i);
            if (p >= 0.02 * smax && p > 0.0)
                maxima.push_back({i, p});
        }
    }
    std::stable_sort(maxima.begin(), maxima.end(),
                     [](const Candidate& a, const Candidate& b) { return a.prominence > b.prominence; });
    if (maxima.size() > static_cast<std::size_t>(nu))
        maxima.resize(static_cast<std::size_t>(nu));

    std::vector<LorentzianPeak> peaks;
    for (const auto& c : maxima) {
        const double left = half_width(s, x, c.index, -1);
        const double right = half_width(s, x, c.index, +1);
        double width;
        if (left > 0.0 && right > 0.0)
            width = left + right;
        else if (left > 0.0 || right > 0.0)
            width = 2.0 * std::max(left, right);
        else
            width = fallback_width;
        const double height = std::max(v[c.index], 1e-3 * smax);
        peaks.push_back({x[c.index], Frequency(width), height * width});
    }

    const int missing = nu - static_cast<int>(peaks.size());
    for (int k = 0; k < missing; ++k) {
        const Frequency w(data.front().rad_per_ps() + span * (k + 1) / (missing + 1));
        const double height = std::max(eval_tabulated_dos(data, w), 0.1 * smax);
        peaks.push_back({w, Frequency(fallback_width), height * fallback_width});
    }
    std::sort(peaks.begin(), peaks.end(),
              [](const LorentzianPeak& a, const LorentzianPeak& b) { return a.omega0 < b.omega0; });
    return peaks;
}

FitReport fit_lorentzian(const TabulatedDos& data, const FitOptions& opts) {
    if (opts.n_peaks < 1)
        throw InputError("number of peaks must be >= 1");
    if (opts.max_iter < 1)
        throw InputError("max_iter must be >= 1");
    if (!(opts.tol > 0.0))
        throw InputError("tolerance must be positive");
    if (opts.n_restarts < 1)
        throw InputError("n_restarts must be >= 1");

    std::vector<double> omegas;
    omegas.reserve(data.size());
    for (const auto w : data.grid())
        omegas.push_back(w.rad_per_ps());
    Eigen::VectorXd y(static_cast<Eigen::Index>(data.size()));
    for (std::size_t i = 0; i < data.size(); ++i)
        y[static_cast<Eigen::Index>(i)] = data.values()[i];
    if (!y.allFinite())
        throw InputError("data contains NaN or Inf");

    std::vector<LorentzianPeak> base;
    if (opts.initial_guess) {
        base = *opts.initial_guess;
        if (static_cast<int>(base.size()) != opts.n_peaks)
            throw InputError("initial guess has the wrong number of peaks");
        LorentzianSumModel check(base);  // validates omega0, Gamma > 0
    } else {
        base = init_peaks(data, opts.n_peaks);
    }
    std::sort(base.begin(), base.end(),
              [](const LorentzianPeak& a, const LorentzianPeak& b) { return a.omega0 < b.omega0; });

    const LorentzianParametrization param{opts.allow_negative_weights};
    const double ymax = std::max(y.cwiseAbs().maxCoeff(), 1e-300);
    if (!param.signed_weights) {
        for (auto& p : base)
            if (!(p.weight > 0.0))
                p.weight = std::max(std::abs(p.weight), 1e-3 * ymax * p.gamma.rad_per_ps());
    }

    std::mt19937_64 rng(opts.seed);
    LmResult best;
    bool have_best = false;
    for (int r = 0; r < opts.n_restarts; ++r) {
        auto start = base;
        if (r > 0) {
            for (auto& p : start) {
                p.omega0 = Frequency(p.omega0.rad_per_ps() * (0.8 + 0.4 * unit_uniform(rng)));
                p.gamma = Frequency(p.gamma.rad_per_ps() * (0.8 + 0.4 * unit_uniform(rng)));
                p.weight *= 0.8 + 0.4 * unit_uniform(rng);
            }
        }
        auto res = levenberg_marquardt(param, param.pack(start), omegas, y, opts);
        if (!std::isfinite(res.cost))
            continue;
        if (!have_best || res.cost < best.cost) {
            best = std::move(res);
            have_best = true;
        }
    }

    FitReport report;
    if (!have_best) {
        report.peaks = base;
        report.cost = std::numeric_limits<double>::infinity();
        report.rms_residual = std::numeric_limits<double>::infinity();
        report.converged = false;
        report.ratios = LorentzianSumModel(base).ratios();
        return report;
    }
    report.peaks = param.unpack(best.theta);
    std::sort(report.peaks.begin(), report.peaks.end(),
              [](const LorentzianPeak& a, const LorentzianPeak& b) { return a.omega0 < b.omega0; });
    const LorentzianSumModel model(report.peaks);
    report.ratios = model.ratios();
    report.cost = best.cost;
    report.rms_residual = std::sqrt(best.cost / static_cast<double>(data.size()));
    report.iterations = best.iterations;
    report.converged = best.converged;
    report.cost_history = std::move(best.costs);

    const double hi = data.back().rad_per_ps();
    const double lo = std::max(data.front().rad_per_ps(), 1e-4 * hi);
    report.positivity_ok = validate_positivity(model, Frequency(lo), Frequency(hi)).ok;
    return report;
}

PositivityResult validate_positivity(const LorentzianSumModel& model, Frequency lo, Frequency hi, int n) {
    if (n < 100)
        throw InputError("positivity check needs at least 100 nodes");
    if (!(lo.rad_per_ps() > 0.0) || !(hi > lo))
        throw InputError("positivity span must satisfy 0 < lo < hi");
    const int n_log = n / 2;
    const int n_lin = n - n_log;
    std::vector<double> nodes;
    nodes.reserve(static_cast<std::size_t>(n));
    const double a = lo.rad_per_ps();
    const double b = hi.rad_per_ps();
    for (int i = 0; i < n_log; ++i)
        nodes.push_back(a * std::pow(b / a, static_cast<double>(i) / (n_log - 1)));
    for (int i = 0; i < n_lin; ++i)
        nodes.push_back(a + (b - a) * static_cast<double>(i) / (n_lin - 1));
    std::sort(nodes.begin(), nodes.end());

    PositivityResult res;
    res.worst_value = std::numeric_limits<double>::infinity();
    res.max_value = -std::numeric_limits<double>::infinity();
    for (const double w : nodes) {
        const double d = eval_lorentzian_dos(model, Frequency(w));
        if (d < res.worst_value) {
            res.worst_value = d;
            res.worst_omega = Frequency(w);
        }
        res.max_value = std::max(res.max_value, d);
    }
    res.ok = res.worst_value >= -1e-9 * res.max_value;
    return res;
}

} // namespace phonobath
