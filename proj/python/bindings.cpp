// Python bindings. Frequencies cross the boundary in THz, times in ps.

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "phonobath/document.hpp"
#include "phonobath/errors.hpp"
#include "phonobath/fit.hpp"
#include "phonobath/kernel.hpp"
#include "phonobath/translate.hpp"

namespace py = pybind11;
using namespace phonobath;

namespace {

std::vector<Frequency> to_freqs(const std::vector<double>& nu_thz) {
    std::vector<Frequency> out;
    out.reserve(nu_thz.size());
    for (double nu : nu_thz)
        out.push_back(Frequency::from_thz(nu));
    return out;
}

std::vector<double> to_thz(std::span<const Frequency> ws) {
    std::vector<double> out;
    out.reserve(ws.size());
    for (auto w : ws)
        out.push_back(w.thz());
    return out;
}

template <class F>
std::vector<double> map_thz(const std::vector<double>& nu_thz, F&& f) {
    std::vector<double> out;
    out.reserve(nu_thz.size());
    for (double nu : nu_thz)
        out.push_back(f(Frequency::from_thz(nu)));
    return out;
}

py::dict peak_dict(const LorentzianPeak& p) {
    py::dict d;
    d["nu0_thz"] = p.omega0.thz();
    d["gamma_thz"] = p.gamma.thz();
    d["weight"] = p.weight;
    return d;
}

// DebyeParams has no default constructor, so pybind's variant caster is out.
DosModel as_model(const py::handle& h) {
    if (py::isinstance<LorentzianSumModel>(h))
        return h.cast<LorentzianSumModel>();
    if (py::isinstance<DebyeParams>(h))
        return h.cast<DebyeParams>();
    if (py::isinstance<TabulatedDos>(h))
        return h.cast<TabulatedDos>();
    throw py::type_error("expected a Debye, LorentzianSum or Tabulated model");
}

py::object from_model(const DosModel& model) {
    return std::visit([](const auto& m) { return py::cast(m); }, model);
}

FrequencyUnit parse_unit(const std::string& unit) {
    if (unit == "THz" || unit == "thz")
        return FrequencyUnit::thz;
    if (unit == "meV" || unit == "mev")
        return FrequencyUnit::mev;
    throw InputError("unknown frequency unit '" + unit + "' (THz or meV)");
}

} // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Phonon DOS models, coupling functions and memory kernels.";

    py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<DomainError>(m, "DomainError", PyExc_ArithmeticError);
    py::register_exception<UnsupportedError>(m, "UnsupportedError", PyExc_NotImplementedError);

    py::class_<DebyeParams>(m, "Debye")
        .def(py::init([](double c, double cutoff_thz, int dim) {
                 return DebyeParams(c, Frequency::from_thz(cutoff_thz), dim);
             }),
             py::arg("sound_speed_km_s"), py::arg("cutoff_thz"), py::arg("dim") = 3)
        .def_property_readonly("sound_speed_km_s", &DebyeParams::sound_speed)
        .def_property_readonly("cutoff_thz", [](const DebyeParams& p) { return p.cutoff().thz(); })
        .def_property_readonly("dim", &DebyeParams::dimension)
        .def("__repr__", [](const DebyeParams& p) {
            return py::str("Debye(c={:.12g} km/s, cutoff={:.12g} THz, d={})")
                .format(p.sound_speed(), p.cutoff().thz(), p.dimension());
        });

    py::class_<LorentzianSumModel>(m, "LorentzianSum")
        .def(py::init([](const std::vector<std::tuple<double, double, double>>& peaks) {
                 std::vector<LorentzianPeak> ps;
                 for (const auto& [nu0, gamma, w] : peaks)
                     ps.push_back({Frequency::from_thz(nu0), Frequency::from_thz(gamma), w});
                 return LorentzianSumModel(std::move(ps));
             }),
             py::arg("peaks"), "peaks: (nu0_thz, gamma_thz, weight) triples")
        .def_property_readonly("peaks",
                               [](const LorentzianSumModel& m) {
                                   py::list out;
                                   for (const auto& p : m.peaks())
                                       out.append(peak_dict(p));
                                   return out;
                               })
        .def_property_readonly("ratios", &LorentzianSumModel::ratios)
        .def("scaled", &LorentzianSumModel::scaled)
        .def("__len__", &LorentzianSumModel::size)
        .def("__repr__", [](const LorentzianSumModel& m) {
            return "LorentzianSum(" + std::to_string(m.size()) + " peaks)";
        });

    py::class_<TabulatedDos>(m, "Tabulated")
        .def(py::init([](const std::vector<double>& nu_thz, const std::vector<double>& values, std::string note) {
                 return TabulatedDos(to_freqs(nu_thz), values, std::move(note));
             }),
             py::arg("nu_thz"), py::arg("values"), py::arg("unit_note") = "")
        .def_property_readonly("nu_thz", [](const TabulatedDos& t) { return to_thz(t.grid()); })
        .def_property_readonly("values",
                               [](const TabulatedDos& t) { return std::vector<double>(t.values().begin(), t.values().end()); })
        .def_property_readonly("unit_note", &TabulatedDos::unit_note)
        .def("__len__", &TabulatedDos::size);

    py::class_<CouplingSpec>(m, "Coupling")
        .def(py::init([](double g, int system_dim, int bath_dim, std::optional<double> power, double nu_ref_thz,
                         std::optional<Eigen::MatrixXd> polarization) {
                 GModel gm = ConstantG{g};
                 if (power)
                     gm = PowerLawG{g, *power, Frequency::from_thz(nu_ref_thz)};
                 return CouplingSpec(gm, system_dim, bath_dim, std::move(polarization));
             }),
             py::arg("g") = 1.0, py::arg("system_dim") = 3, py::arg("bath_dim") = 3, py::arg("power") = py::none(),
             py::arg("nu_ref_thz") = 1.0, py::arg("polarization") = py::none())
        .def("g", [](const CouplingSpec& s, double nu) { return s.g(Frequency::from_thz(nu)); }, py::arg("nu_thz"))
        .def_property_readonly("system_dim", &CouplingSpec::system_dim)
        .def_property_readonly("bath_dim", &CouplingSpec::bath_dim)
        .def_property_readonly("polarization", &CouplingSpec::polarization);

    m.def("debye_cutoff_from_temperature",
          [](double kelvin) { return debye_from_temperature(kelvin).thz(); }, py::arg("debye_temperature_k"),
          "Debye cutoff in THz from the Debye temperature.");

    m.def("dos", [](const py::object& model_obj, const std::vector<double>& nu_thz) {
        const DosModel model = as_model(model_obj);
        return map_thz(nu_thz, [&](Frequency w) { return eval_dos(model, w); });
    }, py::arg("model"), py::arg("nu_thz"));

    m.def("total_weight", &total_weight, py::arg("model"));

    m.def("coupling", [](const py::object& model_obj, const CouplingSpec& spec, const std::vector<double>& nu_thz) {
        const DosModel model = as_model(model_obj);
        const auto c = coupling_from_dos(model, spec);
        return map_thz(nu_thz, [&](Frequency w) { return c(w); });
    }, py::arg("model"), py::arg("spec"), py::arg("nu_thz"));

    m.def("spectral_density", [](const py::object& model_obj, const CouplingSpec& spec, const std::vector<double>& nu_thz) {
        const DosModel model = as_model(model_obj);
        const SpectralDensity j(coupling_from_dos(model, spec));
        return map_thz(nu_thz, [&](Frequency w) { return j(w); });
    }, py::arg("model"), py::arg("spec"), py::arg("nu_thz"));

    m.def("dos_from_coupling",
          [](const py::object& model_obj, const CouplingSpec& spec, const std::vector<double>& nu_thz) {
              const DosModel model = as_model(model_obj);
              const auto grid = to_freqs(nu_thz);
              return dos_from_coupling(coupling_from_dos(model, spec), grid);
          },
          py::arg("model"), py::arg("spec"), py::arg("nu_thz"));

    m.def("classify",
          [](const py::object& model_obj, const CouplingSpec& spec, std::optional<std::pair<double, double>> window) {
              const DosModel model = as_model(model_obj);
              auto [lo, hi] = default_ohmicity_window(model);
              if (window) {
                  lo = Frequency::from_thz(window->first);
                  hi = Frequency::from_thz(window->second);
              }
              const auto r = classify_ohmicity(SpectralDensity(coupling_from_dos(model, spec)), lo, hi);
              py::dict d;
              d["class"] = std::string(to_string(r.kind));
              d["s"] = r.s;
              d["r_squared"] = r.r_squared;
              d["window_thz"] = std::make_pair(r.window_lo.thz(), r.window_hi.thz());
              return d;
          },
          py::arg("model"), py::arg("spec"), py::arg("window_thz") = py::none());

    m.def("coupling_tensor",
          [](double dos_value, const CouplingSpec& spec, double nu_thz) {
              return factor_coupling_tensor(dos_value, spec, Frequency::from_thz(nu_thz));
          },
          py::arg("dos_value"), py::arg("spec"), py::arg("nu_thz"));

    m.def("kernel",
          [](const py::object& model_obj, const CouplingSpec& spec, const std::vector<double>& taus_ps,
             const std::string& method) {
              const DosModel model = as_model(model_obj);
              KernelCurve k;
              if (method == "analytic")
                  k = kernel_analytic(model, spec, taus_ps);
              else if (method == "quadrature")
                  k = kernel_quadrature(model, spec, taus_ps);
              else
                  throw InputError("unknown kernel method '" + method + "' (analytic or quadrature)");
              return std::make_pair(k.values, k.warnings);
          },
          py::arg("model"), py::arg("spec"), py::arg("taus_ps"), py::arg("method") = "quadrature",
          "Returns (values, warnings).");

    m.def("memory_times", [](const LorentzianSumModel& model) {
        const auto r = memory_times(model);
        return std::make_pair(r.times, r.dominant);
    }, py::arg("model"), "Returns (per-peak times in ps, dominant time in ps).");

    m.def("fit",
          [](const TabulatedDos& data, int n_peaks, bool allow_negative, std::uint64_t seed, int restarts,
             int max_iter) {
              FitOptions o;
              o.n_peaks = n_peaks;
              o.allow_negative_weights = allow_negative;
              o.seed = seed;
              o.n_restarts = restarts;
              o.max_iter = max_iter;
              const auto r = fit_lorentzian(data, o);
              py::dict d;
              py::list peaks;
              for (const auto& p : r.peaks)
                  peaks.append(peak_dict(p));
              d["peaks"] = peaks;
              d["ratios"] = r.ratios;
              d["cost"] = r.cost;
              d["rms_residual"] = r.rms_residual;
              d["iterations"] = r.iterations;
              d["converged"] = r.converged;
              d["positivity_ok"] = r.positivity_ok;
              d["cost_history"] = r.cost_history;
              d["model"] = r.model();
              return d;
          },
          py::arg("data"), py::arg("n_peaks"), py::arg("allow_negative") = false, py::arg("seed") = 0,
          py::arg("restarts") = 8, py::arg("max_iter") = 200);

    m.def("validate_positivity",
          [](const LorentzianSumModel& model, double lo_thz, double hi_thz, int n) {
              const auto r = validate_positivity(model, Frequency::from_thz(lo_thz), Frequency::from_thz(hi_thz), n);
              py::dict d;
              d["ok"] = r.ok;
              d["worst_nu_thz"] = r.worst_omega.thz();
              d["worst_value"] = r.worst_value;
              d["max_value"] = r.max_value;
              return d;
          },
          py::arg("model"), py::arg("lo_thz"), py::arg("hi_thz"), py::arg("n") = 4096);

    m.def("calibrate",
          [](const LorentzianSumModel& model, const CouplingSpec& spec, double eta, double gamma_e, double kappa) {
              const auto r = calibrate_amplitude(model, spec, {eta, gamma_e, kappa});
              return py::make_tuple(r.a1, r.model, r.ohmic_slope);
          },
          py::arg("model"), py::arg("spec"), py::arg("eta"), py::arg("gamma_e"), py::arg("kappa") = 1.0,
          "Returns (A1, rescaled model, low-frequency J/omega slope).");

    m.def("ingest",
          [](const std::string& text, const std::string& unit, int freq_col, int dos_col) {
              IngestOptions o;
              o.unit = parse_unit(unit);
              o.freq_col = freq_col;
              o.dos_col = dos_col;
              return ingest_table(text, o);
          },
          py::arg("text"), py::arg("unit") = "THz", py::arg("freq_col") = 0, py::arg("dos_col") = 1);

    m.def("load", [](const std::filesystem::path& path) {
        const auto doc = load_document(path);
        return py::make_tuple(from_model(to_model(doc)), to_coupling(doc.coupling));
    }, py::arg("path"), "Reads a model document; returns (model, coupling).");

    m.def("dumps", [](const py::object& model_obj, const CouplingSpec& spec, std::string provenance) {
        const DosModel model = as_model(model_obj);
        return print_document(make_document(model, make_coupling_document(spec), std::move(provenance)));
    }, py::arg("model"), py::arg("spec"), py::arg("provenance") = "");

    m.def("loads", [](const std::string& text) {
        const auto doc = parse_document(text);
        return py::make_tuple(from_model(to_model(doc)), to_coupling(doc.coupling));
    }, py::arg("text"));
}
