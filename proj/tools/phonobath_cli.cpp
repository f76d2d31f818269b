// phonobath: DOS <-> coupling-function workflows from the command line.
//
// Exit codes: 0 success, 1 input error, 2 fit did not converge.

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "phonobath/document.hpp"
#include "phonobath/errors.hpp"
#include "phonobath/fit.hpp"
#include "phonobath/kernel.hpp"
#include "phonobath/translate.hpp"

namespace pb = phonobath;

namespace {

constexpr int exit_ok = 0;
constexpr int exit_input = 1;
constexpr int exit_not_converged = 2;

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw pb::InputError("cannot open " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Writes to path, or stdout when path is empty.
void emit(const std::string& path, const std::string& text) {
    if (path.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw pb::InputError("cannot write " + path);
    out << text;
}

struct CsvWriter {
    std::ostringstream out;

    explicit CsvWriter(const std::vector<std::string>& header) {
        for (std::size_t i = 0; i < header.size(); ++i)
            out << (i ? "," : "") << header[i];
        out << '\n';
    }

    void row(const std::vector<double>& values) {
        for (std::size_t i = 0; i < values.size(); ++i) {
            if (!std::isfinite(values[i]))
                throw pb::DomainError("non-finite value in CSV output");
            out << (i ? "," : "") << pb::format_number(values[i]);
        }
        out << '\n';
    }
};

// "lo:hi" or "lo:hi:n"
std::vector<double> parse_colon_list(const std::string& s, std::size_t expected) {
    std::vector<double> parts;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ':')) {
        try {
            std::size_t used = 0;
            parts.push_back(std::stod(item, &used));
            if (used != item.size())
                throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw pb::InputError("cannot parse '" + s + "'");
        }
    }
    if (parts.size() != expected)
        throw pb::InputError("expected " + std::to_string(expected) + " colon-separated numbers in '" + s + "'");
    return parts;
}

struct CouplingArgs {
    double g = 1.0;
    int system_dim = 3;
    int bath_dim = 3;

    void add_to(CLI::App* cmd) {
        cmd->add_option("--g", g, "Constant coupling g")->capture_default_str();
        cmd->add_option("--ds", system_dim, "System dimension d_s")->capture_default_str();
        cmd->add_option("--d", bath_dim, "Bath dimension d")->capture_default_str();
    }

    pb::CouplingDocument document() const {
        pb::CouplingDocument c;
        c.g.g = g;
        c.system_dim = system_dim;
        c.bath_dim = bath_dim;
        pb::to_coupling(c);  // validate
        return c;
    }
};

pb::TabulatedDos load_table(const std::string& path) {
    const auto ext = std::filesystem::path(path).extension().string();
    if (ext == ".json") {
        const auto doc = pb::load_document(path);
        const auto model = pb::to_model(doc);
        if (const auto* t = std::get_if<pb::TabulatedDos>(&model))
            return *t;
        throw pb::InputError(path + " is not a tabulated DOS document");
    }
    return pb::ingest_table(read_file(path), {}, "ingested from " + std::filesystem::path(path).filename().string());
}

// ---------------------------------------------------------------- ingest

struct IngestArgs {
    std::string path;
    std::string unit = "THz";
    int freq_col = 0;
    int dos_col = 1;
    std::string delimiter;
    std::string out;
};

int run_ingest(const IngestArgs& a) {
    pb::IngestOptions opts;
    if (a.unit == "THz" || a.unit == "thz")
        opts.unit = pb::FrequencyUnit::thz;
    else if (a.unit == "meV" || a.unit == "mev")
        opts.unit = pb::FrequencyUnit::mev;
    else
        throw pb::InputError("unknown frequency unit '" + a.unit + "' (THz or meV)");
    opts.freq_col = a.freq_col;
    opts.dos_col = a.dos_col;
    if (a.delimiter == "tab")
        opts.delimiter = '\t';
    else if (a.delimiter == "space")
        opts.delimiter = ' ';
    else if (a.delimiter.size() == 1)
        opts.delimiter = a.delimiter[0];
    else if (!a.delimiter.empty())
        throw pb::InputError("delimiter must be a single character, 'tab' or 'space'");

    const auto note = "source " + std::filesystem::path(a.path).filename().string() + ", frequency unit " + a.unit +
                      ", DOS in source units";
    const auto table = pb::ingest_table(read_file(a.path), opts, note);
    pb::CouplingDocument coupling;
    emit(a.out, pb::print_document(pb::make_document(table, coupling, note)));
    return exit_ok;
}

// ---------------------------------------------------------------- fit

struct FitArgs {
    std::string data;
    int peaks = 1;
    bool allow_negative = false;
    std::uint64_t seed = 0;
    int restarts = 8;
    int max_iter = 200;
    std::string out;
    std::string curve;
    CouplingArgs coupling;
};

int run_fit(const FitArgs& a) {
    if (a.peaks < 1)
        throw pb::InputError("--peaks must be >= 1");
    const auto coupling = a.coupling.document();
    const auto table = load_table(a.data);

    pb::FitOptions opts;
    opts.n_peaks = a.peaks;
    opts.allow_negative_weights = a.allow_negative;
    opts.seed = a.seed;
    opts.n_restarts = a.restarts;
    opts.max_iter = a.max_iter;
    const auto report = pb::fit_lorentzian(table, opts);
    const auto model = report.model();

    auto doc = pb::make_document(model, coupling, "Lorentzian fit (" + std::to_string(a.peaks) + " peaks) of " +
                                                      std::filesystem::path(a.data).filename().string());
    doc.fit = pb::FitSummary{report.cost,          report.rms_residual, report.iterations, report.converged,
                             report.positivity_ok, a.peaks,             a.allow_negative,  a.seed};
    if (!a.out.empty())
        pb::save_document(doc, a.out);
    else
        std::cout << pb::print_document(doc);

    if (!a.curve.empty()) {
        CsvWriter csv({"nu_thz", "dos_data", "dos_fit", "residual"});
        for (std::size_t i = 0; i < table.size(); ++i) {
            const auto w = table.grid()[i];
            const double data = table.values()[i];
            const double fit = pb::eval_lorentzian_dos(model, w);
            csv.row({w.thz(), data, fit, fit - data});
        }
        emit(a.curve, csv.out.str());
    }

    std::cerr << (report.converged ? "converged" : "NOT converged") << " after " << report.iterations
              << " iterations, rms residual " << pb::format_number(report.rms_residual)
              << (report.positivity_ok ? "" : ", total DOS goes negative") << '\n';
    return report.converged ? exit_ok : exit_not_converged;
}

// ---------------------------------------------------------------- kernel

struct KernelArgs {
    std::string model;
    double tau_max = 2.0;
    int n = 256;
    std::string method = "auto";
    std::string out;
};

bool has_closed_form(const pb::DosModel& dos, const pb::CouplingSpec& spec) {
    if (!spec.has_constant_g() || std::holds_alternative<pb::TabulatedDos>(dos))
        return false;
    const auto* deb = std::get_if<pb::DebyeParams>(&dos);
    return !deb || deb->dimension() != 1;
}

int run_kernel(const KernelArgs& a) {
    const auto doc = pb::load_document(a.model);
    const auto dos = pb::to_model(doc);
    const auto spec = pb::to_coupling(doc.coupling);

    if (!(a.tau_max >= 0.0) || !std::isfinite(a.tau_max))
        throw pb::InputError("--tau-max must be >= 0");
    std::vector<double> taus;
    if (a.tau_max == 0.0) {
        taus = {0.0};
    } else {
        if (a.n < 2)
            throw pb::InputError("--n must be >= 2");
        for (int i = 0; i < a.n; ++i)
            taus.push_back(a.tau_max * i / (a.n - 1));
    }

    std::string method = a.method;
    if (method == "auto")
        method = has_closed_form(dos, spec) ? "both" : "quadrature";
    if (method != "analytic" && method != "quadrature" && method != "both")
        throw pb::InputError("--method must be analytic, quadrature or both");

    std::optional<pb::KernelCurve> analytic, quad;
    if (method != "quadrature")
        analytic = pb::kernel_analytic(dos, spec, taus);
    if (method != "analytic")
        quad = pb::kernel_quadrature(dos, spec, taus);

    std::vector<std::string> header{"tau_ps"};
    if (analytic)
        header.push_back("k_analytic");
    if (quad)
        header.push_back("k_quadrature");
    if (analytic && quad)
        header.push_back("rel_err");
    // rel_err is relative to the largest |K| on the grid; pointwise ratios
    // blow up at the kernel's zero crossings.
    double scale = 0.0;
    if (analytic && quad)
        for (std::size_t i = 0; i < taus.size(); ++i)
            scale = std::max({scale, std::abs(analytic->values[i]), std::abs(quad->values[i])});
    CsvWriter csv(header);
    for (std::size_t i = 0; i < taus.size(); ++i) {
        std::vector<double> row{taus[i]};
        if (analytic)
            row.push_back(analytic->values[i]);
        if (quad)
            row.push_back(quad->values[i]);
        if (analytic && quad) {
            const double x = analytic->values[i];
            const double y = quad->values[i];
            row.push_back(x == y ? 0.0 : std::abs(x - y) / scale);
        }
        csv.row(row);
    }
    emit(a.out, csv.out.str());
    if (quad)
        for (const auto& w : quad->warnings)
            std::cerr << "warning: " << w << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------- translate / classify

void check_inside_support(const pb::DosModel& dos, double lo, double hi) {
    const auto [slo, shi] = pb::dos_support(dos);
    const bool bounded = !pb::has_unbounded_support(dos);
    if (lo < slo.rad_per_ps() || (bounded && hi > shi.rad_per_ps()))
        throw pb::InputError("window [" + pb::format_number(lo / pb::two_pi) + ", " + pb::format_number(hi / pb::two_pi) +
                             "] THz lies outside the model support [" + pb::format_number(slo.thz()) + ", " +
                             pb::format_number(shi.thz()) + "] THz");
}

struct TranslateArgs {
    std::string model;
    std::string grid = "0.05:8:160";
    std::string out;
};

int run_translate(const TranslateArgs& a) {
    const auto doc = pb::load_document(a.model);
    const auto dos = pb::to_model(doc);
    const auto spec = pb::to_coupling(doc.coupling);
    const auto g = parse_colon_list(a.grid, 3);
    const double lo = g[0], hi = g[1];
    const int n = static_cast<int>(g[2]);
    if (!(lo > 0.0) || !(hi > lo) || n < 2 || g[2] != n)
        throw pb::InputError("--grid needs 0 < lo < hi and an integer n >= 2 (J = C^2/omega is undefined at 0)");
    check_inside_support(dos, pb::two_pi * lo, pb::two_pi * hi);

    const auto coupling = pb::coupling_from_dos(dos, spec);
    const pb::SpectralDensity j(coupling);
    CsvWriter csv({"nu_thz", "dos", "coupling_c", "spectral_j"});
    for (int i = 0; i < n; ++i) {
        const double nu = (i == n - 1) ? hi : lo + (hi - lo) * i / (n - 1);
        const auto w = pb::Frequency::from_thz(nu);
        csv.row({nu, pb::eval_dos(dos, w), coupling(w), j(w)});
    }
    emit(a.out, csv.out.str());
    return exit_ok;
}

struct ClassifyArgs {
    std::string model;
    std::string window;
    int n = 64;
};

int run_classify(const ClassifyArgs& a) {
    const auto doc = pb::load_document(a.model);
    const auto dos = pb::to_model(doc);
    const auto spec = pb::to_coupling(doc.coupling);
    pb::Frequency lo, hi;
    if (a.window.empty()) {
        std::tie(lo, hi) = pb::default_ohmicity_window(dos);
    } else {
        const auto w = parse_colon_list(a.window, 2);
        lo = pb::Frequency::from_thz(w[0]);
        hi = pb::Frequency::from_thz(w[1]);
    }
    check_inside_support(dos, lo.rad_per_ps(), hi.rad_per_ps());
    const auto r = pb::classify_ohmicity(pb::SpectralDensity(pb::coupling_from_dos(dos, spec)), lo, hi, a.n);
    const nlohmann::json j = {{"s", r.s},
                              {"class", std::string(pb::to_string(r.kind))},
                              {"window_thz", {r.window_lo.thz(), r.window_hi.thz()}},
                              {"r_squared", r.r_squared}};
    std::cout << j.dump(2) << '\n';
    return exit_ok;
}

// ---------------------------------------------------------------- debye

struct DebyeArgs {
    double c = 0.0;
    std::optional<double> cutoff_thz;
    std::optional<double> debye_temp;
    int dim = 3;
    double g = 1.0;
    std::optional<int> ds;
    std::string out;
};

int run_debye(const DebyeArgs& a) {
    if (a.dim < 1 || a.dim > 3)
        throw pb::InputError("--dim must be 1, 2 or 3");
    if (a.cutoff_thz.has_value() == a.debye_temp.has_value())
        throw pb::InputError("give exactly one of --cutoff-thz and --debye-temp");
    const double cutoff = a.cutoff_thz ? *a.cutoff_thz : pb::debye_from_temperature(*a.debye_temp).thz();

    pb::ModelDocument doc;
    doc.kind = pb::ModelKind::debye;
    doc.debye = pb::DebyeDocument{a.c, cutoff, a.dim};
    doc.coupling.g.g = a.g;
    doc.coupling.bath_dim = a.dim;
    doc.coupling.system_dim = a.ds.value_or(a.dim);
    doc.provenance = a.debye_temp ? "Debye model, cutoff from T_D = " + pb::format_number(*a.debye_temp) + " K"
                                  : std::string("Debye model");
    pb::to_model(doc);  // validate
    pb::to_coupling(doc.coupling);
    emit(a.out, pb::print_document(doc));
    return exit_ok;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"phonobath: bath DOS, coupling functions and memory kernels"};
    app.require_subcommand(1);

    IngestArgs ingest;
    auto* c_ingest = app.add_subcommand("ingest", "Convert delimited DOS data into a tabulated model document");
    c_ingest->add_option("path", ingest.path, "Input text file")->required();
    c_ingest->add_option("--freq-unit", ingest.unit, "THz or meV")->capture_default_str();
    c_ingest->add_option("--freq-col", ingest.freq_col, "Frequency column (0-based)")->capture_default_str();
    c_ingest->add_option("--dos-col", ingest.dos_col, "DOS column (0-based)")->capture_default_str();
    c_ingest->add_option("--delimiter", ingest.delimiter, "Field delimiter (default: auto; 'tab', 'space')");
    c_ingest->add_option("--out", ingest.out, "Output JSON (default stdout)");

    FitArgs fit;
    auto* c_fit = app.add_subcommand("fit", "Fit a multi-peak Lorentzian DOS");
    c_fit->add_option("data", fit.data, "Tabulated document (.json) or CSV in THz")->required();
    c_fit->add_option("--peaks", fit.peaks, "Number of peaks")->capture_default_str();
    c_fit->add_flag("--allow-negative", fit.allow_negative, "Allow negative peak amplitudes");
    c_fit->add_option("--seed", fit.seed, "Restart seed")->capture_default_str();
    c_fit->add_option("--restarts", fit.restarts, "Number of restarts")->capture_default_str();
    c_fit->add_option("--max-iter", fit.max_iter, "Iterations per restart")->capture_default_str();
    c_fit->add_option("--out", fit.out, "Report JSON (default stdout)");
    c_fit->add_option("--curve", fit.curve, "Data vs fit CSV");
    fit.coupling.add_to(c_fit);

    KernelArgs kernel;
    auto* c_kernel = app.add_subcommand("kernel", "Evaluate the memory kernel K(tau)");
    c_kernel->add_option("model", kernel.model, "Model document")->required();
    c_kernel->add_option("--tau-max", kernel.tau_max, "Largest tau in ps")->capture_default_str();
    c_kernel->add_option("--n", kernel.n, "Number of tau points")->capture_default_str();
    c_kernel->add_option("--method", kernel.method, "analytic, quadrature, both or auto")->capture_default_str();
    c_kernel->add_option("--out", kernel.out, "Output CSV (default stdout)");

    TranslateArgs translate;
    auto* c_translate = app.add_subcommand("translate", "Tabulate DOS, coupling function C and spectral density J");
    c_translate->add_option("model", translate.model, "Model document")->required();
    c_translate->add_option("--grid", translate.grid, "lo:hi:n in THz")->capture_default_str();
    c_translate->add_option("--out", translate.out, "Output CSV (default stdout)");

    ClassifyArgs classify;
    auto* c_classify = app.add_subcommand("classify", "Low-frequency exponent of J and Ohmic class");
    c_classify->add_option("model", classify.model, "Model document")->required();
    c_classify->add_option("--window", classify.window, "lo:hi in THz (default: model dependent)");
    c_classify->add_option("--n", classify.n, "Samples in the window")->capture_default_str();

    DebyeArgs debye;
    auto* c_debye = app.add_subcommand("debye", "Write a Debye model document");
    c_debye->add_option("--c", debye.c, "Sound speed in km/s")->required();
    c_debye->add_option("--cutoff-thz", debye.cutoff_thz, "Debye frequency nu_D in THz");
    c_debye->add_option("--debye-temp", debye.debye_temp, "Debye temperature in K");
    c_debye->add_option("--dim", debye.dim, "Bath dimension 1, 2 or 3")->capture_default_str();
    c_debye->add_option("--g", debye.g, "Constant coupling g")->capture_default_str();
    c_debye->add_option("--ds", debye.ds, "System dimension (default: --dim)");
    c_debye->add_option("--out", debye.out, "Output JSON (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return exit_input;
    }

    try {
        if (*c_ingest)
            return run_ingest(ingest);
        if (*c_fit)
            return run_fit(fit);
        if (*c_kernel)
            return run_kernel(kernel);
        if (*c_translate)
            return run_translate(translate);
        if (*c_classify)
            return run_classify(classify);
        if (*c_debye)
            return run_debye(debye);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return exit_input;
    }
    return exit_input;
}
