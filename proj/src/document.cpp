#include "phonobath/document.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include <json.hpp>

#include "phonobath/errors.hpp"

namespace phonobath {

using nlohmann::json;

std::string_view to_string(ModelKind kind) {
    switch (kind) {
        case ModelKind::debye: return "debye";
        case ModelKind::lorentzian_sum: return "lorentzian_sum";
        default: return "tabulated";
    }
}

namespace {

ModelKind kind_from_string(const std::string& s) {
    if (s == "debye")
        return ModelKind::debye;
    if (s == "lorentzian_sum")
        return ModelKind::lorentzian_sum;
    if (s == "tabulated")
        return ModelKind::tabulated;
    throw InputError("unknown model kind '" + s + "'");
}

json coupling_to_json(const CouplingDocument& c) {
    json g = {{"kind", c.g.kind}};
    if (c.g.kind == "constant") {
        g["value"] = c.g.g;
    } else {
        g["g0"] = c.g.g;
        g["p"] = c.g.p;
        g["nu_ref_thz"] = c.g.nu_ref_thz;
    }
    json j = {{"g", g}, {"system_dim", c.system_dim}, {"bath_dim", c.bath_dim}};
    if (c.polarization)
        j["polarization"] = *c.polarization;
    return j;
}

CouplingDocument coupling_from_json(const json& j) {
    CouplingDocument c;
    const auto& g = j.at("g");
    c.g.kind = g.at("kind").get<std::string>();
    if (c.g.kind == "constant") {
        c.g.g = g.at("value").get<double>();
    } else if (c.g.kind == "power_law") {
        c.g.g = g.at("g0").get<double>();
        c.g.p = g.at("p").get<double>();
        c.g.nu_ref_thz = g.at("nu_ref_thz").get<double>();
    } else {
        throw InputError("unknown g model '" + c.g.kind + "'");
    }
    c.system_dim = j.at("system_dim").get<int>();
    c.bath_dim = j.at("bath_dim").get<int>();
    if (j.contains("polarization"))
        c.polarization = j.at("polarization").get<std::vector<std::vector<double>>>();
    return c;
}

json to_json(const ModelDocument& doc) {
    json j;
    j["schema_version"] = doc.schema;
    j["kind"] = std::string(to_string(doc.kind));
    j["provenance"] = doc.provenance;
    j["coupling"] = coupling_to_json(doc.coupling);
    if (doc.debye) {
        j["debye"] = {{"sound_speed_km_s", doc.debye->sound_speed_km_s},
                      {"cutoff_thz", doc.debye->cutoff_thz},
                      {"dimension", doc.debye->dimension}};
    }
    if (doc.lorentzian) {
        json peaks = json::array();
        for (const auto& p : doc.lorentzian->peaks)
            peaks.push_back({{"nu0_thz", p.nu0_thz}, {"gamma_thz", p.gamma_thz}, {"ratio", p.ratio}});
        j["lorentzian"] = {{"first_weight", doc.lorentzian->first_weight}, {"peaks", peaks}};
    }
    if (doc.tabulated) {
        j["tabulated"] = {{"unit_note", doc.tabulated->unit_note},
                          {"nu_thz", doc.tabulated->nu_thz},
                          {"dos", doc.tabulated->dos}};
    }
    if (doc.fit) {
        const auto& f = *doc.fit;
        j["fit"] = {{"cost", f.cost},
                    {"rms_residual", f.rms_residual},
                    {"iterations", f.iterations},
                    {"converged", f.converged},
                    {"positivity_ok", f.positivity_ok},
                    {"n_peaks", f.n_peaks},
                    {"allow_negative", f.allow_negative},
                    {"seed", f.seed}};
    }
    return j;
}

ModelDocument from_json(const json& j) {
    ModelDocument doc;
    doc.schema = j.at("schema_version").get<std::string>();
    if (doc.schema != schema_version)
        throw InputError("unsupported schema_version '" + doc.schema + "'");
    doc.kind = kind_from_string(j.at("kind").get<std::string>());
    doc.provenance = j.value("provenance", std::string{});
    doc.coupling = coupling_from_json(j.at("coupling"));
    if (j.contains("debye")) {
        const auto& d = j.at("debye");
        doc.debye = DebyeDocument{d.at("sound_speed_km_s").get<double>(), d.at("cutoff_thz").get<double>(),
                                  d.at("dimension").get<int>()};
    }
    if (j.contains("lorentzian")) {
        LorentzianDocument l;
        l.first_weight = j.at("lorentzian").at("first_weight").get<double>();
        for (const auto& p : j.at("lorentzian").at("peaks"))
            l.peaks.push_back({p.at("nu0_thz").get<double>(), p.at("gamma_thz").get<double>(), p.at("ratio").get<double>()});
        doc.lorentzian = std::move(l);
    }
    if (j.contains("tabulated")) {
        const auto& t = j.at("tabulated");
        doc.tabulated = TabulatedDocument{t.value("unit_note", std::string{}), t.at("nu_thz").get<std::vector<double>>(),
                                          t.at("dos").get<std::vector<double>>()};
    }
    if (j.contains("fit")) {
        const auto& f = j.at("fit");
        doc.fit = FitSummary{f.at("cost").get<double>(),       f.at("rms_residual").get<double>(),
                             f.at("iterations").get<int>(),    f.at("converged").get<bool>(),
                             f.at("positivity_ok").get<bool>(), f.at("n_peaks").get<int>(),
                             f.at("allow_negative").get<bool>(), f.at("seed").get<std::uint64_t>()};
    }
    const bool ok = (doc.kind == ModelKind::debye && doc.debye) ||
                    (doc.kind == ModelKind::lorentzian_sum && doc.lorentzian) ||
                    (doc.kind == ModelKind::tabulated && doc.tabulated);
    if (!ok)
        throw InputError("model document lacks the '" + std::string(to_string(doc.kind)) + "' section");
    return doc;
}

} // namespace

std::string print_document(const ModelDocument& doc) { return to_json(doc).dump(2) + "\n"; }

ModelDocument parse_document(std::string_view text) {
    try {
        return from_json(json::parse(text));
    } catch (const json::exception& e) {
        throw InputError(std::string("malformed model document: ") + e.what());
    }
}

ModelDocument load_document(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw InputError("cannot open " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_document(ss.str());
}

void save_document(const ModelDocument& doc, const std::filesystem::path& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out)
        throw InputError("cannot write " + path.string());
    out << print_document(doc);
}

CouplingSpec to_coupling(const CouplingDocument& doc) {
    GModel g;
    if (doc.g.kind == "constant")
        g = ConstantG{doc.g.g};
    else
        g = PowerLawG{doc.g.g, doc.g.p, Frequency::from_thz(doc.g.nu_ref_thz)};
    std::optional<Eigen::MatrixXd> m;
    if (doc.polarization) {
        const auto& rows = *doc.polarization;
        const auto n = static_cast<Eigen::Index>(rows.size());
        Eigen::MatrixXd mat(n, n);
        for (Eigen::Index i = 0; i < n; ++i) {
            if (static_cast<Eigen::Index>(rows[i].size()) != n)
                throw InputError("polarization matrix must be square");
            for (Eigen::Index k = 0; k < n; ++k)
                mat(i, k) = rows[i][k];
        }
        m = mat;
    }
    return CouplingSpec(g, doc.system_dim, doc.bath_dim, m);
}

DosModel to_model(const ModelDocument& doc) {
    switch (doc.kind) {
        case ModelKind::debye:
            return DebyeParams(doc.debye->sound_speed_km_s, Frequency::from_thz(doc.debye->cutoff_thz),
                               doc.debye->dimension);
        case ModelKind::lorentzian_sum: {
            std::vector<LorentzianPeak> peaks;
            for (const auto& p : doc.lorentzian->peaks)
                peaks.push_back({Frequency::from_thz(p.nu0_thz), Frequency::from_thz(p.gamma_thz),
                                 doc.lorentzian->first_weight * p.ratio});
            return LorentzianSumModel(std::move(peaks));
        }
        default: {
            const auto& t = *doc.tabulated;
            std::vector<Frequency> grid;
            grid.reserve(t.nu_thz.size());
            for (const double nu : t.nu_thz)
                grid.push_back(Frequency::from_thz(nu));
            return TabulatedDos(std::move(grid), t.dos, t.unit_note);
        }
    }
}

CouplingDocument make_coupling_document(const CouplingSpec& spec) {
    CouplingDocument c;
    if (const auto* k = std::get_if<ConstantG>(&spec.g_model())) {
        c.g.kind = "constant";
        c.g.g = k->g;
    } else {
        const auto& pl = std::get<PowerLawG>(spec.g_model());
        c.g.kind = "power_law";
        c.g.g = pl.g0;
        c.g.p = pl.p;
        c.g.nu_ref_thz = pl.omega_ref.thz();
    }
    c.system_dim = spec.system_dim();
    c.bath_dim = spec.bath_dim();
    if (spec.has_explicit_polarization()) {
        const auto& m = spec.polarization();
        std::vector<std::vector<double>> rows(static_cast<std::size_t>(m.rows()));
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index k = 0; k < m.cols(); ++k)
                rows[static_cast<std::size_t>(i)].push_back(m(i, k));
        c.polarization = rows;
    }
    return c;
}

ModelDocument make_document(const DosModel& model, const CouplingDocument& coupling, std::string provenance) {
    ModelDocument doc;
    doc.coupling = coupling;
    doc.provenance = std::move(provenance);
    if (const auto* deb = std::get_if<DebyeParams>(&model)) {
        doc.kind = ModelKind::debye;
        doc.debye = DebyeDocument{deb->sound_speed(), deb->cutoff().thz(), deb->dimension()};
    } else if (const auto* lor = std::get_if<LorentzianSumModel>(&model)) {
        doc.kind = ModelKind::lorentzian_sum;
        LorentzianDocument l;
        l.first_weight = lor->peaks().front().weight;
        const auto ratios = lor->ratios();
        for (std::size_t j = 0; j < lor->size(); ++j) {
            const auto& p = lor->peaks()[j];
            l.peaks.push_back({p.omega0.thz(), p.gamma.thz(), ratios[j]});
        }
        doc.lorentzian = std::move(l);
    } else {
        const auto& tab = std::get<TabulatedDos>(model);
        doc.kind = ModelKind::tabulated;
        TabulatedDocument t;
        t.unit_note = tab.unit_note();
        for (const auto w : tab.grid())
            t.nu_thz.push_back(w.thz());
        t.dos.assign(tab.values().begin(), tab.values().end());
        doc.tabulated = std::move(t);
    }
    return doc;
}

std::string format_number(double v) {
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

namespace {

std::string_view trim(std::string_view s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string_view::npos)
        return {};
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::vector<std::string_view> split_fields(std::string_view line, char delim) {
    std::vector<std::string_view> out;
    if (delim == ' ') {
        std::size_t i = 0;
        while (i < line.size()) {
            while (i < line.size() && (line[i] == ' ' || line[i] == '\t'))
                ++i;
            if (i >= line.size())
                break;
            const auto j = line.find_first_of(" \t", i);
            out.push_back(line.substr(i, j == std::string_view::npos ? std::string_view::npos : j - i));
            i = j == std::string_view::npos ? line.size() : j;
        }
        return out;
    }
    std::size_t start = 0;
    while (true) {
        const auto j = line.find(delim, start);
        out.push_back(trim(line.substr(start, j == std::string_view::npos ? std::string_view::npos : j - start)));
        if (j == std::string_view::npos)
            break;
        start = j + 1;
    }
    return out;
}

bool parse_double(std::string_view s, double& out) {
    s = trim(s);
    if (!s.empty() && s.front() == '+')
        s.remove_prefix(1);
    if (s.empty())
        return false;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), out);
    return res.ec == std::errc{} && res.ptr == s.data() + s.size();
}

char detect_delimiter(std::string_view line) {
    for (const char c : {',', ';', '\t'})
        if (line.find(c) != std::string_view::npos)
            return c;
    return ' ';
}

} // namespace

TabulatedDos ingest_table(std::string_view text, const IngestOptions& opts, std::string unit_note) {
    if (opts.freq_col < 0 || opts.dos_col < 0 || opts.freq_col == opts.dos_col)
        throw InputError("frequency and DOS columns must be distinct and nonnegative");
    const auto needed = static_cast<std::size_t>(std::max(opts.freq_col, opts.dos_col)) + 1;

    std::map<double, std::pair<double, int>> rows;  // nu_thz -> (sum, count)
    char delim = opts.delimiter;
    bool seen_data_or_header = false;
    std::size_t line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const auto nl = text.find('\n', pos);
        const auto raw = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
        pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
        ++line_no;
        const auto line = trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        if (delim == 0)
            delim = detect_delimiter(line);
        const auto fields = split_fields(line, delim);
        double nu = 0.0, dos = 0.0;
        const bool numeric = fields.size() >= needed && parse_double(fields[opts.freq_col], nu) &&
                             parse_double(fields[opts.dos_col], dos);
        if (!numeric) {
            if (!seen_data_or_header) {
                seen_data_or_header = true;  // single header row
                continue;
            }
            throw InputError("line " + std::to_string(line_no) + ": cannot parse numeric columns");
        }
        seen_data_or_header = true;
        if (!std::isfinite(nu) || !std::isfinite(dos))
            throw InputError("line " + std::to_string(line_no) + ": non-finite value");
        if (opts.unit == FrequencyUnit::mev)
            nu *= codata::thz_per_mev;
        if (nu < 0.0)
            throw InputError("line " + std::to_string(line_no) + ": negative frequency");
        auto& acc = rows[nu];
        acc.first += dos;
        acc.second += 1;
    }
    std::vector<Frequency> grid;
    std::vector<double> values;
    for (const auto& [nu, acc] : rows) {
        grid.push_back(Frequency::from_thz(nu));
        values.push_back(acc.first / acc.second);
    }
    if (grid.size() < 2)
        throw InputError("need at least two distinct frequency rows");
    clean_dos_values(values);
    return TabulatedDos(std::move(grid), std::move(values), std::move(unit_note));
}

} // namespace phonobath
