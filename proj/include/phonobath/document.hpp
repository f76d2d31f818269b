#pragma once

// Model documents (JSON) and delimited-text ingestion.
//
// Documents store parameters in file units: ordinary frequency nu = w/2pi in
// THz, sound speed in km/s, peak amplitudes as ratios A_j/A_1 plus the
// absolute weight W_1 of the first peak.

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phonobath/coupling.hpp"
#include "phonobath/dos.hpp"
#include "phonobath/fit.hpp"

namespace phonobath {

inline constexpr std::string_view schema_version = "1";

enum class ModelKind { debye, lorentzian_sum, tabulated };

struct GDocument {
    std::string kind = "constant";  // constant | power_law
    double g = 1.0;                 // constant g, or g0 for a power law
    double p = 0.0;
    double nu_ref_thz = 1.0;
    bool operator==(const GDocument&) const = default;
};

struct CouplingDocument {
    GDocument g;
    int system_dim = 3;
    int bath_dim = 3;
    std::optional<std::vector<std::vector<double>>> polarization;
    bool operator==(const CouplingDocument&) const = default;
};

struct DebyeDocument {
    double sound_speed_km_s = 0.0;
    double cutoff_thz = 0.0;
    int dimension = 3;
    bool operator==(const DebyeDocument&) const = default;
};

struct PeakDocument {
    double nu0_thz = 0.0;
    double gamma_thz = 0.0;
    double ratio = 1.0;
    bool operator==(const PeakDocument&) const = default;
};

struct LorentzianDocument {
    double first_weight = 1.0;
    std::vector<PeakDocument> peaks;
    bool operator==(const LorentzianDocument&) const = default;
};

struct TabulatedDocument {
    std::string unit_note;
    std::vector<double> nu_thz;
    std::vector<double> dos;
    bool operator==(const TabulatedDocument&) const = default;
};

struct FitSummary {
    double cost = 0.0;
    double rms_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool positivity_ok = false;
    int n_peaks = 0;
    bool allow_negative = false;
    std::uint64_t seed = 0;
    bool operator==(const FitSummary&) const = default;
};

struct ModelDocument {
    std::string schema = std::string(schema_version);
    ModelKind kind = ModelKind::lorentzian_sum;
    std::string provenance;
    CouplingDocument coupling;
    std::optional<DebyeDocument> debye;
    std::optional<LorentzianDocument> lorentzian;
    std::optional<TabulatedDocument> tabulated;
    std::optional<FitSummary> fit;
    bool operator==(const ModelDocument&) const = default;
};

std::string_view to_string(ModelKind kind);

// JSON text; throws InputError on malformed input or schema mismatch.
std::string print_document(const ModelDocument& doc);
ModelDocument parse_document(std::string_view text);

ModelDocument load_document(const std::filesystem::path& path);
void save_document(const ModelDocument& doc, const std::filesystem::path& path);

// File units <-> in-memory models.
DosModel to_model(const ModelDocument& doc);
CouplingSpec to_coupling(const CouplingDocument& doc);
ModelDocument make_document(const DosModel& model, const CouplingDocument& coupling, std::string provenance = {});
CouplingDocument make_coupling_document(const CouplingSpec& spec);

enum class FrequencyUnit { thz, mev };

struct IngestOptions {
    FrequencyUnit unit = FrequencyUnit::thz;
    int freq_col = 0;
    int dos_col = 1;
    char delimiter = 0;  // 0: auto (comma, semicolon, tab, then whitespace)
};

// Parses delimited text into a table: skips blank/'#' lines and a single
// non-numeric header row, converts meV with E = h nu, sorts by frequency,
// averages duplicates and clamps noise-level negative DOS. Errors name the
// offending line.
TabulatedDos ingest_table(std::string_view text, const IngestOptions& opts, std::string unit_note = {});

// Locale-independent shortest round-trip formatting.
std::string format_number(double v);

} // namespace phonobath
