#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "phonobath/document.hpp"
#include "phonobath/errors.hpp"
#include "support.hpp"

using namespace phonobath;
using fixtures::rel_err;

namespace {

const std::filesystem::path data_dir = PHONOBATH_DATA_DIR;

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("bundled documents round trip") {
    for (const char* name : {"gold_2peak", "iron_1peak", "iron_3peak", "iron_5peak", "yig_1peak", "yig_18peak",
                             "gold_debye"}) {
        CAPTURE(name);
        const auto text = slurp(data_dir / (std::string(name) + ".json"));
        const auto doc = parse_document(text);
        CHECK(parse_document(print_document(doc)) == doc);
        // the bundled files are in canonical form
        CHECK(print_document(doc) == text);
        CHECK_NOTHROW(to_model(doc));
        CHECK_NOTHROW(to_coupling(doc.coupling));
    }
}

TEST_CASE("bundled documents carry the reference tables") {
    const auto check = [](const char* name, const std::vector<fixtures::PeakRow>& rows) {
        CAPTURE(name);
        const auto doc = load_document(data_dir / (std::string(name) + ".json"));
        REQUIRE(doc.lorentzian);
        REQUIRE(doc.lorentzian->peaks.size() == rows.size());
        for (std::size_t j = 0; j < rows.size(); ++j) {
            CHECK(doc.lorentzian->peaks[j].nu0_thz == rows[j].nu0_thz);
            CHECK(doc.lorentzian->peaks[j].gamma_thz == rows[j].gamma_thz);
            CHECK(doc.lorentzian->peaks[j].ratio == rows[j].ratio);
        }
        const auto model = std::get<LorentzianSumModel>(to_model(doc));
        for (double nu : {0.5, 3.0, 7.5, 15.0})
            CHECK(rel_err(eval_lorentzian_dos(model, Frequency::from_thz(nu)),
                          fixtures::lorentzian_reference(rows, nu, doc.lorentzian->first_weight)) < 1e-13);
    };
    check("gold_2peak", fixtures::gold_rows);
    check("iron_1peak", fixtures::iron1_rows);
    check("iron_3peak", fixtures::iron3_rows);
    check("iron_5peak", fixtures::iron5_rows);
    check("yig_1peak", fixtures::yig1_rows);
    check("yig_18peak", fixtures::yig18_rows);

    const auto deb = load_document(data_dir / "gold_debye.json");
    REQUIRE(deb.debye);
    CHECK(deb.debye->cutoff_thz == 3.54);
}

TEST_CASE("model <-> document") {
    const CouplingDocument coupling{{"power_law", 1.5, 0.5, 2.0}, 2, 3, std::vector<std::vector<double>>{{0.7, 0.1}, {0.1, 0.3}}};
    const auto spec = to_coupling(coupling);
    CHECK(spec.system_dim() == 2);
    CHECK(rel_err(spec.g(Frequency::from_thz(8.0)), 1.5 * 2.0) < 1e-14);
    CHECK(make_coupling_document(spec) == coupling);

    const auto doc = make_document(fixtures::model_from_rows(fixtures::iron3_rows, 2.5), coupling, "test");
    REQUIRE(doc.lorentzian);
    CHECK(doc.lorentzian->first_weight == 2.5);
    CHECK(doc.lorentzian->peaks[1].ratio == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(parse_document(print_document(doc)) == doc);

    const auto tab = fixtures::sample(fixtures::gold(), 0.1, 5.0, 20);
    const auto tdoc = make_document(tab, make_coupling_document(CouplingSpec::isotropic(1.0)));
    CHECK(tdoc.kind == ModelKind::tabulated);
    CHECK(parse_document(print_document(tdoc)) == tdoc);
    const auto back = std::get<TabulatedDos>(to_model(tdoc));
    for (std::size_t i = 0; i < tab.size(); ++i) {
        CHECK(rel_err(back.grid()[i].rad_per_ps(), tab.grid()[i].rad_per_ps()) < 1e-15);
        CHECK(back.values()[i] == tab.values()[i]);
    }
}

TEST_CASE("malformed documents") {
    CHECK_THROWS_AS(parse_document("{"), InputError);
    CHECK_THROWS_AS(parse_document(R"({"schema_version": "2", "kind": "debye"})"), InputError);
    CHECK_THROWS_AS(parse_document(R"({"schema_version": "1", "kind": "spline", "coupling": {}})"), InputError);
    const auto gold = slurp(data_dir / "gold_2peak.json");
    auto j = gold;
    j.replace(j.find("lorentzian_sum"), 14, "debye");
    CHECK_THROWS_AS(parse_document(j), InputError);
    CHECK_THROWS_AS(load_document(data_dir / "missing.json"), InputError);
}

TEST_CASE("table ingestion") {
    SUBCASE("plain two-column CSV") {
        const auto t = ingest_table("1.0,0.5\n2.0,0.7", {});
        REQUIRE(t.size() == 2);
        CHECK(t.grid()[0].thz() == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(t.values()[1] == 0.7);
    }
    SUBCASE("meV conversion") {
        IngestOptions o;
        o.unit = FrequencyUnit::mev;
        const auto t = ingest_table("1.0,0.5\n2.0,0.7\n", o);
        CHECK(rel_err(t.grid()[0].thz(), 0.2417990) < 1e-6);
        CHECK(rel_err(t.grid()[1].thz(), 2.0 * 0.24179892420849178) < 1e-12);
    }
    SUBCASE("header, comments, blank lines") {
        const auto t = ingest_table("# measured\n\nfreq,dos\n1.0,0.5\n\n2.0,0.7\n", {});
        CHECK(t.size() == 2);
    }
    SUBCASE("sorting and duplicates") {
        const auto t = ingest_table("3 1.0\n1 0.2\n3 3.0\n2 0.4\n", {});
        REQUIRE(t.size() == 3);
        CHECK(t.grid()[2].thz() == doctest::Approx(3.0));
        CHECK(t.values()[2] == doctest::Approx(2.0));
    }
    SUBCASE("columns and delimiters") {
        IngestOptions o;
        o.freq_col = 1;
        o.dos_col = 2;
        o.delimiter = ';';
        const auto t = ingest_table("a;1.0;5\nb;2.0;6\n", o);
        CHECK(t.values()[0] == 5.0);
        const auto tab = ingest_table("1.0\t5\n2.0\t6\n", {});
        CHECK(tab.values()[1] == 6.0);
    }
    SUBCASE("noise clamping") {
        const auto t = ingest_table("1,1.0\n2,-0.0005\n3,0.5\n", {});
        CHECK(t.values()[1] == 0.0);
        CHECK_THROWS_AS(ingest_table("1,1.0\n2,-0.5\n3,0.5\n", {}), InputError);
    }
    SUBCASE("errors name the line") {
        try {
            ingest_table("freq,dos\n1,2\n2,x\n", {});
            FAIL("expected an error");
        } catch (const InputError& e) {
            CHECK(std::string(e.what()).find("line 3") != std::string::npos);
        }
        CHECK_THROWS_AS(ingest_table("1,2\n", {}), InputError);
        CHECK_THROWS_AS(ingest_table("1,2\n2,nan\n", {}), InputError);
        IngestOptions same;
        same.dos_col = 0;
        CHECK_THROWS_AS(ingest_table("1,2\n2,3\n", same), InputError);
    }
    SUBCASE("bundled synthetic gold table") {
        IngestOptions o;
        o.unit = FrequencyUnit::mev;
        const auto t = ingest_table(slurp(data_dir / "gold_dos_synthetic.csv"), o, "arb. per meV");
        CHECK(t.size() == 240);
        CHECK(t.unit_note() == "arb. per meV");
        for (std::size_t i = 0; i < t.size(); i += 37)
            CHECK(rel_err(t.values()[i], eval_lorentzian_dos(fixtures::gold(), t.grid()[i])) < 1e-8);
    }
}

TEST_CASE("number formatting is shortest round trip") {
    CHECK(format_number(0.1) == "0.1");
    CHECK(format_number(3.54) == "3.54");
    CHECK(format_number(1e-300) == "1e-300");
    for (double v : {1.0 / 3.0, 2.0 / 7.0, 12345.678901234567})
        CHECK(std::stod(format_number(v)) == v);
}
