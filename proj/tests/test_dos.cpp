#include <doctest.h>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <cmath>
#include <numbers>
#include <random>

#include "phonobath/dos.hpp"
#include "phonobath/errors.hpp"
#include "support.hpp"

using namespace phonobath;
using fixtures::rel_err;

TEST_CASE("frequency units") {
    const auto f = Frequency::from_thz(1.0 / two_pi);
    CHECK(f.rad_per_ps() == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(Frequency::from_thz(2.5).thz() == doctest::Approx(2.5).epsilon(1e-15));
    CHECK(Frequency::from_mev(1.0).thz() == doctest::Approx(0.24179892420849178).epsilon(1e-12));
}

TEST_CASE("debye frequency from temperature") {
    // k_B * 420 K / h, in THz
    CHECK(rel_err(debye_from_temperature(420.0).thz(), 8.75138003715972) < 1e-12);
    CHECK(debye_from_temperature(840.0).rad_per_ps() ==
          doctest::Approx(2.0 * debye_from_temperature(420.0).rad_per_ps()).epsilon(1e-15));
    CHECK(debye_from_temperature(1e-9).rad_per_ps() < 1e-9);
    CHECK_THROWS_AS(debye_from_temperature(0.0), InputError);
    CHECK_THROWS_AS(debye_from_temperature(-5.0), InputError);
}

TEST_CASE("debye dos") {
    SUBCASE("validation") {
        CHECK_THROWS_AS(DebyeParams(0.0, Frequency(1.0), 3), InputError);
        CHECK_THROWS_AS(DebyeParams(1.0, Frequency(0.0), 3), InputError);
        CHECK_THROWS_AS(DebyeParams(1.0, Frequency(1.0), 4), InputError);
        CHECK_THROWS_AS(DebyeParams(1.0, Frequency(1.0), 0), InputError);
    }
    SUBCASE("omega^2 scaling and cutoff in 3D") {
        const DebyeParams p(1.466, Frequency::from_thz(3.54), 3);
        const double wd = p.cutoff().rad_per_ps();
        const double just_below = std::nextafter(wd, 0.0);
        CHECK(eval_debye_dos(p, Frequency(wd / 2)) / eval_debye_dos(p, Frequency(just_below)) ==
              doctest::Approx(0.25).epsilon(1e-12));
        CHECK(eval_debye_dos(p, Frequency(1.01 * wd)) == 0.0);
    }
    SUBCASE("1D is flat") {
        const DebyeParams p(2.0, Frequency::from_thz(3.0), 1);
        const double expected = 2.0 / (two_pi * 2.0);
        for (double w : {0.1, 1.0, 5.0, 18.0})
            CHECK(rel_err(eval_debye_dos(p, Frequency(w)), expected) < 1e-15);
    }
    SUBCASE("3D against the explicit form 3 w^2 / (2 pi^2 c^3)") {
        std::mt19937_64 rng(7);
        for (int i = 0; i < 100; ++i) {
            const double c = fixtures::uniform(rng, 0.5, 10.0);
            const double wd = fixtures::uniform(rng, 1.0, 100.0);
            const double w = fixtures::uniform(rng, 0.0, wd);
            const DebyeParams p(c, Frequency(wd), 3);
            const double pi = std::numbers::pi;
            const double explicit_form = 3.0 * w * w / (2.0 * pi * pi * c * c * c);
            CHECK(rel_err(eval_debye_dos(p, Frequency(w)), explicit_form) <= 1e-12);
        }
    }
    SUBCASE("2D: two branches over the solid angle 2 pi") {
        const DebyeParams p(3.0, Frequency(10.0), 2);
        CHECK(rel_err(eval_debye_dos(p, Frequency(4.0)), 2.0 * two_pi * 4.0 / std::pow(two_pi * 3.0, 2)) < 1e-15);
    }
}

TEST_CASE("lorentzian dos") {
    const auto gold = fixtures::gold();
    CHECK(eval_lorentzian_dos(gold, Frequency(0.0)) == 0.0);

    const LorentzianSumModel single({{Frequency(5.0), Frequency(0.7), 2.0}});
    CHECK(rel_err(eval_lorentzian_dos(single, Frequency(5.0)), 2.0 / 0.7) < 1e-15);

    // term-by-term oracle and its frozen value
    CHECK(rel_err(eval_lorentzian_dos(gold, Frequency::from_thz(3.0)),
                  fixtures::lorentzian_reference(fixtures::gold_rows, 3.0)) < 1e-13);
    CHECK(rel_err(eval_lorentzian_dos(gold, Frequency::from_thz(3.0)), 0.05396718907888789) < 1e-13);

    CHECK(gold.ratios() == std::vector<double>{1.0, 0.15});
    CHECK_THROWS_AS(LorentzianSumModel({}), InputError);
    CHECK_THROWS_AS(LorentzianSumModel({{Frequency(0.0), Frequency(1.0), 1.0}}), InputError);
    CHECK_THROWS_AS(LorentzianSumModel({{Frequency(1.0), Frequency(-1.0), 1.0}}), InputError);
}

TEST_CASE("lorentzian dos is nonnegative for positive weights") {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 20; ++trial) {
        std::vector<LorentzianPeak> peaks;
        const int n = 1 + static_cast<int>(rng() % 6);
        for (int j = 0; j < n; ++j)
            peaks.push_back({Frequency::from_thz(fixtures::uniform(rng, 0.5, 20.0)),
                             Frequency::from_thz(fixtures::uniform(rng, 0.1, 5.0)), fixtures::uniform(rng, 0.0, 3.0)});
        const LorentzianSumModel m(peaks);
        for (int i = 0; i <= 2000; ++i)
            CHECK(eval_lorentzian_dos(m, Frequency::from_thz(30.0 * i / 2000)) >= 0.0);
    }
}

namespace {

// Adaptive Gauss-Kronrod over [0, 200 Gamma_max] as an independent oracle.
double quadrature_weight(const LorentzianSumModel& m) {
    double gmax = 0.0;
    double wmax = 0.0;
    for (const auto& p : m.peaks()) {
        gmax = std::max(gmax, p.gamma.rad_per_ps());
        wmax = std::max(wmax, p.omega0.rad_per_ps());
    }
    const double top = std::max(200.0 * gmax, 200.0 * wmax);
    auto f = [&](double w) { return eval_lorentzian_dos(m, Frequency(w)); };
    using boost::math::quadrature::gauss_kronrod;
    double sum = 0.0;
    double a = 0.0;
    for (double b : {0.5 * wmax, 2.0 * wmax, 10.0 * wmax, top}) {
        sum += gauss_kronrod<double, 61>::integrate(f, a, b, 20, 1e-12);
        a = b;
    }
    // analytic 1/w^2 tail beyond top
    double tail = 0.0;
    for (const auto& p : m.peaks())
        tail += p.weight * p.gamma.rad_per_ps() / top;
    return sum + tail;
}

} // namespace

TEST_CASE("total weight") {
    const LorentzianSumModel unit({{Frequency(3.0), Frequency(0.5), 2.0 / std::numbers::pi}});
    CHECK(total_weight(unit) == doctest::Approx(1.0).epsilon(1e-15));
    const LorentzianSumModel twice({unit.peaks()[0], unit.peaks()[0]});
    CHECK(total_weight(twice) == doctest::Approx(2.0).epsilon(1e-15));

    const auto gold = fixtures::gold();
    CHECK(rel_err(total_weight(gold), 1.8064157758141308) < 1e-14);
    CHECK(rel_err(total_weight(gold), quadrature_weight(gold)) <= 1e-4);

    std::mt19937_64 rng(3);
    int tested = 0;
    while (tested < 40) {
        std::vector<LorentzianPeak> peaks;
        const int n = 1 + static_cast<int>(rng() % 20);
        const bool mixed = tested % 2 == 1;
        for (int j = 0; j < n; ++j) {
            double w = fixtures::uniform(rng, 0.1, 2.0);
            if (mixed && j > 0 && rng() % 4 == 0)
                w = -0.2 * w;
            peaks.push_back({Frequency::from_thz(fixtures::uniform(rng, 0.5, 20.0)),
                             Frequency::from_thz(fixtures::uniform(rng, 0.2, 4.0)), w});
        }
        const LorentzianSumModel m(peaks);
        // mixed-sign models must still have a positive total DOS
        bool positive = true;
        for (int i = 1; i <= 4000 && positive; ++i)
            positive = eval_lorentzian_dos(m, Frequency::from_thz(40.0 * i / 4000)) >= 0.0;
        if (!positive)
            continue;
        ++tested;
        CHECK(rel_err(total_weight(m), quadrature_weight(m)) <= 1e-4);
    }
}

TEST_CASE("tabulated dos") {
    const TabulatedDos two({Frequency::from_thz(1.0), Frequency::from_thz(2.0)}, {0.0, 4.0}, "arb.");
    CHECK(eval_tabulated_dos(two, Frequency::from_thz(1.25)) == doctest::Approx(1.0).epsilon(1e-13));
    CHECK(eval_tabulated_dos(two, Frequency::from_thz(1.0)) == 0.0);
    CHECK(eval_tabulated_dos(two, Frequency::from_thz(2.0)) == 4.0);
    CHECK_THROWS_AS(eval_tabulated_dos(two, Frequency::from_thz(2.5)), DomainError);
    CHECK_THROWS_AS(eval_tabulated_dos(two, Frequency::from_thz(0.5)), DomainError);

    SUBCASE("nodes exact, midpoints averaged, monotone between nodes") {
        std::mt19937_64 rng(5);
        std::vector<Frequency> grid;
        std::vector<double> values;
        double w = 0.1;
        double v = 0.0;
        for (int i = 0; i < 60; ++i) {
            grid.emplace_back(w);
            values.push_back(v);
            w += fixtures::uniform(rng, 0.01, 0.5);
            v += fixtures::uniform(rng, 0.0, 2.0);
        }
        const TabulatedDos t(grid, values);
        for (std::size_t i = 0; i < grid.size(); ++i)
            CHECK(eval_tabulated_dos(t, grid[i]) == values[i]);
        for (std::size_t i = 0; i + 1 < grid.size(); ++i) {
            const Frequency mid(0.5 * (grid[i].rad_per_ps() + grid[i + 1].rad_per_ps()));
            CHECK(eval_tabulated_dos(t, mid) == doctest::Approx(0.5 * (values[i] + values[i + 1])).epsilon(1e-12));
            double prev = values[i];
            for (int k = 1; k <= 10; ++k) {
                const double x = grid[i].rad_per_ps() + (grid[i + 1].rad_per_ps() - grid[i].rad_per_ps()) * k / 10;
                const double y = eval_tabulated_dos(t, Frequency(std::min(x, grid[i + 1].rad_per_ps())));
                CHECK(y >= prev - 1e-12);
                prev = y;
            }
        }
    }
    SUBCASE("validation") {
        CHECK_THROWS_AS(TabulatedDos({Frequency(1.0)}, {1.0}), InputError);
        CHECK_THROWS_AS(TabulatedDos({Frequency(1.0), Frequency(1.0)}, {1.0, 2.0}), InputError);
        CHECK_THROWS_AS(TabulatedDos({Frequency(1.0), Frequency(2.0)}, {1.0}), InputError);
        CHECK_THROWS_AS(TabulatedDos({Frequency(1.0), Frequency(2.0)}, {1.0, -1.0}), InputError);
    }
}

TEST_CASE("noise clamping") {
    std::vector<double> v{1.0, -5e-4, 0.3, -1e-3};
    clean_dos_values(v);
    CHECK(v == std::vector<double>{1.0, 0.0, 0.3, 0.0});
    std::vector<double> bad{1.0, -0.01};
    CHECK_THROWS_AS(clean_dos_values(bad), InputError);
}

TEST_CASE("support") {
    const auto [lo, hi] = dos_support(DosModel{fixtures::gold()});
    CHECK(lo.rad_per_ps() == 0.0);
    CHECK(rel_err(hi.thz(), 4.05 + 50 * 1.3) < 1e-12);
    CHECK(has_unbounded_support(DosModel{fixtures::gold()}));
    CHECK_FALSE(has_unbounded_support(DosModel{DebyeParams(1.0, Frequency(2.0), 3)}));
}
