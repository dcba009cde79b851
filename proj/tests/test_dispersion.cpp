#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <random>

#include "helpers.hpp"
#include "triplets/dispersion.hpp"
#include "triplets/error.hpp"
#include "triplets/grid.hpp"

using namespace triplets;
using testing::rel;

namespace
{

// Malitson (1965) in its published form: resonance wavelengths, not squares.
double malitson_oracle(double lambda_um)
{
    const double b[3] = {0.6961663, 0.4079426, 0.8974794};
    const double c[3] = {0.0684043, 0.1162414, 9.896161};
    const double l2 = lambda_um * lambda_um;
    double n2 = 1.0;
    for (int i = 0; i < 3; ++i)
        n2 += b[i] * l2 / (l2 - c[i] * c[i]);
    return std::sqrt(n2);
}

SellmeierMaterial silica() { return load_sellmeier(data_directory() / "sellmeier" / "fused_silica_malitson.json"); }

ErrorCode code_of(auto &&fn)
{
    try {
        fn();
    } catch (const Error &e) {
        return e.code();
    }
    FAIL("expected an Error");
    return ErrorCode::InvalidArgument;
}

} // namespace

TEST_CASE("Sellmeier silica against the published coefficients")
{
    const auto s = silica();
    CHECK(std::abs(sellmeier_index(s, 0.5876) - malitson_oracle(0.5876)) < 1e-4);
    CHECK(std::abs(sellmeier_index(s, 1.376) - malitson_oracle(1.376)) < 1e-4);
    // handbook value at the helium d line
    CHECK(std::abs(sellmeier_index(s, 0.5876) - 1.4585) < 2e-4);
    CHECK_FALSE(s.citation.empty());

    SellmeierMaterial vac = s;
    vac.b = {0.0, 0.0, 0.0};
    CHECK(sellmeier_index(vac, 1.0) == 1.0);

    CHECK(code_of([&] { sellmeier_index(s, 0.1); }) == ErrorCode::OutOfRange);
    CHECK(code_of([&] { sellmeier_index(s, 5.0); }) == ErrorCode::OutOfRange);

    SellmeierMaterial neg = s;
    neg.b = {-3.0, 0.0, 0.0};
    neg.l_um2 = {0.0, 0.0, 0.0};
    CHECK(code_of([&] { sellmeier_index(neg, 1.0); }) == ErrorCode::NegativeRadicand);
}

TEST_CASE("GeO2-doped family interpolates between end members")
{
    const auto fam = load_sellmeier_family(data_directory() / "sellmeier" / "geo2_sio2_fleming.json");
    const auto pure = fam.at(0.0);
    CHECK(std::abs(sellmeier_index(pure, 1.376) - malitson_oracle(1.376)) < 1e-6);
    const auto doped = fam.at(0.36);
    const auto germania = fam.at(1.0);
    const double n0 = sellmeier_index(pure, 1.376), n36 = sellmeier_index(doped, 1.376),
                 n1 = sellmeier_index(germania, 1.376);
    CHECK(n36 > n0);
    CHECK(n1 > n36);
    for (int i = 0; i < 3; ++i)
        CHECK(doped.b[i] == doctest::Approx(0.64 * pure.b[i] + 0.36 * germania.b[i]));
    CHECK_THROWS_AS(fam.at(1.5), Error);
}

TEST_CASE("wavenumber models")
{
    const TaylorDispersion t{2e15, 1.2e7, 4.9e-9, 2e-26};
    CHECK(wavenumber(t, 2e15) == 1.2e7);
    CHECK(wavenumber(t, 2e15 + 1e13) == doctest::Approx(1.2e7 + 4.9e-9 * 1e13 + 1e-26 * 1e26));
    const TaylorDispersion flat{2e15, 1.2e7, 0.0, 0.0};
    CHECK(wavenumber(flat, 3.7e15) == 1.2e7);
    CHECK_FALSE(domain(t).has_value());

    std::vector<double> om, ne;
    for (int i = 0; i < 16; ++i) {
        om.push_back(1.5e15 + i * 0.1e15);
        ne.push_back(1.5);
    }
    const auto tab = make_dispersion_table(om, ne);
    CHECK(rel(wavenumber(tab, 2e15), 1.5 * 2e15 / constants::c) < 1e-14);
    CHECK(wavenumber(tab, 2e15) == doctest::Approx(1.0007e7).epsilon(1e-4));
    CHECK(code_of([&] { wavenumber(tab, 1e15); }) == ErrorCode::OutOfRange);
    CHECK(code_of([&] { wavenumber(tab, 3.1e15); }) == ErrorCode::OutOfRange);

    CHECK_THROWS_AS(make_dispersion_table({1.0, 2.0}, {1.5, 1.5}), Error);
    auto rev = om;
    std::swap(rev[3], rev[4]);
    CHECK_THROWS_AS(make_dispersion_table(rev, ne), Error);

    const auto s = SellmeierDispersion{silica()};
    const double w = omega_from_wavelength(1.0e-6);
    CHECK(rel(wavenumber(s, w), w * malitson_oracle(1.0) / constants::c) < 1e-12);
}

TEST_CASE("dispersion table file")
{
    const auto path = std::filesystem::temp_directory_path() / "triplets_table_test.csv";
    {
        std::ofstream out(path);
        out << "omega_rad_s,n_eff\n";
        for (int i = 0; i < 20; ++i)
            out << 1.0e15 + i * 1e13 << "," << 1.45 + 1e-3 * i << "\n";
    }
    const auto tab = load_dispersion_table(path);
    CHECK(tab.omegas.size() == 20);
    CHECK(tab.n_eff[19] == doctest::Approx(1.469));
    {
        std::ofstream out(path);
        out << "omega,n\n1,2\n";
    }
    CHECK_THROWS_AS(load_dispersion_table(path), Error);
    std::filesystem::remove(path);
}

TEST_CASE("local_taylor recovers coefficients")
{
    const TaylorDispersion t{2e15, 1.2e7, 4.9e-9, 2e-26};
    const auto e = local_taylor(t, 2.1e15);
    CHECK(e.k0 == doctest::Approx(wavenumber(t, 2.1e15)));
    CHECK(e.inv_v == doctest::Approx(4.9e-9 + 2e-26 * 1e14));
    CHECK(e.beta2 == 2e-26);

    // quadratic n_eff table: k = w (a + b w) / c has exact second derivative 2b / c
    std::vector<double> om, ne;
    const double a = 1.4, b = 2e-17;
    for (int i = 0; i < 41; ++i) {
        om.push_back(1.0e15 + i * 2.5e12);
        ne.push_back(a + b * om.back());
    }
    const auto tab = make_dispersion_table(om, ne);
    const auto le = local_taylor(tab, om[20]);
    CHECK(rel(le.inv_v, (a + 2 * b * om[20]) / constants::c) < 1e-6);
    CHECK(rel(le.beta2, 2 * b / constants::c) < 1e-3);
    // end point falls back to one-sided differences
    const auto edge = local_taylor(tab, om[0]);
    CHECK(rel(edge.inv_v, (a + 2 * b * om[0]) / constants::c) < 1e-3);
}

TEST_CASE("phase mismatch")
{
    const double wf = omega_from_wavelength(1376.2e-9), kf = 8.9e6, iv = 4.9e-9;
    const TaylorDispersion p{3 * wf, 3 * kf, iv, 0.0};
    const TaylorDispersion f0{wf, kf, iv, 0.0};
    for (double d : {0.0, 1e13, -3e13})
        CHECK(std::abs(delta_k(p, f0, wf + d, wf - 0.5 * d, wf + 2 * d)) < 1e-8);

    const TaylorDispersion f{wf, kf, iv, 2.0 * fs2_per_mm};
    const double d = 1e13;
    // -(beta_F / 2) * 3 * d^2 = -0.3 per metre (-3e-4 per millimetre)
    CHECK(delta_k(p, f, wf + d, wf + d, wf + d) == doctest::Approx(-0.3).epsilon(1e-6));

    // expanded quadratic form is the same polynomial as the direct evaluation
    const TaylorDispersion pm{3 * wf + 2e12, 3 * kf + 40.0, iv + 1e-11, 6.4 * fs2_per_mm};
    const TaylorDispersion fm{wf - 1e12, kf - 5.0, iv - 2e-12, 21.9 * fs2_per_mm};
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(-5e13, 5e13);
    for (int i = 0; i < 50; ++i) {
        const double w1 = wf + u(rng), w2 = wf + u(rng), w3 = wf + u(rng);
        const double direct = delta_k(pm, fm, w1, w2, w3);
        const double expanded = delta_k_expanded(pm, fm, wf, w1, w2, w3);
        CHECK(std::abs(direct - expanded) <= 1e-12 * std::max(std::abs(direct), 3 * kf * 1e-6));
    }

    const SellmeierDispersion sp{silica()};
    const double w1 = wf + 1.3e13, w2 = wf - 0.7e13, w3 = wf + 0.2e13;
    const double ref = delta_k(sp, sp, w1, w2, w3);
    CHECK(delta_k(sp, sp, w1, w3, w2) == ref);
    CHECK(delta_k(sp, sp, w2, w1, w3) == ref);
    CHECK(delta_k(sp, sp, w2, w3, w1) == ref);
    CHECK(delta_k(sp, sp, w3, w1, w2) == ref);
    CHECK(delta_k(sp, sp, w3, w2, w1) == ref);
}

TEST_CASE("quadric eigensystem")
{
    const double l = 0.3;
    const auto iso = quadric_eigensystem(0.0, 21.9 * fs2_per_mm, l);
    for (double lam : iso.lambda)
        CHECK(lam == doctest::Approx(-l * 21.9 * fs2_per_mm / 4));

    const auto q = quadric_eigensystem(6.4 * fs2_per_mm, 21.9 * fs2_per_mm, l);
    CHECK(q.lambda[0] == doctest::Approx(0.25 * l * (3 * 6.4 - 21.9) * fs2_per_mm));
    CHECK(q.lambda[0] < 0.0);
    CHECK(q.lambda[1] == q.lambda[2]);
    CHECK((q.vectors[0] - Eigen::Vector3d::Constant(1 / std::sqrt(3.0))).norm() < 1e-15);

    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> beta(-50.0, 50.0), len(0.01, 2.0);
    for (int i = 0; i < 100; ++i) {
        const double bp = beta(rng) * fs2_per_mm, bf = beta(rng) * fs2_per_mm, ll = len(rng);
        const Eigen::Matrix3d a = quadric_matrix(bp, bf, ll);
        const auto closed = quadric_eigensystem(bp, bf, ll);
        const auto num = hermitian_eig(a.cast<cplx>());
        std::array<double, 3> c = closed.lambda;
        std::sort(c.begin(), c.end(), std::greater<>());
        const double scale = std::max({std::abs(c[0]), std::abs(c[2])});
        for (int k = 0; k < 3; ++k)
            CHECK(std::abs(num.values(k) - c[k]) <= 1e-10 * scale);
        for (int k = 0; k < 3; ++k)
            CHECK((a * closed.vectors[k] - closed.lambda[k] * closed.vectors[k]).norm() <= 1e-10 * scale);
    }

    // d^T A d = (l / 2) dk for a matched pair
    const double wf = 1.37e15;
    const TaylorDispersion p{3 * wf, 3e7, 5e-9, 6.4 * fs2_per_mm};
    const TaylorDispersion f{wf, 1e7, 5e-9, 21.9 * fs2_per_mm};
    const Eigen::Vector3d dv(1e13, -2e13, 0.5e13);
    const double form = dv.dot(quadric_matrix(p.beta2, f.beta2, l) * dv);
    CHECK(form == doctest::Approx(0.5 * l * delta_k_expanded(p, f, wf, wf + dv[0], wf + dv[1], wf + dv[2])));

    CHECK(code_of([] { quadric_eigensystem(1.0, 1.0, 0.0); }) == ErrorCode::InvalidLength);
}

TEST_CASE("PMF bandwidth")
{
    const double s = pmf_bandwidth(0.3, 21.9 * fs2_per_mm);
    CHECK(std::abs(s / 0.43e14 - 1.0) < 0.02);
    CHECK(pmf_bandwidth(1.2, 21.9 * fs2_per_mm) == doctest::Approx(s / 2));
    CHECK(pmf_bandwidth(0.3, -21.9 * fs2_per_mm) == s);
    CHECK(pmf_bandwidth(1.0, 4 * std::numbers::pi) == doctest::Approx(1.0));
    CHECK(code_of([] { pmf_bandwidth(0.0, 1.0); }) == ErrorCode::InvalidLength);
    CHECK(code_of([] { pmf_bandwidth(0.3, 0.0); }) == ErrorCode::ZeroDispersion);
}

TEST_CASE("degenerate phase matching")
{
    const double wf = omega_from_wavelength(1376.2e-9), kf = 8.9e6;
    const TaylorDispersion f{wf, kf, 4.9e-9, 21.9 * fs2_per_mm};
    const TaylorDispersion p{3 * wf, 3 * kf, 4.9e-9 + 1e-10, 6.4 * fs2_per_mm};
    const auto pm = find_degenerate_phase_matching(p, f, 1.30, 1.46);
    CHECK(rel(pm.omega_f, wf) < 1e-9);
    CHECK(std::abs(pm.mismatch) < 1e-8);
    CHECK(pm.lambda_f_um == doctest::Approx(1.3762));
    CHECK(pm.lambda_p_um == doctest::Approx(1.3762 / 3));
    CHECK(pm.group_velocity_mismatch == doctest::Approx(1e-10).epsilon(1e-4));
    CHECK(pm.iterations <= 80);

    CHECK(code_of([&] { find_degenerate_phase_matching(p, f, 1.40, 1.46); }) == ErrorCode::NoSignChange);
    const SellmeierDispersion bulk{silica()};
    CHECK(code_of([&] { find_degenerate_phase_matching(bulk, bulk, 1.30, 1.46); }) == ErrorCode::NoSignChange);
}

TEST_CASE("unit conversions")
{
    CHECK(omega_from_wavelength(532e-9) == doctest::Approx(2 * std::numbers::pi * constants::c / 532e-9));
    CHECK(wavelength_from_omega(omega_from_wavelength(458.7e-9)) == doctest::Approx(458.7e-9));
    CHECK(fs2_per_mm == 1e-27);
}
