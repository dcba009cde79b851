#include "doctest.h"

#include <cmath>
#include <cstring>
#include <string>
#include <vector>

#include "json.hpp"

#include "triplets/triplets_c.h"

namespace
{

std::string take(char *s)
{
    std::string out = s ? s : "";
    trp_string_free(s);
    return out;
}

std::string small_config()
{
    char *text = nullptr;
    REQUIRE(trp_preset_show("ideal-waveguide", &text) == TRP_OK);
    auto doc = nlohmann::json::parse(take(text));
    doc["grid"]["n_points"] = 25;
    doc.erase("detection");
    return doc.dump();
}

} // namespace

TEST_CASE("presets through the C API")
{
    char *names = nullptr;
    REQUIRE(trp_preset_names(&names) == TRP_OK);
    const auto list = nlohmann::json::parse(take(names));
    CHECK(list.size() == 4);

    char *cfg = nullptr;
    CHECK(trp_preset_show("nope", &cfg) == TRP_CONFIG_ERROR);
    CHECK(std::string(trp_last_error()).find("nope") != std::string::npos);
    CHECK(std::string(trp_status_name(TRP_CONFIG_ERROR)) == "ConfigError");
    CHECK(std::string(trp_status_name(TRP_OK)) == "Ok");
}

TEST_CASE("JSA handle")
{
    const std::string cfg = small_config();
    trp_jsa *j = nullptr;
    REQUIRE(trp_jsa_from_config(cfg.c_str(), &j) == TRP_OK);
    CHECK(std::string(trp_last_error()).empty());

    double lo = 0, hi = 0;
    size_t n = 0;
    REQUIRE(trp_jsa_grid(j, &lo, &hi, &n) == TRP_OK);
    CHECK(n == 25);
    CHECK(hi > lo);

    double eps = 0, kap = 0;
    CHECK(trp_jsa_epsilon_sq(j, &eps) == TRP_OK);
    CHECK(eps > 0.0);
    CHECK(trp_jsa_kappa(j, &kap) == TRP_OK);
    CHECK(kap >= 1.0);

    std::vector<double> re(n * n * n), im(n * n * n);
    CHECK(trp_jsa_values(j, re.data(), im.data(), re.size()) == TRP_OK);
    CHECK(trp_jsa_values(j, re.data(), im.data(), 3) == TRP_GRID_MISMATCH);
    CHECK(re[(1 * n + 2) * n + 3] == re[(3 * n + 1) * n + 2]);

    std::vector<double> g(n, 1.0);
    double eta = -1, phase = 0;
    CHECK(trp_jsa_overlap(j, g.data(), nullptr, n, &eta, &phase) == TRP_OK);
    CHECK(eta > 0.0);
    CHECK(eta <= 1.0 + 1e-9);
    CHECK(trp_jsa_overlap(j, g.data(), nullptr, n - 1, &eta, &phase) == TRP_GRID_MISMATCH);
    std::vector<double> zero(n, 0.0);
    CHECK(trp_jsa_overlap(j, zero.data(), zero.data(), n, &eta, &phase) == TRP_NOT_NORMALIZED);

    trp_jsa_free(j);
    trp_jsa_free(nullptr);

    CHECK(trp_jsa_from_config("{", &j) == TRP_CONFIG_ERROR);
    CHECK(trp_jsa_from_config("{\"source\": {}}", &j) == TRP_CONFIG_ERROR);
    CHECK(std::string(trp_last_error()).find("source.type") != std::string::npos);
    CHECK(trp_jsa_kappa(nullptr, &kap) == TRP_INVALID_ARGUMENT);
}

TEST_CASE("run and sweep")
{
    const std::string cfg = small_config();
    char *summary = nullptr;
    REQUIRE(trp_run_config(cfg.c_str(), nullptr, &summary) == TRP_OK);
    const auto s = nlohmann::json::parse(take(summary));
    CHECK(s["kappa"].get<double>() >= 1.0);
    CHECK(s["grid"]["n_points"] == 25);

    const double ratios[] = {0.5, -1.0, 2.0};
    char *table = nullptr;
    REQUIRE(trp_sweep(cfg.c_str(), "pump_sigma_ratio", ratios, 3, nullptr, &table) == TRP_OK);
    const auto t = nlohmann::json::parse(take(table));
    CHECK(t["rows"].size() == 3);
    CHECK(t["rows"][1]["kappa"].is_null());
    CHECK_FALSE(t["rows"][1]["error"].get<std::string>().empty());
    CHECK(trp_sweep(cfg.c_str(), "bogus", ratios, 3, nullptr, &table) == TRP_CONFIG_ERROR);
}

TEST_CASE("scalar helpers")
{
    double v = 0;
    REQUIRE(trp_pmf_bandwidth(0.3, 21.9e-27, &v) == TRP_OK);
    CHECK(std::abs(v / 0.43e14 - 1.0) < 0.02);
    CHECK(trp_pmf_bandwidth(0.3, 0.0, &v) == TRP_ZERO_DISPERSION);
    CHECK(trp_pmf_bandwidth(0.0, 1.0, &v) == TRP_INVALID_LENGTH);

    double m[4];
    REQUIRE(trp_quadrature_moments(1.0, 1e-3, 0.0, m) == TRP_OK);
    CHECK(m[1] == 0.5);
    CHECK(m[2] == doctest::Approx(std::sqrt(3.0) * 1e-3));

    CHECK(trp_report_rate(1e-11, 1e7, &v) == TRP_OK);
    CHECK(v == doctest::Approx(1e-4));

    const double s = 1.0 / std::sqrt(3.0);
    const double re[3] = {s, s, s}, im[3] = {0, 0, 0};
    CHECK(trp_splitter_coincidence(re, im, TRP_SPLITTER_PAPER, &v) == TRP_OK);
    CHECK(v == doctest::Approx(1.0 / 27));
    CHECK(trp_splitter_coincidence(re, im, TRP_SPLITTER_BOSONIC, &v) == TRP_OK);
    CHECK(v == doctest::Approx(2.0 / 9));
    const double bad[3] = {1, 1, 0};
    CHECK(trp_splitter_coincidence(bad, im, TRP_SPLITTER_PAPER, &v) == TRP_NOT_NORMALIZED);
}
