#include "triplets/dispersion.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "triplets/error.hpp"
#include "triplets/grid.hpp"

#ifndef TRIPLETS_DEFAULT_DATA_DIR
#define TRIPLETS_DEFAULT_DATA_DIR "data"
#endif

namespace triplets
{

namespace
{

using nlohmann::json;

json read_json_file(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw Error(ErrorCode::IoError, path.string() + ": " + e.what());
    }
}

std::array<double, 3> three(const json &j, const char *key, const std::string &where)
{
    if (!j.contains(key) || !j.at(key).is_array() || j.at(key).size() != 3)
        throw Error(ErrorCode::IoError, where + ": field '" + key + "' must be an array of 3 numbers");
    return {j.at(key)[0].get<double>(), j.at(key)[1].get<double>(), j.at(key)[2].get<double>()};
}

std::pair<double, double> valid_window(const json &j, const std::string &where)
{
    if (!j.contains("valid_um") || j.at("valid_um").size() != 2)
        throw Error(ErrorCode::IoError, where + ": field 'valid_um' must be [min, max]");
    return {j.at("valid_um")[0].get<double>(), j.at("valid_um")[1].get<double>()};
}

double lambda_um_of(double omega) { return wavelength_from_omega(omega) * 1e6; }

// central difference with one-sided fallback at the domain edges
struct Derivatives
{
    double k, dk, d2k;
};

Derivatives differentiate(const DispersionModel &model, double omega, double h)
{
    const auto dom = domain(model);
    double lo = omega - h, hi = omega + h;
    if (dom && lo < dom->first) {
        // forward
        const double k0 = wavenumber(model, omega);
        const double k1 = wavenumber(model, omega + h);
        const double k2 = wavenumber(model, omega + 2.0 * h);
        return {k0, (-3.0 * k0 + 4.0 * k1 - k2) / (2.0 * h), (k0 - 2.0 * k1 + k2) / (h * h)};
    }
    if (dom && hi > dom->second) {
        const double k0 = wavenumber(model, omega);
        const double k1 = wavenumber(model, omega - h);
        const double k2 = wavenumber(model, omega - 2.0 * h);
        return {k0, (3.0 * k0 - 4.0 * k1 + k2) / (2.0 * h), (k0 - 2.0 * k1 + k2) / (h * h)};
    }
    const double km = wavenumber(model, lo);
    const double k0 = wavenumber(model, omega);
    const double kp = wavenumber(model, hi);
    return {k0, (kp - km) / (2.0 * h), (kp - 2.0 * k0 + km) / (h * h)};
}

double table_spacing_near(const TabulatedDispersion &t, double omega)
{
    auto it = std::lower_bound(t.omegas.begin(), t.omegas.end(), omega);
    std::size_t hi = static_cast<std::size_t>(it - t.omegas.begin());
    hi = std::clamp<std::size_t>(hi, 1, t.omegas.size() - 1);
    return t.omegas[hi] - t.omegas[hi - 1];
}

} // namespace

double sellmeier_index(const SellmeierMaterial &mat, double lambda_um)
{
    if (!(lambda_um >= mat.valid_um.first && lambda_um <= mat.valid_um.second))
        throw Error(ErrorCode::OutOfRange, mat.name + ": wavelength " + std::to_string(lambda_um) +
                                                " um outside validity window");
    const double l2 = lambda_um * lambda_um;
    double n2 = 1.0;
    for (std::size_t i = 0; i < 3; ++i)
        n2 += mat.b[i] * l2 / (l2 - mat.l_um2[i]);
    if (!(n2 > 0.0))
        throw Error(ErrorCode::NegativeRadicand, mat.name + ": n^2 <= 0");
    return std::sqrt(n2);
}

SellmeierMaterial load_sellmeier(const std::filesystem::path &path)
{
    const json j = read_json_file(path);
    const std::string where = path.string();
    SellmeierMaterial m;
    m.name = j.value("name", path.stem().string());
    m.b = three(j, "b", where);
    m.l_um2 = three(j, "l_um2", where);
    m.valid_um = valid_window(j, where);
    m.citation = j.value("citation", "");
    return m;
}

SellmeierMaterial SellmeierFamily::at(double mol_fraction) const
{
    if (compositions.empty())
        throw Error(ErrorCode::InvalidArgument, name + ": no tabulated compositions");
    if (mol_fraction < compositions.front().mol_fraction || mol_fraction > compositions.back().mol_fraction)
        throw Error(ErrorCode::OutOfRange, name + ": molar fraction outside tabulated compositions");

    std::size_t hi = 0;
    while (hi + 1 < compositions.size() && compositions[hi].mol_fraction < mol_fraction)
        ++hi;
    const std::size_t lo = hi == 0 ? 0 : hi - 1;
    const auto &a = compositions[lo];
    const auto &b = compositions[hi];
    const double t = (b.mol_fraction == a.mol_fraction)
                         ? 0.0
                         : (mol_fraction - a.mol_fraction) / (b.mol_fraction - a.mol_fraction);

    SellmeierMaterial m;
    std::ostringstream nm;
    nm << name << "@x=" << mol_fraction;
    m.name = nm.str();
    for (std::size_t i = 0; i < 3; ++i) {
        m.b[i] = a.b[i] + t * (b.b[i] - a.b[i]);
        m.l_um2[i] = a.l_um2[i] + t * (b.l_um2[i] - a.l_um2[i]);
    }
    m.valid_um = valid_um;
    m.citation = citation;
    return m;
}

SellmeierFamily load_sellmeier_family(const std::filesystem::path &path)
{
    const json j = read_json_file(path);
    const std::string where = path.string();
    SellmeierFamily f;
    f.name = j.value("name", path.stem().string());
    f.valid_um = valid_window(j, where);
    f.citation = j.value("citation", "");
    if (!j.contains("compositions") || !j.at("compositions").is_array() || j.at("compositions").empty())
        throw Error(ErrorCode::IoError, where + ": 'compositions' must be a nonempty array");
    for (const auto &c : j.at("compositions")) {
        SellmeierFamily::Composition comp;
        comp.mol_fraction = c.at("mol_fraction").get<double>();
        comp.b = three(c, "b", where);
        comp.l_um2 = three(c, "l_um2", where);
        f.compositions.push_back(comp);
    }
    std::sort(f.compositions.begin(), f.compositions.end(),
              [](const auto &a, const auto &b) { return a.mol_fraction < b.mol_fraction; });
    return f;
}

std::filesystem::path data_directory()
{
    if (const char *env = std::getenv("TRIPLETS_DATA_DIR"); env && *env)
        return env;
    return TRIPLETS_DEFAULT_DATA_DIR;
}

TabulatedDispersion make_dispersion_table(std::vector<double> omegas, std::vector<double> n_eff)
{
    if (omegas.size() != n_eff.size())
        throw Error(ErrorCode::InvalidArgument, "dispersion table columns differ in length");
    if (omegas.size() < 16)
        throw Error(ErrorCode::InvalidArgument, "dispersion table needs at least 16 rows");
    for (std::size_t i = 1; i < omegas.size(); ++i)
        if (!(omegas[i] > omegas[i - 1]))
            throw Error(ErrorCode::InvalidArgument, "dispersion table frequencies must be strictly increasing");
    return TabulatedDispersion{std::move(omegas), std::move(n_eff)};
}

TabulatedDispersion load_dispersion_table(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw Error(ErrorCode::IoError, "cannot open " + path.string());
    std::string line;
    if (!std::getline(in, line))
        throw Error(ErrorCode::IoError, path.string() + ": empty file");
    if (!line.empty() && line.back() == '\r')
        line.pop_back();
    if (line != "omega_rad_s,n_eff")
        throw Error(ErrorCode::IoError, path.string() + ": header must be 'omega_rad_s,n_eff'");

    std::vector<double> om, ne;
    std::size_t row = 1;
    while (std::getline(in, line)) {
        ++row;
        if (line.empty() || line == "\r")
            continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos)
            throw Error(ErrorCode::IoError, path.string() + ": row " + std::to_string(row) + " lacks a comma");
        try {
            om.push_back(std::stod(line.substr(0, comma)));
            ne.push_back(std::stod(line.substr(comma + 1)));
        } catch (const std::exception &) {
            throw Error(ErrorCode::IoError, path.string() + ": row " + std::to_string(row) + " is not numeric");
        }
    }
    return make_dispersion_table(std::move(om), std::move(ne));
}

double wavenumber(const DispersionModel &model, double omega)
{
    return std::visit(
        [omega](const auto &m) -> double {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, TaylorDispersion>) {
                const double d = omega - m.omega0;
                return m.k0 + m.inv_v * d + 0.5 * m.beta2 * d * d;
            } else if constexpr (std::is_same_v<T, TabulatedDispersion>) {
                return omega * interp_linear(m.omegas, m.n_eff, omega) / constants::c;
            } else {
                return omega * sellmeier_index(m.material, lambda_um_of(omega)) / constants::c;
            }
        },
        model);
}

std::optional<std::pair<double, double>> domain(const DispersionModel &model)
{
    return std::visit(
        [](const auto &m) -> std::optional<std::pair<double, double>> {
            using T = std::decay_t<decltype(m)>;
            if constexpr (std::is_same_v<T, TaylorDispersion>) {
                return std::nullopt;
            } else if constexpr (std::is_same_v<T, TabulatedDispersion>) {
                return std::make_pair(m.omegas.front(), m.omegas.back());
            } else {
                const double lo = omega_from_wavelength(m.material.valid_um.second * 1e-6);
                const double hi = omega_from_wavelength(m.material.valid_um.first * 1e-6);
                return std::make_pair(lo, hi);
            }
        },
        model);
}

TaylorDispersion local_taylor(const DispersionModel &model, double omega0)
{
    if (const auto *t = std::get_if<TaylorDispersion>(&model)) {
        const double d = omega0 - t->omega0;
        return {omega0, wavenumber(model, omega0), t->inv_v + t->beta2 * d, t->beta2};
    }
    double h = 1e11;
    if (const auto *tab = std::get_if<TabulatedDispersion>(&model))
        h = table_spacing_near(*tab, omega0);
    const auto d = differentiate(model, omega0, h);
    return {omega0, d.k, d.dk, d.d2k};
}

double delta_k(const DispersionModel &pump, const DispersionModel &triplet, double omega1, double omega2,
               double omega3)
{
    // fixed summation order keeps the result bitwise symmetric
    std::array<double, 3> w{omega1, omega2, omega3};
    std::sort(w.begin(), w.end());
    return wavenumber(pump, w[0] + w[1] + w[2]) - wavenumber(triplet, w[0]) - wavenumber(triplet, w[1]) -
           wavenumber(triplet, w[2]);
}

double delta_k_expanded(const TaylorDispersion &pump, const TaylorDispersion &triplet, double omega_f,
                        double omega1, double omega2, double omega3)
{
    const auto p = local_taylor(DispersionModel{pump}, 3.0 * omega_f);
    const auto f = local_taylor(DispersionModel{triplet}, omega_f);
    const double d1 = omega1 - omega_f, d2 = omega2 - omega_f, d3 = omega3 - omega_f;
    const double sum = d1 + d2 + d3;
    return (p.k0 - 3.0 * f.k0) + (p.inv_v - f.inv_v) * sum + 0.5 * p.beta2 * sum * sum -
           0.5 * f.beta2 * (d1 * d1 + d2 * d2 + d3 * d3);
}

Eigen::Matrix3d quadric_matrix(double beta_p, double beta_f, double length)
{
    if (!(length > 0.0))
        throw Error(ErrorCode::InvalidLength, "length must be positive");
    Eigen::Matrix3d a = Eigen::Matrix3d::Constant(beta_p);
    a.diagonal().array() -= beta_f;
    return 0.25 * length * a;
}

QuadricEigensystem quadric_eigensystem(double beta_p, double beta_f, double length)
{
    if (!(length > 0.0))
        throw Error(ErrorCode::InvalidLength, "length must be positive");
    QuadricEigensystem q;
    q.lambda[0] = 0.25 * length * (3.0 * beta_p - beta_f);
    q.lambda[1] = -0.25 * length * beta_f;
    q.lambda[2] = q.lambda[1];
    q.vectors[0] = Eigen::Vector3d(1.0, 1.0, 1.0) / std::sqrt(3.0);
    q.vectors[1] = Eigen::Vector3d(0.0, -1.0, 1.0) / std::sqrt(2.0);
    q.vectors[2] = Eigen::Vector3d(2.0, -1.0, -1.0) / std::sqrt(6.0);
    return q;
}

double pmf_bandwidth(double length, double beta_f)
{
    if (!(length > 0.0))
        throw Error(ErrorCode::InvalidLength, "length must be positive");
    if (beta_f == 0.0)
        throw Error(ErrorCode::ZeroDispersion, "triplet group-velocity dispersion is zero");
    return std::sqrt(4.0 * constants::pi / (length * std::abs(beta_f)));
}

PhaseMatchingPoint find_degenerate_phase_matching(const DispersionModel &pump, const DispersionModel &triplet,
                                                  double lambda_lo_um, double lambda_hi_um)
{
    if (!(lambda_lo_um > 0.0 && lambda_hi_um > lambda_lo_um))
        throw Error(ErrorCode::InvalidArgument, "wavelength bracket must satisfy 0 < lo < hi");
    auto mismatch = [&](double w) { return wavenumber(pump, 3.0 * w) - 3.0 * wavenumber(triplet, w); };

    double w_lo = omega_from_wavelength(lambda_hi_um * 1e-6);
    double w_hi = omega_from_wavelength(lambda_lo_um * 1e-6);
    double m_lo = mismatch(w_lo);
    double m_hi = mismatch(w_hi);
    if (m_lo == 0.0)
        w_hi = w_lo;
    else if (m_hi == 0.0)
        w_lo = w_hi;
    else if ((m_lo < 0.0) == (m_hi < 0.0))
        throw Error(ErrorCode::NoSignChange, "phase mismatch does not change sign in the bracket");

    PhaseMatchingPoint out;
    double w_mid = 0.5 * (w_lo + w_hi);
    double m_mid = mismatch(w_mid);
    int it = 0;
    for (; it < 80 && std::abs(m_mid) >= 1e-8 && w_lo != w_hi; ++it) {
        if ((m_mid < 0.0) == (m_lo < 0.0)) {
            w_lo = w_mid;
            m_lo = m_mid;
        } else {
            w_hi = w_mid;
        }
        w_mid = 0.5 * (w_lo + w_hi);
        m_mid = mismatch(w_mid);
    }

    constexpr double h = 1e11;
    const double inv_vp = (wavenumber(pump, 3.0 * w_mid + h) - wavenumber(pump, 3.0 * w_mid - h)) / (2.0 * h);
    const double inv_vf = (wavenumber(triplet, w_mid + h) - wavenumber(triplet, w_mid - h)) / (2.0 * h);

    out.omega_f = w_mid;
    out.lambda_f_um = lambda_um_of(w_mid);
    out.lambda_p_um = lambda_um_of(3.0 * w_mid);
    out.mismatch = m_mid;
    out.group_velocity_mismatch = inv_vp - inv_vf;
    out.iterations = it;
    return out;
}

} // namespace triplets
