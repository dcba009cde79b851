#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "triplets/triplets_c.h"

namespace
{

constexpr int exit_config = 2;
constexpr int exit_numeric = 3;

int exit_code(trp_status s)
{
    switch (s) {
    case TRP_OK: return 0;
    case TRP_CONFIG_ERROR:
    case TRP_IO_ERROR:
    case TRP_INVALID_ARGUMENT: return exit_config;
    default: return exit_numeric;
    }
}

int fail(trp_status s)
{
    std::cerr << "error: " << trp_last_error() << "\n";
    return exit_code(s);
}

bool read_file(const std::string &path, std::string &out)
{
    std::ifstream in(path);
    if (!in)
        return false;
    std::ostringstream ss;
    ss << in.rdbuf();
    out = ss.str();
    return true;
}

struct Owned
{
    char *p = nullptr;
    ~Owned() { trp_string_free(p); }
};

void log_summary(const std::string &text)
{
    const auto j = nlohmann::json::parse(text);
    std::cerr << j["name"].get<std::string>() << ": kappa=" << j["kappa"].get<double>()
              << " |eps|^2=" << j["epsilon_sq"].get<double>() << " modes=" << j["mode_count"].get<std::size_t>()
              << "\n";
    if (j.contains("detection")) {
        const auto &d = j["detection"];
        std::cerr << "  detection(" << d["optimizer"].get<std::string>() << "): eta_best=" << d["eta_best"].get<double>()
                  << " eta_f0=" << d["eta_f0"].get<double>() << " overlap=" << d["overlap_best_f0"].get<double>()
                  << "\n";
    }
}

} // namespace

int main(int argc, char **argv)
{
    CLI::App app{"Spectral correlations of photon triplets from third-order SPDC"};
    app.require_subcommand(1);

    std::string config_path, preset_name, out_dir;
    auto *run = app.add_subcommand("run", "build the JSA, decompose it and optimize the detector");
    auto *run_cfg = run->add_option("--config", config_path, "JSON run config");
    auto *run_preset = run->add_option("--preset", preset_name, "named preset instead of a config file");
    run_cfg->excludes(run_preset);
    run->add_option("--out", out_dir, "output directory (overrides output_dir)");

    std::string sweep_config, param, values_text, sweep_out = ".";
    auto *sw = app.add_subcommand("sweep", "scan one pump parameter and tabulate kappa");
    sw->add_option("--config", sweep_config, "JSON run config")->required();
    sw->add_option("--param", param,
                   "pump_sigma | pump_sigma_ratio | pump_lambda | pulse_duration")->required();
    sw->add_option("--values", values_text, "comma separated values")->required();
    sw->add_option("--out", sweep_out, "output directory");

    auto *presets = app.add_subcommand("presets", "list or print the built-in configs");
    presets->require_subcommand(1);
    auto *plist = presets->add_subcommand("list");
    std::string show_name;
    auto *pshow = presets->add_subcommand("show");
    pshow->add_option("name", show_name)->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : exit_config;
    }

    if (*run) {
        if (config_path.empty() && preset_name.empty()) {
            std::cerr << "error: run needs --config or --preset\n";
            return exit_config;
        }
        Owned summary;
        trp_status s;
        const char *out = out_dir.empty() ? nullptr : out_dir.c_str();
        if (!preset_name.empty()) {
            if (!out) {
                out_dir = "out/" + preset_name;
                out = out_dir.c_str();
            }
            s = trp_run_preset(preset_name.c_str(), out, &summary.p);
        } else {
            std::string text;
            if (!read_file(config_path, text)) {
                std::cerr << "error: cannot read " << config_path << "\n";
                return exit_config;
            }
            s = trp_run_config(text.c_str(), out, &summary.p);
        }
        if (s != TRP_OK)
            return fail(s);
        log_summary(summary.p);
        return 0;
    }

    if (*sw) {
        std::string text;
        if (!read_file(sweep_config, text)) {
            std::cerr << "error: cannot read " << sweep_config << "\n";
            return exit_config;
        }
        std::vector<double> values;
        std::stringstream ss(values_text);
        for (std::string item; std::getline(ss, item, ',');) {
            try {
                std::size_t used = 0;
                values.push_back(std::stod(item, &used));
                if (item.find_first_not_of(" \t", used) != std::string::npos)
                    throw std::invalid_argument(item);
            } catch (const std::exception &) {
                std::cerr << "error: bad value '" << item << "' in --values\n";
                return exit_config;
            }
        }
        Owned table;
        const trp_status s =
            trp_sweep(text.c_str(), param.c_str(), values.data(), values.size(), sweep_out.c_str(), &table.p);
        if (s != TRP_OK)
            return fail(s);
        const auto j = nlohmann::json::parse(table.p);
        int failed = 0;
        for (const auto &row : j["rows"]) {
            if (row["kappa"].is_null()) {
                ++failed;
                std::cerr << "  " << row["value"].get<double>() << ": " << row["error"].get<std::string>() << "\n";
            } else {
                std::cerr << "  " << row["value"].get<double>() << ": kappa=" << row["kappa"].get<double>() << "\n";
            }
        }
        return failed == 0 ? 0 : exit_numeric;
    }

    if (*plist) {
        Owned names;
        if (const trp_status s = trp_preset_names(&names.p); s != TRP_OK)
            return fail(s);
        for (const auto &n : nlohmann::json::parse(names.p))
            std::cout << n.get<std::string>() << "\n";
        return 0;
    }

    if (*pshow) {
        Owned cfg;
        if (const trp_status s = trp_preset_show(show_name.c_str(), &cfg.p); s != TRP_OK)
            return fail(s);
        std::cout << cfg.p << "\n";
        return 0;
    }
    return 0;
}
