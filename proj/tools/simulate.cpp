#include <cstdlib>
#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "sirtax/sirtax.hpp"

namespace {

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw sirtax::ConfigError("cannot open config file: " + path);
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Finite-difference simulator for the susceptible-infected system "
                 "with repellent taxis"};

    std::string config_path;
    std::string mode_flag;
    std::string out_flag;
    std::vector<std::string> overrides;
    bool print_config = false;

    app.add_option("config", config_path, "path to the key-value config file")->required();
    app.add_option("--mode", mode_flag,
                   "run mode: single|figure1-pair|eps-continuation|positivity-1d|mms");
    app.add_option("--out", out_flag, "output directory (beats SIRTAX_OUT and the config)");
    app.add_option("--override", overrides, "config override as key=value (repeatable)");
    app.add_flag("--print-config", print_config, "print the effective config and exit");

    CLI11_PARSE(app, argc, argv);

    try {
        sirtax::RunConfig config = sirtax::parse_config(read_file(config_path));
        if (!mode_flag.empty()) overrides.push_back("mode=" + mode_flag);
        sirtax::apply_overrides(config, overrides);
        if (const char* env_out = std::getenv("SIRTAX_OUT"); env_out && *env_out)
            config.out_dir = env_out;
        if (!out_flag.empty()) config.out_dir = out_flag;
        sirtax::validate_config(config);

        if (print_config) {
            std::cout << sirtax::emit_config(config);
            return 0;
        }

        sirtax::run_mode(config);
        std::cout << "wrote " << config.out_dir << "/manifest.txt\n";
        return 0;
    } catch (const sirtax::ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "run failed: " << e.what() << '\n';
        return 3;
    }
}
