#include "coagfrag/config.hpp"

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

int main(int argc, char** argv)
{
    CLI::App app{"Coagulation-fragmentation engine with perturbed constant kernels"};
    std::string config_path;
    std::vector<std::string> overrides;
    std::string output_dir;
    bool print_config = false;
    app.add_option("config", config_path, "key = value configuration file")->required();
    app.add_option("-s,--set", overrides, "extra 'key=value' line, applied after the file");
    app.add_option("-o,--output-dir", output_dir, "override output_dir");
    app.add_flag("--print-config", print_config, "print the resolved configuration and exit");
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    std::ifstream in(config_path);
    if (!in) {
        std::cerr << "error: cannot read " << config_path << "\n";
        return 2;
    }
    std::stringstream text;
    text << in.rdbuf();
    // Later lines replace earlier ones, so strip overridden keys from the file text.
    std::string merged;
    {
        std::istringstream lines(text.str());
        std::string line;
        while (std::getline(lines, line)) {
            bool drop = false;
            const auto eq = line.find('=');
            if (eq != std::string::npos) {
                auto key = line.substr(0, eq);
                key.erase(0, key.find_first_not_of(" \t"));
                key.erase(key.find_last_not_of(" \t") + 1);
                for (auto o : overrides) {
                    o = o.substr(0, o.find('='));
                    o.erase(0, o.find_first_not_of(" \t"));
                    o.erase(o.find_last_not_of(" \t") + 1);
                    if (o == key) drop = true;
                }
                if (!output_dir.empty() && key == "output_dir") drop = true;
            }
            if (!drop) merged += line + "\n";
        }
    }
    for (const auto& o : overrides) merged += o + "\n";
    if (!output_dir.empty()) merged += "output_dir = " + output_dir + "\n";

    coagfrag::RunConfig cfg;
    try {
        cfg = coagfrag::parse_config(merged);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    if (print_config) {
        std::cout << coagfrag::render_config(cfg);
        return 0;
    }
    return coagfrag::run(cfg, std::cout);
}
