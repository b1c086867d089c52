#include <fstream>
#include <iostream>

#include "cli.hpp"

int main(int argc, char** argv) {
    using namespace nkspin::cli;
    RunConfig cfg;
    try {
        cfg = parse_args(argc, argv);
    } catch (const HelpRequested& e) {
        std::cout << e.what() << '\n';
        return kPass;
    } catch (const UsageError& e) {
        std::cerr << "usage error: " << e.what() << '\n';
        return kUsage;
    }
    const ReportDocument doc = run(cfg);
    for (const auto& w : doc.json.value("warnings", nlohmann::json::array())) std::cerr << w.get<std::string>() << '\n';
    if (doc.json.contains("error")) std::cerr << "error: " << doc.json["error"]["message"].get<std::string>() << '\n';

    const std::string text = doc.json.dump(2) + "\n";
    if (cfg.out == "-") {
        std::cout << text;
    } else {
        std::ofstream out(cfg.out, std::ios::binary);
        if (!out) {
            std::cerr << "error: cannot write " << cfg.out << '\n';
            return kUsage;
        }
        out << text;
    }
    return doc.exit_code;
}
