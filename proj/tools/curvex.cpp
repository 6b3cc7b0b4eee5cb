#include <iostream>
#include <map>

#include <CLI11.hpp>

#include "curvex/cli.hpp"

int main(int argc, char** argv) {
    CLI::App app{"curvex: inflection and double tangent census for projective and constant-width curves"};
    curvex::RunConfig cfg;
    std::string mode = "sphere-census";
    std::map<std::string, curvex::Mode> modes;
    for (auto m : {curvex::Mode::SphereCensus, curvex::Mode::WidthCensus, curvex::Mode::Flexes, curvex::Mode::Axioms,
                   curvex::Mode::TheoremC, curvex::Mode::Truncate})
        modes[curvex::to_string(m)] = m;

    app.add_option("--input", cfg.input, "curve spec {x,y,z} or support spec {d,f} (JSON)")->required();
    app.add_option("--mode", mode, "sphere-census | width-census | flexes | axioms | theorem-c | truncate")
        ->check(CLI::IsMember(modes));
    app.add_option("--grid", cfg.grid, "sampling grid, a power of two in [256, 65536]");
    app.add_option("--eps-contact", cfg.eps_contact, "contact tolerance");
    app.add_option("--eps-root", cfg.eps_root, "root tolerance");
    app.add_option("--out-report", cfg.out_report, "JSON report path (stdout when omitted)");
    app.add_option("--out-csv", cfg.out_csv, "CSV samples path");
    app.add_option("--out-svg", cfg.out_svg, "SVG figure path");
    app.add_option("--truncate-n", cfg.truncate_n, "truncation order N for truncate mode (compares N and N+2)");
    app.set_version_flag("--version", curvex::kVersion);

    try {
        app.parse(argc, argv);
    } catch (const CLI::Success& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    cfg.mode = modes.at(mode);
    return curvex::run(cfg);
}
