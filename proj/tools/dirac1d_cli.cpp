// Command line front end: reads a key=value config, runs the requested
// mode, writes CSV to the configured output (stdout by default).
// Exit codes: 0 success, 1 config error, 2 all points failed numerically.

#include <fstream>
#include <iostream>

#include "dirac1d/cli.hpp"

namespace {

void usage(std::ostream& out) {
    out << "usage: dirac1d_cli <config-file>\n"
           "       dirac1d_cli -            (read config from stdin)\n"
           "\n"
           "Config is flat key=value with '#' comments. Keys:\n"
           "  mode = sweep|plateau|validate\n"
           "  mass, basis.lambda, basis.tau, basis.N, basis.K, basis.nbuf\n"
           "  energy.min, energy.max, energy.steps\n"
           "  potential.X, potential.{V,S,U}.{preset,height,width,center,file}\n"
           "  parity = auto|even|odd|none, output = <path>\n"
           "  plateau.{eps0,lambda_min,lambda_max,lambda_steps,tau_min,tau_max,\n"
           "           tau_steps,N_list,tolerance}\n"
           "  validate.{tol,margin}\n";
}

}  // namespace

int main(int argc, char** argv) {
    using namespace dirac1d;
    if (argc == 2 && (std::string(argv[1]) == "-h" || std::string(argv[1]) == "--help")) {
        usage(std::cout);
        return 0;
    }
    if (argc != 2) {
        usage(std::cerr);
        return 1;
    }

    cli::RunConfig cfg;
    try {
        std::string path = argv[1];
        if (path == "-") {
            cfg = cli::parse_config(std::cin);
        } else {
            std::ifstream f(path);
            if (!f) {
                std::cerr << "error: cannot open config file '" << path << "'\n";
                return 1;
            }
            cfg = cli::parse_config(f);
        }
        cli::resolve_and_check(cfg);
    } catch (const cli::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 1;
    }

    try {
        if (cfg.output.empty()) return cli::run(cfg, std::cout);
        std::ofstream out(cfg.output);
        if (!out) {
            std::cerr << "error: cannot open output file '" << cfg.output << "'\n";
            return 1;
        }
        return cli::run(cfg, out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
