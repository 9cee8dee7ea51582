#include <CLI11.hpp>
#include <iostream>

#include "flb/cli.hpp"
#include "flb/figures.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Finite-length bounds for secure randomness, hypothesis testing and channel coding"};
    app.require_subcommand(0, 1);

    std::string qfile;
    double qeps = 1e-3;
    auto* quantities = app.add_subcommand("quantities", "D, V, skewness, lattice span and F1..F5 per pair");
    quantities->add_option("file", qfile, "model file")->required();
    quantities->add_option("--eps", qeps, "error level for F1..F5")->check(CLI::Range(0.0, 1.0));

    std::string sfile;
    auto* sweep = app.add_subcommand("sweep", "evaluate bounds over an n/eps grid");
    sweep->add_option("spec", sfile, "sweep file")->required();

    std::string fname, fout;
    bool bits = false;
    auto* figure = app.add_subcommand("figure", "data for the standard figures");
    figure->add_option("name", fname, "figure name")->required()->check(CLI::IsMember(flb::figure_names()));
    figure->add_option("--out", fout, "output path (default: stdout)");
    figure->add_flag("--bits", bits, "rates in bits instead of nats");

    bool full = false;
    auto* verify = app.add_subcommand("verify", "run the oracle and convergence checks");
    verify->add_flag("--full", full, "include the n = 1e5 checks");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : flb::exit_parse;
    }

    if (*quantities) return flb::cmd_quantities(qfile, qeps, std::cout, std::cerr);
    if (*sweep) return flb::cmd_sweep(sfile, std::cout, std::cerr);
    if (*figure) return flb::cmd_figure(fname, fout, bits, std::cout, std::cerr);
    if (*verify) return flb::cmd_verify(full, std::cout);
    std::cout << app.help();
    return flb::exit_parse;
}
