#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "flb/textio.hpp"

namespace flb {

inline constexpr int exit_ok = 0;
inline constexpr int exit_error = 1;
inline constexpr int exit_parse = 2;
inline constexpr int exit_verify = 3;

// Sweep description, one "key values..." statement per line:
//
//   task srng | ht | source | source-side | channel | wiretap | bpsk | correlated
//   params model.txt        relative to the sweep file
//   use NAME [NAME]         objects from the model (defaults: first pair / wiretap / bpsk)
//   n 100 1000              explicit block lengths, may repeat
//   n-geom 100 100000 30    log-spaced block lengths
//   eps 0.001 0.01
//   delta 0.001             wire-tap style tasks only
//   bounds exact expansion legacy second-order
//   out result.csv          default: standard output
//   bits
struct SweepSpec {
    std::string task;
    std::string params;
    std::vector<std::string> use;
    std::vector<int> n;
    std::vector<double> eps, delta;
    std::vector<std::string> bounds;
    std::string out;
    bool bits = false;
};

SweepSpec parse_sweep(std::istream& in, const std::string& source, const std::string& base_dir = "");
SweepSpec parse_sweep_file(const std::string& path);

// Rows: task,bound,kind,n,eps,delta,value_nats|value_bits,a1,a2,a3,a4
void run_sweep(const SweepSpec& spec, const Model& model, std::ostream& out);

// Columns: name,eps,D,V,kappa,span,F1..F5
void write_quantities(const Model& model, double eps, std::ostream& out);

int cmd_quantities(const std::string& file, double eps, std::ostream& out, std::ostream& err);
int cmd_sweep(const std::string& file, std::ostream& out, std::ostream& err);
int cmd_figure(const std::string& name, const std::string& out_path, bool bits, std::ostream& out,
               std::ostream& err);
int cmd_verify(bool full, std::ostream& out);

}  // namespace flb
