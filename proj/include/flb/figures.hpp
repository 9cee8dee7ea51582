#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace flb {

// Numeric CSV table. Cells print with "%.12g".
struct Table {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column(const std::string& name) const;
    void write_csv(std::ostream& os) const;
};

// Secret-key rates for the binary symmetric leakage with crossover q = 0.11.
// Columns carry their direction in the name; values are per symbol.
Table figure_srng_rate_vs_n(bool bits = false);
Table figure_srng_rate_vs_eps(int n, bool bits = false);
// Wire-tap BSC with p_Y = 0.1, p_Z = 0.2, eps = delta = 0.001.
Table figure_wiretap_bsc(bool bits = false);

const std::vector<std::string>& figure_names();
// Throws std::invalid_argument for an unknown name.
Table make_figure(const std::string& name, bool bits = false);

// Log-spaced integers from a to b (inclusive), deduplicated.
std::vector<int> geometric_grid(double a, double b, int points);

}  // namespace flb
