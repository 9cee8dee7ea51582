#pragma once

// Convolution kernels behind convolve_iid. Each kernel has a serial
// reference version and an OpenMP version that must agree exactly.

#include <cstddef>
#include <vector>

namespace flb::kernels {

// c[k] = sum_i a[i] b[k - i]. Inputs are scaled masses (max entry 1), kept in
// long double for its wider exponent range.
std::vector<long double> grid_convolve_serial(const std::vector<long double>& a,
                                              const std::vector<long double>& b);
std::vector<long double> grid_convolve_omp(const std::vector<long double>& a,
                                           const std::vector<long double>& b);

// All multinomial types of n draws from the atoms (t_i, log p_i). Emits
// t = sum n_i t_i and log of the multinomial mass, grouped by the count of
// the first atom.
struct TypeList {
    std::vector<double> t;
    std::vector<double> log_p;
};
TypeList enumerate_types_serial(const std::vector<double>& t, const std::vector<double>& log_p,
                                int n);
TypeList enumerate_types_omp(const std::vector<double>& t, const std::vector<double>& log_p,
                             int n);

// Number of multinomial types, as a double to survive overflow.
double type_count(std::size_t atoms, int n);

// All pairwise sums (t_a + t_b, log p_a + log p_b), row-major in a.
TypeList pair_sums_serial(const std::vector<double>& ta, const std::vector<double>& la,
                          const std::vector<double>& tb, const std::vector<double>& lb);
TypeList pair_sums_omp(const std::vector<double>& ta, const std::vector<double>& la,
                       const std::vector<double>& tb, const std::vector<double>& lb);

}  // namespace flb::kernels
