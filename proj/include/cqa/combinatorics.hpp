#pragma once

#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "cqa/core.hpp"

namespace cqa {

using BigInt = boost::multiprecision::cpp_int;

struct DimerCount {
    BigInt value;
    double log_value;  // -inf when value == 0
};

// Natural log of a non-negative big integer, accurate to a few ulp.
double log_of(const BigInt& x);

BigInt binomial(int n, int k);

// Placements of n non-overlapping nearest-neighbour dimers.
DimerCount count_obc(int L, int n);
DimerCount count_pbc(int L, int n);
// Same count as count_obc, via the transfer-matrix generating function.
DimerCount count_genfunc(int L, int n);

// Floating-point logs of the same counts for sizes where big integers are
// wasteful. Binomials go through log-gamma.
double log_binomial(int n, int k);
double log_count(int L, int n, Boundary bc);

// Brute force: every placement as the sorted 1-based left endpoints.
// On a ring, a dimer starting at site L covers (L, 1).
std::vector<std::vector<int>> enumerate_dimers(int L, int n, Boundary bc);

}  // namespace cqa
