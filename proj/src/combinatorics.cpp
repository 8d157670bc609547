#include "cqa/combinatorics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

#include <boost/math/special_functions/gamma.hpp>

namespace cqa {
namespace {

constexpr int kMaxEnumerationLength = 24;

void require(bool ok, int L, int n) {
    if (!ok)
        throw Error(ErrorCode::OutOfRange,
                    "dimer count requested outside its range (L=" + std::to_string(L) + ", n=" + std::to_string(n) + ")");
}

DimerCount make(BigInt v) {
    const double lv = log_of(v);
    return {std::move(v), lv};
}

void place(int L, int n, bool ring, int next_site, int first_site, std::vector<int>& current,
           std::vector<std::vector<int>>& out) {
    if (static_cast<int>(current.size()) == n) {
        out.push_back(current);
        return;
    }
    for (int s = next_site; s <= L; ++s) {
        const int partner = s == L ? (ring ? 1 : 0) : s + 1;
        if (partner == 0) break;
        // The wraparound dimer (L,1) clashes with any dimer covering site 1.
        if (partner == 1 && first_site == 1) break;
        current.push_back(s);
        place(L, n, ring, s + 2, current.size() == 1 ? s : first_site, current, out);
        current.pop_back();
    }
}

}  // namespace

double log_of(const BigInt& x) {
    if (x == 0) return -std::numeric_limits<double>::infinity();
    const auto bits = static_cast<long>(boost::multiprecision::msb(x)) + 1;
    if (bits <= 1000) return std::log(x.convert_to<double>());
    const long drop = bits - 64;
    const BigInt top = x >> drop;
    return std::log(top.convert_to<double>()) + static_cast<double>(drop) * std::numbers::ln2;
}

BigInt binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return 0;
    k = std::min(k, n - k);
    BigInt r = 1;
    for (int i = 1; i <= k; ++i) {
        r *= n - k + i;
        r /= i;
    }
    return r;
}

DimerCount count_obc(int L, int n) {
    require(L >= 0 && n >= 0 && n <= L / 2, L, n);
    if (n == 0) return make(1);
    return make(binomial(L - n, n));
}

DimerCount count_pbc(int L, int n) {
    require(L >= 2 && n >= 0 && n <= L / 2, L, n);
    if (n == 0) return make(1);
    // (L/n) C(L-n-1, n-1); the division is exact. At even L, n = L/2 the
    // formula gives the two perfect tilings.
    BigInt v = binomial(L - n - 1, n - 1) * L;
    v /= n;
    return make(std::move(v));
}

DimerCount count_genfunc(int L, int n) {
    require(L >= 0 && n >= 0 && n <= L / 2, L, n);
    BigInt sum = 0;
    for (int k = n; k <= L / 2; ++k) sum += binomial(L + 1, 2 * k + 1) * binomial(k, k - n);
    const int shift = L - 2 * n;
    const BigInt mask = (BigInt(1) << shift) - 1;
    if ((sum & mask) != 0)
        throw Error(ErrorCode::DomainError, "generating-function sum is not divisible by the power of two");
    return make(sum >> shift);
}

double log_binomial(int n, int k) {
    if (k < 0 || n < 0 || k > n) return -std::numeric_limits<double>::infinity();
    if (k == 0 || k == n) return 0.0;
    using boost::math::lgamma;
    return lgamma(static_cast<double>(n) + 1.0) - lgamma(static_cast<double>(k) + 1.0) -
           lgamma(static_cast<double>(n - k) + 1.0);
}

double log_count(int L, int n, Boundary bc) {
    require(L >= 0 && n >= 0 && n <= L / 2, L, n);
    if (n == 0) return 0.0;
    if (bc == Boundary::Open) return log_binomial(L - n, n);
    return std::log(static_cast<double>(L) / n) + log_binomial(L - n - 1, n - 1);
}

std::vector<std::vector<int>> enumerate_dimers(int L, int n, Boundary bc) {
    if (L > kMaxEnumerationLength)
        throw Error(ErrorCode::TooLarge, "enumeration limited to L <= " + std::to_string(kMaxEnumerationLength));
    std::vector<std::vector<int>> out;
    if (L < 1 || n < 0) return out;
    std::vector<int> current;
    place(L, n, bc == Boundary::Periodic, 1, 0, current, out);
    return out;
}

}  // namespace cqa
