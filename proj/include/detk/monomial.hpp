// Monomials in up to 8 variables, exponents packed one byte each into a
// uint64 (variable i lives in byte i). Exponents are capped at 127 so that
// products never carry across bytes; every operation that could exceed the
// cap throws instead of wrapping.
#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "detk/common.hpp"

namespace detk::rings {

inline constexpr int kMaxVars = 8;
inline constexpr std::uint64_t kHighBits = 0x8080808080808080ull;

struct Mono {
    std::uint64_t packed = 0;

    friend bool operator==(const Mono&, const Mono&) = default;

    int exponent(int var) const { return int((packed >> (8 * var)) & 0xff); }

    // Sum of all exponent bytes (valid while each byte < 128 and total < 256).
    int total_degree() const {
        return int((packed * 0x0101010101010101ull) >> 56);
    }
};

inline Mono mono_one() { return {0}; }

inline Mono mono_var(int var, int exp = 1) {
    require(var >= 0 && var < kMaxVars, "variable index out of range: ", var);
    require(exp >= 0 && exp < 128, "exponent out of range: ", exp);
    return {std::uint64_t(exp) << (8 * var)};
}

inline Mono mono_from_exponents(const std::vector<int>& exps) {
    require(int(exps.size()) <= kMaxVars, "too many variables: ", exps.size());
    std::uint64_t p = 0;
    for (std::size_t i = 0; i < exps.size(); ++i) {
        require(exps[i] >= 0 && exps[i] < 128, "exponent out of range: ", exps[i]);
        p |= std::uint64_t(exps[i]) << (8 * i);
    }
    return {p};
}

inline Mono mono_mul(Mono a, Mono b) {
    require(((a.packed | b.packed) & kHighBits) == 0, "monomial exponent overflow");
    return {a.packed + b.packed};
}

inline bool mono_divides(Mono a, Mono b) {  // a | b
    for (int i = 0; i < kMaxVars; ++i)
        if (a.exponent(i) > b.exponent(i)) return false;
    return true;
}

inline Mono mono_div(Mono b, Mono a) {  // b / a, requires a | b
    require(mono_divides(a, b), "monomial division is not exact");
    return {b.packed - a.packed};
}

// Graded reverse-lexicographic order: first by total degree; on ties the
// monomial with the larger exponent at the last differing variable is
// smaller. Returns a < b.
inline bool mono_grevlex_less(Mono a, Mono b, int nvars) {
    int da = a.total_degree(), db = b.total_degree();
    if (da != db) return da < db;
    for (int i = nvars - 1; i >= 0; --i) {
        int ea = a.exponent(i), eb = b.exponent(i);
        if (ea != eb) return ea > eb;
    }
    return false;
}

std::string mono_to_string(Mono m, const std::vector<std::string>& names);

// All monomials of total degree d in nvars variables, sorted grevlex
// descending (leading monomial first).
std::vector<Mono> monomials_of_degree(int nvars, int d);

}  // namespace detk::rings
