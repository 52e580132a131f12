// Shared plumbing: error type, checked 64-bit arithmetic, small combinatorial
// helpers used across the toolkit. Everything here is deliberately boring.
#pragma once

#include <cstdint>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace detk {

// All toolkit failures (bad input, overflow, violated invariant) throw this.
struct Error : std::runtime_error {
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

// Build an error message from stream-able pieces.
template <class... Parts>
[[noreturn]] void fail(const Parts&... parts) {
    std::ostringstream os;
    (os << ... << parts);
    throw Error(os.str());
}

template <class... Parts>
void require(bool cond, const Parts&... parts) {
    if (!cond) fail(parts...);
}

// ---- checked 64-bit arithmetic (exactness over convenience: overflow throws) ----

inline std::int64_t checked_add(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_add_overflow(a, b, &r)) fail("integer overflow in add: ", a, " + ", b);
    return r;
}

inline std::int64_t checked_mul(std::int64_t a, std::int64_t b) {
    std::int64_t r;
    if (__builtin_mul_overflow(a, b, &r)) fail("integer overflow in mul: ", a, " * ", b);
    return r;
}

inline std::int64_t gcd64(std::int64_t a, std::int64_t b) {
    if (a < 0) a = -a;
    if (b < 0) b = -b;
    while (b) {
        std::int64_t t = a % b;
        a = b;
        b = t;
    }
    return a;
}

// binomial(n, k) as int64, throwing on overflow; binomial(n<0 or k<0) = 0.
inline std::int64_t binomial(std::int64_t n, std::int64_t k) {
    if (k < 0 || n < 0 || k > n) return 0;
    if (k > n - k) k = n - k;
    std::int64_t r = 1;
    for (std::int64_t i = 1; i <= k; ++i) {
        r = checked_mul(r, n - k + i);
        r /= i;  // exact: product of i consecutive integers is divisible by i!
    }
    return r;
}

// join(v, ",") -> "a,b,c" using operator<<.
template <class T>
std::string join(const std::vector<T>& v, const std::string& sep) {
    std::ostringstream os;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (i) os << sep;
        os << v[i];
    }
    return os.str();
}

}  // namespace detk
