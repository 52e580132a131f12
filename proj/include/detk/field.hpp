// Exact coefficient fields: F_p for a 32-bit prime p, and Q with checked
// 64-bit numerator/denominator. One runtime-tagged field handle (CoeffField)
// owns the arithmetic; elements are plain value types with no back-pointer.
//
// F_p elements are stored as num in [0, p), den == 1.
// Q elements are stored reduced, den > 0.
#pragma once

#include <cstdint>
#include <string>

#include "detk/common.hpp"

namespace detk::rings {

enum class FieldKind { prime, rationals };

struct FieldElem {
    std::int64_t num = 0;
    std::int64_t den = 1;

    friend bool operator==(const FieldElem&, const FieldElem&) = default;
};

class CoeffField {
  public:
    // p must be an odd prime < 2^31 (default elsewhere: 32003).
    static CoeffField prime(std::uint32_t p);
    static CoeffField rationals();

    FieldKind kind() const { return kind_; }
    std::uint32_t characteristic() const { return kind_ == FieldKind::prime ? p_ : 0; }

    FieldElem zero() const { return {0, 1}; }
    FieldElem one() const { return {1, 1}; }
    FieldElem from_int(std::int64_t n) const;
    // Reduced fraction n/d; for F_p this is n * d^{-1}.
    FieldElem from_fraction(std::int64_t n, std::int64_t d) const;

    bool is_zero(const FieldElem& a) const { return a.num == 0; }

    FieldElem add(const FieldElem& a, const FieldElem& b) const;
    FieldElem sub(const FieldElem& a, const FieldElem& b) const;
    FieldElem mul(const FieldElem& a, const FieldElem& b) const;
    FieldElem div(const FieldElem& a, const FieldElem& b) const;
    FieldElem neg(const FieldElem& a) const;
    FieldElem inv(const FieldElem& a) const;

    // F_p <-> raw uint32 bridges for the fast linear-algebra path.
    std::uint32_t to_raw(const FieldElem& a) const;
    FieldElem from_raw(std::uint32_t r) const;

    // Prints "3", "-2", "5/7"; F_p values print balanced in (-p/2, p/2].
    std::string to_string(const FieldElem& a) const;

    friend bool operator==(const CoeffField&, const CoeffField&) = default;

  private:
    CoeffField(FieldKind k, std::uint32_t p) : kind_(k), p_(p) {}

    FieldKind kind_;
    std::uint32_t p_;
};

// Deterministic Miller-Rabin, valid for all 32-bit inputs.
bool is_prime_u32(std::uint32_t n);

}  // namespace detk::rings
