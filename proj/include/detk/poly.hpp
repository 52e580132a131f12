// Homogeneous polynomials over an exact coefficient field, in a graded ring
// R = k[x_0..x_n] ordered by grevlex. Zero is the only inhomogeneous value;
// constructing a polynomial from mixed-degree terms throws.
#pragma once

#include <cstdint>
#include <memory>
#include <mutex>
#include <random>
#include <string>
#include <unordered_map>
#include <vector>

#include "detk/field.hpp"
#include "detk/monomial.hpp"

namespace detk::rings {

class PolyRing;
using RingPtr = std::shared_ptr<const PolyRing>;

// k[x_0..x_{nvars-1}] with a per-degree monomial basis cache. Rings are
// created once (make_poly_ring) and shared by handle.
class PolyRing : public std::enable_shared_from_this<PolyRing> {
  public:
    PolyRing(int nvars, CoeffField field, std::vector<std::string> names);

    int nvars() const { return nvars_; }
    const CoeffField& field() const { return field_; }
    const std::vector<std::string>& var_names() const { return names_; }

    // dim_k R_d = binomial(d + nvars - 1, nvars - 1).
    std::int64_t dim_of_degree(int d) const;

    // Monomial basis of R_d, grevlex descending; cached. Stable reference.
    const std::vector<Mono>& basis_of_degree(int d) const;
    // Position of m inside basis_of_degree(deg m); throws if absent.
    int index_in_degree(Mono m) const;

  private:
    int nvars_;
    CoeffField field_;
    std::vector<std::string> names_;

    mutable std::mutex cache_mutex_;
    mutable std::vector<std::unique_ptr<std::vector<Mono>>> basis_cache_;
    mutable std::vector<std::unique_ptr<std::unordered_map<std::uint64_t, int>>> index_cache_;
};

RingPtr make_poly_ring(int nvars, const CoeffField& field);
RingPtr make_poly_ring(int nvars, const CoeffField& field, std::vector<std::string> names);

struct Term {
    Mono mono;
    FieldElem coeff;
};

class Polynomial {
  public:
    Polynomial() = default;  // zero over no ring; usable only via assignment
    explicit Polynomial(RingPtr ring) : ring_(std::move(ring)) {}  // zero
    // Terms in any order, duplicates merged; all monomials must share one
    // total degree or the constructor throws.
    Polynomial(RingPtr ring, std::vector<Term> terms);

    static Polynomial constant(RingPtr ring, const FieldElem& c);
    static Polynomial variable(RingPtr ring, int var);
    static Polynomial monomial(RingPtr ring, Mono m, const FieldElem& c);

    const RingPtr& ring() const { return ring_; }
    bool is_zero() const { return terms_.empty(); }
    // Degree of a nonzero homogeneous polynomial; throws on zero.
    int degree() const;
    // Degree if nonzero, else fallback (zero is homogeneous of every degree).
    int degree_or(int fallback) const { return terms_.empty() ? fallback : degree(); }
    const std::vector<Term>& terms() const { return terms_; }
    const Term& leading_term() const;

    bool is_constant() const { return terms_.size() == 1 && terms_[0].mono == mono_one(); }

    Polynomial operator+(const Polynomial& o) const;
    Polynomial operator-(const Polynomial& o) const;
    Polynomial operator-() const;
    Polynomial operator*(const Polynomial& o) const;
    Polynomial scaled(const FieldElem& c) const;
    Polynomial times_monomial(Mono m) const;

    bool equals(const Polynomial& o) const;

    FieldElem eval(const std::vector<FieldElem>& point) const;

    // Substitute each variable by the given polynomials (in a possibly
    // different ring); images must be homogeneous of one common degree.
    Polynomial substitute(const RingPtr& target, const std::vector<Polynomial>& images) const;

    std::string to_string() const;

  private:
    void normalize(std::vector<Term> raw);

    RingPtr ring_;
    std::vector<Term> terms_;  // grevlex descending, nonzero coefficients
};

// Dense random form of degree d: every monomial gets a coefficient drawn
// uniformly from the field (F_p: uniform in [0,p); Q: uniform integer in
// [-20, 20]). Deterministic in the rng state.
Polynomial random_form(const RingPtr& ring, int d, std::mt19937_64& rng);

// Seeded entry point: requires d >= 1 and a prime field.
Polynomial random_form(const RingPtr& ring, int d, std::uint64_t seed);

// Parse "x0^2 - 3*x1*x2" / "x0*x1+2/3*x2^2" (integer or a/b coefficients,
// '*' products, '^' powers, variable names from the ring). Whitespace is
// ignored. Throws on syntax errors or unknown variables.
Polynomial parse_polynomial(const RingPtr& ring, const std::string& text);

}  // namespace detk::rings
