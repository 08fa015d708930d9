#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <string>
#include <vector>

#include "liftcheck/errors.hpp"
#include "liftcheck/rational.hpp"

namespace liftcheck {

// F_{p^f} = F_p[t]/(modulus). Elements are indexed 0..q-1 by the base-p digits
// of their coefficient vectors (constant term least significant).
class ResidueField {
public:
    using Elem = std::uint32_t;

    ResidueField(int p, std::vector<int> modulus);
    static ResidueField prime_field(int p);
    // First monic irreducible of degree f in lexicographic coefficient order.
    static ResidueField standard(int p, int f);

    int p() const { return p_; }
    int f() const { return f_; }
    std::uint32_t q() const { return q_; }
    const std::vector<int>& modulus() const { return modulus_; }

    Elem from_int(std::int64_t v) const;
    Elem from_coeffs(std::span<const std::int64_t> c) const;
    std::vector<int> coeffs(Elem a) const;

    Elem add(Elem a, Elem b) const;
    Elem sub(Elem a, Elem b) const;
    Elem neg(Elem a) const;
    Elem mul(Elem a, Elem b) const;
    Elem inv(Elem a) const;
    Elem pow(Elem a, std::uint64_t n) const;
    Elem generator() const { return generator_; }
    bool is_square(Elem a) const;

    friend bool operator==(const ResidueField& a, const ResidueField& b) {
        return a.p_ == b.p_ && a.modulus_ == b.modulus_;
    }

private:
    int p_;
    int f_;
    std::uint32_t q_;
    std::vector<int> modulus_;
    std::vector<std::uint32_t> pow_p_;
    Elem generator_ = 1;
    std::vector<Elem> exp_;
    std::vector<std::uint32_t> log_;
};

using FieldPtr = std::shared_ptr<const ResidueField>;

struct PrimeFieldSpec {
    int p = 3;
    int f = 1;
    std::vector<int> modulus;  // empty selects ResidueField::standard(p, f)

    FieldPtr build() const;
};

// Element of W(F_{p^f}) known modulo p^N. W(F_{p^f}) is modelled as
// Z_p[t]/(M(t)) with M the integer lift of the field modulus, so a value is f
// integers in [0, p^N).
class WittScalar {
public:
    WittScalar(FieldPtr k, std::vector<std::int64_t> coords, int precision);
    static WittScalar from_int(FieldPtr k, std::int64_t v, int precision);
    static WittScalar zero(FieldPtr k, int precision) { return from_int(std::move(k), 0, precision); }
    static WittScalar one(FieldPtr k, int precision) { return from_int(std::move(k), 1, precision); }
    // Canonical lift with digits in [0, p) of a residue element.
    static WittScalar lift(FieldPtr k, ResidueField::Elem a, int precision);

    const ResidueField& field() const { return *k_; }
    const FieldPtr& field_ptr() const { return k_; }
    int precision() const { return n_; }
    const std::vector<std::int64_t>& coords() const { return c_; }
    // Base-p digit layers: digits()[j][i] is the p^i digit of coordinate t^j.
    std::vector<std::vector<int>> digits() const;

    // Finite v_p, or at_least(N) when every known digit vanishes.
    Valuation valuation() const;
    int valuation_or_precision() const;
    bool is_zero() const;
    bool is_unit() const;
    ResidueField::Elem residue() const;

    WittScalar operator+(const WittScalar& o) const;
    WittScalar operator-(const WittScalar& o) const;
    WittScalar operator*(const WittScalar& o) const;
    WittScalar operator-() const;
    WittScalar& operator+=(const WittScalar& o) { return *this = *this + o; }
    WittScalar& operator-=(const WittScalar& o) { return *this = *this - o; }
    WittScalar& operator*=(const WittScalar& o) { return *this = *this * o; }
    WittScalar pow(std::uint64_t n) const;
    WittScalar inverse() const;

    // Exact quotient x / p known to out_precision digits. Throws
    // PrecisionExhausted when out_precision exceeds what the input determines,
    // and PreconditionFailed when p does not divide x.
    WittScalar div_p(int out_precision) const;
    WittScalar with_precision(int m) const;
    WittScalar times_p_pow(int v) const;

    bool congruent(const WittScalar& o, int m) const;
    friend bool operator==(const WittScalar& a, const WittScalar& b);

    std::string str() const;

private:
    FieldPtr k_;
    std::vector<std::int64_t> c_;
    int n_;
};

// Lift of a nonzero residue element to the root of unity of order dividing
// q - 1, by iterating x -> x^q to a fixed point.
WittScalar teichmuller(const FieldPtr& k, ResidueField::Elem a, int precision);

// Monic degree-e polynomial over W whose lower coefficients lie in pW and
// whose constant term has valuation exactly one.
class EisensteinPoly {
public:
    explicit EisensteinPoly(std::vector<WittScalar> coeffs);
    static EisensteinPoly from_ints(const FieldPtr& k, const std::vector<std::int64_t>& coeffs, int precision);

    int degree() const { return static_cast<int>(c_.size()) - 1; }
    const std::vector<WittScalar>& coeffs() const { return c_; }
    int precision() const;
    const FieldPtr& field_ptr() const { return c_.front().field_ptr(); }

private:
    std::vector<WittScalar> c_;
};

class ChainRingElem;

namespace detail {
struct ChainRingImpl;
}

// O/(pi^n) for O = W[X]/(g), g Eisenstein of degree e. Elements are e
// coordinates in the basis 1, pi, ..., pi^{e-1}; with n = a e + r, coordinate
// i is reduced mod p^{a+1} for i < r and mod p^a otherwise.
class ChainRing {
public:
    int p() const;
    int f() const;
    int e() const;
    int level() const;
    int witt_precision() const;
    // |R| = q^n; throws CapExceeded if it does not fit in 64 bits.
    std::uint64_t size() const;
    const FieldPtr& residue_field() const;
    const EisensteinPoly& eisenstein() const;
    ChainRing at_level(int m) const;

    ChainRingElem zero() const;
    ChainRingElem one() const;
    ChainRingElem pi() const;
    ChainRingElem from_int(std::int64_t v) const;
    ChainRingElem from_witt(const WittScalar& w) const;
    ChainRingElem from_coords(std::vector<std::int64_t> coords) const;
    ChainRingElem lift_residue(ResidueField::Elem a) const;
    ChainRingElem element_at(std::uint64_t index) const;
    // Additive generators t^j pi^i of the ring.
    std::vector<ChainRingElem> additive_generators() const;

    friend bool operator==(const ChainRing& a, const ChainRing& b);
    std::string describe() const;

    const detail::ChainRingImpl& impl() const { return *impl_; }

private:
    friend ChainRing make_extension(const PrimeFieldSpec&, const EisensteinPoly&, int);
    friend ChainRing make_extension(const FieldPtr&, const EisensteinPoly&, int);
    explicit ChainRing(std::shared_ptr<const detail::ChainRingImpl> impl) : impl_(std::move(impl)) {}
    std::shared_ptr<const detail::ChainRingImpl> impl_;
};

ChainRing make_extension(const PrimeFieldSpec& spec, const EisensteinPoly& g, int n);
ChainRing make_extension(const FieldPtr& k, const EisensteinPoly& g, int n);
// F_{p^f}[U]/(U^len), realised as O/(pi^len) with g = X^len - p.
ChainRing truncated_polynomial_ring(const FieldPtr& k, int len);
// W(F_{p^f})/(p^n), the unramified chain ring.
ChainRing witt_quotient(const FieldPtr& k, int n);

class ChainRingElem {
public:
    ChainRingElem(ChainRing ring, std::vector<std::int64_t> coords);

    const ChainRing& ring() const { return ring_; }
    const std::vector<std::int64_t>& coords() const { return c_; }

    // Normalised so that val(p) = 1; infinite exactly for the zero element.
    Valuation val() const;
    // Valuation in units of 1/e; level() for zero.
    int vpi() const;
    bool is_zero() const;
    bool is_unit() const;
    ResidueField::Elem residue() const;
    std::uint64_t index() const;

    ChainRingElem operator+(const ChainRingElem& o) const;
    ChainRingElem operator-(const ChainRingElem& o) const;
    ChainRingElem operator*(const ChainRingElem& o) const;
    ChainRingElem operator-() const;
    ChainRingElem& operator+=(const ChainRingElem& o) { return *this = *this + o; }
    ChainRingElem& operator-=(const ChainRingElem& o) { return *this = *this - o; }
    ChainRingElem& operator*=(const ChainRingElem& o) { return *this = *this * o; }
    ChainRingElem pow(std::uint64_t n) const;
    ChainRingElem inverse() const;

    ChainRingElem reduce(int m) const;
    ChainRingElem lift_to(const ChainRing& higher) const;
    // y with pi * y = x, determined in O/(pi^{n-1}).
    ChainRingElem div_pi() const;

    friend bool operator==(const ChainRingElem& a, const ChainRingElem& b);
    std::string str() const;

private:
    ChainRing ring_;
    std::vector<std::int64_t> c_;
};

}  // namespace liftcheck
