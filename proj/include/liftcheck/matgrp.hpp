#pragma once

#include <array>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "liftcheck/chainring.hpp"

namespace liftcheck {

// [[a, b], [c, d]] over a chain ring.
struct Mat2 {
    ChainRingElem a, b, c, d;

    static Mat2 identity(const ChainRing& r);
    static Mat2 from_ints(const ChainRing& r, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d);

    const ChainRing& ring() const { return a.ring(); }
    ChainRingElem det() const;
    ChainRingElem trace() const { return a + d; }
    bool is_invertible() const { return det().is_unit(); }
    Mat2 operator*(const Mat2& o) const;
    Mat2 inverse() const;
    Mat2 reduce(int m) const;
    Mat2 lift_to(const ChainRing& higher) const;
    friend bool operator==(const Mat2& x, const Mat2& y) {
        return x.a == y.a && x.b == y.b && x.c == y.c && x.d == y.d;
    }
    std::string str() const;
};

Mat2 elementary12(const ChainRingElem& b);
Mat2 elementary21(const ChainRingElem& c);
Mat2 diagonal(const ChainRingElem& x, const ChainRingElem& y);

using MatKey = std::uint64_t;  // four 16-bit entry indices, a most significant

// Addition and multiplication tables of a small chain ring, indexed by
// ChainRingElem::index(), with 2x2 matrices packed into MatKey.
class RingTable {
public:
    using Idx = std::uint16_t;
    static constexpr std::size_t kMaxSize = 1024;
    static constexpr Idx kNone = 0xFFFF;

    explicit RingTable(ChainRing r);

    const ChainRing& ring() const { return ring_; }
    std::size_t size() const { return n_; }
    Idx zero() const { return zero_; }
    Idx one() const { return one_; }
    Idx add(Idx a, Idx b) const { return add_[a * n_ + b]; }
    Idx mul(Idx a, Idx b) const { return mul_[a * n_ + b]; }
    Idx neg(Idx a) const { return neg_[a]; }
    Idx sub(Idx a, Idx b) const { return add(a, neg(b)); }
    Idx inv(Idx a) const { return inv_[a]; }  // kNone for non-units
    bool is_unit(Idx a) const { return inv_[a] != kNone; }
    ResidueField::Elem residue(Idx a) const { return residue_[a]; }
    Idx index(const ChainRingElem& x) const;
    const ChainRingElem& elem(Idx a) const { return elems_[a]; }

    static MatKey pack(Idx a, Idx b, Idx c, Idx d) {
        return (MatKey(a) << 48) | (MatKey(b) << 32) | (MatKey(c) << 16) | MatKey(d);
    }
    static std::array<Idx, 4> unpack(MatKey k) {
        return {Idx(k >> 48), Idx(k >> 32), Idx(k >> 16), Idx(k)};
    }
    MatKey key(const Mat2& m) const;
    Mat2 mat(MatKey k) const;
    MatKey identity() const { return pack(one_, zero_, zero_, one_); }
    MatKey mat_mul(MatKey x, MatKey y) const;
    Idx mat_det(MatKey x) const;
    MatKey mat_inv(MatKey x) const;  // throws PreconditionFailed for singular x

private:
    ChainRing ring_;
    std::size_t n_;
    Idx zero_, one_;
    std::vector<Idx> add_, mul_, neg_, inv_;
    std::vector<ResidueField::Elem> residue_;
    std::vector<ChainRingElem> elems_;
};

// LIFTCHECK_CLOSURE_CAP from the environment, else 10^6.
std::size_t default_closure_cap();

// Subgroup generated under right multiplication, in BFS order from the
// identity; element i (i > 0) is element(parent(i)) * generator(via(i)).
class FiniteMatGroup {
public:
    static FiniteMatGroup close(const std::vector<Mat2>& gens, std::size_t cap = default_closure_cap());
    static FiniteMatGroup close(std::shared_ptr<const RingTable> table, const std::vector<MatKey>& gens,
                                std::size_t cap = default_closure_cap());

    std::size_t order() const { return keys_.size(); }
    const ChainRing& ring() const { return table_->ring(); }
    const RingTable& table() const { return *table_; }
    const std::shared_ptr<const RingTable>& table_ptr() const { return table_; }
    std::size_t num_generators() const { return gens_.size(); }
    MatKey generator_key(std::size_t s) const { return gens_[s]; }
    Mat2 generator(std::size_t s) const { return table_->mat(gens_[s]); }
    std::vector<Mat2> generators() const;

    const std::vector<MatKey>& keys() const { return keys_; }
    Mat2 element(std::size_t i) const { return table_->mat(keys_[i]); }
    std::optional<std::size_t> find(MatKey k) const;
    bool contains(const Mat2& m) const;
    bool contains_key(MatKey k) const { return index_.count(k) > 0; }
    std::size_t parent(std::size_t i) const { return parent_[i]; }
    std::size_t via(std::size_t i) const { return via_[i]; }
    // Index of element(i) * generator(s).
    std::size_t successor(std::size_t i, std::size_t s) const { return succ_[i * gens_.size() + s]; }

private:
    std::shared_ptr<const RingTable> table_;
    std::vector<MatKey> gens_;
    std::vector<MatKey> keys_;
    std::unordered_map<MatKey, std::uint32_t> index_;
    std::vector<std::uint32_t> parent_, via_, succ_;
};

// Elementary matrices E12(b), E21(b) for additive generators b, and
// diag(u, 1/u) for u a lift of a generator of k*.
std::vector<Mat2> sl2_generators(const ChainRing& r);
// sl2_generators plus diag(u, 1) for u running over generators of R*.
std::vector<Mat2> gl2_generators(const ChainRing& r);
// |SL_2(k)| q^{3(n-1)} and |GL_2(k)| q^{4(n-1)} for R of length n.
std::uint64_t sl2_order(const ChainRing& r);
std::uint64_t gl2_order(const ChainRing& r);

// True iff G contains SL_2(R), decided by membership of sl2_generators.
bool is_full(const FiniteMatGroup& g);

struct BostonVerdict {
    bool applicable = false;       // mod m^2 image contains SL_2(R/m^2)
    bool contains_sl2 = false;
    std::size_t quotient_order = 0;  // order of the mod m^2 image
    std::size_t closure_order = 0;   // 0 when not computed
    std::uint64_t sl2_order = 0;
    std::string method;              // "enumerated" or "generators"
    std::optional<Mat2> counterexample;
};

// If the image mod m^2 is full, closes gens over R and checks SL_2(R) inside.
BostonVerdict boston_check(const std::vector<Mat2>& gens, std::size_t cap = default_closure_cap());

struct SectionOptions {
    bool try_ring_section = true;
    int presentation = 0;  // 0: {diag(z, 1), [[-1, 1], [-1, 0]]}; 1: {diag(z, 1) [[-1, 1], [-1, 0]], [[-1, 1], [-1, 0]]}
    std::uint64_t search_cap = 50'000'000;
};

struct SectionResult {
    bool split = false;
    std::string method;               // "ring-section" or "generator-lift"
    std::vector<Mat2> presentation;   // generators of GL_2(k)
    std::vector<Mat2> images;         // their lifts when split
    std::uint64_t pairs_checked = 0;  // homomorphism checks for a ring section
    std::uint64_t lifts_searched = 0;
    std::uint64_t section_order = 0;
};

// Section of GL_2(R) -> GL_2(k) for R of length 2; a completed search with
// split = false is a non-split certificate. Throws SearchExhausted past the cap.
SectionResult find_section(const ChainRing& r, const SectionOptions& opt = {});

// Order of m in its group; throws CapExceeded past limit.
std::uint64_t element_order(const RingTable& t, MatKey m, std::uint64_t limit = 1u << 24);

}  // namespace liftcheck
