#include "liftcheck/matgrp.hpp"

#include <cstdlib>
#include <unordered_set>

namespace liftcheck {

Mat2 Mat2::identity(const ChainRing& r) { return {r.one(), r.zero(), r.zero(), r.one()}; }

Mat2 Mat2::from_ints(const ChainRing& r, std::int64_t a, std::int64_t b, std::int64_t c, std::int64_t d) {
    return {r.from_int(a), r.from_int(b), r.from_int(c), r.from_int(d)};
}

ChainRingElem Mat2::det() const { return a * d - b * c; }

Mat2 Mat2::operator*(const Mat2& o) const {
    return {a * o.a + b * o.c, a * o.b + b * o.d, c * o.a + d * o.c, c * o.b + d * o.d};
}

Mat2 Mat2::inverse() const {
    auto dt = det();
    if (!dt.is_unit()) throw PreconditionFailed("matrix is not invertible: " + str());
    auto di = dt.inverse();
    return {d * di, -b * di, -c * di, a * di};
}

Mat2 Mat2::reduce(int m) const { return {a.reduce(m), b.reduce(m), c.reduce(m), d.reduce(m)}; }

Mat2 Mat2::lift_to(const ChainRing& higher) const {
    return {a.lift_to(higher), b.lift_to(higher), c.lift_to(higher), d.lift_to(higher)};
}

std::string Mat2::str() const {
    return "[[" + a.str() + ", " + b.str() + "], [" + c.str() + ", " + d.str() + "]]";
}

Mat2 elementary12(const ChainRingElem& b) {
    const auto& r = b.ring();
    return {r.one(), b, r.zero(), r.one()};
}

Mat2 elementary21(const ChainRingElem& c) {
    const auto& r = c.ring();
    return {r.one(), r.zero(), c, r.one()};
}

Mat2 diagonal(const ChainRingElem& x, const ChainRingElem& y) {
    const auto& r = x.ring();
    return {x, r.zero(), r.zero(), y};
}

RingTable::RingTable(ChainRing r) : ring_(std::move(r)) {
    auto sz = ring_.size();
    if (sz > kMaxSize) throw CapExceeded("ring too large for index tables", static_cast<std::size_t>(sz));
    n_ = static_cast<std::size_t>(sz);
    elems_.reserve(n_);
    for (std::size_t i = 0; i < n_; ++i) elems_.push_back(ring_.element_at(i));
    add_.resize(n_ * n_);
    mul_.resize(n_ * n_);
    neg_.resize(n_);
    inv_.assign(n_, kNone);
    residue_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) {
        neg_[i] = static_cast<Idx>((-elems_[i]).index());
        residue_[i] = elems_[i].residue();
        for (std::size_t j = i; j < n_; ++j) {
            auto s = static_cast<Idx>((elems_[i] + elems_[j]).index());
            auto m = static_cast<Idx>((elems_[i] * elems_[j]).index());
            add_[i * n_ + j] = add_[j * n_ + i] = s;
            mul_[i * n_ + j] = mul_[j * n_ + i] = m;
        }
    }
    zero_ = static_cast<Idx>(ring_.zero().index());
    one_ = static_cast<Idx>(ring_.one().index());
    for (std::size_t i = 0; i < n_; ++i) {
        if (!elems_[i].is_unit()) continue;
        for (std::size_t j = 0; j < n_; ++j)
            if (mul_[i * n_ + j] == one_) {
                inv_[i] = static_cast<Idx>(j);
                break;
            }
    }
}

RingTable::Idx RingTable::index(const ChainRingElem& x) const {
    if (!(x.ring() == ring_)) throw PreconditionFailed("element of " + x.ring().describe() + " used with table of " +
                                                       ring_.describe());
    return static_cast<Idx>(x.index());
}

MatKey RingTable::key(const Mat2& m) const { return pack(index(m.a), index(m.b), index(m.c), index(m.d)); }

Mat2 RingTable::mat(MatKey k) const {
    auto e = unpack(k);
    return {elems_[e[0]], elems_[e[1]], elems_[e[2]], elems_[e[3]]};
}

MatKey RingTable::mat_mul(MatKey x, MatKey y) const {
    auto a = unpack(x), b = unpack(y);
    return pack(add(mul(a[0], b[0]), mul(a[1], b[2])), add(mul(a[0], b[1]), mul(a[1], b[3])),
                add(mul(a[2], b[0]), mul(a[3], b[2])), add(mul(a[2], b[1]), mul(a[3], b[3])));
}

RingTable::Idx RingTable::mat_det(MatKey x) const {
    auto a = unpack(x);
    return sub(mul(a[0], a[3]), mul(a[1], a[2]));
}

MatKey RingTable::mat_inv(MatKey x) const {
    auto di = inv(mat_det(x));
    if (di == kNone) throw PreconditionFailed("matrix is not invertible: " + mat(x).str());
    auto a = unpack(x);
    return pack(mul(a[3], di), neg(mul(a[1], di)), neg(mul(a[2], di)), mul(a[0], di));
}

std::size_t default_closure_cap() {
    if (const char* s = std::getenv("LIFTCHECK_CLOSURE_CAP")) {
        char* end = nullptr;
        auto v = std::strtoull(s, &end, 10);
        if (end != s && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
        throw ConfigError(std::string("LIFTCHECK_CLOSURE_CAP is not a positive integer: ") + s);
    }
    return 1'000'000;
}

FiniteMatGroup FiniteMatGroup::close(const std::vector<Mat2>& gens, std::size_t cap) {
    if (gens.empty()) throw PreconditionFailed("closure needs at least one generator");
    auto table = std::make_shared<const RingTable>(gens.front().ring());
    std::vector<MatKey> keys;
    for (const auto& g : gens) {
        if (!g.is_invertible()) throw PreconditionFailed("generator is not invertible: " + g.str());
        keys.push_back(table->key(g));
    }
    return close(std::move(table), keys, cap);
}

FiniteMatGroup FiniteMatGroup::close(std::shared_ptr<const RingTable> table, const std::vector<MatKey>& gens,
                                     std::size_t cap) {
    FiniteMatGroup g;
    g.table_ = std::move(table);
    g.gens_ = gens;
    for (auto k : gens)
        if (!g.table_->is_unit(g.table_->mat_det(k)))
            throw PreconditionFailed("generator is not invertible: " + g.table_->mat(k).str());
    auto ng = gens.size();
    g.keys_.push_back(g.table_->identity());
    g.index_.emplace(g.keys_[0], 0);
    g.parent_.push_back(0);
    g.via_.push_back(0);
    for (std::size_t i = 0; i < g.keys_.size(); ++i) {
        for (std::size_t s = 0; s < ng; ++s) {
            auto k = g.table_->mat_mul(g.keys_[i], gens[s]);
            auto [it, fresh] = g.index_.emplace(k, static_cast<std::uint32_t>(g.keys_.size()));
            if (fresh) {
                if (g.keys_.size() >= cap) throw CapExceeded("closure exceeded the element cap", g.keys_.size());
                g.keys_.push_back(k);
                g.parent_.push_back(static_cast<std::uint32_t>(i));
                g.via_.push_back(static_cast<std::uint32_t>(s));
            }
            g.succ_.push_back(it->second);
        }
    }
    return g;
}

std::vector<Mat2> FiniteMatGroup::generators() const {
    std::vector<Mat2> out;
    for (auto k : gens_) out.push_back(table_->mat(k));
    return out;
}

std::optional<std::size_t> FiniteMatGroup::find(MatKey k) const {
    auto it = index_.find(k);
    if (it == index_.end()) return std::nullopt;
    return it->second;
}

bool FiniteMatGroup::contains(const Mat2& m) const { return contains_key(table_->key(m)); }

std::vector<Mat2> sl2_generators(const ChainRing& r) {
    std::vector<Mat2> out;
    for (const auto& b : r.additive_generators()) {
        out.push_back(elementary12(b));
        out.push_back(elementary21(b));
    }
    auto u = r.lift_residue(r.residue_field()->generator());
    out.push_back(diagonal(u, u.inverse()));
    return out;
}

std::vector<Mat2> gl2_generators(const ChainRing& r) {
    auto out = sl2_generators(r);
    out.push_back(diagonal(r.lift_residue(r.residue_field()->generator()), r.one()));
    for (const auto& b : r.additive_generators())
        if (b.vpi() > 0) out.push_back(diagonal(r.one() + b, r.one()));
    return out;
}

std::uint64_t sl2_order(const ChainRing& r) {
    std::uint64_t q = r.residue_field()->q();
    std::uint64_t n = q * (q * q - 1);
    for (int i = 1; i < r.level(); ++i) n *= q * q * q;
    return n;
}

std::uint64_t gl2_order(const ChainRing& r) {
    std::uint64_t q = r.residue_field()->q();
    std::uint64_t n = (q * q - 1) * (q * q - q);
    for (int i = 1; i < r.level(); ++i) n *= q * q * q * q;
    return n;
}

bool is_full(const FiniteMatGroup& g) {
    for (const auto& m : sl2_generators(g.ring()))
        if (!g.contains(m)) return false;
    return true;
}

BostonVerdict boston_check(const std::vector<Mat2>& gens, std::size_t cap) {
    if (gens.empty()) throw PreconditionFailed("boston_check needs generators");
    const auto& r = gens.front().ring();
    if (r.p() < 3) throw PreconditionFailed("boston_check requires p >= 3");
    BostonVerdict v;
    v.sl2_order = sl2_order(r);
    if (r.level() <= 2) {
        auto g = FiniteMatGroup::close(gens, cap);
        v.quotient_order = v.closure_order = g.order();
        v.applicable = v.contains_sl2 = is_full(g);
        v.method = "generators";
        return v;
    }
    std::vector<Mat2> red;
    for (const auto& m : gens) red.push_back(m.reduce(2));
    auto q = FiniteMatGroup::close(red, cap);
    v.quotient_order = q.order();
    v.applicable = is_full(q);
    if (!v.applicable) return v;
    auto g = FiniteMatGroup::close(gens, cap);
    v.closure_order = g.order();
    v.contains_sl2 = true;
    for (const auto& m : sl2_generators(r))
        if (!g.contains(m)) {
            v.contains_sl2 = false;
            v.counterexample = m;
            break;
        }
    v.method = "generators";
    if (v.sl2_order <= cap) {
        const auto& t = g.table();
        std::uint64_t det_one = 0;
        for (auto k : g.keys()) det_one += t.mat_det(k) == t.one();
        bool enumerated = det_one == v.sl2_order;
        if (enumerated != v.contains_sl2)
            throw PreconditionFailed("generator membership and SL_2 count disagree");
        v.method = "enumerated";
    }
    return v;
}

std::uint64_t element_order(const RingTable& t, MatKey m, std::uint64_t limit) {
    auto id = t.identity();
    auto x = m;
    for (std::uint64_t n = 1; n <= limit; ++n) {
        if (x == id) return n;
        x = t.mat_mul(x, m);
    }
    throw CapExceeded("element order exceeds limit", static_cast<std::size_t>(limit));
}

namespace {

// Size of the generated subgroup, or 0 once it exceeds limit.
std::size_t bounded_closure(const RingTable& t, const std::vector<MatKey>& gens, std::size_t limit) {
    std::vector<MatKey> elems{t.identity()};
    std::unordered_set<MatKey> seen{elems[0]};
    for (std::size_t i = 0; i < elems.size(); ++i)
        for (auto s : gens) {
            auto k = t.mat_mul(elems[i], s);
            if (seen.insert(k).second) {
                if (elems.size() >= limit) return 0;
                elems.push_back(k);
            }
        }
    return elems.size();
}

std::vector<Mat2> presentation(const ChainRing& k, int which) {
    auto a = diagonal(k.lift_residue(k.residue_field()->generator()), k.one());
    auto b = Mat2::from_ints(k, -1, 1, -1, 0);
    if (which == 0) return {a, b};
    if (which == 1) return {a * b, b};
    throw ConfigError("unknown presentation " + std::to_string(which));
}

}  // namespace

SectionResult find_section(const ChainRing& r, const SectionOptions& opt) {
    if (r.level() != 2) throw PreconditionFailed("find_section needs a chain ring of length 2");
    auto k = r.at_level(1);
    auto tk = std::make_shared<const RingTable>(k);
    auto tr = std::make_shared<const RingTable>(r);
    auto glk = FiniteMatGroup::close(gl2_generators(k));
    SectionResult res;
    res.presentation = presentation(k, opt.presentation);
    std::vector<MatKey> pres_keys;
    for (const auto& m : res.presentation) pres_keys.push_back(tk->key(m));
    if (bounded_closure(*tk, pres_keys, glk.order()) != glk.order())
        throw PreconditionFailed("presentation does not generate GL_2(k)");

    auto red_idx = [&](RingTable::Idx i) { return tk->index(tr->elem(i).reduce(1)); };
    auto reduce_key = [&](MatKey m) {
        auto e = RingTable::unpack(m);
        return RingTable::pack(red_idx(e[0]), red_idx(e[1]), red_idx(e[2]), red_idx(e[3]));
    };

    if (opt.try_ring_section && r.from_int(r.p()).is_zero()) {
        std::vector<RingTable::Idx> s(tk->size());
        for (std::size_t i = 0; i < tk->size(); ++i)
            s[i] = tr->index(r.lift_residue(tk->elem(static_cast<RingTable::Idx>(i)).residue()));
        auto lift = [&](MatKey m) {
            auto e = RingTable::unpack(m);
            return RingTable::pack(s[e[0]], s[e[1]], s[e[2]], s[e[3]]);
        };
        bool hom = true;
        for (auto x : glk.keys()) {
            auto lx = lift(x);
            if (reduce_key(lx) != x) hom = false;
            for (auto y : glk.keys()) {
                ++res.pairs_checked;
                if (lift(tk->mat_mul(x, y)) != tr->mat_mul(lx, lift(y))) hom = false;
            }
        }
        if (hom) {
            res.split = true;
            res.method = "ring-section";
            for (auto m : pres_keys) res.images.push_back(tr->mat(lift(m)));
            res.section_order = glk.order();
            return res;
        }
        res.pairs_checked = 0;
    }

    res.method = "generator-lift";
    // Lifts of each presentation generator with the same order.
    std::vector<std::vector<RingTable::Idx>> by_residue(tk->size());
    for (std::size_t i = 0; i < tr->size(); ++i) by_residue[red_idx(static_cast<RingTable::Idx>(i))].push_back(
        static_cast<RingTable::Idx>(i));
    std::vector<std::vector<MatKey>> lifts;
    std::uint64_t space = 1;
    for (auto m : pres_keys) {
        auto ord = element_order(*tk, m);
        auto e = RingTable::unpack(m);
        std::vector<MatKey> ls;
        for (auto a : by_residue[e[0]])
            for (auto b : by_residue[e[1]])
                for (auto c : by_residue[e[2]])
                    for (auto d : by_residue[e[3]]) {
                        auto l = RingTable::pack(a, b, c, d);
                        if (element_order(*tr, l) == ord) ls.push_back(l);
                    }
        space *= ls.size();
        lifts.push_back(std::move(ls));
    }
    if (space > opt.search_cap) throw SearchExhausted("lift search space " + std::to_string(space) + " exceeds cap");
    std::vector<std::size_t> pos(lifts.size(), 0);
    std::vector<MatKey> cand(lifts.size());
    if (space == 0) return res;
    while (true) {
        for (std::size_t i = 0; i < lifts.size(); ++i) cand[i] = lifts[i][pos[i]];
        ++res.lifts_searched;
        if (bounded_closure(*tr, cand, glk.order()) == glk.order()) {
            auto h = FiniteMatGroup::close(tr, cand);
            std::unordered_set<MatKey> images;
            for (auto x : h.keys()) images.insert(reduce_key(x));
            if (images.size() == glk.order()) {
                res.split = true;
                for (auto c : cand) res.images.push_back(tr->mat(c));
                res.section_order = h.order();
                return res;
            }
        }
        std::size_t i = 0;
        while (i < pos.size() && ++pos[i] == lifts[i].size()) pos[i++] = 0;
        if (i == pos.size()) break;
    }
    return res;
}

}  // namespace liftcheck
