#include "padic/val.hpp"

#include <sstream>
#include <stdexcept>

namespace padic {

ExtVal::ExtVal(const Int& num, const Int& den) : tag_(Tag::finite) {
    if (den == 0) throw std::invalid_argument("ExtVal: zero denominator");
    q_ = Rat(num, den);
}

const Rat& ExtVal::finite() const {
    if (tag_ != Tag::finite) throw std::invalid_argument("ExtVal: infinite value has no finite part");
    return q_;
}

bool ExtVal::operator==(const ExtVal& o) const {
    if (tag_ != o.tag_) return false;
    return tag_ != Tag::finite || q_ == o.q_;
}

bool ExtVal::operator<(const ExtVal& o) const {
    if (tag_ == Tag::neg_inf) return o.tag_ != Tag::neg_inf;
    if (tag_ == Tag::pos_inf) return false;
    if (o.tag_ == Tag::pos_inf) return true;
    if (o.tag_ == Tag::neg_inf) return false;
    return q_ < o.q_;
}

ExtVal ExtVal::operator+(const ExtVal& o) const {
    if (is_pos_inf()) {
        if (o.is_neg_inf()) throw std::invalid_argument("ExtVal: inf + (-inf) undefined");
        return pos_inf();
    }
    if (is_neg_inf()) {
        if (o.is_pos_inf()) throw std::invalid_argument("ExtVal: (-inf) + inf undefined");
        return neg_inf();
    }
    if (o.is_infinite()) return o;
    return ExtVal(Rat(q_ + o.q_));
}

ExtVal ExtVal::operator-(const ExtVal& o) const {
    // Truncated subtraction: total, with inf - inf = 0 (precision convention).
    if (tag_ == o.tag_ && tag_ != Tag::finite) return ExtVal(0);
    if (is_pos_inf()) return pos_inf();
    if (is_neg_inf()) return neg_inf();
    if (o.is_pos_inf()) return neg_inf();
    if (o.is_neg_inf()) return pos_inf();
    return ExtVal(Rat(q_ - o.q_));
}

ExtVal ExtVal::operator-() const {
    if (is_pos_inf()) return neg_inf();
    if (is_neg_inf()) return pos_inf();
    return ExtVal(Rat(-q_));
}

ExtVal ExtVal::scale(const Rat& q) const {
    if (q == 0) {
        if (is_infinite()) throw std::invalid_argument("ExtVal: 0 * infinity undefined");
        return ExtVal(0);
    }
    if (is_finite()) return ExtVal(Rat(q_ * q));
    bool flip = q < 0;
    if (is_pos_inf()) return flip ? neg_inf() : pos_inf();
    return flip ? pos_inf() : neg_inf();
}

std::string ExtVal::str() const {
    if (is_pos_inf()) return "inf";
    if (is_neg_inf()) return "-inf";
    std::ostringstream os;
    os << numerator(q_);
    if (denominator(q_) != 1) os << "/" << denominator(q_);
    return os.str();
}

ExtVal meet(const ExtVal& a, const ExtVal& b) { return a < b ? a : b; }
ExtVal join(const ExtVal& a, const ExtVal& b) { return a < b ? b : a; }

ExtVal vdiff(const ExtVal& a, const ExtVal& b) { return a > b ? a : ExtVal::neg_inf(); }

// ---------------------------------------------------------------------------
// AggVal

AggVal AggVal::poly(ExtVal dflt) {
    AggVal a;
    a.shape_ = Shape::poly;
    a.rank_ = 1;
    a.dflt_ = dflt;
    return a;
}

AggVal AggVal::mpoly(std::size_t rank, ExtVal dflt) {
    if (rank == 0) throw std::invalid_argument("AggVal: mpoly rank must be positive");
    AggVal a;
    a.shape_ = Shape::mpoly;
    a.rank_ = rank;
    a.dflt_ = dflt;
    return a;
}

AggVal AggVal::tuple(std::vector<ExtVal> entries) {
    AggVal a;
    a.shape_ = Shape::tuple;
    a.rank_ = 1;
    a.tuple_size_ = entries.size();
    for (std::size_t i = 0; i < entries.size(); ++i)
        a.entries_[{static_cast<std::uint32_t>(i)}] = entries[i];
    return a;
}

const ExtVal& AggVal::dflt() const {
    if (!dflt_) throw std::invalid_argument("AggVal: tuple shape has no default");
    return *dflt_;
}

std::size_t AggVal::tuple_size() const {
    if (shape_ != Shape::tuple) throw std::invalid_argument("AggVal: not a tuple");
    return tuple_size_;
}

void AggVal::check_key(const MKey& key) const {
    if (shape_ == Shape::tuple) {
        if (key.size() != 1 || key[0] >= tuple_size_)
            throw std::out_of_range("AggVal: tuple index out of range");
    } else if (key.size() != rank_) {
        throw std::invalid_argument("AggVal: key rank mismatch");
    }
}

ExtVal AggVal::at(std::size_t key) const { return at(MKey{static_cast<std::uint32_t>(key)}); }

ExtVal AggVal::at(const MKey& key) const {
    check_key(key);
    auto it = entries_.find(key);
    if (it != entries_.end()) return it->second;
    if (shape_ == Shape::tuple) throw std::out_of_range("AggVal: tuple entry missing");
    return *dflt_;
}

void AggVal::set(std::size_t key, const ExtVal& v) { set(MKey{static_cast<std::uint32_t>(key)}, v); }

void AggVal::set(const MKey& key, const ExtVal& v) {
    check_key(key);
    entries_[key] = v;
    canonicalize(key);
}

void AggVal::canonicalize(const MKey& key) {
    if (shape_ == Shape::tuple) return; // tuples keep every slot
    auto it = entries_.find(key);
    if (it != entries_.end() && it->second == *dflt_) entries_.erase(it);
}

bool AggVal::operator==(const AggVal& o) const {
    if (shape_ != o.shape_ || rank_ != o.rank_) return false;
    if (shape_ == Shape::tuple) return tuple_size_ == o.tuple_size_ && entries_ == o.entries_;
    return *dflt_ == *o.dflt_ && entries_ == o.entries_;
}

std::string AggVal::str() const {
    std::ostringstream os;
    os << (shape_ == Shape::tuple ? "(" : "{");
    bool first = true;
    for (const auto& [k, v] : entries_) {
        if (!first) os << ", ";
        first = false;
        if (shape_ == Shape::tuple) {
            os << v.str();
            continue;
        }
        if (rank_ == 1 && shape_ == Shape::poly) {
            os << k[0];
        } else {
            os << "[";
            for (std::size_t i = 0; i < k.size(); ++i) os << (i ? "," : "") << k[i];
            os << "]";
        }
        os << ": " << v.str();
    }
    if (shape_ == Shape::tuple) {
        os << ")";
    } else {
        if (!first) os << ", ";
        os << "default: " << dflt_->str() << "}";
    }
    return os.str();
}

namespace {

void check_same_shape(const AggVal& a, const AggVal& b) {
    if (a.shape() != b.shape() || a.rank() != b.rank() ||
        (a.shape() == AggVal::Shape::tuple && a.tuple_size() != b.tuple_size()))
        throw std::invalid_argument("AggVal: shape mismatch");
}

} // namespace

AggVal pointwise(const AggVal& a, const AggVal& b, ExtVal (*op)(const ExtVal&, const ExtVal&)) {
    check_same_shape(a, b);
    AggVal out;
    if (a.shape_ == AggVal::Shape::tuple) {
        std::vector<ExtVal> entries;
        entries.reserve(a.tuple_size_);
        for (std::size_t i = 0; i < a.tuple_size_; ++i) entries.push_back(op(a.at(i), b.at(i)));
        return AggVal::tuple(std::move(entries));
    }
    out.shape_ = a.shape_;
    out.rank_ = a.rank_;
    out.dflt_ = op(*a.dflt_, *b.dflt_);
    for (const auto& [k, v] : a.entries_) {
        out.entries_[k] = op(v, b.at(k));
        out.canonicalize(k);
    }
    for (const auto& [k, v] : b.entries_) {
        if (a.entries_.count(k)) continue;
        out.entries_[k] = op(*a.dflt_, v);
        out.canonicalize(k);
    }
    return out;
}

AggVal aggval_add(const AggVal& a, const AggVal& b) {
    return pointwise(a, b, +[](const ExtVal& x, const ExtVal& y) { return x + y; });
}
AggVal aggval_sub(const AggVal& a, const AggVal& b) {
    return pointwise(a, b, +[](const ExtVal& x, const ExtVal& y) { return x - y; });
}
AggVal aggval_meet(const AggVal& a, const AggVal& b) {
    return pointwise(a, b, +[](const ExtVal& x, const ExtVal& y) { return meet(x, y); });
}
AggVal aggval_join(const AggVal& a, const AggVal& b) {
    return pointwise(a, b, +[](const ExtVal& x, const ExtVal& y) { return join(x, y); });
}
AggVal aggval_diff(const AggVal& a, const AggVal& b) {
    return pointwise(a, b, +[](const ExtVal& x, const ExtVal& y) { return vdiff(x, y); });
}

ValCmp aggval_compare(const AggVal& a, const AggVal& b) {
    check_same_shape(a, b);
    bool le = true, ge = true;
    auto fold = [&](const ExtVal& x, const ExtVal& y) {
        if (x < y) ge = false;
        else if (y < x) le = false;
    };
    if (a.shape_ != AggVal::Shape::tuple) fold(*a.dflt_, *b.dflt_);
    for (const auto& [k, v] : a.entries_) fold(v, b.at(k));
    for (const auto& [k, v] : b.entries_) {
        if (!a.entries_.count(k)) fold(a.at(k), v);
    }
    if (le && ge) return ValCmp::eq;
    if (le) return ValCmp::lt;
    if (ge) return ValCmp::gt;
    return ValCmp::incomparable;
}

bool aggval_le(const AggVal& a, const AggVal& b) {
    auto c = aggval_compare(a, b);
    return c == ValCmp::eq || c == ValCmp::lt;
}
bool aggval_lt(const AggVal& a, const AggVal& b) { return aggval_compare(a, b) == ValCmp::lt; }
bool aggval_ge(const AggVal& a, const AggVal& b) {
    auto c = aggval_compare(a, b);
    return c == ValCmp::eq || c == ValCmp::gt;
}
bool aggval_gt(const AggVal& a, const AggVal& b) { return aggval_compare(a, b) == ValCmp::gt; }

ExtVal rational_valuation(const Rat& q, const Int& p) {
    if (q == 0) return ExtVal::pos_inf();
    if (p < 2) throw std::invalid_argument("rational_valuation: p must be >= 2");
    Int num = numerator(q), den = denominator(q);
    long long v = 0;
    while (num % p == 0) {
        num /= p;
        ++v;
    }
    while (den % p == 0) {
        den /= p;
        --v;
    }
    return ExtVal(v);
}

} // namespace padic
