#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace padic {

using Int = boost::multiprecision::cpp_int;
using Rat = boost::multiprecision::cpp_rational;

/// Extended valuation: an exact rational extended with +inf and -inf.
/// Arithmetic follows truncated-precision conventions; in particular
/// subtraction is total with inf - inf = 0, while inf + (-inf) is an error.
class ExtVal {
public:
    enum class Tag { finite, pos_inf, neg_inf };

    ExtVal() : tag_(Tag::finite), q_(0) {}
    ExtVal(int n) : tag_(Tag::finite), q_(n) {}            // NOLINT(google-explicit-constructor)
    ExtVal(long long n) : tag_(Tag::finite), q_(n) {}      // NOLINT(google-explicit-constructor)
    ExtVal(const Int& n) : tag_(Tag::finite), q_(n) {}     // NOLINT(google-explicit-constructor)
    ExtVal(const Rat& q) : tag_(Tag::finite), q_(q) {}     // NOLINT(google-explicit-constructor)
    ExtVal(const Int& num, const Int& den);

    static ExtVal pos_inf() { return ExtVal(Tag::pos_inf); }
    static ExtVal neg_inf() { return ExtVal(Tag::neg_inf); }

    bool is_finite() const { return tag_ == Tag::finite; }
    bool is_pos_inf() const { return tag_ == Tag::pos_inf; }
    bool is_neg_inf() const { return tag_ == Tag::neg_inf; }
    bool is_infinite() const { return tag_ != Tag::finite; }

    /// Finite value; throws std::invalid_argument on +-inf.
    const Rat& finite() const;

    bool operator==(const ExtVal& o) const;
    bool operator!=(const ExtVal& o) const { return !(*this == o); }
    bool operator<(const ExtVal& o) const;
    bool operator<=(const ExtVal& o) const { return *this < o || *this == o; }
    bool operator>(const ExtVal& o) const { return o < *this; }
    bool operator>=(const ExtVal& o) const { return o <= *this; }

    /// Total: errors only on inf + (-inf) / (-inf) + inf.
    ExtVal operator+(const ExtVal& o) const;
    /// Total on all pairs; inf - inf = 0 and (-inf) - (-inf) = 0.
    ExtVal operator-(const ExtVal& o) const;
    ExtVal operator-() const;

    /// Scale by a nonzero rational; q == 0 with an infinite value is an error,
    /// and q == 0 with a finite value yields 0.
    ExtVal scale(const Rat& q) const;

    std::string str() const;

private:
    explicit ExtVal(Tag t) : tag_(t), q_(0) {}

    Tag tag_;
    Rat q_;
};

ExtVal meet(const ExtVal& a, const ExtVal& b); // infimum
ExtVal join(const ExtVal& a, const ExtVal& b); // supremum

/// diff: a if a > b, else -inf. Non-associative in chains; fold left-to-right.
ExtVal vdiff(const ExtVal& a, const ExtVal& b);

/// Outcome of comparing two aggregate valuations under the pointwise
/// partial order.
enum class ValCmp { eq, lt, gt, incomparable };

/// Aggregate valuation: default-valued associative array over the key space of
/// a univariate polynomial (size_t exponents), a multivariate system (exponent
/// vectors of a fixed rank), or a plain tuple (fixed length, no default).
class AggVal {
public:
    using MKey = std::vector<std::uint32_t>;

    enum class Shape { poly, mpoly, tuple };

    static AggVal poly(ExtVal dflt);
    static AggVal mpoly(std::size_t rank, ExtVal dflt);
    static AggVal tuple(std::vector<ExtVal> entries);

    Shape shape() const { return shape_; }
    std::size_t rank() const { return rank_; }
    const ExtVal& dflt() const;
    std::size_t tuple_size() const;

    /// Value at a key (default applies to absent keys for poly/mpoly).
    ExtVal at(std::size_t key) const;
    ExtVal at(const MKey& key) const;

    /// Set a key; storing the default removes the entry (canonical form).
    void set(std::size_t key, const ExtVal& v);
    void set(const MKey& key, const ExtVal& v);

    /// Canonical stored entries (never equal to the default).
    const std::map<MKey, ExtVal>& entries() const { return entries_; }

    bool operator==(const AggVal& o) const;
    bool operator!=(const AggVal& o) const { return !(*this == o); }

    std::string str() const;

private:
    friend AggVal pointwise(const AggVal&, const AggVal&, ExtVal (*)(const ExtVal&, const ExtVal&));
    friend ValCmp aggval_compare(const AggVal& a, const AggVal& b);

    void check_key(const MKey& key) const;
    void canonicalize(const MKey& key);

    Shape shape_ = Shape::poly;
    std::size_t rank_ = 1;               // mpoly key rank; 1 for poly
    std::optional<ExtVal> dflt_;         // absent for tuple shape
    std::size_t tuple_size_ = 0;
    std::map<MKey, ExtVal> entries_;
};

AggVal aggval_add(const AggVal& a, const AggVal& b);
AggVal aggval_sub(const AggVal& a, const AggVal& b);
AggVal aggval_meet(const AggVal& a, const AggVal& b);
AggVal aggval_join(const AggVal& a, const AggVal& b);
AggVal aggval_diff(const AggVal& a, const AggVal& b);

/// Pointwise partial order over all keys (including defaults).
ValCmp aggval_compare(const AggVal& a, const AggVal& b);

bool aggval_le(const AggVal& a, const AggVal& b);
bool aggval_lt(const AggVal& a, const AggVal& b);
bool aggval_ge(const AggVal& a, const AggVal& b);
bool aggval_gt(const AggVal& a, const AggVal& b);

/// p-adic valuation of an exact rational (+inf for 0).
ExtVal rational_valuation(const Rat& q, const Int& p);

} // namespace padic
