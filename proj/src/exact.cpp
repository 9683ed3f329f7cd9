#include "padic/exact.hpp"

#include "padic/error.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace padic {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

void check_same_xf(const XElt& a, const XElt& b, const char* op) {
    if (a.fld != b.fld) throw std::invalid_argument(std::string(op) + ": field mismatch");
}

// Smallest epoch n >= kFirstEpoch with 2^n >= r.
long long epoch_for_digits(const Rat& r) {
    long long n = kFirstEpoch;
    Rat cap(1ll << n);
    while (cap < r && n < 62) {
        ++n;
        cap *= 2;
    }
    return n;
}

// Element node defined by a compute callback over an exact parent field.
class ElementNode : public EpochNode {
public:
    using Fn = std::function<ApproxElt(const FieldPtr&, long long, const std::vector<const Apx*>&)>;

    ElementNode(XF fld, std::vector<NodePtr> deps, Fn fn)
        : EpochNode(fld->eng, Kind::element, std::move(deps)), fld_(std::move(fld)), fn_(std::move(fn)) {}

    Apx compute(long long n, const std::vector<const Apx*>& dep_apx) override {
        return fn_(fld_->at_epoch(n), n, dep_apx);
    }

    FieldPtr field_at(long long n) override { return fld_->at_epoch(n); }

private:
    XF fld_;
    Fn fn_;
};

// Division-like node: evaluating it first forces the divisor dependency to be
// non-weakly-zero at every cached epoch (mutating its cache), then applies fn.
class EnsureNonzeroNode : public EpochNode {
public:
    using Fn = std::function<ApproxElt(const FieldPtr&, const std::vector<const Apx*>&)>;

    EnsureNonzeroNode(XF fld, std::vector<NodePtr> deps, std::size_t ensured_dep, Fn fn)
        : EpochNode(fld->eng, Kind::element, std::move(deps)), fld_(std::move(fld)),
          ensured_dep_(ensured_dep), fn_(std::move(fn)) {
        fast_unsafe = true;
    }

    Apx compute(long long n, const std::vector<const Apx*>& dep_apx) override {
        return fn_(fld_->at_epoch(n), dep_apx);
    }

    FieldPtr field_at(long long n) override { return fld_->at_epoch(n); }

    void update(long long n) override {
        if (!ensured_) {
            ensure_all_approximations_nonzero(deps()[ensured_dep_]);
            ensured_ = true;
        }
        EpochNode::update(n);
    }

private:
    XF fld_;
    std::size_t ensured_dep_;
    Fn fn_;
    bool ensured_ = false;
};

XElt make_elt(const XF& f, NodePtr node) { return XElt{f, std::move(node)}; }

} // namespace

FieldPtr ExactField::at_epoch(long long n) {
    require(n >= kFirstEpoch, "ExactField: bad epoch");
    if (static_cast<long long>(epoch_fields_.size()) >= n)
        return epoch_fields_[static_cast<std::size_t>(n - 1)];
    for (long long m = static_cast<long long>(epoch_fields_.size()) + 1; m <= n; ++m) {
        long long cap = eng->capacity(m);
        if (kind == FieldKind::prime) {
            epoch_fields_.push_back(make_prime_field(p, cap));
            continue;
        }
        FieldPtr fb = base->at_epoch(m);
        std::vector<ApproxElt> cs;
        cs.reserve(def.size());
        for (const auto& c : def) {
            bring_to_epoch(c.node, m);
            cs.push_back(as_elt(c.node->at(m)));
        }
        if (kind == FieldKind::inert &&
            check_inert_irreducible(fb, cs) == DefCheck::violated)
            throw std::invalid_argument("ExactField: defining polynomial is reducible in the residue field");
        epoch_fields_.push_back(make_extension(fb, kind, cs, cap));
    }
    return epoch_fields_[static_cast<std::size_t>(n - 1)];
}

XF xf_prime(Engine* eng, long long p) {
    require(eng != nullptr, "xf_prime: engine required");
    auto f = std::make_shared<ExactField>();
    f->eng = eng;
    f->kind = FieldKind::prime;
    f->p = p;
    f->at_epoch(kFirstEpoch); // validates p
    return f;
}

XF xf_extension(XF base, FieldKind kind, std::vector<XElt> def_coeffs) {
    require(base != nullptr, "xf_extension: base required");
    require(kind != FieldKind::prime, "xf_extension: extension kinds only");
    require(def_coeffs.size() >= 2, "xf_extension: degree must be >= 1");
    for (const auto& c : def_coeffs)
        require(c.fld == base, "xf_extension: coefficients must lie in the base field");
    auto f = std::make_shared<ExactField>();
    f->eng = base->eng;
    f->kind = kind;
    f->p = base->p;
    f->base = base;
    f->def = std::move(def_coeffs);
    f->rel_degree = static_cast<long long>(f->def.size()) - 1;
    f->abs_e = base->abs_e * (kind == FieldKind::eisen ? f->rel_degree : 1);
    f->abs_f = base->abs_f * (kind == FieldKind::inert ? f->rel_degree : 1);
    f->at_epoch(kFirstEpoch); // validates the definition at the first epoch
    return f;
}

bool xf_same(const XF& a, const XF& b) { return a == b; }

long long xf_degree(const XF& f) { return f->abs_e * f->abs_f; }

// --- constructors -------------------------------------------------------------

XElt x_const(const XF& f, const Rat& q) {
    auto node = std::make_shared<ElementNode>(
        f, std::vector<NodePtr>{},
        [q](const FieldPtr& fn, long long n, const std::vector<const Apx*>&) {
            return embed(fn, q, 1ll << n);
        });
    return make_elt(f, std::move(node));
}

XElt x_const_rep(const XF& f, const ExactRep& rep) {
    auto node = std::make_shared<ElementNode>(
        f, std::vector<NodePtr>{},
        [rep](const FieldPtr& fn, long long n, const std::vector<const Apx*>&) {
            return embed_rep(fn, rep, 1ll << n);
        });
    return make_elt(f, std::move(node));
}

XElt x_zero(const XF& f) { return x_const(f, Rat(0)); }
XElt x_one(const XF& f) { return x_const(f, Rat(1)); }

XElt x_gen(const XF& f) {
    require(f->base != nullptr, "x_gen: extensions only");
    auto node = std::make_shared<ElementNode>(
        f, std::vector<NodePtr>{},
        [](const FieldPtr& fn, long long, const std::vector<const Apx*>&) { return generator(fn); });
    return make_elt(f, std::move(node));
}

XElt x_coerce_up(const XF& ext, const XElt& a) {
    require(ext->base == a.fld, "x_coerce_up: element must lie in the immediate base field");
    auto node = std::make_shared<ElementNode>(
        ext, std::vector<NodePtr>{a.node},
        [](const FieldPtr& fn, long long, const std::vector<const Apx*>& dep) {
            return coerce_up(fn, as_elt(*dep[0]));
        });
    return make_elt(ext, std::move(node));
}

XElt x_from_compute(const XF& f, std::vector<NodePtr> deps,
                    std::function<ApproxElt(const FieldPtr&, long long, const std::vector<const Apx*>&)> fn) {
    return make_elt(f, std::make_shared<ElementNode>(f, std::move(deps), std::move(fn)));
}

// --- arithmetic -----------------------------------------------------------------

XElt x_add(const XElt& a, const XElt& b) {
    check_same_xf(a, b, "x_add");
    auto node = std::make_shared<ElementNode>(
        a.fld, std::vector<NodePtr>{a.node, b.node},
        [](const FieldPtr&, long long, const std::vector<const Apx*>& dep) {
            return add(as_elt(*dep[0]), as_elt(*dep[1]));
        });
    return make_elt(a.fld, std::move(node));
}

XElt x_sub(const XElt& a, const XElt& b) {
    check_same_xf(a, b, "x_sub");
    auto node = std::make_shared<ElementNode>(
        a.fld, std::vector<NodePtr>{a.node, b.node},
        [](const FieldPtr&, long long, const std::vector<const Apx*>& dep) {
            return sub(as_elt(*dep[0]), as_elt(*dep[1]));
        });
    return make_elt(a.fld, std::move(node));
}

XElt x_neg(const XElt& a) {
    auto node = std::make_shared<ElementNode>(
        a.fld, std::vector<NodePtr>{a.node},
        [](const FieldPtr&, long long, const std::vector<const Apx*>& dep) {
            return neg(as_elt(*dep[0]));
        });
    return make_elt(a.fld, std::move(node));
}

XElt x_mul(const XElt& a, const XElt& b) {
    check_same_xf(a, b, "x_mul");
    auto node = std::make_shared<ElementNode>(
        a.fld, std::vector<NodePtr>{a.node, b.node},
        [](const FieldPtr&, long long, const std::vector<const Apx*>& dep) {
            return mul(as_elt(*dep[0]), as_elt(*dep[1]));
        });
    return make_elt(a.fld, std::move(node));
}

XElt x_div(const XElt& a, const XElt& b) {
    check_same_xf(a, b, "x_div");
    auto node = std::make_shared<EnsureNonzeroNode>(
        a.fld, std::vector<NodePtr>{a.node, b.node}, 1,
        [](const FieldPtr&, const std::vector<const Apx*>& dep) {
            return div_elt(as_elt(*dep[0]), as_elt(*dep[1]));
        });
    return make_elt(a.fld, std::move(node));
}

XElt x_inv(const XElt& a) {
    auto node = std::make_shared<EnsureNonzeroNode>(
        a.fld, std::vector<NodePtr>{a.node}, 0,
        [](const FieldPtr&, const std::vector<const Apx*>& dep) {
            return inverse(as_elt(*dep[0]));
        });
    return make_elt(a.fld, std::move(node));
}

XElt x_pow(const XElt& a, long long k) {
    if (k < 0) return x_inv(x_pow(a, -k));
    auto node = std::make_shared<ElementNode>(
        a.fld, std::vector<NodePtr>{a.node},
        [k](const FieldPtr&, long long, const std::vector<const Apx*>& dep) {
            return pow_elt(as_elt(*dep[0]), k);
        });
    return make_elt(a.fld, std::move(node));
}

// --- queries --------------------------------------------------------------------

const ApproxElt& x_apx(const XElt& x, long long n) {
    bring_to_epoch(x.node, n);
    return as_elt(x.node->at(std::max(n, x.node->min_epoch)));
}

const ApproxElt& x_best(const XElt& x) {
    if (x.node->epoch() < kFirstEpoch) bring_to_epoch(x.node, kFirstEpoch);
    return as_elt(x.node->current());
}

long long x_epoch(const XElt& x) { return x.node->epoch(); }

ExtVal x_weak_valuation(const XElt& x) { return weak_valuation(x_best(x)); }

ExtVal x_abs_precision(const XElt& x) { return abs_precision(x_best(x)); }

void increase_absolute_precision(const XElt& x, const ExtVal& k) {
    if (k.is_neg_inf()) return;
    const ApproxElt& a = x_best(x);
    if (abs_precision(a) >= k) return;
    long long n = x.node->epoch();
    if (k.is_finite()) {
        Rat own = k.finite() * x.fld->abs_e;
        n = std::max(n, epoch_for_digits(own));
    }
    while (true) {
        bring_to_epoch(x.node, n); // precision error at max_epoch
        if (abs_precision(as_elt(x.node->at(std::max(n, x.node->min_epoch)))) >= k) return;
        ++n;
    }
}

std::pair<bool, long long> is_definitely_nonzero(const XElt& x, const ExtVal& abs_bound) {
    long long n = std::max(x.node->epoch(), kFirstEpoch);
    while (true) {
        bring_to_epoch(x.node, n);
        long long eff = std::max(n, x.node->min_epoch);
        const ApproxElt& a = as_elt(x.node->at(eff));
        if (!is_weakly_zero(a)) return {true, eff};
        if (abs_precision(a) >= abs_bound) return {false, eff};
        n = eff + 1;
    }
}

bool valuation_ge(const XElt& x, const ExtVal& v) {
    if (v.is_neg_inf()) return true;
    long long visits = 0;
    long long n = kFirstEpoch;
    while (true) {
        if (x.node->epoch() >= kFirstEpoch || visits > 0) {
            const ApproxElt& a = as_elt(x.node->current());
            if (!is_weakly_zero(a)) return weak_valuation(a) >= v;
            if (abs_precision(a) >= v) return true;
        }
        // target the epoch whose capacity covers the missing digits
        if (v.is_finite()) {
            Rat own = v.finite() * x.fld->abs_e;
            n = std::max({n, x.node->epoch() + 1, epoch_for_digits(own)});
        } else {
            n = std::max(n, x.node->epoch() + 1);
        }
        bring_to_epoch(x.node, n); // precision error at max_epoch
        ++visits;
    }
}

bool valuation_gt(const XElt& x, const ExtVal& v) {
    if (v.is_pos_inf()) return false;
    if (v.is_neg_inf()) return true;
    return valuation_ge(x, v + ExtVal(Rat(1, x.fld->abs_e)));
}

bool valuation_eq(const XElt& x, const ExtVal& v) {
    if (v.is_neg_inf()) return false;
    if (v.is_pos_inf()) return valuation_ge(x, v);
    return valuation_ge(x, v) && !valuation_gt(x, v);
}

ValCmp valuation_cmp(const XElt& x, const ExtVal& v) {
    if (!valuation_ge(x, v)) return ValCmp::lt;
    return valuation_gt(x, v) ? ValCmp::gt : ValCmp::eq;
}

FFElt x_residue(const XElt& x) {
    increase_absolute_precision(x, ExtVal(Rat(1, x.fld->abs_e)));
    const ApproxElt& a = x_best(x);
    return residue(a.fld, a);
}

std::string to_string(const XElt& x) { return to_string(x_best(x)); }

} // namespace padic
