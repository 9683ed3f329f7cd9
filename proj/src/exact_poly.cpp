#include "padic/exact_poly.hpp"

#include <stdexcept>

namespace padic {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Poly node defined by a compute callback over an exact parent field.
class PolyNode : public EpochNode {
public:
    using Fn = std::function<ApproxPoly(const FieldPtr&, long long, const std::vector<const Apx*>&)>;

    PolyNode(XF fld, std::vector<NodePtr> deps, Fn fn)
        : EpochNode(fld->eng, Kind::poly, std::move(deps)), fld_(std::move(fld)), fn_(std::move(fn)) {}

    Apx compute(long long n, const std::vector<const Apx*>& dep_apx) override {
        return fn_(fld_->at_epoch(n), n, dep_apx);
    }

    FieldPtr field_at(long long n) override { return fld_->at_epoch(n); }

private:
    XF fld_;
    Fn fn_;
};

// Coefficient extraction from a poly node.
class CoeffNode : public EpochNode {
public:
    CoeffNode(XF fld, NodePtr poly, long long i)
        : EpochNode(fld->eng, Kind::element, {std::move(poly)}), fld_(std::move(fld)), i_(i) {}

    Apx compute(long long, const std::vector<const Apx*>& dep_apx) override {
        const ApproxPoly& p = as_poly(*dep_apx[0]);
        if (i_ >= static_cast<long long>(p.coeffs.size())) return exact_zero_elt(p.fld);
        return p.coeffs[static_cast<std::size_t>(i_)];
    }

    FieldPtr field_at(long long n) override { return fld_->at_epoch(n); }

private:
    XF fld_;
    long long i_;
};

// Node whose evaluation first forces listed dependencies to full degree
// (mutating their caches): resultants, quotient/remainder pairs.
class EnsuredNode : public EpochNode {
public:
    using Fn = std::function<Apx(const FieldPtr&, long long, const std::vector<const Apx*>&)>;

    EnsuredNode(XF fld, Kind kind, std::vector<NodePtr> deps, std::vector<std::size_t> ensure_full, Fn fn)
        : EpochNode(fld->eng, kind, std::move(deps)), fld_(std::move(fld)),
          ensure_full_(std::move(ensure_full)), fn_(std::move(fn)) {
        fast_unsafe = true;
    }

    Apx compute(long long n, const std::vector<const Apx*>& dep_apx) override {
        return fn_(fld_->at_epoch(n), n, dep_apx);
    }

    FieldPtr field_at(long long n) override { return fld_->at_epoch(n); }

    void update(long long n) override {
        if (!ensured_) {
            for (std::size_t i : ensure_full_) ensure_all_approximations_full_degree(deps()[i]);
            ensured_ = true;
        }
        EpochNode::update(n);
    }

private:
    XF fld_;
    std::vector<std::size_t> ensure_full_;
    Fn fn_;
    bool ensured_ = false;
};

XPoly binary_poly(const XPoly& f, const XPoly& g, long long declared,
                  ApproxPoly (*op)(const ApproxPoly&, const ApproxPoly&), const char* name) {
    require(f.fld == g.fld, name);
    auto node = std::make_shared<PolyNode>(
        f.fld, std::vector<NodePtr>{f.node, g.node},
        [op](const FieldPtr&, long long, const std::vector<const Apx*>& dep) {
            return op(as_poly(*dep[0]), as_poly(*dep[1]));
        });
    return XPoly{f.fld, std::move(node), declared};
}

} // namespace

XPoly xp_from_coeffs(const XF& f, const std::vector<XElt>& coeffs) {
    std::vector<NodePtr> deps;
    deps.reserve(coeffs.size());
    for (const auto& c : coeffs) {
        require(c.fld == f, "xp_from_coeffs: coefficient field mismatch");
        deps.push_back(c.node);
    }
    auto node = std::make_shared<PolyNode>(
        f, std::move(deps),
        [](const FieldPtr& fn, long long, const std::vector<const Apx*>& dep) {
            std::vector<ApproxElt> cs;
            cs.reserve(dep.size());
            for (const Apx* a : dep) cs.push_back(as_elt(*a));
            return make_poly(fn, std::move(cs));
        });
    return XPoly{f, std::move(node), static_cast<long long>(coeffs.size()) - 1};
}

XPoly xp_from_rats(const XF& f, const std::vector<Rat>& coeffs) {
    std::vector<XElt> cs;
    cs.reserve(coeffs.size());
    for (const Rat& q : coeffs) cs.push_back(x_const(f, q));
    return xp_from_coeffs(f, cs);
}

XPoly xp_from_compute(const XF& f, std::vector<NodePtr> deps, long long declared_degree,
                      std::function<ApproxPoly(const FieldPtr&, long long, const std::vector<const Apx*>&)> fn) {
    return XPoly{f, std::make_shared<PolyNode>(f, std::move(deps), std::move(fn)), declared_degree};
}

const ApproxPoly& xp_apx(const XPoly& f, long long n) {
    bring_to_epoch(f.node, n);
    return as_poly(f.node->at(std::max(n, f.node->min_epoch)));
}

const ApproxPoly& xp_best(const XPoly& f) {
    if (f.node->epoch() < kFirstEpoch) bring_to_epoch(f.node, kFirstEpoch);
    return as_poly(f.node->current());
}

XElt xp_coeff(const XPoly& f, long long i) {
    require(i >= 0, "xp_coeff: negative index");
    return XElt{f.fld, std::make_shared<CoeffNode>(f.fld, f.node, i)};
}

std::vector<XElt> xp_coeffs(const XPoly& f) {
    std::vector<XElt> out;
    out.reserve(static_cast<std::size_t>(f.declared_degree + 1));
    for (long long i = 0; i <= f.declared_degree; ++i) out.push_back(xp_coeff(f, i));
    return out;
}

XPoly xp_add(const XPoly& f, const XPoly& g) {
    return binary_poly(f, g, std::max(f.declared_degree, g.declared_degree), poly_add,
                       "xp_add: field mismatch");
}

XPoly xp_sub(const XPoly& f, const XPoly& g) {
    return binary_poly(f, g, std::max(f.declared_degree, g.declared_degree), poly_sub,
                       "xp_sub: field mismatch");
}

XPoly xp_neg(const XPoly& f) {
    auto node = std::make_shared<PolyNode>(
        f.fld, std::vector<NodePtr>{f.node},
        [](const FieldPtr&, long long, const std::vector<const Apx*>& dep) {
            return poly_neg(as_poly(*dep[0]));
        });
    return XPoly{f.fld, std::move(node), f.declared_degree};
}

XPoly xp_mul(const XPoly& f, const XPoly& g) {
    long long d = (f.declared_degree < 0 || g.declared_degree < 0)
                      ? -1
                      : f.declared_degree + g.declared_degree;
    return binary_poly(f, g, d, poly_mul, "xp_mul: field mismatch");
}

XPoly xp_scale(const XPoly& f, const XElt& c) {
    require(c.fld == f.fld, "xp_scale: field mismatch");
    auto node = std::make_shared<PolyNode>(
        f.fld, std::vector<NodePtr>{f.node, c.node},
        [](const FieldPtr&, long long, const std::vector<const Apx*>& dep) {
            return poly_scale(as_poly(*dep[0]), as_elt(*dep[1]));
        });
    return XPoly{f.fld, std::move(node), f.declared_degree};
}

XPoly xp_scale_x(const XPoly& f, const XElt& c) {
    require(c.fld == f.fld, "xp_scale_x: field mismatch");
    auto node = std::make_shared<PolyNode>(
        f.fld, std::vector<NodePtr>{f.node, c.node},
        [](const FieldPtr&, long long, const std::vector<const Apx*>& dep) {
            return poly_scale_x(as_poly(*dep[0]), as_elt(*dep[1]));
        });
    return XPoly{f.fld, std::move(node), f.declared_degree};
}

XPoly xp_shift(const XPoly& f, const XElt& a) {
    require(a.fld == f.fld, "xp_shift: field mismatch");
    auto node = std::make_shared<PolyNode>(
        f.fld, std::vector<NodePtr>{f.node, a.node},
        [](const FieldPtr&, long long, const std::vector<const Apx*>& dep) {
            return poly_shift(as_poly(*dep[0]), as_elt(*dep[1]));
        });
    return XPoly{f.fld, std::move(node), f.declared_degree};
}

XPoly xp_derivative(const XPoly& f) {
    auto node = std::make_shared<PolyNode>(
        f.fld, std::vector<NodePtr>{f.node},
        [](const FieldPtr&, long long, const std::vector<const Apx*>& dep) {
            return poly_derivative(as_poly(*dep[0]));
        });
    return XPoly{f.fld, std::move(node), std::max(f.declared_degree - 1, -1ll)};
}

XElt xp_eval(const XPoly& f, const XElt& x) {
    require(x.fld == f.fld, "xp_eval: field mismatch");
    return x_from_compute(f.fld, {f.node, x.node},
                          [](const FieldPtr&, long long, const std::vector<const Apx*>& dep) {
                              return poly_eval(as_poly(*dep[0]), as_elt(*dep[1]));
                          });
}

std::pair<XPoly, XPoly> xp_divrem(const XPoly& f, const XPoly& g) {
    require(f.fld == g.fld, "xp_divrem: field mismatch");
    require(g.declared_degree >= 0, "xp_divrem: division by zero polynomial");
    // single node computes both, packed as [quotient | remainder]; the
    // remainder slice always holds weak_degree(g) coefficients
    auto pack = std::make_shared<EnsuredNode>(
        f.fld, EpochNode::Kind::poly, std::vector<NodePtr>{f.node, g.node},
        std::vector<std::size_t>{1},
        [](const FieldPtr& fn, long long, const std::vector<const Apx*>& dep) -> Apx {
            const ApproxPoly& fp = as_poly(*dep[0]);
            const ApproxPoly& gp = as_poly(*dep[1]);
            DivRem qr = poly_divrem(fp, gp);
            std::size_t dg = static_cast<std::size_t>(weak_degree(gp));
            std::vector<ApproxElt> packed = std::move(qr.quot.coeffs);
            for (std::size_t i = 0; i < dg; ++i)
                packed.push_back(i < qr.rem.coeffs.size() ? qr.rem.coeffs[i] : exact_zero_elt(fn));
            return ApproxPoly{fn, std::move(packed)};
        });
    NodePtr packp = pack;
    auto q_node = std::make_shared<PolyNode>(
        f.fld, std::vector<NodePtr>{packp, g.node},
        [](const FieldPtr& fn, long long, const std::vector<const Apx*>& dep) {
            const ApproxPoly& p = as_poly(*dep[0]);
            std::size_t dg = static_cast<std::size_t>(weak_degree(as_poly(*dep[1])));
            std::vector<ApproxElt> cs(p.coeffs.begin(), p.coeffs.end() - static_cast<long long>(dg));
            return ApproxPoly{fn, std::move(cs)};
        });
    auto r_node = std::make_shared<PolyNode>(
        f.fld, std::vector<NodePtr>{packp, g.node},
        [](const FieldPtr& fn, long long, const std::vector<const Apx*>& dep) {
            const ApproxPoly& p = as_poly(*dep[0]);
            std::size_t dg = static_cast<std::size_t>(weak_degree(as_poly(*dep[1])));
            std::vector<ApproxElt> cs(p.coeffs.end() - static_cast<long long>(dg), p.coeffs.end());
            return ApproxPoly{fn, std::move(cs)};
        });
    XPoly q{f.fld, std::move(q_node), std::max(f.declared_degree - g.declared_degree, -1ll)};
    XPoly r{f.fld, std::move(r_node), std::max(g.declared_degree - 1, -1ll)};
    return {std::move(q), std::move(r)};
}

XElt xp_resultant(const XPoly& f, const XPoly& g) {
    require(f.fld == g.fld, "xp_resultant: field mismatch");
    auto node = std::make_shared<EnsuredNode>(
        f.fld, EpochNode::Kind::element, std::vector<NodePtr>{f.node, g.node},
        std::vector<std::size_t>{0, 1},
        [](const FieldPtr&, long long, const std::vector<const Apx*>& dep) -> Apx {
            return resultant(as_poly(*dep[0]), as_poly(*dep[1]));
        });
    return XElt{f.fld, std::move(node)};
}

std::pair<XPoly, XPoly> xp_pair_from_compute(
    const XF& f, std::vector<NodePtr> deps, std::size_t count_first, std::size_t count_second,
    std::function<std::vector<ApproxElt>(const FieldPtr&, long long, const std::vector<const Apx*>&)> fn,
    bool fast_unsafe) {
    require(count_first > 0 && count_second > 0, "xp_pair_from_compute: empty slice");
    std::size_t total = count_first + count_second;
    auto pack = std::make_shared<PolyNode>(
        f, std::move(deps),
        [fn = std::move(fn), total](const FieldPtr& fld, long long n, const std::vector<const Apx*>& dep) {
            std::vector<ApproxElt> vals = fn(fld, n, dep);
            if (vals.size() != total)
                throw std::logic_error("xp_pair_from_compute: coefficient count mismatch");
            return ApproxPoly{fld, std::move(vals)};
        });
    pack->fast_unsafe = fast_unsafe;
    NodePtr packp = pack;
    auto slice = [&](std::size_t lo, std::size_t len) {
        return std::make_shared<PolyNode>(
            f, std::vector<NodePtr>{packp},
            [lo, len](const FieldPtr& fn2, long long, const std::vector<const Apx*>& dep) {
                const ApproxPoly& p = as_poly(*dep[0]);
                std::vector<ApproxElt> cs(p.coeffs.begin() + static_cast<long long>(lo),
                                          p.coeffs.begin() + static_cast<long long>(lo + len));
                return ApproxPoly{fn2, std::move(cs)};
            });
    };
    XPoly a{f, slice(0, count_first), static_cast<long long>(count_first) - 1};
    XPoly b{f, slice(count_first, count_second), static_cast<long long>(count_second) - 1};
    return {std::move(a), std::move(b)};
}

void xp_ensure_full_degree(const XPoly& f) { ensure_all_approximations_full_degree(f.node); }

std::string to_string(const XPoly& f) { return to_string(xp_best(f)); }

XTuple xt_from_compute(const XF& f, std::vector<NodePtr> deps, std::size_t count,
                       std::function<std::vector<ApproxElt>(const FieldPtr&, long long, const std::vector<const Apx*>&)> fn) {
    require(count > 0, "xt_from_compute: empty tuple");
    auto pack = std::make_shared<PolyNode>(
        f, std::move(deps),
        [fn = std::move(fn), count](const FieldPtr& fld, long long n, const std::vector<const Apx*>& dep) {
            std::vector<ApproxElt> vals = fn(fld, n, dep);
            if (vals.size() != count)
                throw std::logic_error("XTuple: component count mismatch");
            return ApproxPoly{fld, std::move(vals)};
        });
    XTuple t;
    t.node = pack;
    t.components.reserve(count);
    for (std::size_t i = 0; i < count; ++i)
        t.components.push_back(XElt{f, std::make_shared<CoeffNode>(f, pack, static_cast<long long>(i))});
    return t;
}

XMPoly xmp_make(long long rank, std::vector<std::pair<std::vector<long long>, XElt>> terms) {
    require(rank >= 1, "xmp_make: rank must be positive");
    for (const auto& [exps, coeff] : terms) {
        require(static_cast<long long>(exps.size()) == rank, "xmp_make: exponent vector rank mismatch");
        for (long long e : exps) require(e >= 0, "xmp_make: negative exponent");
        (void)coeff;
    }
    return XMPoly{rank, std::move(terms)};
}

XMPolySystem xmps_make(long long rank, std::vector<XMPoly> eqs) {
    require(static_cast<long long>(eqs.size()) == rank, "xmps_make: system must be square");
    for (const auto& e : eqs) require(e.rank == rank, "xmps_make: equation rank mismatch");
    return XMPolySystem{rank, std::move(eqs)};
}

XElt xmp_eval(const XF& f, const XMPoly& m, const std::vector<XElt>& at) {
    require(static_cast<long long>(at.size()) == m.rank, "xmp_eval: wrong number of values");
    for (const auto& x : at) require(x.fld == f, "xmp_eval: value field mismatch");
    XElt acc = x_zero(f);
    for (const auto& [exps, coeff] : m.terms) {
        require(coeff.fld == f, "xmp_eval: coefficient field mismatch");
        XElt t = coeff;
        for (long long j = 0; j < m.rank; ++j)
            if (exps[static_cast<std::size_t>(j)] > 0)
                t = x_mul(t, x_pow(at[static_cast<std::size_t>(j)], exps[static_cast<std::size_t>(j)]));
        acc = x_add(acc, t);
    }
    return acc;
}

XMPoly xmp_derivative(const XMPoly& m, long long var) {
    require(var >= 0 && var < m.rank, "xmp_derivative: variable out of range");
    std::vector<std::pair<std::vector<long long>, XElt>> terms;
    for (const auto& [exps, coeff] : m.terms) {
        long long e = exps[static_cast<std::size_t>(var)];
        if (e == 0) continue;
        std::vector<long long> de = exps;
        de[static_cast<std::size_t>(var)] = e - 1;
        terms.emplace_back(std::move(de), x_mul(coeff, x_const(coeff.fld, Rat(e))));
    }
    return XMPoly{m.rank, std::move(terms)};
}

std::vector<XElt> xmps_eval(const XF& f, const XMPolySystem& s, const std::vector<XElt>& at) {
    std::vector<XElt> out;
    out.reserve(s.eqs.size());
    for (const auto& e : s.eqs) out.push_back(xmp_eval(f, e, at));
    return out;
}

std::vector<std::vector<XElt>> xmps_jacobian(const XF& f, const XMPolySystem& s,
                                             const std::vector<XElt>& at) {
    std::vector<std::vector<XElt>> out;
    out.reserve(s.eqs.size());
    for (const auto& e : s.eqs) {
        std::vector<XElt> row;
        row.reserve(static_cast<std::size_t>(s.rank));
        for (long long j = 0; j < s.rank; ++j) row.push_back(xmp_eval(f, xmp_derivative(e, j), at));
        out.push_back(std::move(row));
    }
    return out;
}

} // namespace padic
