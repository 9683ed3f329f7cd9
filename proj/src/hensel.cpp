#include "padic/hensel.hpp"

#include "padic/error.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string>

namespace padic {

namespace {

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

long long floor_rat(const Rat& q) {
    Int n = numerator(q), d = denominator(q);
    Int fl = n / d;
    if (fl * d != n && n < 0) --fl;
    return fl.convert_to<long long>();
}

long long to_ll(const Int& n) { return n.convert_to<long long>(); }

bool resolved_nonzero(const ApproxElt& c) { return !is_exact_zero(c) && !is_weakly_zero(c); }

/// Valuation of an approximation, or its precision as a lower bound when the
/// valuation has not resolved (+inf for exact zeros).
ExtVal val_or_bound(const ApproxElt& c) {
    if (is_exact_zero(c)) return ExtVal::pos_inf();
    if (is_weakly_zero(c)) return abs_precision(c);
    return weak_valuation(c);
}

// Uniformizer of the tower as an exact element.
XElt xelt_uniformizer(const XF& f) {
    if (!f->base) return x_const(f, Rat(f->p));
    if (f->kind == FieldKind::eisen) return x_gen(f);
    return x_coerce_up(f, xelt_uniformizer(f->base));
}

// Lift of the residue-field generator: the generator of the unique inert step.
XElt xelt_res_gen(const XF& f) {
    if (f->kind == FieldKind::inert) return x_gen(f);
    if (f->base) return x_coerce_up(f, xelt_res_gen(f->base));
    throw std::runtime_error("not implemented: residue generator over a prime field");
}

// Exact lift of a residue element along the power basis of the residue field.
XElt xelt_lift_ff(const XF& f, const FFElt& a) {
    XElt acc = x_const(f, a.c.empty() ? Rat(0) : Rat(a.c[0]));
    if (a.c.size() > 1) {
        XElt g = xelt_res_gen(f);
        for (std::size_t i = 1; i < a.c.size(); ++i) {
            if (a.c[i] == 0) continue;
            acc = x_add(acc, x_mul(x_const(f, Rat(a.c[i])), x_pow(g, static_cast<long long>(i))));
        }
    }
    return acc;
}

// Determinant of a square matrix of exact elements by cofactor expansion.
XElt xelt_det(const std::vector<std::vector<XElt>>& m) {
    std::size_t n = m.size();
    if (n == 1) return m[0][0];
    std::optional<XElt> acc;
    for (std::size_t j = 0; j < n; ++j) {
        std::vector<std::vector<XElt>> minor;
        minor.reserve(n - 1);
        for (std::size_t r = 1; r < n; ++r) {
            std::vector<XElt> row;
            row.reserve(n - 1);
            for (std::size_t c = 0; c < n; ++c)
                if (c != j) row.push_back(m[r][c]);
            minor.push_back(std::move(row));
        }
        XElt term = x_mul(m[0][j], xelt_det(minor));
        if (j % 2 == 1) term = x_neg(term);
        acc = acc ? x_add(*acc, term) : term;
    }
    return *acc;
}

// Re-embed an iterate into the epoch field at full capacity relative
// precision; the enclosure truncation happens separately after iterating.
ApproxElt raise_full(const FieldPtr& fn, const ApproxElt& x) {
    long long prec = is_weakly_zero(x) ? fn->capacity : weak_val_own(x) + fn->capacity;
    return embed_rep(fn, weak_approximation(x), prec);
}

// Truncate x to the proven enclosure radius (absolute valuation).
ApproxElt restrict_prec(const ApproxElt& x, const ExtVal& rad) {
    if (!rad.is_finite()) return x;
    long long own = floor_rat(Rat(rad.finite() * x.fld->abs_e));
    long long cur = abs_prec_own(x);
    if (cur == kValInf || own < cur) return change_precision_own(x, own);
    return x;
}

void check_weak_monic(const XPoly& f, const char* who) {
    const ApproxPoly& p = xp_apx(f, kFirstEpoch);
    long long d = f.declared_degree;
    bool ok = d >= 0 && d <= degree_stored(p);
    if (ok) {
        const ApproxElt& lead = p.coeffs[static_cast<std::size_t>(d)];
        ok = !is_exact_zero(lead) && weak_equal(lead, embed_full(p.fld, Rat(1)));
    }
    if (!ok) throw std::invalid_argument(std::string(who) + ": polynomial is not weakly monic");
}

// --- per-epoch confirmed polygon data ---------------------------------------

struct EpochPoints {
    // Parallel arrays over coefficient indices 0..top; exact zeros are skipped
    // points (exz true, value +inf).
    std::vector<ExtVal> val;   // valuation or precision bound
    std::vector<bool> resolved;
    std::vector<bool> exz;
    long long top = -1;  // last stored index considered
    long long hi = -1;   // last non-exact-zero index (-1 if none)
    std::vector<PolygonSection> sections;
};

EpochPoints epoch_points(const ApproxPoly& p, long long declared) {
    EpochPoints ep;
    ep.top = std::min<long long>(degree_stored(p), declared);
    ep.val.assign(static_cast<std::size_t>(ep.top) + 1, ExtVal::pos_inf());
    ep.resolved.assign(static_cast<std::size_t>(ep.top) + 1, false);
    ep.exz.assign(static_cast<std::size_t>(ep.top) + 1, true);
    std::vector<std::pair<Rat, Rat>> lower, upper;
    for (long long i = 0; i <= ep.top; ++i) {
        const ApproxElt& c = p.coeffs[static_cast<std::size_t>(i)];
        if (is_exact_zero(c)) continue;
        ep.exz[static_cast<std::size_t>(i)] = false;
        ep.hi = i;
        if (is_weakly_zero(c)) {
            ep.val[static_cast<std::size_t>(i)] = abs_precision(c);
            lower.emplace_back(Rat(i), abs_precision(c).finite());
        } else {
            ep.val[static_cast<std::size_t>(i)] = weak_valuation(c);
            ep.resolved[static_cast<std::size_t>(i)] = true;
            lower.emplace_back(Rat(i), weak_valuation(c).finite());
            upper.emplace_back(Rat(i), weak_valuation(c).finite());
        }
    }
    if (!lower.empty() && !upper.empty())
        ep.sections = confirmed_polygon_sections(std::move(lower), std::move(upper));
    return ep;
}

// The confirmed section whose span contains abscissa hi, if any.
const PolygonSection* covering_section(const EpochPoints& ep, long long hi) {
    Rat h(hi);
    for (const auto& s : ep.sections)
        if (s.vertices.front().first <= h && s.vertices.back().first >= h) return &s;
    return nullptr;
}

NPFace face_between(const std::pair<Rat, Rat>& a, const std::pair<Rat, Rat>& b) {
    NPFace f;
    f.x0 = a.first;
    f.y0 = a.second;
    f.x1 = b.first;
    f.y1 = b.second;
    f.slope = Rat((b.second - a.second) / (b.first - a.first));
    return f;
}

// --- structural helpers ------------------------------------------------------

// Number of leading coefficients that are exactly zero (structural x^z part).
long long exact_zero_prefix(const XPoly& f) {
    const ApproxPoly& p = xp_apx(f, kFirstEpoch);
    long long top = std::min<long long>(degree_stored(p), f.declared_degree);
    long long z = 0;
    while (z <= top && is_exact_zero(p.coeffs[static_cast<std::size_t>(z)])) ++z;
    return z > top ? -1 : z;  // -1: every stored coefficient is exactly zero
}

XPoly monomial_poly(const XF& K, long long z) {
    std::vector<Rat> mc(static_cast<std::size_t>(z) + 1, Rat(0));
    mc[static_cast<std::size_t>(z)] = 1;
    return xp_from_rats(K, mc);
}

// The exact cofactor f / x^z when the z lowest coefficients are exactly zero.
XPoly slice_low(const XPoly& f, long long z, long long declared) {
    return xp_from_compute(
        f.fld, {f.node}, declared,
        [z](const FieldPtr& fld, long long, const std::vector<const Apx*>& dep) {
            const ApproxPoly& p = as_poly(*dep[0]);
            std::vector<ApproxElt> cs;
            for (std::size_t i = static_cast<std::size_t>(z); i < p.coeffs.size(); ++i)
                cs.push_back(p.coeffs[i]);
            if (cs.empty()) cs.push_back(exact_zero_elt(fld));
            return ApproxPoly{fld, std::move(cs)};
        });
}

// --- univariate root lifting --------------------------------------------------

XElt make_root_node(const XPoly& f, const XElt& a, const LiftCertificate& cert,
                    const std::shared_ptr<RootIterationLog>& log) {
    XPoly fd = xp_derivative(f);
    auto warm = std::make_shared<std::optional<ApproxElt>>();
    ExtVal s = cert.s, t = cert.t;
    XElt root = x_from_compute(
        f.fld, {f.node, fd.node, a.node},
        [warm, s, t, log](const FieldPtr& fld, long long, const std::vector<const Apx*>& dep) {
            const ApproxPoly& fp = as_poly(*dep[0]);
            const ApproxPoly& fdp = as_poly(*dep[1]);
            ApproxElt cur = raise_full(fld, *warm ? **warm : as_elt(*dep[2]));
            if (log) log->segment_starts.push_back(log->residual_valuations.size());
            ApproxElt fx = poly_eval(fp, cur);
            bool reseeded = !*warm;
            for (long long it = 0; it < fld->capacity + 32; ++it) {
                if (is_weakly_zero(fx)) break;
                ApproxElt fdx = poly_eval(fdp, cur);
                if (!resolved_nonzero(fdx)) break;
                // Warm seeds truncated below the convergence basin
                // v(f(cur)) > 2 v(f'(cur)) would diverge; fall back to the
                // certified input, whose residual only resolves inside it.
                if (!(val_or_bound(fx) > weak_valuation(fdx).scale(Rat(2)))) {
                    if (reseeded) break;
                    reseeded = true;
                    cur = raise_full(fld, as_elt(*dep[2]));
                    fx = poly_eval(fp, cur);
                    continue;
                }
                if (log) log->residual_valuations.push_back(weak_valuation(fx).finite());
                cur = sub(cur, div_elt(fx, fdx));
                fx = poly_eval(fp, cur);
            }
            // v(cur - root) >= v(f(cur)) - t; fall back to the certificate's
            // s - t enclosure when the derivative's valuation is unresolved.
            ExtVal base = val_or_bound(fx);
            ApproxElt fdx = poly_eval(fdp, cur);
            ExtVal rad = resolved_nonzero(fdx) ? base - weak_valuation(fdx) : s - t;
            *warm = cur;  // keep the unrestricted iterate as next epoch's seed
            return restrict_prec(cur, rad);
        });
    root.node->fast_unsafe = true;
    return root;
}

} // namespace

RootLift is_hensel_liftable_root(const XPoly& f, const XElt& a,
                                 const std::shared_ptr<RootIterationLog>& log) {
    require(xf_same(f.fld, a.fld), "is_hensel_liftable_root: field mismatch");
    require(f.declared_degree >= 1, "is_hensel_liftable_root: degree must be at least 1");
    XPoly g = xp_shift(f, a);
    for (long long n = kFirstEpoch;; ++n) {
        const ApproxPoly& gp = xp_apx(g, n);  // precision error beyond max_epoch
        EpochPoints ep = epoch_points(gp, f.declared_degree);
        if (ep.hi < 0) throw std::invalid_argument("is_hensel_liftable_root: polynomial is exactly zero");
        long long z = 0;
        while (ep.exz[static_cast<std::size_t>(z)]) ++z;
        // a is an exact multiple root: undecidable, keep raising epochs.
        if (z >= 2) continue;
        // No nonconstant part at all: f is a nonzero constant, no roots.
        if (ep.hi == 0)
            return {false, std::nullopt, {LiftKind::uni_root, ep.val[0], ExtVal::pos_inf(), {}, {}}};
        // True branch: (1, v(g1)) is a strict vertex, so the first face has
        // width 1 and the distance to the nearest root is maximized once.
        if (ep.top >= 1 && ep.resolved[1]) {
            ExtVal y1 = ep.val[1];
            ExtVal L0 = z == 1 ? ExtVal::pos_inf() : ep.val[0];
            bool strict = true;
            for (long long i = 2; i <= ep.top && strict; ++i) {
                if (ep.exz[static_cast<std::size_t>(i)]) continue;
                ExtVal rhs = y1 + (y1 - L0).scale(Rat(i - 1));
                if (!(ep.val[static_cast<std::size_t>(i)] > rhs)) strict = false;
            }
            if (strict) {
                LiftCertificate cert{LiftKind::uni_root, L0, y1, {}, {}};
                XElt root = make_root_node(f, a, cert, log);
                return {true, root, cert};
            }
        }
        // False branch: the first face provably has width >= 2, witnessed by a
        // resolved point at abscissa >= 2 achieving the global minimum slope.
        if (z == 0 && ep.resolved[0]) {
            Rat s0 = ep.val[0].finite();
            std::optional<Rat> best;
            bool witness = false;
            for (long long i = 1; i <= ep.top; ++i) {
                if (ep.exz[static_cast<std::size_t>(i)]) continue;
                Rat sl = Rat((ep.val[static_cast<std::size_t>(i)].finite() - s0) / i);
                if (!best || sl < *best) {
                    best = sl;
                    witness = i >= 2 && ep.resolved[static_cast<std::size_t>(i)];
                } else if (sl == *best && i >= 2 && ep.resolved[static_cast<std::size_t>(i)]) {
                    witness = true;
                }
            }
            if (witness)
                return {false, std::nullopt,
                        {LiftKind::uni_root, ep.val[0], ep.top >= 1 ? ep.val[1] : ExtVal::pos_inf(), {}, {}}};
        }
    }
}

// --- root finding ---------------------------------------------------------------

namespace {

std::vector<std::pair<XElt, long long>> roots_impl(const XPoly& f, long long depth,
                                                   std::optional<long long> cluster) {
    XF K = f.fld;
    require(f.declared_degree >= 0, "roots: polynomial is exactly zero");
    long long z = exact_zero_prefix(f);
    require(z >= 0, "roots: polynomial is exactly zero");
    std::vector<std::pair<XElt, long long>> out;
    if (z == 1) {
        // 0 is an exact root; include it exactly when it is simple.
        RootLift rl = is_hensel_liftable_root(f, x_zero(K));
        if (rl.ok) out.emplace_back(*rl.root, 1);
    }
    // z >= 2: 0 is an exact repeated root, excluded (only simple roots are returned).
    long long d = f.declared_degree - std::max<long long>(z, 0);
    if (d <= 0) return out;
    std::optional<long long> sub_cluster;
    if (cluster) {
        sub_cluster = *cluster - z;
        if (*sub_cluster <= 0) return out;
    }
    XPoly s = z >= 1 ? slice_low(f, z, d) : f;
    XElt unif = xelt_uniformizer(K);
    for (long long n = std::max<long long>(s.node->epoch(), kFirstEpoch);; ++n) {
        const ApproxPoly& sp = xp_apx(s, n);  // precision error beyond max_epoch
        EpochPoints ep = epoch_points(sp, d);
        long long hi = sub_cluster ? *sub_cluster : ep.hi;
        if (hi <= 0) return out;
        const PolygonSection* sec = covering_section(ep, hi);
        if (!sec) continue;
        long long xl = to_ll(numerator(sec->vertices.front().first));
        if (xl >= 2) continue;  // several roots hide beyond the confirmed region
        if (xl == 1) {
            // At most one root lies above every confirmed face. A successful
            // lift from 0 finds it and certifies that the leftmost confirmed
            // face is a true face; a refusal means the first true face extends
            // left of the confirmed region, so the polygon must resolve more.
            RootLift rl = is_hensel_liftable_root(s, x_zero(K));
            if (!rl.ok) continue;
            out.emplace_back(*rl.root, 1);
        }
        for (std::size_t vi = 0; vi + 1 < sec->vertices.size(); ++vi) {
            NPFace face = face_between(sec->vertices[vi], sec->vertices[vi + 1]);
            if (face.x1 > Rat(hi)) break;
            Rat m_own = Rat(-face.slope * K->abs_e);
            if (denominator(m_own) != 1) continue;  // no roots of this valuation in K
            long long m = to_ll(numerator(m_own));
            if (sub_cluster && m < 1) continue;  // outside the cluster's digits
            FFPoly R = residual_polynomial(s, face);
            for (const auto& rr : ffp_roots(R)) {
                XElt cand = x_mul(x_pow(unif, m), xelt_lift_ff(K, rr.first));
                if (rr.second == 1) {
                    RootLift rl = is_hensel_liftable_root(s, cand);
                    if (!rl.ok) throw std::logic_error("roots: simple residual root failed to lift");
                    out.emplace_back(*rl.root, 1);
                } else {
                    if (depth <= 0)
                        throw depth_error("roots: depth budget exhausted before separating a residual root cluster");
                    XElt pim = x_pow(unif, m);
                    XPoly shifted = xp_scale_x(xp_shift(s, cand), pim);
                    auto inner = roots_impl(shifted, depth - 1, rr.second);
                    for (const auto& yr : inner)
                        out.emplace_back(x_add(cand, x_mul(pim, yr.first)), 1);
                }
            }
        }
        return out;
    }
}

} // namespace

std::vector<std::pair<XElt, long long>> roots(const XPoly& f, long long depth_budget) {
    return roots_impl(f, depth_budget, std::nullopt);
}

// --- multivariate system lifting ----------------------------------------------

SystemLift is_hensel_liftable_system(const XMPolySystem& F, const std::vector<XElt>& a,
                                     const std::optional<std::vector<Rat>>& mu,
                                     const std::optional<std::vector<Rat>>& nu) {
    long long r = F.rank;
    require(r >= 1 && static_cast<long long>(F.eqs.size()) == r,
            "is_hensel_liftable_system: system is not square");
    require(static_cast<long long>(a.size()) == r,
            "is_hensel_liftable_system: one start component per variable required");
    XF K = a[0].fld;
    for (const XElt& ai : a)
        require(xf_same(ai.fld, K), "is_hensel_liftable_system: component field mismatch");
    std::vector<Rat> muv = mu ? *mu : std::vector<Rat>(static_cast<std::size_t>(r), Rat(0));
    std::vector<Rat> nuv = nu ? *nu : std::vector<Rat>(static_cast<std::size_t>(r), Rat(0));
    require(static_cast<long long>(muv.size()) == r && static_cast<long long>(nuv.size()) == r,
            "is_hensel_liftable_system: scaling vector size mismatch");
    // Integrality of the rescaled data.
    for (long long j = 0; j < r; ++j)
        if (!valuation_ge(a[static_cast<std::size_t>(j)], ExtVal(Rat(-muv[static_cast<std::size_t>(j)]))))
            throw std::invalid_argument("is_hensel_liftable_system: rescaled data is not integral");
    for (long long i = 0; i < r; ++i)
        for (const auto& term : F.eqs[static_cast<std::size_t>(i)].terms) {
            Rat bnd = Rat(-nuv[static_cast<std::size_t>(i)]);
            for (long long j = 0; j < r; ++j)
                bnd += Rat(term.first[static_cast<std::size_t>(j)]) * muv[static_cast<std::size_t>(j)];
            if (!valuation_ge(term.second, ExtVal(bnd)))
                throw std::invalid_argument("is_hensel_liftable_system: rescaled data is not integral");
        }

    std::vector<XElt> vals = xmps_eval(K, F, a);
    auto scaled_s = [&]() {
        ExtVal sv = ExtVal::pos_inf();
        for (long long i = 0; i < r; ++i)
            sv = meet(sv, val_or_bound(x_best(vals[static_cast<std::size_t>(i)])) +
                              ExtVal(nuv[static_cast<std::size_t>(i)]));
        return sv;
    };

    LiftCertificate cert;
    cert.kind = LiftKind::multi_root;
    if (mu || nu) cert.mu_nu = std::make_pair(muv, nuv);

    // t = val det J + sum(nu) - sum(mu); an exactly singular Jacobian can never
    // satisfy s > 2t, an unresolved one is undecidable (precision error).
    XElt det = xelt_det(xmps_jacobian(K, F, a));
    Rat tdet;
    for (long long n = kFirstEpoch;; ++n) {
        const ApproxElt& dv = x_apx(det, n);  // precision error beyond max_epoch
        if (is_exact_zero(dv)) {
            cert.s = scaled_s();
            cert.t = ExtVal::pos_inf();
            return {false, std::nullopt, cert};
        }
        if (!is_weakly_zero(dv)) {
            tdet = weak_valuation(dv).finite();
            break;
        }
    }
    Rat t = tdet;
    for (long long i = 0; i < r; ++i) t += nuv[static_cast<std::size_t>(i)] - muv[static_cast<std::size_t>(i)];
    cert.t = ExtVal(t);

    bool ok = true;
    for (long long i = 0; i < r && ok; ++i)
        ok = valuation_gt(vals[static_cast<std::size_t>(i)],
                          ExtVal(Rat(2 * t - nuv[static_cast<std::size_t>(i)])));
    cert.s = scaled_s();
    if (!ok) return {false, std::nullopt, cert};

    // Shared update: all components refine together through one Newton step
    // sequence per epoch, warm-started from the previous epoch's iterate.
    struct TermRef {
        std::size_t dep;
        std::vector<long long> alpha;
    };
    std::vector<NodePtr> deps;
    std::vector<std::vector<TermRef>> eqs(static_cast<std::size_t>(r));
    for (long long i = 0; i < r; ++i)
        for (const auto& term : F.eqs[static_cast<std::size_t>(i)].terms) {
            eqs[static_cast<std::size_t>(i)].push_back({deps.size(), term.first});
            deps.push_back(term.second.node);
        }
    std::size_t abase = deps.size();
    for (long long j = 0; j < r; ++j) deps.push_back(a[static_cast<std::size_t>(j)].node);

    auto warm = std::make_shared<std::optional<std::vector<ApproxElt>>>();
    std::vector<Rat> mus = muv, nus = nuv;
    Rat tdet_c = tdet, t_c = t;
    long long rr = r;
    XTuple root = xt_from_compute(
        K, std::move(deps), static_cast<std::size_t>(r),
        [warm, eqs = std::move(eqs), abase, mus, nus, tdet_c, t_c,
         rr](const FieldPtr& fld, long long, const std::vector<const Apx*>& dep) {
            auto eval_sys = [&](const std::vector<ApproxElt>& x) {
                std::vector<ApproxElt> res;
                res.reserve(eqs.size());
                for (const auto& eq : eqs) {
                    ApproxElt acc = exact_zero_elt(fld);
                    for (const TermRef& tr : eq) {
                        ApproxElt term = as_elt(*dep[tr.dep]);
                        for (long long j = 0; j < rr; ++j)
                            if (tr.alpha[static_cast<std::size_t>(j)] != 0)
                                term = mul(term, pow_elt(x[static_cast<std::size_t>(j)],
                                                         tr.alpha[static_cast<std::size_t>(j)]));
                        acc = add(acc, term);
                    }
                    res.push_back(acc);
                }
                return res;
            };
            auto jacobian = [&](const std::vector<ApproxElt>& x) {
                std::vector<std::vector<ApproxElt>> J(
                    static_cast<std::size_t>(rr),
                    std::vector<ApproxElt>(static_cast<std::size_t>(rr), exact_zero_elt(fld)));
                for (std::size_t i = 0; i < eqs.size(); ++i)
                    for (const TermRef& tr : eqs[i])
                        for (long long j = 0; j < rr; ++j) {
                            long long e = tr.alpha[static_cast<std::size_t>(j)];
                            if (e == 0) continue;
                            ApproxElt term = mul(as_elt(*dep[tr.dep]), embed_full(fld, Rat(e)));
                            for (long long k = 0; k < rr; ++k) {
                                long long ek = tr.alpha[static_cast<std::size_t>(k)] - (k == j ? 1 : 0);
                                if (ek != 0)
                                    term = mul(term, pow_elt(x[static_cast<std::size_t>(k)], ek));
                            }
                            J[i][static_cast<std::size_t>(j)] =
                                add(J[i][static_cast<std::size_t>(j)], term);
                        }
                return J;
            };
            std::vector<ApproxElt> cur;
            cur.reserve(static_cast<std::size_t>(rr));
            auto seed_from_deps = [&]() {
                cur.clear();
                for (long long j = 0; j < rr; ++j)
                    cur.push_back(raise_full(fld, as_elt(*dep[abase + static_cast<std::size_t>(j)])));
            };
            bool reseeded = !*warm;
            if (*warm)
                for (const ApproxElt& wv : **warm) cur.push_back(raise_full(fld, wv));
            else
                seed_from_deps();
            for (long long it = 0; it < fld->capacity + 32; ++it) {
                std::vector<ApproxElt> res = eval_sys(cur);
                bool done = std::all_of(res.begin(), res.end(),
                                        [](const ApproxElt& e) { return is_weakly_zero(e); });
                if (done) break;
                // A warm seed truncated below the basin min v(N f(cur)) > 2t
                // would diverge; the dep seed's residual only resolves inside.
                ExtVal rmin = ExtVal::pos_inf();
                for (std::size_t i = 0; i < res.size(); ++i)
                    rmin = meet(rmin, val_or_bound(res[i]) + ExtVal(nus[i]));
                if (!(rmin > ExtVal(Rat(2 * t_c)))) {
                    if (reseeded) break;
                    reseeded = true;
                    seed_from_deps();
                    continue;
                }
                std::vector<ApproxElt> delta;
                try {
                    delta = linear_solve(jacobian(cur), res);
                } catch (const precision_error&) {
                    break;
                }
                for (long long j = 0; j < rr; ++j)
                    cur[static_cast<std::size_t>(j)] =
                        sub(cur[static_cast<std::size_t>(j)], delta[static_cast<std::size_t>(j)]);
            }
            // The Jacobian determinant's valuation must stay put on the
            // enclosure ball; a resolved drift means the certificate lied.
            ApproxElt dv = determinant(jacobian(cur));
            if (resolved_nonzero(dv) && weak_valuation(dv).finite() != tdet_c)
                throw std::logic_error("is_hensel_liftable_system: Jacobian valuation drifted");
            std::vector<ApproxElt> res = eval_sys(cur);
            ExtVal smin = ExtVal::pos_inf();
            for (std::size_t i = 0; i < res.size(); ++i)
                smin = meet(smin, val_or_bound(res[i]) + ExtVal(nus[i]));
            *warm = cur;  // keep the unrestricted iterates as next epoch's seed
            for (long long j = 0; j < rr; ++j)
                cur[static_cast<std::size_t>(j)] =
                    restrict_prec(cur[static_cast<std::size_t>(j)],
                                  smin - ExtVal(t_c) - ExtVal(mus[static_cast<std::size_t>(j)]));
            return cur;
        });
    root.node->fast_unsafe = true;
    return {true, std::move(root), cert};
}

// --- factor-pair lifting --------------------------------------------------------

namespace {

struct FactorCore {
    bool ok = false;
    ExtVal s;  // plain residual valuation (a bound when unresolved)
    ExtVal t;  // plain resultant valuation
    std::optional<std::pair<XPoly, XPoly>> pair;
};

// Factor-pair criterion and lift at the rational gauge w: coefficient i of a
// polynomial is weighed by w*(i - deg f), which is the bookkeeping image of
// substituting x -> pi^w x without materializing ramified scalings. w = 0 is
// the public plain criterion.
FactorCore factor_lift_core(const XPoly& f, const XPoly& g, const Rat& w) {
    require(xf_same(f.fld, g.fld), "is_hensel_liftable_factor: field mismatch");
    XF K = f.fld;
    long long df = f.declared_degree, dg = g.declared_degree, dh = df - dg;
    require(dg >= 1 && dh >= 1, "is_hensel_liftable_factor: need 0 < deg g < deg f");
    check_weak_monic(f, "is_hensel_liftable_factor");
    check_weak_monic(g, "is_hensel_liftable_factor");
    auto divided = xp_divrem(f, g);
    XPoly h = divided.first, rem = divided.second;

    FactorCore core;
    core.t = ExtVal::pos_inf();
    XElt resgh = xp_resultant(g, h);
    bool t_res = false;
    for (long long n = kFirstEpoch;; ++n) {
        const ApproxElt& rv = x_apx(resgh, n);  // precision error beyond max_epoch
        if (is_exact_zero(rv)) break;
        if (!is_weakly_zero(rv)) {
            core.t = weak_valuation(rv);
            t_res = true;
            break;
        }
    }

    core.ok = t_res;
    if (t_res) {
        Rat tw = Rat(core.t.finite() - w * dg * dh);
        for (long long i = 0; i < dg && core.ok; ++i) {
            Rat thresh = Rat(2 * tw + w * (df - i));
            core.ok = valuation_gt(xp_coeff(rem, i), ExtVal(thresh));
        }
    }
    {
        const ApproxPoly& rp = xp_best(rem);
        ExtVal sv = ExtVal::pos_inf();
        for (const ApproxElt& c : rp.coeffs) sv = meet(sv, val_or_bound(c));
        core.s = sv;
    }
    if (!core.ok) return core;

    Rat t_plain = core.t.finite();
    auto warm = std::make_shared<std::optional<std::pair<std::vector<ApproxElt>, std::vector<ApproxElt>>>>();
    auto pair = xp_pair_from_compute(
        K, {f.node, g.node, h.node}, static_cast<std::size_t>(dg) + 1, static_cast<std::size_t>(dh) + 1,
        [warm, df, dg, dh, t_plain](const FieldPtr& fld, long long, const std::vector<const Apx*>& dep) {
            const ApproxPoly& fp = as_poly(*dep[0]);
            std::vector<ApproxElt> G, H;
            auto seed_from_deps = [&]() {
                G.clear();
                H.clear();
                const ApproxPoly& gp = as_poly(*dep[1]);
                const ApproxPoly& hp = as_poly(*dep[2]);
                for (long long i = 0; i < dg; ++i)
                    G.push_back(i <= degree_stored(gp)
                                    ? raise_full(fld, gp.coeffs[static_cast<std::size_t>(i)])
                                    : exact_zero_elt(fld));
                for (long long i = 0; i < dh; ++i)
                    H.push_back(i <= degree_stored(hp)
                                    ? raise_full(fld, hp.coeffs[static_cast<std::size_t>(i)])
                                    : exact_zero_elt(fld));
                G.push_back(embed_full(fld, Rat(1)));
                H.push_back(embed_full(fld, Rat(1)));
            };
            bool reseeded = !*warm;
            if (*warm) {
                for (const ApproxElt& c : (*warm)->first) G.push_back(raise_full(fld, c));
                for (const ApproxElt& c : (*warm)->second) H.push_back(raise_full(fld, c));
                G.push_back(embed_full(fld, Rat(1)));
                H.push_back(embed_full(fld, Rat(1)));
            } else {
                seed_from_deps();
            }
            auto residual = [&]() {
                return poly_sub(fp, poly_mul(ApproxPoly{fld, G}, ApproxPoly{fld, H}));
            };
            ApproxPoly E = residual();
            auto low_weakly_zero = [&](const ApproxPoly& e) {
                for (long long i = 0; i < df && i < static_cast<long long>(e.coeffs.size()); ++i)
                    if (!is_weakly_zero(e.coeffs[static_cast<std::size_t>(i)])) return false;
                return true;
            };
            auto low_min_val = [&](const ApproxPoly& e) {
                ExtVal v = ExtVal::pos_inf();
                for (long long i = 0; i < df && i < static_cast<long long>(e.coeffs.size()); ++i)
                    v = meet(v, val_or_bound(e.coeffs[static_cast<std::size_t>(i)]));
                return v;
            };
            for (long long it = 0; it < fld->capacity + 32; ++it) {
                if (low_weakly_zero(E)) break;
                // A warm seed truncated below the basin v(f - GH) > 2t would
                // diverge; the dep seed's residual only resolves inside it.
                if (!(low_min_val(E) > ExtVal(Rat(2 * t_plain)))) {
                    if (reseeded) break;
                    reseeded = true;
                    seed_from_deps();
                    E = residual();
                    continue;
                }
                std::vector<std::vector<ApproxElt>> S(
                    static_cast<std::size_t>(df),
                    std::vector<ApproxElt>(static_cast<std::size_t>(df), exact_zero_elt(fld)));
                std::vector<ApproxElt> rhs;
                rhs.reserve(static_cast<std::size_t>(df));
                for (long long i = 0; i < df; ++i) {
                    for (long long k = 0; k < dh; ++k)
                        if (i - k >= 0 && i - k <= dg)
                            S[static_cast<std::size_t>(i)][static_cast<std::size_t>(k)] =
                                G[static_cast<std::size_t>(i - k)];
                    for (long long k = 0; k < dg; ++k)
                        if (i - k >= 0 && i - k <= dh)
                            S[static_cast<std::size_t>(i)][static_cast<std::size_t>(dh + k)] =
                                H[static_cast<std::size_t>(i - k)];
                    rhs.push_back(i < static_cast<long long>(E.coeffs.size())
                                      ? E.coeffs[static_cast<std::size_t>(i)]
                                      : exact_zero_elt(fld));
                }
                std::vector<ApproxElt> delta;
                try {
                    delta = linear_solve(std::move(S), std::move(rhs));
                } catch (const precision_error&) {
                    break;
                }
                for (long long k = 0; k < dh; ++k)
                    H[static_cast<std::size_t>(k)] =
                        add(H[static_cast<std::size_t>(k)], delta[static_cast<std::size_t>(k)]);
                for (long long k = 0; k < dg; ++k)
                    G[static_cast<std::size_t>(k)] =
                        add(G[static_cast<std::size_t>(k)], delta[static_cast<std::size_t>(dh + k)]);
                E = residual();
            }
            ExtVal base = ExtVal::pos_inf();
            for (const ApproxElt& c : E.coeffs) base = meet(base, val_or_bound(c));
            ExtVal rad = base - ExtVal(t_plain);
            // The warm state keeps the unrestricted iterates; the restriction
            // below only caps what this epoch is allowed to claim.
            *warm = std::make_pair(
                std::vector<ApproxElt>(G.begin(), G.begin() + static_cast<long long>(dg)),
                std::vector<ApproxElt>(H.begin(), H.begin() + static_cast<long long>(dh)));
            for (long long i = 0; i < dg; ++i)
                G[static_cast<std::size_t>(i)] = restrict_prec(G[static_cast<std::size_t>(i)], rad);
            for (long long i = 0; i < dh; ++i)
                H[static_cast<std::size_t>(i)] = restrict_prec(H[static_cast<std::size_t>(i)], rad);
            std::vector<ApproxElt> packed = std::move(G);
            packed.insert(packed.end(), H.begin(), H.end());
            return packed;
        },
        /*fast_unsafe=*/true);
    core.pair = std::move(pair);
    return core;
}

} // namespace

FactorLift is_hensel_liftable_factor(const XPoly& f, const XPoly& g,
                                     const std::optional<std::pair<long long, long long>>& scaling) {
    FactorLift out;
    out.cert.kind = LiftKind::factor_pair;
    if (!scaling) {
        FactorCore core = factor_lift_core(f, g, Rat(0));
        out.ok = core.ok;
        out.cert.s = core.s;
        out.cert.t = core.t;
        out.pair = std::move(core.pair);
        return out;
    }
    long long j = scaling->first, k = scaling->second;
    long long df = f.declared_degree, dg = g.declared_degree;
    require(k == -j * df, "is_hensel_liftable_factor: scaling must satisfy k = -j * deg f");
    XF K = f.fld;
    XElt unif = xelt_uniformizer(K);
    XElt pj = x_pow(unif, j);
    XPoly ft = xp_scale(xp_scale_x(f, pj), x_pow(unif, k));
    XPoly gt = xp_scale(xp_scale_x(g, pj), x_pow(unif, -j * dg));
    FactorCore core = factor_lift_core(ft, gt, Rat(0));
    out.ok = core.ok;
    out.cert.s = core.s;
    out.cert.t = core.t;
    out.cert.jk = *scaling;
    if (core.ok) {
        XElt pmj = x_pow(unif, -j);
        long long dh = df - dg;
        XPoly gb = xp_scale(xp_scale_x(core.pair->first, pmj), x_pow(unif, j * dg));
        XPoly hb = xp_scale(xp_scale_x(core.pair->second, pmj), x_pow(unif, j * dh));
        out.pair = std::make_pair(std::move(gb), std::move(hb));
    }
    return out;
}

// --- Newton polygon factorization ------------------------------------------------

namespace {

std::vector<XPoly> npf_impl(const XPoly& f) {
    XF K = f.fld;
    long long d = f.declared_degree;
    if (d <= 0) return {};
    if (d == 1) return {f};
    long long z = exact_zero_prefix(f);
    require(z >= 0, "newton_polygon_factorization: polynomial is exactly zero");
    if (z >= 1) {
        std::vector<XPoly> out{monomial_poly(K, z)};
        if (z < d) {
            auto sub = npf_impl(slice_low(f, z, d - z));
            out.insert(out.end(), sub.begin(), sub.end());
        }
        return out;
    }
    for (long long n = std::max<long long>(f.node->epoch(), kFirstEpoch);; ++n) {
        const ApproxPoly& fp = xp_apx(f, n);  // precision error beyond max_epoch
        EpochPoints ep = epoch_points(fp, d);
        if (ep.hi <= 0) return {f};
        const PolygonSection* sec = covering_section(ep, ep.hi);
        if (!sec) continue;
        long long xl = to_ll(numerator(sec->vertices.front().first));
        if (xl >= 2) continue;  // a factor of degree >= 2 hides beyond the confirmed region
        if (xl == 1) {
            // At most one root above every confirmed face: peel its linear
            // factor. A refusal means the first true face extends left of the
            // confirmed region, so raise epochs until the tail resolves.
            RootLift rl = is_hensel_liftable_root(f, x_zero(K));
            if (!rl.ok) continue;
            XPoly lin = xp_from_coeffs(K, {x_neg(*rl.root), x_one(K)});
            std::vector<XPoly> out{lin};
            auto sub = npf_impl(xp_divrem(f, lin).first);
            out.insert(out.end(), sub.begin(), sub.end());
            return out;
        }
        if (sec->vertices.size() <= 2) return {f};  // single confirmed face
        // Split at the first interior vertex; the truncation of f at the vertex
        // seeds the lower-face factor, materialized as exact constants so the
        // seed does not depend on this epoch's node caches.
        long long dg = to_ll(numerator(sec->vertices[1].first));
        Rat w = Rat(-(sec->vertices[2].second - sec->vertices[1].second) /
                    (sec->vertices[2].first - sec->vertices[1].first));
        const ApproxElt& cj = fp.coeffs[static_cast<std::size_t>(dg)];
        if (is_weakly_zero(cj)) continue;
        std::vector<XElt> seed;
        seed.reserve(static_cast<std::size_t>(dg) + 1);
        for (long long i = 0; i < dg; ++i) {
            const ApproxElt& ci = fp.coeffs[static_cast<std::size_t>(i)];
            seed.push_back(x_const_rep(K, weak_approximation(div_elt(ci, cj))));
        }
        seed.push_back(x_one(K));
        FactorCore core = factor_lift_core(f, xp_from_coeffs(K, seed), w);
        if (!core.ok) continue;  // sharper seed needed: next epoch
        std::vector<XPoly> out = npf_impl(core.pair->first);
        auto sub = npf_impl(core.pair->second);
        out.insert(out.end(), sub.begin(), sub.end());
        return out;
    }
}

} // namespace

std::vector<XPoly> newton_polygon_factorization(const XPoly& f) {
    require(f.declared_degree >= 0, "newton_polygon_factorization: polynomial is exactly zero");
    XElt lead = xp_coeff(f, f.declared_degree);
    require(!is_exact_zero(x_best(lead)),
            "newton_polygon_factorization: leading coefficient is exactly zero");
    XPoly fm = xp_scale(f, x_inv(lead));
    return npf_impl(fm);
}

// --- slope/residual splitting ------------------------------------------------------

namespace {

std::vector<std::pair<XPoly, SplitTag>> split_impl(const XPoly& f, long long depth);

// Split one single-slope part along its first residual group: the seed raises
// the group's residue-level factor to a polynomial supported on the face.
std::pair<XPoly, XPoly> residue_split(const XPoly& part, const NPFace& face,
                                      const std::pair<FFPoly, long long>& grp) {
    XF K = part.fld;
    Rat s_own = Rat(face.slope * K->abs_e);
    long long h = to_ll(Int(-numerator(s_own)));
    long long e = to_ll(denominator(s_own));
    FFPoly Q = ffp_pow(grp.first, grp.second);
    long long d1p = ffp_degree(Q);
    long long d1 = e * d1p;
    XElt unif = xelt_uniformizer(K);
    std::vector<XElt> seed(static_cast<std::size_t>(d1) + 1, x_zero(K));
    for (long long jj = 0; jj <= d1p; ++jj) {
        const FFElt& q = Q.c[static_cast<std::size_t>(jj)];
        if (ff_is_zero(q)) continue;
        seed[static_cast<std::size_t>(e * jj)] =
            x_mul(xelt_lift_ff(K, q), x_pow(unif, h * (d1p - jj)));
    }
    FactorCore core = factor_lift_core(part, xp_from_coeffs(K, seed), Rat(-face.slope));
    if (!core.ok) throw std::logic_error("split_factorization: residue split failed to lift");
    return *core.pair;
}

std::vector<std::pair<XPoly, SplitTag>> split_impl(const XPoly& f, long long depth) {
    XF K = f.fld;
    FF kres = residue_field(K->at_epoch(kFirstEpoch));
    std::vector<std::pair<XPoly, SplitTag>> out;
    auto parts = npf_impl(f);
    for (XPoly& part : parts) {
        long long d = part.declared_degree;
        long long z = exact_zero_prefix(part);
        if (z >= d) {  // the exact x^d factor
            out.emplace_back(std::move(part),
                             SplitTag{std::nullopt, ffp_from_ints(kres, {0, 1}), d, true});
            continue;
        }
        if (d == 1 && is_weakly_zero(x_best(xp_coeff(part, 0)))) {
            // A peeled linear factor whose root hides near 0: its slope is not
            // resolvable, but a linear factor is already fully separated.
            out.emplace_back(std::move(part),
                             SplitTag{std::nullopt, ffp_from_ints(kres, {0, 1}), 1, true});
            continue;
        }
        NewtonPolygon np = newton_polygon(part);
        if (np.faces.size() != 1)
            throw std::logic_error("split_factorization: expected a single-slope part");
        const NPFace& face = np.faces[0];
        FFPoly R = residual_polynomial(part, face);
        auto groups = ffp_factor(R);
        if (groups.size() >= 2) {
            auto pieces = residue_split(part, face, groups[0]);
            auto s1 = split_impl(pieces.first, depth);
            auto s2 = split_impl(pieces.second, depth);
            out.insert(out.end(), std::make_move_iterator(s1.begin()), std::make_move_iterator(s1.end()));
            out.insert(out.end(), std::make_move_iterator(s2.begin()), std::make_move_iterator(s2.end()));
            continue;
        }
        const FFPoly& P = groups[0].first;
        long long power = groups[0].second;
        if (power == 1) {
            out.emplace_back(std::move(part), SplitTag{face.slope, P, 1, true});
            continue;
        }
        Rat s_own = Rat(face.slope * K->abs_e);
        bool can_substitute = ffp_degree(P) == 1 && denominator(s_own) == 1 && depth > 0;
        if (!can_substitute) {
            out.emplace_back(std::move(part), SplitTag{face.slope, P, power, false});
            continue;
        }
        // Repeated linear residual at an integral slope: recenter on the lifted
        // residue digit and rescale so the cluster's next digit becomes the new
        // residue, spending one unit of depth.
        long long m = to_ll(Int(-numerator(s_own)));
        FFElt rt = ff_neg(ff_div(P.c[0], P.c[1]));
        XElt unif = xelt_uniformizer(K);
        XElt cand = x_mul(x_pow(unif, m), xelt_lift_ff(K, rt));
        XElt pim = x_pow(unif, m);
        XPoly inner = xp_scale(xp_scale_x(xp_shift(part, cand), pim), x_pow(unif, -m * d));
        auto sub = split_impl(inner, depth - 1);
        for (auto& piece : sub) {
            long long dh = piece.first.declared_degree;
            XPoly back = xp_scale(xp_shift(xp_scale_x(piece.first, x_pow(unif, -m)), x_neg(cand)),
                                  x_pow(unif, m * dh));
            out.emplace_back(std::move(back), SplitTag{face.slope, P, dh, piece.second.separated});
        }
    }
    return out;
}

} // namespace

std::vector<std::pair<XPoly, SplitTag>> split_factorization(const XPoly& f, long long depth_budget) {
    require(f.declared_degree >= 0, "split_factorization: polynomial is exactly zero");
    XElt lead = xp_coeff(f, f.declared_degree);
    require(!is_exact_zero(x_best(lead)), "split_factorization: leading coefficient is exactly zero");
    XPoly fm = xp_scale(f, x_inv(lead));
    return split_impl(fm, depth_budget);
}

} // namespace padic
