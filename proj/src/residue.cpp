#include "padic/residue.hpp"

#include "padic/error.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

namespace padic {

namespace {

constexpr long long kExhaustBudget = 1ll << 20;

Int modp(const Int& a, long long p) {
    Int r = a % p;
    if (r < 0) r += p;
    return r;
}

Int int_mod_inv(const Int& a, long long p) {
    // p prime, a non-zero mod p
    Int old_r = modp(a, p), rr = p;
    Int old_s = 1, s = 0;
    while (rr != 0) {
        Int q = old_r / rr;
        Int t = old_r - q * rr;
        old_r = rr;
        rr = t;
        t = old_s - q * s;
        old_s = s;
        s = t;
    }
    if (old_r != 1) throw std::invalid_argument("ff: division by zero");
    return modp(old_s, p);
}

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Reduce a coefficient vector (any length) modulo the defining polynomial.
std::vector<Int> ff_reduce(const FF& k, std::vector<Int> c) {
    std::size_t f = static_cast<std::size_t>(k->f);
    for (auto& d : c) d = modp(d, k->p);
    while (c.size() > f) {
        Int top = c.back();
        c.pop_back();
        if (top == 0) continue;
        std::size_t off = c.size() - f;
        for (std::size_t i = 0; i < f; ++i)
            c[off + i] = modp(c[off + i] - top * k->def[i], k->p);
    }
    c.resize(f, Int(0));
    return c;
}

bool same_ff(const FF& a, const FF& b) {
    return a->p == b->p && a->f == b->f && a->def == b->def;
}

void check_same_ff(const FFElt& a, const FFElt& b) {
    require(same_ff(a.fld, b.fld), "ff: field mismatch");
}

} // namespace

FF make_ff(long long p) {
    require(p >= 2, "make_ff: bad characteristic");
    auto k = std::make_shared<ResidueField>();
    k->p = p;
    k->f = 1;
    k->def = {Int(0), Int(1)};
    return k;
}

FF make_ff_ext(long long p, const std::vector<Int>& def) {
    require(p >= 2, "make_ff_ext: bad characteristic");
    require(def.size() >= 2, "make_ff_ext: degree must be >= 1");
    auto k = std::make_shared<ResidueField>();
    k->p = p;
    k->f = static_cast<long long>(def.size()) - 1;
    k->def.reserve(def.size());
    for (const auto& d : def) k->def.push_back(modp(d, p));
    require(k->def.back() == 1, "make_ff_ext: defining polynomial must be monic");
    if (k->f > 1) {
        FF base = make_ff(p);
        std::vector<FFElt> cs;
        cs.reserve(def.size());
        for (const auto& d : k->def) cs.push_back(FFElt{base, {d}});
        require(ffp_is_irreducible(ffp_make(base, std::move(cs))),
                "make_ff_ext: defining polynomial is reducible");
    }
    return k;
}

Int ff_size(const FF& k) { return pow(Int(k->p), static_cast<unsigned>(k->f)); }

FFElt ff_zero(const FF& k) { return FFElt{k, std::vector<Int>(static_cast<std::size_t>(k->f), Int(0))}; }

FFElt ff_one(const FF& k) {
    FFElt a = ff_zero(k);
    a.c[0] = 1;
    return a;
}

FFElt ff_gen(const FF& k) {
    FFElt a = ff_zero(k);
    if (k->f == 1) {
        // generator of F_p as a ring: the class of 1 has no special role; use t = def root = -def[0]
        a.c[0] = modp(-k->def[0], k->p);
    } else {
        a.c[1] = 1;
    }
    return a;
}

FFElt ff_from_int(const FF& k, const Int& n) {
    FFElt a = ff_zero(k);
    a.c[0] = modp(n, k->p);
    return a;
}

bool ff_is_zero(const FFElt& a) {
    return std::all_of(a.c.begin(), a.c.end(), [](const Int& d) { return d == 0; });
}

bool ff_eq(const FFElt& a, const FFElt& b) {
    check_same_ff(a, b);
    return a.c == b.c;
}

FFElt ff_add(const FFElt& a, const FFElt& b) {
    check_same_ff(a, b);
    FFElt z = a;
    for (std::size_t i = 0; i < z.c.size(); ++i) z.c[i] = modp(z.c[i] + b.c[i], a.fld->p);
    return z;
}

FFElt ff_sub(const FFElt& a, const FFElt& b) {
    check_same_ff(a, b);
    FFElt z = a;
    for (std::size_t i = 0; i < z.c.size(); ++i) z.c[i] = modp(z.c[i] - b.c[i], a.fld->p);
    return z;
}

FFElt ff_neg(const FFElt& a) {
    FFElt z = a;
    for (auto& d : z.c) d = modp(-d, a.fld->p);
    return z;
}

FFElt ff_mul(const FFElt& a, const FFElt& b) {
    check_same_ff(a, b);
    std::size_t f = a.c.size();
    std::vector<Int> conv(2 * f - 1, Int(0));
    for (std::size_t i = 0; i < f; ++i) {
        if (a.c[i] == 0) continue;
        for (std::size_t j = 0; j < f; ++j) conv[i + j] += a.c[i] * b.c[j];
    }
    return FFElt{a.fld, ff_reduce(a.fld, std::move(conv))};
}

FFElt ff_pow(const FFElt& a, const Int& e) {
    require(e >= 0, "ff_pow: negative exponent");
    FFElt acc = ff_one(a.fld);
    FFElt base = a;
    Int k = e;
    while (k > 0) {
        if ((k & 1) != 0) acc = ff_mul(acc, base);
        k >>= 1;
        if (k > 0) base = ff_mul(base, base);
    }
    return acc;
}

FFElt ff_inv(const FFElt& a) {
    require(!ff_is_zero(a), "ff_inv: zero element");
    if (a.fld->f == 1) return FFElt{a.fld, {int_mod_inv(a.c[0], a.fld->p)}};
    return ff_pow(a, ff_size(a.fld) - 2);
}

FFElt ff_div(const FFElt& a, const FFElt& b) { return ff_mul(a, ff_inv(b)); }

std::vector<FFElt> ff_elements(const FF& k) {
    Int q = ff_size(k);
    require(q <= kExhaustBudget, "ff_elements: field too large");
    std::vector<FFElt> out;
    out.reserve(static_cast<std::size_t>(q));
    FFElt cur = ff_zero(k);
    for (Int n = 0; n < q; ++n) {
        out.push_back(cur);
        for (std::size_t i = 0; i < cur.c.size(); ++i) {
            cur.c[i] += 1;
            if (cur.c[i] < k->p) break;
            cur.c[i] = 0;
        }
    }
    return out;
}

std::string to_string(const FFElt& a) {
    std::ostringstream os;
    if (a.fld->f == 1) {
        os << a.c[0];
        return os.str();
    }
    os << "[";
    for (std::size_t i = 0; i < a.c.size(); ++i) {
        if (i) os << ",";
        os << a.c[i];
    }
    os << "]";
    return os.str();
}

// --- polynomials ------------------------------------------------------------

FFPoly ffp_make(const FF& k, std::vector<FFElt> coeffs) {
    for (const auto& c : coeffs) require(same_ff(c.fld, k), "ffp_make: field mismatch");
    return ffp_trim(FFPoly{k, std::move(coeffs)});
}

FFPoly ffp_from_ints(const FF& k, const std::vector<long long>& coeffs) {
    std::vector<FFElt> cs;
    cs.reserve(coeffs.size());
    for (long long v : coeffs) cs.push_back(ff_from_int(k, Int(v)));
    return ffp_trim(FFPoly{k, std::move(cs)});
}

FFPoly ffp_trim(FFPoly f) {
    while (!f.c.empty() && ff_is_zero(f.c.back())) f.c.pop_back();
    return f;
}

long long ffp_degree(const FFPoly& f) { return static_cast<long long>(f.c.size()) - 1; }

bool ffp_eq(const FFPoly& f, const FFPoly& g) {
    FFPoly a = ffp_trim(f), b = ffp_trim(g);
    if (a.c.size() != b.c.size()) return false;
    for (std::size_t i = 0; i < a.c.size(); ++i)
        if (!ff_eq(a.c[i], b.c[i])) return false;
    return true;
}

FFPoly ffp_add(const FFPoly& f, const FFPoly& g) {
    std::vector<FFElt> out;
    std::size_t n = std::max(f.c.size(), g.c.size());
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= f.c.size()) out.push_back(g.c[i]);
        else if (i >= g.c.size()) out.push_back(f.c[i]);
        else out.push_back(ff_add(f.c[i], g.c[i]));
    }
    return ffp_trim(FFPoly{f.fld, std::move(out)});
}

FFPoly ffp_sub(const FFPoly& f, const FFPoly& g) {
    FFPoly ng = g;
    for (auto& c : ng.c) c = ff_neg(c);
    return ffp_add(f, ng);
}

FFPoly ffp_mul(const FFPoly& f, const FFPoly& g) {
    if (f.c.empty() || g.c.empty()) return FFPoly{f.fld, {}};
    std::vector<FFElt> out(f.c.size() + g.c.size() - 1, ff_zero(f.fld));
    for (std::size_t i = 0; i < f.c.size(); ++i)
        for (std::size_t j = 0; j < g.c.size(); ++j)
            out[i + j] = ff_add(out[i + j], ff_mul(f.c[i], g.c[j]));
    return ffp_trim(FFPoly{f.fld, std::move(out)});
}

FFPoly ffp_scale(const FFPoly& f, const FFElt& c) {
    std::vector<FFElt> out;
    out.reserve(f.c.size());
    for (const auto& a : f.c) out.push_back(ff_mul(a, c));
    return ffp_trim(FFPoly{f.fld, std::move(out)});
}

FFPoly ffp_monic(const FFPoly& f) {
    require(!f.c.empty(), "ffp_monic: zero polynomial");
    return ffp_scale(f, ff_inv(f.c.back()));
}

FFDivRem ffp_divrem(const FFPoly& f, const FFPoly& g) {
    require(!g.c.empty(), "ffp_divrem: division by zero");
    FFElt linv = ff_inv(g.c.back());
    std::vector<FFElt> rem = f.c;
    long long dg = ffp_degree(g);
    long long dr = static_cast<long long>(rem.size()) - 1;
    if (dr < dg) return FFDivRem{FFPoly{f.fld, {}}, f};
    std::vector<FFElt> quot(static_cast<std::size_t>(dr - dg + 1), ff_zero(f.fld));
    while (dr >= dg) {
        FFElt t = ff_mul(rem.back(), linv);
        quot[static_cast<std::size_t>(dr - dg)] = t;
        if (!ff_is_zero(t))
            for (long long i = 0; i < dg; ++i) {
                auto& slot = rem[static_cast<std::size_t>(dr - dg + i)];
                slot = ff_sub(slot, ff_mul(t, g.c[static_cast<std::size_t>(i)]));
            }
        rem.pop_back();
        --dr;
    }
    return FFDivRem{ffp_trim(FFPoly{f.fld, std::move(quot)}), ffp_trim(FFPoly{f.fld, std::move(rem)})};
}

FFPoly ffp_gcd(const FFPoly& f, const FFPoly& g) {
    FFPoly a = ffp_trim(f), b = ffp_trim(g);
    while (!b.c.empty()) {
        FFPoly r = ffp_divrem(a, b).rem;
        a = b;
        b = r;
    }
    return a.c.empty() ? a : ffp_monic(a);
}

FFPoly ffp_pow(const FFPoly& f, long long e) {
    require(e >= 0, "ffp_pow: negative exponent");
    FFPoly acc = ffp_from_ints(f.fld, {1});
    FFPoly base = f;
    while (e > 0) {
        if (e & 1) acc = ffp_mul(acc, base);
        e >>= 1;
        if (e > 0) base = ffp_mul(base, base);
    }
    return acc;
}

FFElt ffp_eval(const FFPoly& f, const FFElt& x) {
    FFElt acc = ff_zero(f.fld);
    for (long long i = ffp_degree(f); i >= 0; --i)
        acc = ff_add(ff_mul(acc, x), f.c[static_cast<std::size_t>(i)]);
    return acc;
}

std::string to_string(const FFPoly& f) {
    if (f.c.empty()) return "0";
    std::ostringstream os;
    for (std::size_t i = 0; i < f.c.size(); ++i) {
        if (i) os << " + ";
        os << to_string(f.c[i]);
        if (i) os << "*x^" << i;
    }
    return os.str();
}

std::vector<std::pair<FFElt, long long>> ffp_roots(const FFPoly& f) {
    std::vector<std::pair<FFElt, long long>> out;
    FFPoly g = ffp_trim(f);
    require(!g.c.empty(), "ffp_roots: zero polynomial");
    for (const auto& a : ff_elements(f.fld)) {
        if (!ff_is_zero(ffp_eval(g, a))) continue;
        // multiplicity by repeated division by (x - a)
        FFPoly lin = ffp_make(f.fld, {ff_neg(a), ff_one(f.fld)});
        long long mult = 0;
        FFPoly h = g;
        while (true) {
            FFDivRem dr = ffp_divrem(h, lin);
            if (!dr.rem.c.empty()) break;
            ++mult;
            h = dr.quot;
        }
        out.emplace_back(a, mult);
    }
    return out;
}

namespace {

// Enumerate monic polynomials of degree d; returns false (stopping) when the
// visitor returns false.
template <typename Fn>
void enumerate_monic(const FF& k, long long d, Fn&& visit) {
    std::vector<FFElt> elems = ff_elements(k);
    Int q = ff_size(k);
    Int count = pow(q, static_cast<unsigned>(d));
    if (count > kExhaustBudget)
        throw std::runtime_error("not implemented: residue polynomial search space too large");
    std::vector<std::size_t> idx(static_cast<std::size_t>(d), 0);
    for (Int n = 0; n < count; ++n) {
        std::vector<FFElt> cs;
        cs.reserve(static_cast<std::size_t>(d) + 1);
        for (std::size_t i = 0; i < idx.size(); ++i) cs.push_back(elems[idx[i]]);
        cs.push_back(ff_one(k));
        if (!visit(FFPoly{k, std::move(cs)})) return;
        for (std::size_t i = 0; i < idx.size(); ++i) {
            if (++idx[i] < elems.size()) break;
            idx[i] = 0;
        }
    }
}

} // namespace

bool ffp_is_irreducible(const FFPoly& f) {
    FFPoly g = ffp_trim(f);
    long long d = ffp_degree(g);
    if (d <= 0) return false;
    if (d == 1) return true;
    bool reducible = false;
    for (long long dd = 1; dd <= d / 2 && !reducible; ++dd) {
        enumerate_monic(g.fld, dd, [&](const FFPoly& cand) {
            if (ffp_divrem(g, cand).rem.c.empty()) {
                reducible = true;
                return false;
            }
            return true;
        });
    }
    return !reducible;
}

std::vector<std::pair<FFPoly, long long>> ffp_factor(const FFPoly& f) {
    FFPoly g = ffp_trim(f);
    require(!g.c.empty(), "ffp_factor: zero polynomial");
    std::vector<std::pair<FFPoly, long long>> out;
    g = ffp_monic(g);
    long long dd = 1;
    while (ffp_degree(g) > 0) {
        if (dd > ffp_degree(g) / 2) {
            // remainder is irreducible
            out.emplace_back(g, 1);
            break;
        }
        FFPoly found{g.fld, {}};
        enumerate_monic(g.fld, dd, [&](const FFPoly& cand) {
            if (ffp_divrem(g, cand).rem.c.empty()) {
                found = cand;
                return false;
            }
            return true;
        });
        if (found.c.empty()) {
            ++dd;
            continue;
        }
        // smallest-degree divisor is irreducible; strip its full multiplicity
        long long mult = 0;
        while (true) {
            FFDivRem dr = ffp_divrem(g, found);
            if (!dr.rem.c.empty()) break;
            ++mult;
            g = dr.quot;
        }
        out.emplace_back(found, mult);
    }
    return out;
}

std::optional<std::pair<FFPoly, long long>> ffp_irreducible_power(const FFPoly& f) {
    auto fac = ffp_factor(f);
    if (fac.size() != 1) return std::nullopt;
    return std::make_pair(fac[0].first, fac[0].second);
}

// --- connection to p-adic fields --------------------------------------------

namespace {

// Base-p digit vectors of the residue image; length = residue degree of K.
std::vector<Int> res_digits(const FieldPtr& K, const ApproxElt& x);

std::vector<Int> res_digits(const FieldPtr& K, const ApproxElt& x) {
    if (K->kind == FieldKind::prime) {
        if (is_weakly_zero(x) || x.v > 0) return {Int(0)};
        Int d = x.u % K->p;
        if (d < 0) d += K->p;
        return {d};
    }
    if (K->kind == FieldKind::eisen) return res_digits(K->base, x.coeffs[0]);
    std::vector<Int> out;
    out.reserve(x.coeffs.size());
    for (const auto& c : x.coeffs) {
        std::vector<Int> d = res_digits(K->base, c);
        if (d.size() != 1) throw std::runtime_error("not implemented: residue field with two inert steps");
        out.push_back(d[0]);
    }
    return out;
}

} // namespace

FF residue_field(const FieldPtr& K) {
    if (K->kind == FieldKind::prime) return make_ff(K->p);
    FF b = residue_field(K->base);
    if (K->kind == FieldKind::eisen) return b;
    if (b->f != 1) throw std::runtime_error("not implemented: residue field with two inert steps");
    std::vector<Int> def;
    def.reserve(K->def_coeffs.size());
    for (const auto& c : K->def_coeffs) {
        if (abs_prec_own(c) < 1) throw precision_error("residue_field: defining polynomial too imprecise");
        def.push_back(res_digits(K->base, c)[0]);
    }
    return make_ff_ext(K->p, def);
}

FFElt residue(const FieldPtr& K, const ApproxElt& x) {
    long long k = abs_prec_own(x);
    if (k != kValInf && k < 1) throw precision_error("residue: insufficient precision");
    if (!is_weakly_zero(x) && weak_val_own(x) < 0)
        throw std::invalid_argument("residue: element is not integral");
    FF R = residue_field(K);
    std::vector<Int> d = res_digits(K, x);
    d.resize(static_cast<std::size_t>(R->f), Int(0));
    return FFElt{R, std::move(d)};
}

namespace {

ApproxElt q_inv_digits(const FieldPtr& K, const std::vector<Int>& digits) {
    if (K->kind == FieldKind::prime) {
        if (digits.empty() || digits[0] == 0) return weakly_zero_elt(K, 1);
        return embed(K, Rat(digits[0]), 1);
    }
    ApproxElt x;
    x.fld = K;
    x.coeffs.reserve(static_cast<std::size_t>(K->rel_degree));
    if (K->kind == FieldKind::eisen) {
        x.coeffs.push_back(q_inv_digits(K->base, digits));
        for (long long i = 1; i < K->rel_degree; ++i) x.coeffs.push_back(exact_zero_elt(K->base));
    } else {
        for (long long i = 0; i < K->rel_degree; ++i) {
            std::vector<Int> d;
            if (static_cast<std::size_t>(i) < digits.size()) d.push_back(digits[static_cast<std::size_t>(i)]);
            x.coeffs.push_back(q_inv_digits(K->base, d));
        }
    }
    return change_precision_own(x, 1);
}

} // namespace

ApproxElt q_inv(const FieldPtr& K, const FFElt& a) { return q_inv_digits(K, a.c); }

DefCheck check_inert_irreducible(const FieldPtr& base, const std::vector<ApproxElt>& def_coeffs) {
    DefCheck vals = check_defining(FieldKind::inert, base, def_coeffs);
    if (vals == DefCheck::violated) return DefCheck::violated;
    FF R = residue_field(base);
    if (R->f != 1) throw std::runtime_error("not implemented: residue field with two inert steps");
    std::vector<FFElt> cs;
    cs.reserve(def_coeffs.size());
    for (const auto& c : def_coeffs) {
        if (abs_prec_own(c) < 1) return DefCheck::undecided;
        cs.push_back(residue(base, c));
    }
    bool irred = ffp_is_irreducible(ffp_make(R, std::move(cs)));
    if (!irred) return DefCheck::violated;
    return vals;
}

// --- quotient rings ----------------------------------------------------------

QuotientRing make_quotient(const FieldPtr& K, long long n) {
    if (n < 1) throw std::invalid_argument("make_quotient: n must be positive");
    bool ok = K->kind == FieldKind::prime ||
              (K->kind == FieldKind::inert && K->base && K->base->kind == FieldKind::prime);
    if (!ok) throw std::runtime_error("not implemented: quotient rings for ramified or layered towers");
    return QuotientRing{K, n};
}

std::vector<Int> quot_project(const QuotientRing& R, const ApproxElt& x) {
    long long k = abs_prec_own(x);
    if (k != kValInf && k < R.n) throw precision_error("quot_project: insufficient precision");
    if (!is_weakly_zero(x) && weak_val_own(x) < 0)
        throw std::invalid_argument("quot_project: element is not integral");
    long long f = R.fld->kind == FieldKind::prime ? 1 : R.fld->rel_degree;
    std::vector<Int> out(static_cast<std::size_t>(R.n * f), Int(0));
    auto emit = [&](long long i, const ApproxElt& c) {
        // c: prime-level element, digits into slots [j*f + i]
        if (is_weakly_zero(c) || c.v >= R.n) return;
        Int u = c.u;
        const FieldPtr& pf = R.fld->kind == FieldKind::prime ? R.fld : R.fld->base;
        u = u % pf->ppow(std::min(c.v + c.r, R.n) - c.v);
        if (u < 0) u += pf->ppow(std::min(c.v + c.r, R.n) - c.v);
        for (long long j = c.v; j < R.n && u != 0; ++j) {
            out[static_cast<std::size_t>(j * f + i)] = u % pf->p;
            u /= pf->p;
        }
    };
    if (R.fld->kind == FieldKind::prime) emit(0, x);
    else
        for (long long i = 0; i < f; ++i) emit(i, x.coeffs[static_cast<std::size_t>(i)]);
    return out;
}

ApproxElt quot_lift(const QuotientRing& R, const std::vector<Int>& digits) {
    long long f = R.fld->kind == FieldKind::prime ? 1 : R.fld->rel_degree;
    if (digits.size() != static_cast<std::size_t>(R.n * f))
        throw std::invalid_argument("quot_lift: digit vector has wrong length");
    const FieldPtr& pf = R.fld->kind == FieldKind::prime ? R.fld : R.fld->base;
    auto gather = [&](long long i) {
        Rat acc(0);
        for (long long j = R.n - 1; j >= 0; --j)
            acc = acc * pf->p + Rat(digits[static_cast<std::size_t>(j * f + i)]);
        return acc;
    };
    if (R.fld->kind == FieldKind::prime) {
        Rat v = gather(0);
        return v == 0 ? weakly_zero_elt(R.fld, R.n) : embed(R.fld, v, R.n);
    }
    ApproxElt x;
    x.fld = R.fld;
    x.coeffs.reserve(static_cast<std::size_t>(f));
    for (long long i = 0; i < f; ++i) {
        Rat v = gather(i);
        x.coeffs.push_back(v == 0 ? weakly_zero_elt(pf, R.n) : embed(pf, v, R.n));
    }
    return x;
}

} // namespace padic
