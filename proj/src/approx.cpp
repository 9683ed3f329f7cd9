#include "padic/approx.hpp"

#include "padic/error.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace padic {

namespace {

long long ceil_div(long long a, long long b) {
    // b > 0
    return a >= 0 ? (a + b - 1) / b : -((-a) / b);
}

// Count the exact power of p dividing n (n != 0), removing it from n.
long long strip_p(Int& n, long long p) {
    if (n == 0) return 0;
    bool negv = n < 0;
    Int a = negv ? Int(-n) : n;
    long long s = 0;
    if (p == 2) {
        s = static_cast<long long>(lsb(a));
        a >>= s;
    } else {
        while (a % p == 0) {
            a /= p;
            ++s;
        }
    }
    n = negv ? Int(-a) : a;
    return s;
}

Int mod_reduce(const Int& a, const Int& m) {
    Int r = a % m;
    if (r < 0) r += m;
    return r;
}

// Modular inverse of a mod m (gcd(a, m) == 1), extended Euclid.
Int mod_inv(const Int& a, const Int& m) {
    Int old_r = mod_reduce(a, m), rr = m;
    Int old_s = 1, s = 0;
    while (rr != 0) {
        Int q = old_r / rr;
        Int tmp = old_r - q * rr;
        old_r = rr;
        rr = tmp;
        tmp = old_s - q * s;
        old_s = s;
        s = tmp;
    }
    if (old_r != 1) throw std::invalid_argument("mod_inv: not invertible");
    return mod_reduce(old_s, m);
}

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

bool same_field_structure(const ApproxField& a, const ApproxField& b) {
    if (a.kind != b.kind || a.p != b.p || a.rel_degree != b.rel_degree) return false;
    if (!a.base) return !b.base;
    return b.base && same_field_structure(*a.base, *b.base);
}

} // namespace

const Int& ApproxField::ppow(long long k) const {
    assert(kind == FieldKind::prime && k >= 0);
    auto it = pow_cache.find(k);
    if (it != pow_cache.end()) return it->second;
    Int v;
    if (p == 2) {
        v = Int(1) << static_cast<unsigned>(k);
    } else {
        v = pow(Int(p), static_cast<unsigned>(k));
    }
    return pow_cache.emplace(k, std::move(v)).first->second;
}

const Int& ApproxField::pmask(long long k) const {
    auto it = mask_cache.find(k);
    if (it != mask_cache.end()) return it->second;
    Int v = ppow(k) - 1;
    return mask_cache.emplace(k, std::move(v)).first->second;
}

FieldPtr make_prime_field(long long p, long long capacity) {
    require(p >= 2, "make_prime_field: p must be >= 2");
    require(capacity >= 1, "make_prime_field: capacity must be positive");
    for (long long d = 2; d * d <= p; ++d)
        require(p % d != 0, "make_prime_field: p must be prime");
    auto f = std::make_shared<ApproxField>();
    f->kind = FieldKind::prime;
    f->p = p;
    f->capacity = capacity;
    return f;
}

DefCheck check_defining(FieldKind kind, const FieldPtr& /*base*/, const std::vector<ApproxElt>& def_coeffs) {
    require(kind != FieldKind::prime, "check_defining: extension kinds only");
    long long m = static_cast<long long>(def_coeffs.size()) - 1;
    if (m < 1) return DefCheck::violated;
    bool undecided = false;
    // Checks a coefficient's valuation against an exact target (own base digits).
    auto val_is = [&](const ApproxElt& c, long long target) -> DefCheck {
        if (is_exact_zero(c)) return DefCheck::violated;
        long long wv = weak_val_own(c);
        if (!is_weakly_zero(c)) return wv == target ? DefCheck::confirmed : DefCheck::violated;
        // weakly zero: val >= wv
        if (wv > target) return DefCheck::violated;
        return DefCheck::undecided;
    };
    auto val_ge = [&](const ApproxElt& c, long long target) -> DefCheck {
        if (is_exact_zero(c)) return DefCheck::confirmed;
        long long wv = weak_val_own(c);
        if (wv >= target) return DefCheck::confirmed;
        if (!is_weakly_zero(c)) return DefCheck::violated;
        return DefCheck::undecided;
    };
    auto fold = [&](DefCheck c) {
        if (c == DefCheck::violated) return false;
        if (c == DefCheck::undecided) undecided = true;
        return true;
    };
    if (kind == FieldKind::eisen) {
        if (!fold(val_is(def_coeffs[0], 1))) return DefCheck::violated;
        if (!fold(val_is(def_coeffs[static_cast<std::size_t>(m)], 0))) return DefCheck::violated;
        for (long long i = 1; i < m; ++i)
            if (!fold(val_ge(def_coeffs[static_cast<std::size_t>(i)], 1))) return DefCheck::violated;
        return undecided ? DefCheck::undecided : DefCheck::confirmed;
    }
    // inert: unit polynomial, irreducible modulo pi. The residue check lives in
    // residue.cpp (needs the residue machinery); here: valuations only.
    if (!fold(val_is(def_coeffs[static_cast<std::size_t>(m)], 0))) return DefCheck::violated;
    if (!fold(val_is(def_coeffs[0], 0))) return DefCheck::violated;
    for (long long i = 1; i < m; ++i)
        if (!fold(val_ge(def_coeffs[static_cast<std::size_t>(i)], 0))) return DefCheck::violated;
    return undecided ? DefCheck::undecided : DefCheck::confirmed;
}

FieldPtr make_extension(FieldPtr base, FieldKind kind, const std::vector<ApproxElt>& def_coeffs,
                        long long capacity) {
    require(base != nullptr, "make_extension: base required");
    require(kind == FieldKind::eisen || kind == FieldKind::inert, "make_extension: bad kind");
    require(capacity >= 1, "make_extension: capacity must be positive");
    require(def_coeffs.size() >= 2, "make_extension: defining polynomial must have degree >= 1");
    for (const auto& c : def_coeffs)
        require(same_field_structure(*c.fld, *base), "make_extension: coefficients not over base");
    if (check_defining(kind, base, def_coeffs) == DefCheck::violated)
        throw std::invalid_argument(kind == FieldKind::eisen
                                        ? "make_extension: polynomial is not Eisenstein"
                                        : "make_extension: polynomial is not inertial");
    auto f = std::make_shared<ApproxField>();
    f->kind = kind;
    f->p = base->p;
    f->capacity = capacity;
    f->base = base;
    f->def_coeffs = def_coeffs;
    f->rel_degree = static_cast<long long>(def_coeffs.size()) - 1;
    f->abs_e = base->abs_e * (kind == FieldKind::eisen ? f->rel_degree : 1);
    f->abs_f = base->abs_f * (kind == FieldKind::inert ? f->rel_degree : 1);
    const ApproxElt& lead = def_coeffs.back();
    f->red_row.reserve(static_cast<std::size_t>(f->rel_degree));
    for (long long i = 0; i < f->rel_degree; ++i)
        f->red_row.push_back(div_elt(def_coeffs[static_cast<std::size_t>(i)], lead));
    return f;
}

bool same_structure(const FieldPtr& a, const FieldPtr& b) {
    return a && b && same_field_structure(*a, *b);
}

long long abs_degree(const FieldPtr& f) { return f->abs_e * f->abs_f; }

// ---------------------------------------------------------------------------
// constructors / queries

ApproxElt exact_zero_elt(const FieldPtr& f) {
    ApproxElt x;
    x.fld = f;
    if (f->kind == FieldKind::prime) {
        x.v = kValInf;
        x.r = 0;
        x.u = 0;
        return x;
    }
    x.coeffs.assign(static_cast<std::size_t>(f->rel_degree), exact_zero_elt(f->base));
    return x;
}

ApproxElt weakly_zero_elt(const FieldPtr& f, long long k) {
    ApproxElt x;
    x.fld = f;
    if (f->kind == FieldKind::prime) {
        x.v = k;
        x.r = 0;
        x.u = 0;
        return x;
    }
    long long m = f->rel_degree;
    long long step = f->kind == FieldKind::eisen ? m : 1;
    x.coeffs.reserve(static_cast<std::size_t>(m));
    for (long long i = 0; i < m; ++i) {
        long long shift = f->kind == FieldKind::eisen ? i : 0;
        x.coeffs.push_back(weakly_zero_elt(f->base, ceil_div(k - shift, step)));
    }
    return x;
}

bool is_exact_zero(const ApproxElt& x) {
    if (x.fld->kind == FieldKind::prime) return x.v == kValInf;
    return std::all_of(x.coeffs.begin(), x.coeffs.end(),
                       [](const ApproxElt& c) { return is_exact_zero(c); });
}

bool is_weakly_zero(const ApproxElt& x) {
    if (x.fld->kind == FieldKind::prime) return x.r == 0;
    return std::all_of(x.coeffs.begin(), x.coeffs.end(),
                       [](const ApproxElt& c) { return is_weakly_zero(c); });
}

long long weak_val_own(const ApproxElt& x) {
    if (x.fld->kind == FieldKind::prime) return x.v;
    long long m = x.fld->rel_degree;
    bool eisen = x.fld->kind == FieldKind::eisen;
    long long best = kValInf;
    for (long long i = 0; i < static_cast<long long>(x.coeffs.size()); ++i) {
        long long w = weak_val_own(x.coeffs[static_cast<std::size_t>(i)]);
        if (w == kValInf) continue;
        long long own = eisen ? m * w + i : w;
        best = std::min(best, own);
    }
    return best;
}

long long abs_prec_own(const ApproxElt& x) {
    if (x.fld->kind == FieldKind::prime) return x.v == kValInf ? kValInf : x.v + x.r;
    long long m = x.fld->rel_degree;
    bool eisen = x.fld->kind == FieldKind::eisen;
    long long best = kValInf;
    for (long long i = 0; i < static_cast<long long>(x.coeffs.size()); ++i) {
        long long k = abs_prec_own(x.coeffs[static_cast<std::size_t>(i)]);
        if (k == kValInf) continue;
        long long own = eisen ? m * k + i : k;
        best = std::min(best, own);
    }
    return best;
}

long long rel_prec_own(const ApproxElt& x) {
    long long k = abs_prec_own(x);
    long long w = weak_val_own(x);
    if (k == kValInf) return kValInf;
    return k - w;
}

namespace {

ExtVal own_to_abs(const FieldPtr& f, long long own) {
    if (own == kValInf) return ExtVal::pos_inf();
    return ExtVal(Rat(Int(own), Int(f->abs_e)));
}

} // namespace

ExtVal weak_valuation(const ApproxElt& x) { return own_to_abs(x.fld, weak_val_own(x)); }
ExtVal abs_precision(const ApproxElt& x) { return own_to_abs(x.fld, abs_prec_own(x)); }
ExtVal rel_precision(const ApproxElt& x) { return own_to_abs(x.fld, rel_prec_own(x)); }

ApproxElt embed(const FieldPtr& f, const Rat& q, long long k) {
    if (q == 0) return exact_zero_elt(f);
    if (f->kind == FieldKind::prime) {
        Int num = numerator(q), den = denominator(q);
        long long v = strip_p(num, f->p) - strip_p(den, f->p);
        if (v >= k) return weakly_zero_elt(f, k);
        long long r = std::min(k - v, f->capacity);
        const Int& m = f->ppow(r);
        ApproxElt x;
        x.fld = f;
        x.v = v;
        x.r = r;
        x.u = mod_reduce(num * mod_inv(den, m), m);
        return x;
    }
    long long m = f->rel_degree;
    long long step = f->kind == FieldKind::eisen ? m : 1;
    ApproxElt x;
    x.fld = f;
    x.coeffs.reserve(static_cast<std::size_t>(m));
    x.coeffs.push_back(embed(f->base, q, ceil_div(k, step)));
    for (long long i = 1; i < m; ++i) x.coeffs.push_back(exact_zero_elt(f->base));
    if (abs_prec_own(x) > k) x = change_precision_own(x, k);
    return x;
}

ApproxElt embed_full(const FieldPtr& f, const Rat& q) {
    if (q == 0) return exact_zero_elt(f);
    if (f->kind == FieldKind::prime) {
        Int num = numerator(q), den = denominator(q);
        long long v = strip_p(num, f->p) - strip_p(den, f->p);
        return embed(f, q, v + f->capacity);
    }
    ApproxElt x;
    x.fld = f;
    x.coeffs.reserve(static_cast<std::size_t>(f->rel_degree));
    x.coeffs.push_back(embed_full(f->base, q));
    for (long long i = 1; i < f->rel_degree; ++i) x.coeffs.push_back(exact_zero_elt(f->base));
    return clamp_capacity(x);
}

ApproxElt coerce_up(const FieldPtr& ext, const ApproxElt& base_elt) {
    require(ext->base != nullptr, "coerce_up: not an extension");
    require(same_field_structure(*ext->base, *base_elt.fld), "coerce_up: element not over base");
    ApproxElt x;
    x.fld = ext;
    x.coeffs.reserve(static_cast<std::size_t>(ext->rel_degree));
    x.coeffs.push_back(coerce_field(ext->base, base_elt));
    for (long long i = 1; i < ext->rel_degree; ++i) x.coeffs.push_back(exact_zero_elt(ext->base));
    return clamp_capacity(x);
}

ApproxElt coerce_field(const FieldPtr& g, const ApproxElt& x) {
    require(same_field_structure(*g, *x.fld), "coerce_field: structure mismatch");
    if (g->kind == FieldKind::prime) {
        if (x.v == kValInf) return exact_zero_elt(g);
        ApproxElt y;
        y.fld = g;
        y.v = x.v;
        y.r = std::min(x.r, g->capacity);
        y.u = y.r == x.r ? x.u : mod_reduce(x.u, g->ppow(y.r));
        if (y.r == 0) y.u = 0;
        return y;
    }
    ApproxElt y;
    y.fld = g;
    y.coeffs.reserve(x.coeffs.size());
    for (const auto& c : x.coeffs) y.coeffs.push_back(coerce_field(g->base, c));
    return clamp_capacity(y);
}

ApproxElt generator(const FieldPtr& ext) {
    require(ext->base != nullptr, "generator: not an extension");
    ApproxElt x;
    x.fld = ext;
    x.coeffs.reserve(static_cast<std::size_t>(ext->rel_degree));
    x.coeffs.push_back(exact_zero_elt(ext->base));
    x.coeffs.push_back(embed_full(ext->base, 1));
    for (long long i = 2; i < ext->rel_degree; ++i) x.coeffs.push_back(exact_zero_elt(ext->base));
    return clamp_capacity(x);
}

// ---------------------------------------------------------------------------
// precision changes

ApproxElt change_precision_own(const ApproxElt& x, long long k) {
    long long cur = abs_prec_own(x);
    if (cur != kValInf && k > cur)
        throw std::invalid_argument("change_precision: cannot increase absolute precision");
    const FieldPtr& f = x.fld;
    if (f->kind == FieldKind::prime) {
        if (x.v == kValInf || x.v >= k) return weakly_zero_elt(f, k);
        ApproxElt y;
        y.fld = f;
        y.v = x.v;
        y.r = k - x.v;
        y.u = y.r == x.r ? x.u : mod_reduce(x.u, f->ppow(y.r));
        return y;
    }
    long long m = f->rel_degree;
    long long step = f->kind == FieldKind::eisen ? m : 1;
    ApproxElt y;
    y.fld = f;
    y.coeffs.reserve(x.coeffs.size());
    for (long long i = 0; i < static_cast<long long>(x.coeffs.size()); ++i) {
        long long shift = f->kind == FieldKind::eisen ? i : 0;
        long long ki = ceil_div(k - shift, step);
        const ApproxElt& c = x.coeffs[static_cast<std::size_t>(i)];
        long long ci = abs_prec_own(c);
        y.coeffs.push_back(ci != kValInf && ci <= ki ? c : change_precision_own(c, ki));
    }
    return y;
}

ApproxElt change_precision(const ApproxElt& x, const ExtVal& abs_prec) {
    if (abs_prec.is_pos_inf()) {
        if (!is_exact_zero(x)) throw std::invalid_argument("change_precision: infinite precision");
        return x;
    }
    require(abs_prec.is_finite(), "change_precision: bad precision");
    Rat own = abs_prec.finite() * x.fld->abs_e;
    require(denominator(own) == 1, "change_precision: precision not representable in this field");
    return change_precision_own(x, static_cast<long long>(numerator(own)));
}

ApproxElt clamp_capacity(const ApproxElt& x) {
    long long rel = rel_prec_own(x);
    if (rel == kValInf || rel <= x.fld->capacity) return x;
    return change_precision_own(x, weak_val_own(x) + x.fld->capacity);
}

// ---------------------------------------------------------------------------
// arithmetic

namespace {

void check_same_field(const ApproxElt& x, const ApproxElt& y, const char* op) {
    if (!same_field_structure(*x.fld, *y.fld)) throw std::invalid_argument(std::string(op) + ": field mismatch");
}

ApproxElt prime_add(const ApproxElt& x, const ApproxElt& y) {
    const FieldPtr& f = x.fld;
    if (x.v == kValInf) return y;
    if (y.v == kValInf) return x;
    long long kx = x.v + x.r, ky = y.v + y.r;
    long long k = std::min(kx, ky);
    long long v = std::min(x.v, y.v);
    if (v >= k) return weakly_zero_elt(f, k);
    Int uu = 0;
    if (x.r > 0) uu += x.u * f->ppow(x.v - v);
    if (y.r > 0) uu += y.u * f->ppow(y.v - v);
    uu = mod_reduce(uu, f->ppow(k - v));
    if (uu == 0) return weakly_zero_elt(f, k);
    long long s = strip_p(uu, f->p);
    ApproxElt z;
    z.fld = f;
    z.v = v + s;
    z.r = k - z.v;
    z.u = std::move(uu);
    return z;
}

ApproxElt prime_mul(const ApproxElt& x, const ApproxElt& y) {
    const FieldPtr& f = x.fld;
    if (x.v == kValInf || y.v == kValInf) return exact_zero_elt(f);
    ApproxElt z;
    z.fld = f;
    z.v = x.v + y.v;
    z.r = std::min(x.r, y.r);
    z.u = z.r == 0 ? Int(0) : mod_reduce(x.u * y.u, f->ppow(z.r));
    return z;
}

ApproxElt mul_by_generator(const ApproxElt& x) {
    // x * gen in an extension, via the reduction row.
    const FieldPtr& f = x.fld;
    long long m = f->rel_degree;
    ApproxElt top = x.coeffs[static_cast<std::size_t>(m - 1)];
    ApproxElt z;
    z.fld = f;
    z.coeffs.resize(static_cast<std::size_t>(m));
    z.coeffs[0] = is_exact_zero(top) ? exact_zero_elt(f->base)
                                     : neg(mul(top, f->red_row[0]));
    for (long long i = 1; i < m; ++i) {
        ApproxElt c = x.coeffs[static_cast<std::size_t>(i - 1)];
        if (!is_exact_zero(top))
            c = sub(c, mul(top, f->red_row[static_cast<std::size_t>(i)]));
        z.coeffs[static_cast<std::size_t>(i)] = std::move(c);
    }
    return z;
}

} // namespace

ApproxElt add(const ApproxElt& x, const ApproxElt& y) {
    check_same_field(x, y, "add");
    const FieldPtr& f = x.fld;
    if (f->kind == FieldKind::prime) return prime_add(x, y);
    ApproxElt z;
    z.fld = f;
    z.coeffs.reserve(x.coeffs.size());
    for (std::size_t i = 0; i < x.coeffs.size(); ++i) z.coeffs.push_back(add(x.coeffs[i], y.coeffs[i]));
    return z;
}

ApproxElt neg(const ApproxElt& x) {
    const FieldPtr& f = x.fld;
    if (f->kind == FieldKind::prime) {
        if (x.v == kValInf || x.r == 0) return x;
        ApproxElt z = x;
        z.u = f->ppow(x.r) - x.u;
        return z;
    }
    ApproxElt z;
    z.fld = f;
    z.coeffs.reserve(x.coeffs.size());
    for (const auto& c : x.coeffs) z.coeffs.push_back(neg(c));
    return z;
}

ApproxElt sub(const ApproxElt& x, const ApproxElt& y) { return add(x, neg(y)); }

ApproxElt mul(const ApproxElt& x, const ApproxElt& y) {
    check_same_field(x, y, "mul");
    const FieldPtr& f = x.fld;
    if (f->kind == FieldKind::prime) return prime_mul(x, y);
    long long m = f->rel_degree;
    std::vector<ApproxElt> conv(static_cast<std::size_t>(2 * m - 1), exact_zero_elt(f->base));
    for (long long i = 0; i < m; ++i) {
        const ApproxElt& xi = x.coeffs[static_cast<std::size_t>(i)];
        if (is_exact_zero(xi)) continue;
        for (long long j = 0; j < m; ++j) {
            const ApproxElt& yj = y.coeffs[static_cast<std::size_t>(j)];
            if (is_exact_zero(yj)) continue;
            auto& slot = conv[static_cast<std::size_t>(i + j)];
            slot = add(slot, mul(xi, yj));
        }
    }
    for (long long j = 2 * m - 2; j >= m; --j) {
        ApproxElt top = std::move(conv[static_cast<std::size_t>(j)]);
        conv.pop_back();
        if (is_exact_zero(top)) continue;
        for (long long i = 0; i < m; ++i) {
            auto& slot = conv[static_cast<std::size_t>(j - m + i)];
            slot = sub(slot, mul(top, f->red_row[static_cast<std::size_t>(i)]));
        }
    }
    ApproxElt z;
    z.fld = f;
    z.coeffs = std::move(conv);
    return clamp_capacity(z);
}

ApproxElt inverse(const ApproxElt& x) {
    const FieldPtr& f = x.fld;
    if (is_weakly_zero(x)) throw precision_error("inverse: element is weakly zero");
    if (f->kind == FieldKind::prime) {
        ApproxElt z;
        z.fld = f;
        z.v = -x.v;
        z.r = x.r;
        z.u = mod_inv(x.u, f->ppow(x.r));
        return z;
    }
    long long m = f->rel_degree;
    std::vector<std::vector<ApproxElt>> mat(static_cast<std::size_t>(m));
    ApproxElt col = x;
    for (long long j = 0; j < m; ++j) {
        for (long long i = 0; i < m; ++i)
            mat[static_cast<std::size_t>(i)].push_back(col.coeffs[static_cast<std::size_t>(i)]);
        if (j + 1 < m) col = mul_by_generator(col);
    }
    std::vector<ApproxElt> rhs;
    rhs.push_back(embed_full(f->base, 1));
    for (long long i = 1; i < m; ++i) rhs.push_back(exact_zero_elt(f->base));
    std::vector<ApproxElt> sol = linear_solve(std::move(mat), std::move(rhs));
    ApproxElt z;
    z.fld = f;
    z.coeffs = std::move(sol);
    return clamp_capacity(z);
}

ApproxElt div_elt(const ApproxElt& x, const ApproxElt& y) {
    check_same_field(x, y, "div");
    const FieldPtr& f = x.fld;
    if (is_weakly_zero(y)) throw precision_error("div: divisor is weakly zero");
    if (f->kind == FieldKind::prime) {
        if (x.v == kValInf) return exact_zero_elt(f);
        ApproxElt z;
        z.fld = f;
        z.v = x.v - y.v;
        z.r = std::min(x.r, y.r);
        z.u = z.r == 0 ? Int(0) : mod_reduce(x.u * mod_inv(y.u, f->ppow(z.r)), f->ppow(z.r));
        return z;
    }
    if (is_exact_zero(x)) return exact_zero_elt(f);
    return mul(x, inverse(y));
}

ApproxElt pow_elt(const ApproxElt& x, long long k) {
    if (k < 0) return inverse(pow_elt(x, -k));
    ApproxElt acc = embed_full(x.fld, 1);
    ApproxElt base = x;
    long long e = k;
    while (e > 0) {
        if (e & 1) acc = mul(acc, base);
        e >>= 1;
        if (e > 0) base = mul(base, base);
    }
    return acc;
}

bool weak_equal(const ApproxElt& x, const ApproxElt& y) { return is_weakly_zero(sub(x, y)); }

std::string to_string(const ApproxElt& x) {
    const FieldPtr& f = x.fld;
    std::ostringstream os;
    if (f->kind == FieldKind::prime) {
        if (x.v == kValInf) return "0 (exact)";
        if (x.r == 0) {
            os << "O(" << f->p << "^" << x.v << ")";
            return os.str();
        }
        os << f->p << "^" << x.v << "*(";
        Int u = x.u;
        for (long long i = 0; i < x.r && (u != 0 || i == 0); ++i) {
            Int d = u % f->p;
            u /= f->p;
            if (i == 0) os << d;
            else if (d != 0) os << " + " << d << "*" << f->p << (i > 1 ? "^" + std::to_string(i) : "");
        }
        os << " + O(" << f->p << "^" << x.r << "))";
        return os.str();
    }
    os << "(";
    for (std::size_t i = 0; i < x.coeffs.size(); ++i) {
        if (i) os << " + g^" << i << "*";
        os << "[" << to_string(x.coeffs[i]) << "]";
    }
    os << ")";
    return os.str();
}

// ---------------------------------------------------------------------------
// linear algebra

std::vector<ApproxElt> linear_solve(std::vector<std::vector<ApproxElt>> a, std::vector<ApproxElt> b) {
    std::size_t n = a.size();
    require(b.size() == n, "linear_solve: dimension mismatch");
    for (auto& row : a) require(row.size() == n, "linear_solve: matrix not square");
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        long long best = kValInf;
        for (std::size_t row = col; row < n; ++row) {
            const ApproxElt& e = a[row][col];
            if (is_weakly_zero(e)) continue;
            long long w = weak_val_own(e);
            if (w < best) {
                best = w;
                piv = row;
            }
        }
        if (piv == n) throw precision_error("linear_solve: pivot column indistinguishable from zero");
        std::swap(a[piv], a[col]);
        std::swap(b[piv], b[col]);
        for (std::size_t row = 0; row < n; ++row) {
            if (row == col || is_exact_zero(a[row][col])) continue;
            ApproxElt factor = div_elt(a[row][col], a[col][col]);
            for (std::size_t j = col; j < n; ++j)
                a[row][j] = sub(a[row][j], mul(factor, a[col][j]));
            b[row] = sub(b[row], mul(factor, b[col]));
        }
    }
    std::vector<ApproxElt> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) out.push_back(div_elt(b[i], a[i][i]));
    return out;
}

ApproxElt determinant(std::vector<std::vector<ApproxElt>> a) {
    std::size_t n = a.size();
    for (auto& row : a) require(row.size() == n, "determinant: matrix not square");
    if (n == 0) throw std::invalid_argument("determinant: empty matrix");
    FieldPtr f = a[0][0].fld;
    bool negate = false;
    ApproxElt det = embed_full(f, 1);
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = n;
        long long best = kValInf;
        for (std::size_t row = col; row < n; ++row) {
            const ApproxElt& e = a[row][col];
            if (is_weakly_zero(e)) continue;
            long long w = weak_val_own(e);
            if (w < best) {
                best = w;
                piv = row;
            }
        }
        if (piv == n) {
            // Column indistinguishable from zero: determinant weakly zero at the
            // precision of the most precise candidate; a column of exact zeros
            // proves the determinant is exactly zero.
            long long k = kValInf;
            for (std::size_t row = col; row < n; ++row)
                k = std::min(k, abs_prec_own(a[row][col]));
            ApproxElt z = k == kValInf ? exact_zero_elt(f) : weakly_zero_elt(f, k);
            return mul(det, z);
        }
        if (piv != col) {
            std::swap(a[piv], a[col]);
            negate = !negate;
        }
        for (std::size_t row = col + 1; row < n; ++row) {
            if (is_exact_zero(a[row][col])) continue;
            ApproxElt factor = div_elt(a[row][col], a[col][col]);
            for (std::size_t j = col; j < n; ++j)
                a[row][j] = sub(a[row][j], mul(factor, a[col][j]));
        }
        det = mul(det, a[col][col]);
    }
    return negate ? neg(det) : det;
}

// ---------------------------------------------------------------------------
// polynomials

ApproxPoly make_poly(const FieldPtr& f, std::vector<ApproxElt> coeffs) {
    for (const auto& c : coeffs) require(same_field_structure(*c.fld, *f), "make_poly: coefficient field mismatch");
    return ApproxPoly{f, std::move(coeffs)};
}

long long degree_stored(const ApproxPoly& f) { return static_cast<long long>(f.coeffs.size()) - 1; }

long long weak_degree(const ApproxPoly& f) {
    for (long long i = degree_stored(f); i >= 0; --i)
        if (!is_exact_zero(f.coeffs[static_cast<std::size_t>(i)])) return i;
    return -1;
}

ApproxPoly poly_add(const ApproxPoly& f, const ApproxPoly& g) {
    std::size_t n = std::max(f.coeffs.size(), g.coeffs.size());
    std::vector<ApproxElt> out;
    out.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= f.coeffs.size()) out.push_back(g.coeffs[i]);
        else if (i >= g.coeffs.size()) out.push_back(f.coeffs[i]);
        else out.push_back(add(f.coeffs[i], g.coeffs[i]));
    }
    return ApproxPoly{f.fld, std::move(out)};
}

ApproxPoly poly_neg(const ApproxPoly& f) {
    std::vector<ApproxElt> out;
    out.reserve(f.coeffs.size());
    for (const auto& c : f.coeffs) out.push_back(neg(c));
    return ApproxPoly{f.fld, std::move(out)};
}

ApproxPoly poly_sub(const ApproxPoly& f, const ApproxPoly& g) { return poly_add(f, poly_neg(g)); }

ApproxPoly poly_mul(const ApproxPoly& f, const ApproxPoly& g) {
    if (f.coeffs.empty() || g.coeffs.empty()) return ApproxPoly{f.fld, {}};
    std::vector<ApproxElt> out(f.coeffs.size() + g.coeffs.size() - 1, exact_zero_elt(f.fld));
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        if (is_exact_zero(f.coeffs[i])) continue;
        for (std::size_t j = 0; j < g.coeffs.size(); ++j) {
            if (is_exact_zero(g.coeffs[j])) continue;
            out[i + j] = add(out[i + j], mul(f.coeffs[i], g.coeffs[j]));
        }
    }
    return ApproxPoly{f.fld, std::move(out)};
}

ApproxPoly poly_scale(const ApproxPoly& f, const ApproxElt& c) {
    std::vector<ApproxElt> out;
    out.reserve(f.coeffs.size());
    for (const auto& a : f.coeffs) out.push_back(mul(a, c));
    return ApproxPoly{f.fld, std::move(out)};
}

ApproxPoly poly_scale_x(const ApproxPoly& f, const ApproxElt& c) {
    std::vector<ApproxElt> out;
    out.reserve(f.coeffs.size());
    ApproxElt ci = embed_full(f.fld, 1);
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        out.push_back(i == 0 ? f.coeffs[i] : mul(f.coeffs[i], ci));
        if (i + 1 < f.coeffs.size()) ci = mul(ci, c);
    }
    return ApproxPoly{f.fld, std::move(out)};
}

ApproxPoly poly_shift(const ApproxPoly& f, const ApproxElt& a) {
    std::vector<ApproxElt> b = f.coeffs;
    long long d = degree_stored(f);
    for (long long i = 0; i < d; ++i)
        for (long long j = d - 1; j >= i; --j)
            b[static_cast<std::size_t>(j)] =
                add(b[static_cast<std::size_t>(j)], mul(a, b[static_cast<std::size_t>(j + 1)]));
    return ApproxPoly{f.fld, std::move(b)};
}

ApproxPoly poly_derivative(const ApproxPoly& f) {
    std::vector<ApproxElt> out;
    if (f.coeffs.size() > 1) {
        out.reserve(f.coeffs.size() - 1);
        for (std::size_t i = 1; i < f.coeffs.size(); ++i)
            out.push_back(mul(f.coeffs[i], embed_full(f.fld, Rat(static_cast<long long>(i)))));
    }
    return ApproxPoly{f.fld, std::move(out)};
}

ApproxElt poly_eval(const ApproxPoly& f, const ApproxElt& x) {
    ApproxElt acc = exact_zero_elt(f.fld);
    for (long long i = degree_stored(f); i >= 0; --i)
        acc = add(mul(acc, x), f.coeffs[static_cast<std::size_t>(i)]);
    return acc;
}

DivRem poly_divrem(const ApproxPoly& f, const ApproxPoly& g) {
    long long dg = weak_degree(g);
    require(dg >= 0, "poly_divrem: division by zero polynomial");
    const ApproxElt& lead = g.coeffs[static_cast<std::size_t>(dg)];
    if (is_weakly_zero(lead)) throw precision_error("poly_divrem: leading coefficient of divisor is weakly zero");
    std::vector<ApproxElt> rem = f.coeffs;
    long long dr = static_cast<long long>(rem.size()) - 1;
    if (dr < dg) return DivRem{ApproxPoly{f.fld, {}}, f};
    std::vector<ApproxElt> quot(static_cast<std::size_t>(dr - dg + 1), exact_zero_elt(f.fld));
    while (dr >= dg) {
        ApproxElt t = div_elt(rem[static_cast<std::size_t>(dr)], lead);
        quot[static_cast<std::size_t>(dr - dg)] = t;
        if (!is_exact_zero(t)) {
            for (long long i = 0; i < dg; ++i) {
                auto& slot = rem[static_cast<std::size_t>(dr - dg + i)];
                slot = sub(slot, mul(t, g.coeffs[static_cast<std::size_t>(i)]));
            }
        }
        rem.pop_back();
        --dr;
    }
    return DivRem{ApproxPoly{f.fld, std::move(quot)}, ApproxPoly{f.fld, std::move(rem)}};
}

ApproxElt resultant(const ApproxPoly& f, const ApproxPoly& g) {
    long long n = weak_degree(f), m = weak_degree(g);
    require(n >= 0 && m >= 0, "resultant: zero polynomial");
    if (is_weakly_zero(f.coeffs[static_cast<std::size_t>(n)]) ||
        is_weakly_zero(g.coeffs[static_cast<std::size_t>(m)]))
        throw precision_error("resultant: leading coefficient is weakly zero");
    if (n == 0) return pow_elt(f.coeffs[0], m);
    if (m == 0) return pow_elt(g.coeffs[0], n);
    std::size_t dim = static_cast<std::size_t>(n + m);
    std::vector<std::vector<ApproxElt>> syl(dim, std::vector<ApproxElt>(dim, exact_zero_elt(f.fld)));
    for (long long row = 0; row < m; ++row)
        for (long long j = 0; j <= n; ++j)
            syl[static_cast<std::size_t>(row)][static_cast<std::size_t>(row + j)] =
                f.coeffs[static_cast<std::size_t>(n - j)];
    for (long long row = 0; row < n; ++row)
        for (long long j = 0; j <= m; ++j)
            syl[static_cast<std::size_t>(m + row)][static_cast<std::size_t>(row + j)] =
                g.coeffs[static_cast<std::size_t>(m - j)];
    return determinant(std::move(syl));
}

std::string to_string(const ApproxPoly& f) {
    std::ostringstream os;
    for (std::size_t i = 0; i < f.coeffs.size(); ++i) {
        if (i) os << " + x^" << i << "*";
        os << "(" << to_string(f.coeffs[i]) << ")";
    }
    return os.str();
}

// ---------------------------------------------------------------------------
// exact representatives

ExactRep weak_approximation(const ApproxElt& x) {
    if (x.fld->kind == FieldKind::prime) {
        if (x.v == kValInf || x.r == 0) return ExactRep{Rat(0)};
        Rat q(x.u);
        if (x.v >= 0) q *= Rat(x.fld->ppow(x.v));
        else q /= Rat(x.fld->ppow(-x.v));
        return ExactRep{q};
    }
    std::vector<ExactRep> reps;
    reps.reserve(x.coeffs.size());
    for (const auto& c : x.coeffs) reps.push_back(weak_approximation(c));
    return ExactRep{std::move(reps)};
}

ApproxElt embed_rep(const FieldPtr& f, const ExactRep& rep, long long k) {
    if (std::holds_alternative<Rat>(rep.node)) {
        return embed(f, std::get<Rat>(rep.node), k);
    }
    const auto& reps = std::get<std::vector<ExactRep>>(rep.node);
    require(f->base != nullptr, "embed_rep: representative shape mismatch");
    require(reps.size() == static_cast<std::size_t>(f->rel_degree), "embed_rep: degree mismatch");
    long long m = f->rel_degree;
    long long step = f->kind == FieldKind::eisen ? m : 1;
    ApproxElt x;
    x.fld = f;
    x.coeffs.reserve(reps.size());
    for (long long i = 0; i < m; ++i) {
        long long shift = f->kind == FieldKind::eisen ? i : 0;
        x.coeffs.push_back(embed_rep(f->base, reps[static_cast<std::size_t>(i)], ceil_div(k - shift, step)));
    }
    long long cur = abs_prec_own(x);
    if (cur != kValInf && cur > k) x = change_precision_own(x, k);
    return clamp_capacity(x);
}

} // namespace padic
