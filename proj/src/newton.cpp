#include "padic/newton.hpp"

#include "padic/error.hpp"

#include <algorithm>
#include <optional>
#include <stdexcept>

namespace padic {

namespace {

using Pt = std::pair<Rat, Rat>;

void require(bool cond, const char* msg) {
    if (!cond) throw std::invalid_argument(msg);
}

// Lower convex hull of points with pairwise distinct abscissas kept as the
// minimum ordinate; returned vertices have strictly increasing slopes.
std::vector<Pt> lower_hull(std::vector<Pt> pts) {
    std::sort(pts.begin(), pts.end());
    std::vector<Pt> h;
    for (const Pt& p : pts) {
        if (!h.empty() && h.back().first == p.first) continue; // min ordinate sorts first
        while (h.size() >= 2) {
            const Pt& a = h[h.size() - 2];
            const Pt& b = h[h.size() - 1];
            Rat cross = (b.first - a.first) * (p.second - a.second) -
                        (b.second - a.second) * (p.first - a.first);
            if (cross <= 0) h.pop_back(); // right turn or collinear: b is not a vertex
            else break;
        }
        h.push_back(p);
    }
    return h;
}

// Piecewise-linear evaluation; x must lie within the hull's domain.
Rat hull_eval(const std::vector<Pt>& h, const Rat& x) {
    for (std::size_t i = 0; i + 1 < h.size(); ++i) {
        if (x <= h[i + 1].first) {
            const Rat dx = h[i + 1].first - h[i].first;
            return h[i].second + (h[i + 1].second - h[i].second) * (x - h[i].first) / dx;
        }
    }
    return h.back().second;
}

bool is_vertex_of(const std::vector<Pt>& h, const Pt& p) {
    for (const Pt& v : h)
        if (v == p) return true;
    return false;
}

// Drop interior points where the polyline does not change slope.
std::vector<Pt> simplify_polyline(const std::vector<Pt>& pts) {
    std::vector<Pt> out;
    for (const Pt& p : pts) {
        while (out.size() >= 2) {
            const Pt& a = out[out.size() - 2];
            const Pt& b = out[out.size() - 1];
            Rat cross = (b.first - a.first) * (p.second - a.second) -
                        (b.second - a.second) * (p.first - a.first);
            if (cross == 0) out.pop_back();
            else break;
        }
        out.push_back(p);
    }
    return out;
}

} // namespace

std::vector<PolygonSection> confirmed_polygon_sections(std::vector<Pt> lower_pts,
                                                       std::vector<Pt> upper_pts) {
    std::vector<PolygonSection> out;
    if (lower_pts.empty() || upper_pts.empty()) return out;
    std::vector<Pt> L = lower_hull(std::move(lower_pts));
    std::vector<Pt> U = lower_hull(std::move(upper_pts));
    Rat lo = std::max(L.front().first, U.front().first);
    Rat hi = std::min(L.back().first, U.back().first);
    if (!(lo < hi)) return out; // overlap of positive width needed

    std::vector<Rat> bks;
    for (const Pt& v : L)
        if (v.first >= lo && v.first <= hi) bks.push_back(v.first);
    for (const Pt& v : U)
        if (v.first >= lo && v.first <= hi) bks.push_back(v.first);
    bks.push_back(lo);
    bks.push_back(hi);
    std::sort(bks.begin(), bks.end());
    bks.erase(std::unique(bks.begin(), bks.end()), bks.end());

    std::vector<Rat> lv, uv;
    std::vector<bool> eq;
    lv.reserve(bks.size());
    for (const Rat& b : bks) {
        lv.push_back(hull_eval(L, b));
        uv.push_back(hull_eval(U, b));
        eq.push_back(lv.back() == uv.back());
    }

    // maximal runs of segments on which the two hulls agree
    std::size_t k = 0;
    while (k + 1 < bks.size()) {
        if (!(eq[k] && eq[k + 1])) {
            ++k;
            continue;
        }
        std::size_t j = k;
        while (j + 1 < bks.size() && eq[j] && eq[j + 1]) ++j;
        std::vector<Pt> pts;
        for (std::size_t m = k; m <= j; ++m) pts.emplace_back(bks[m], lv[m]);
        PolygonSection s;
        s.vertices = simplify_polyline(pts);
        s.left_open = !is_vertex_of(L, s.vertices.front());
        s.right_open = !is_vertex_of(L, s.vertices.back());
        out.push_back(std::move(s));
        k = j;
    }
    return out;
}

namespace {

NewtonPolygon polygon_from_section(const PolygonSection& s) {
    NewtonPolygon np;
    np.vertices = s.vertices;
    np.support_lo = s.vertices.front().first;
    np.support_hi = s.vertices.back().first;
    np.left_open = s.left_open;
    np.right_open = s.right_open;
    for (std::size_t i = 0; i + 1 < s.vertices.size(); ++i) {
        NPFace f;
        f.x0 = s.vertices[i].first;
        f.y0 = s.vertices[i].second;
        f.x1 = s.vertices[i + 1].first;
        f.y1 = s.vertices[i + 1].second;
        f.slope = (f.y1 - f.y0) / (f.x1 - f.x0);
        f.left_open = (i == 0) && s.left_open;
        f.right_open = (i + 2 == s.vertices.size()) && s.right_open;
        np.faces.push_back(std::move(f));
    }
    return np;
}

NewtonPolygon newton_polygon_impl(const XPoly& f, const std::optional<std::pair<Rat, Rat>>& support) {
    if (f.node->epoch() < kFirstEpoch) bring_to_epoch(f.node, kFirstEpoch);
    while (true) {
        long long n = f.node->epoch();
        const ApproxPoly& p = as_poly(f.node->at(n));
        long long top = degree_stored(p);
        if (f.declared_degree >= 0) top = std::min(top, f.declared_degree);
        std::vector<Pt> lower, upper;
        for (long long i = 0; i <= top; ++i) {
            const ApproxElt& c = p.coeffs[static_cast<std::size_t>(i)];
            if (is_exact_zero(c)) continue;
            if (is_weakly_zero(c)) {
                lower.emplace_back(Rat(i), abs_precision(c).finite());
            } else {
                Rat v = weak_valuation(c).finite();
                lower.emplace_back(Rat(i), v);
                upper.emplace_back(Rat(i), v);
            }
        }
        if (lower.empty()) throw std::invalid_argument("newton_polygon: polynomial is exactly zero");
        Rat lo = support ? support->first : lower.front().first;
        Rat hi = support ? support->second : lower.back().first;
        require(lo <= hi, "newton_polygon: empty support");
        if (lo < lower.front().first || hi > lower.back().first)
            throw std::invalid_argument(
                "newton_polygon: support reaches coefficients that vanish identically");
        auto sections = confirmed_polygon_sections(lower, upper);
        for (auto& s : sections)
            if (s.vertices.front().first <= lo && s.vertices.back().first >= hi)
                return polygon_from_section(s);
        bring_to_epoch(f.node, n + 1); // precision error at max_epoch
    }
}

long long to_ll(const Int& n) { return n.convert_to<long long>(); }

} // namespace

NewtonPolygon newton_polygon(const XPoly& f) { return newton_polygon_impl(f, std::nullopt); }

NewtonPolygon newton_polygon(const XPoly& f, const Rat& lo, const Rat& hi) {
    return newton_polygon_impl(f, std::make_pair(lo, hi));
}

FFPoly residual_polynomial(const XPoly& f, const NPFace& face) {
    require(denominator(face.x0) == 1 && denominator(face.x1) == 1,
            "residual_polynomial: face endpoints must have integer abscissas");
    while (true) {
        const ApproxPoly& p = xp_best(f);
        const FieldPtr& fl = p.fld;
        Rat y0 = face.y0 * fl->abs_e; // own-unit ordinate
        require(denominator(y0) == 1, "residual_polynomial: face ordinate not integral for this field");
        Int v0 = numerator(y0);
        Rat s_own = face.slope * fl->abs_e; // = -h/e in lowest terms
        Int h = -numerator(s_own);
        Int e = denominator(s_own);
        Int w = numerator(Rat(face.x1 - face.x0));
        require(w > 0 && w % e == 0, "residual_polynomial: face width not a multiple of the denominator");
        long long deg = to_ll(w / e);
        long long i0 = to_ll(numerator(face.x0));
        ApproxElt pi = fl->base ? generator(fl) : embed_full(fl, Rat(fl->p));

        std::vector<FFElt> cs;
        cs.reserve(static_cast<std::size_t>(deg + 1));
        bool inadequate = false;
        for (long long j = 0; j <= deg; ++j) {
            long long idx = i0 + j * to_ll(e);
            require(idx <= degree_stored(p), "residual_polynomial: face outside the polynomial support");
            const ApproxElt& c = p.coeffs[static_cast<std::size_t>(idx)];
            long long t = to_ll(Int(j) * h - v0);
            ApproxElt scaled = t >= 0 ? mul(c, pow_elt(pi, t)) : div_elt(c, pow_elt(pi, -t));
            if (!is_exact_zero(scaled) && abs_prec_own(scaled) < 1) {
                inadequate = true;
                break;
            }
            cs.push_back(residue(fl, scaled));
        }
        if (!inadequate) return ffp_make(residue_field(fl), std::move(cs));
        bring_to_epoch(f.node, f.node->epoch() + 1); // precision error at max_epoch
    }
}

} // namespace padic
