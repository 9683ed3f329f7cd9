#include "padic/ramify.hpp"

#include "padic/exact_poly.hpp"

#include <algorithm>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace padic {

namespace {

Rat seg_slope(const std::pair<Rat, Rat>& a, const std::pair<Rat, Rat>& b) {
    return (b.second - a.second) / (b.first - a.first);
}

// Remove interior vertices whose two adjacent segments share a slope, and
// trailing vertices collinear with the final ray, so that equal functions
// have equal vertex lists.
void canonicalize(TransitionFunction& phi) {
    std::vector<std::pair<Rat, Rat>> out;
    out.reserve(phi.vertices.size());
    for (const std::pair<Rat, Rat>& v : phi.vertices) {
        while (out.size() >= 2 &&
               seg_slope(out[out.size() - 2], out.back()) == seg_slope(out.back(), v))
            out.pop_back();
        out.push_back(v);
    }
    while (out.size() >= 2 &&
           seg_slope(out[out.size() - 2], out.back()) == phi.final_slope)
        out.pop_back();
    phi.vertices = std::move(out);
}

void validate_phi(const TransitionFunction& phi, const char* where) {
    if (phi.vertices.empty() ||
        phi.vertices.front() != std::make_pair(Rat(0), Rat(0)))
        throw std::invalid_argument(std::string(where) +
                                    ": transition function must start at (0, 0)");
    for (std::size_t i = 1; i < phi.vertices.size(); ++i)
        if (!(phi.vertices[i - 1].first < phi.vertices[i].first) ||
            !(phi.vertices[i - 1].second < phi.vertices[i].second))
            throw std::invalid_argument(std::string(where) +
                                        ": vertices must increase strictly");
    if (!(phi.final_slope > Rat(0)))
        throw std::invalid_argument(std::string(where) +
                                    ": final slope must be positive");
    Rat prev = seg_slope(phi.vertices.front(),
                         phi.vertices.size() > 1 ? phi.vertices[1]
                                                 : std::make_pair(Rat(1), phi.final_slope));
    for (std::size_t i = 2; i < phi.vertices.size(); ++i) {
        Rat m = seg_slope(phi.vertices[i - 1], phi.vertices[i]);
        if (m > prev)
            throw std::invalid_argument(std::string(where) +
                                        ": function must be concave");
        prev = m;
    }
    if (phi.vertices.size() > 1 && phi.final_slope > prev)
        throw std::invalid_argument(std::string(where) +
                                    ": function must be concave");
}

// Rebuild the polygon a break list describes: faces right to left, break i
// owning the face with right abscissa s_i and left abscissa s_{i+1} (1 for
// the leftmost), heights integrated from (s_1, 0); horizontal face appended
// on [e, e*d] when d > 1.
NewtonPolygon polygon_from_breaks(const std::vector<std::pair<Rat, Rat>>& breaks,
                                  long long e, long long d) {
    NewtonPolygon poly;
    poly.support_lo = Rat(1);
    poly.support_hi = Rat(e * d);
    std::vector<std::pair<Rat, Rat>> rvs; // vertices, right to left
    std::vector<NPFace> rfaces;
    if (breaks.empty()) {
        rvs.emplace_back(Rat(1), Rat(0));
    } else {
        if (breaks.front().second != Rat(e))
            throw std::logic_error(
                "ramification_polygon: leading break size must equal e");
        rvs.emplace_back(breaks.front().second, Rat(0));
        for (std::size_t i = 0; i < breaks.size(); ++i) {
            const Rat& v = breaks[i].first;
            Rat xl = (i + 1 < breaks.size()) ? breaks[i + 1].second : Rat(1);
            NPFace face;
            face.x1 = rvs.back().first;
            face.y1 = rvs.back().second;
            face.x0 = xl;
            face.y0 = face.y1 + v * (face.x1 - xl);
            face.slope = -v;
            rfaces.push_back(face);
            rvs.emplace_back(face.x0, face.y0);
        }
    }
    std::reverse(rvs.begin(), rvs.end());
    std::reverse(rfaces.begin(), rfaces.end());
    poly.vertices = std::move(rvs);
    poly.faces = std::move(rfaces);
    if (d > 1) {
        NPFace flat;
        flat.x0 = Rat(e);
        flat.y0 = Rat(0);
        flat.x1 = Rat(e * d);
        flat.y1 = Rat(0);
        flat.slope = Rat(0);
        poly.faces.push_back(flat);
        poly.vertices.emplace_back(Rat(e * d), Rat(0));
    }
    return poly;
}

} // namespace

TransitionFunction breaks_to_transition(const std::vector<std::pair<Rat, Rat>>& breaks,
                                        long long e) {
    if (e < 1)
        throw std::invalid_argument("breaks_to_transition: e must be at least 1");
    Rat ee(e);
    TransitionFunction phi;
    phi.vertices.emplace_back(Rat(0), Rat(0));
    phi.final_slope = Rat(1) / ee;
    Rat pv(0);
    Rat pu(0);
    for (std::size_t i = 0; i < breaks.size(); ++i) {
        const Rat& v = breaks[i].first;
        const Rat& s = breaks[i].second;
        if (!(v > pv))
            throw std::invalid_argument(
                "breaks_to_transition: break positions must be positive and "
                "strictly increasing");
        if (!(s > Rat(1)) || s > ee)
            throw std::invalid_argument(
                "breaks_to_transition: break sizes must lie in (1, e]");
        if (i > 0 && !(s < breaks[i - 1].second))
            throw std::invalid_argument(
                "breaks_to_transition: break sizes must decrease strictly");
        pu = pu + (s / ee) * (v - pv);
        phi.vertices.emplace_back(v, pu);
        pv = v;
    }
    return phi;
}

std::vector<std::pair<Rat, Rat>> transition_to_breaks(const TransitionFunction& phi,
                                                      long long e) {
    validate_phi(phi, "transition_to_breaks");
    if (e < 1)
        throw std::invalid_argument("transition_to_breaks: e must be at least 1");
    Rat ee(e);
    if (phi.final_slope != Rat(1) / ee)
        throw std::invalid_argument(
            "transition_to_breaks: final slope does not match 1/e");
    TransitionFunction canon = phi;
    canonicalize(canon);
    std::vector<std::pair<Rat, Rat>> breaks;
    for (std::size_t i = 1; i < canon.vertices.size(); ++i) {
        Rat s = seg_slope(canon.vertices[i - 1], canon.vertices[i]) * ee;
        if (!(s > Rat(1)) || s > ee)
            throw std::invalid_argument(
                "transition_to_breaks: vertex slopes incompatible with e");
        breaks.emplace_back(canon.vertices[i].first, s);
    }
    return breaks;
}

Rat transition_eval(const TransitionFunction& phi, const Rat& v) {
    validate_phi(phi, "transition_eval");
    if (v < Rat(0))
        throw std::invalid_argument("transition_eval: negative argument");
    const std::vector<std::pair<Rat, Rat>>& vs = phi.vertices;
    for (std::size_t i = 1; i < vs.size(); ++i)
        if (!(v > vs[i].first))
            return vs[i - 1].second +
                   seg_slope(vs[i - 1], vs[i]) * (v - vs[i - 1].first);
    return vs.back().second + phi.final_slope * (v - vs.back().first);
}

Rat transition_inverse(const TransitionFunction& phi, const Rat& u) {
    validate_phi(phi, "transition_inverse");
    if (u < Rat(0))
        throw std::invalid_argument("transition_inverse: negative argument");
    const std::vector<std::pair<Rat, Rat>>& vs = phi.vertices;
    for (std::size_t i = 1; i < vs.size(); ++i)
        if (!(u > vs[i].second))
            return vs[i - 1].first +
                   (u - vs[i - 1].second) / seg_slope(vs[i - 1], vs[i]);
    return vs.back().first + (u - vs.back().second) / phi.final_slope;
}

TransitionFunction transition_compose(const TransitionFunction& outer,
                                      const TransitionFunction& inner) {
    validate_phi(outer, "transition_compose");
    validate_phi(inner, "transition_compose");
    std::vector<Rat> xs;
    xs.reserve(outer.vertices.size() + inner.vertices.size());
    for (const std::pair<Rat, Rat>& v : inner.vertices) xs.push_back(v.first);
    for (const std::pair<Rat, Rat>& w : outer.vertices)
        xs.push_back(transition_inverse(inner, w.first));
    std::sort(xs.begin(), xs.end());
    xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
    TransitionFunction out;
    out.vertices.reserve(xs.size());
    for (const Rat& x : xs)
        out.vertices.emplace_back(x, transition_eval(outer, transition_eval(inner, x)));
    out.final_slope = outer.final_slope * inner.final_slope;
    canonicalize(out);
    return out;
}

RamificationData ramification_polygon(const XF& L) {
    if (!L)
        throw std::invalid_argument("ramification_polygon: null field");
    std::vector<XF> chain;
    for (XF f = L; f; f = f->base) chain.push_back(f);
    std::reverse(chain.begin(), chain.end());

    TransitionFunction phi; // identity
    phi.vertices.emplace_back(Rat(0), Rat(0));
    RamificationData out;
    for (std::size_t i = 1; i < chain.size(); ++i) {
        const XF& step = chain[i];
        if (step->kind == FieldKind::inert) {
            out.d *= step->rel_degree;
            continue;
        }
        long long erel = step->rel_degree;
        out.e *= erel;
        // Newton polygon of f(x + pi) over the step itself, abscissas [1, e];
        // the constant coefficient f(pi) is weakly zero forever, so the
        // restricted support is essential.
        std::vector<XElt> cs;
        cs.reserve(step->def.size());
        for (const XElt& c : step->def) cs.push_back(x_coerce_up(step, c));
        XPoly g = xp_shift(xp_from_coeffs(step, cs), x_gen(step));
        NewtonPolygon np = newton_polygon(g, Rat(1), Rat(erel));
        // Breaks of this step, positions rescaled into the step's own
        // uniformizer-normalized valuation.
        std::vector<std::pair<Rat, Rat>> bks;
        for (const NPFace& face : np.faces)
            if (face.slope < Rat(0))
                bks.emplace_back(-face.slope * Rat(step->abs_e), face.x1);
        std::sort(bks.begin(), bks.end());
        phi = transition_compose(phi, breaks_to_transition(bks, erel));
    }
    out.lower_breaks = transition_to_breaks(phi, out.e);
    out.polygon = polygon_from_breaks(out.lower_breaks, out.e, out.d);
    return out;
}

} // namespace padic
