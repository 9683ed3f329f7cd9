#pragma once

#include "padic/exact_poly.hpp"
#include "padic/residue.hpp"

namespace padic {

/// Newton polygons of exact polynomials via the lower/upper weak-polygon
/// overlap algorithm: at each epoch the lower weak polygon is the hull of all
/// coefficient points (weakly zero coefficients contribute their absolute
/// precision as a lower bound) and the upper weak polygon is the hull of the
/// resolved points only. Wherever the two hulls coincide, the true Newton
/// polygon is confirmed.

struct PolygonSection {
    std::vector<std::pair<Rat, Rat>> vertices; // confirmed polyline, abscissas increasing
    /// An open end lies on the overlap boundary without being a vertex of the
    /// lower weak polygon: the adjacent face could extend further.
    bool left_open = false;
    bool right_open = false;
};

/// Kernel entry: confirmed sections from one epoch's point data. lower_pts
/// are the bound points of every coefficient, upper_pts the resolved subset.
std::vector<PolygonSection> confirmed_polygon_sections(std::vector<std::pair<Rat, Rat>> lower_pts,
                                                       std::vector<std::pair<Rat, Rat>> upper_pts);

struct NPFace {
    Rat x0, y0, x1, y1; // endpoints, ordinates in absolute valuation
    Rat slope;          // (y1 - y0) / (x1 - x0)
    bool left_open = false;
    bool right_open = false;
};

struct NewtonPolygon {
    std::vector<std::pair<Rat, Rat>> vertices;
    std::vector<NPFace> faces;
    Rat support_lo, support_hi; // confirmed extent (>= the requested support)
    bool left_open = false;
    bool right_open = false;
};

/// Confirmed Newton polygon covering at least the requested abscissa range;
/// raises epochs until confirmed (precision error at max_epoch). The default
/// support spans the stored coefficients that are not exactly zero.
NewtonPolygon newton_polygon(const XPoly& f);
NewtonPolygon newton_polygon(const XPoly& f, const Rat& lo, const Rat& hi);

/// Residual polynomial of a confirmed face: coefficient j is the residue of
/// f_{i0+je} * pi^(jh - v0) where the face has slope -h/e in the field's own
/// valuation. Degree width/e with nonzero constant and leading coefficients.
FFPoly residual_polynomial(const XPoly& f, const NPFace& face);

} // namespace padic
