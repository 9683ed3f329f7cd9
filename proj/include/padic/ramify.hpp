#pragma once

#include "padic/exact.hpp"
#include "padic/newton.hpp"

namespace padic {

/// Ramification polygons and Hasse-Herbrand transition functions.
///
/// Conventions: for a tower step with uniformizer pi, every automorphism-like
/// conjugate sigma is weighed by val(sigma) := val_L(sigma pi - pi) in the
/// extension's own normalization (val_L(pi) = 1, val_L(p) = abs_e). The group
/// filtration is Gamma_v = {sigma : val(sigma) >= v}; no index shift is
/// applied, so the classical lower-numbering subgroup G_i corresponds to
/// Gamma_{i+1} here. The transition function is
///     phi(v) = (1/e) * integral_0^v |Gamma_t| dt,
/// piecewise linear with slope s_i/e between consecutive break images and
/// slope 1/e beyond the last break (|Gamma_v| = 1 there).

/// Piecewise-linear concave bijection of [0, inf): vertices start at (0, 0),
/// strictly increasing in both coordinates, slopes non-increasing; the slope
/// beyond the last vertex is final_slope.
struct TransitionFunction {
    std::vector<std::pair<Rat, Rat>> vertices; // (v, u)
    Rat final_slope = Rat(1);
};

/// Ramification data of an extension tower: the ramification polygon (the
/// Newton polygon of f(x + pi) over abscissas [1, e], ordinates in val_L
/// units, extended by a horizontal face on [e, e*d] when d > 1), the
/// ramification/inertia degrees, and the positive lower breaks (v_i, s_i)
/// with v_i = -slope of a face and s_i the abscissa of its right-hand vertex.
/// The degenerate d = 1 horizontal face is omitted.
struct RamificationData {
    NewtonPolygon polygon;
    long long e = 1;
    long long d = 1;
    std::vector<std::pair<Rat, Rat>> lower_breaks; // v ascending, s descending
};

/// Ramification data of L over its prime field. Single-step towers
/// (unramified base plus at most one Eisenstein step on top) are computed
/// directly from the shifted defining polynomial's Newton polygon; deeper
/// towers are composed through transition functions level by level and
/// converted back to breaks, reconstructing the polygon from the break data.
RamificationData ramification_polygon(const XF& L);

/// phi from positive breaks: slope s_i/e on the segment ending at v_i, slope
/// 1/e after the last break. Breaks at v = 0 (the unramified face) carry no
/// mass and are rejected; pass only the positive breaks.
TransitionFunction breaks_to_transition(const std::vector<std::pair<Rat, Rat>>& breaks,
                                        long long e);

/// Inverse of breaks_to_transition: recovers (v_i, s_i) from the vertex
/// slopes. Round-trips exactly.
std::vector<std::pair<Rat, Rat>> transition_to_breaks(const TransitionFunction& phi,
                                                      long long e);

/// Evaluate phi at v >= 0 (piecewise-linear interpolation, exact rationals).
Rat transition_eval(const TransitionFunction& phi, const Rat& v);

/// Evaluate phi^{-1} at u >= 0 (phi is a bijection of [0, inf)).
Rat transition_inverse(const TransitionFunction& phi, const Rat& u);

/// Functional composition phi_outer(phi_inner(v)) as a transition function;
/// vertex abscissas are the inner vertices united with the preimages of the
/// outer vertices under the inner function.
TransitionFunction transition_compose(const TransitionFunction& outer,
                                      const TransitionFunction& inner);

} // namespace padic
