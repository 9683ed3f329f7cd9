#pragma once

#include "padic/exact.hpp"

namespace padic {

/// Exact univariate polynomials over exact fields: poly-kind nodes whose
/// epoch-n approximation is an ApproxPoly over the field's epoch-n
/// approximation field. The declared degree is part of the exact identity;
/// approximations may have smaller weak degree.

struct XPoly {
    XF fld;
    NodePtr node;
    long long declared_degree = -1; // -1 = zero polynomial
};

XPoly xp_from_coeffs(const XF& f, const std::vector<XElt>& coeffs);
XPoly xp_from_rats(const XF& f, const std::vector<Rat>& coeffs);
/// Wrap an externally supplied update rule producing whole polynomials.
XPoly xp_from_compute(const XF& f, std::vector<NodePtr> deps, long long declared_degree,
                      std::function<ApproxPoly(const FieldPtr&, long long, const std::vector<const Apx*>&)> fn);

const ApproxPoly& xp_apx(const XPoly& f, long long n);
const ApproxPoly& xp_best(const XPoly& f);
/// Coefficient i as an exact element (exact zero beyond the stored length).
XElt xp_coeff(const XPoly& f, long long i);
std::vector<XElt> xp_coeffs(const XPoly& f); // 0 .. declared_degree

XPoly xp_add(const XPoly& f, const XPoly& g);
XPoly xp_sub(const XPoly& f, const XPoly& g);
XPoly xp_neg(const XPoly& f);
XPoly xp_mul(const XPoly& f, const XPoly& g);
XPoly xp_scale(const XPoly& f, const XElt& c);   // c*f
XPoly xp_scale_x(const XPoly& f, const XElt& c); // f(c*x)
XPoly xp_shift(const XPoly& f, const XElt& a);   // f(x+a)
XPoly xp_derivative(const XPoly& f);
XElt xp_eval(const XPoly& f, const XElt& x);

/// Quotient and remainder. The divisor's leading coefficient is forced to
/// resolve first (its declared degree must be its true degree); both results
/// share a single computation per epoch.
std::pair<XPoly, XPoly> xp_divrem(const XPoly& f, const XPoly& g);

/// Resultant; forces both polynomials to full degree first.
XElt xp_resultant(const XPoly& f, const XPoly& g);

/// Two polynomials of fixed coefficient counts produced together by one node
/// (used by lifting procedures whose factor pairs refine jointly): the
/// callback returns the packed coefficient vector of size count_first +
/// count_second. fast_unsafe marks the shared node as stateful.
std::pair<XPoly, XPoly> xp_pair_from_compute(
    const XF& f, std::vector<NodePtr> deps, std::size_t count_first, std::size_t count_second,
    std::function<std::vector<ApproxElt>(const FieldPtr&, long long, const std::vector<const Apx*>&)> fn,
    bool fast_unsafe = false);

/// Raise epochs until the leading (not exactly zero) stored coefficient is
/// not weakly zero at every cached epoch.
void xp_ensure_full_degree(const XPoly& f);

std::string to_string(const XPoly& f); // best approximation

/// Exact tuple: components produced together by one node, one update per
/// epoch regardless of the component count.
struct XTuple {
    std::vector<XElt> components;
    NodePtr node;
};

XTuple xt_from_compute(const XF& f, std::vector<NodePtr> deps, std::size_t count,
                       std::function<std::vector<ApproxElt>(const FieldPtr&, long long, const std::vector<const Apx*>&)> fn);

/// Minimal multivariate support: finite coefficient maps, evaluation and
/// formal derivatives for square systems (no multivariate ring arithmetic).
struct XMPoly {
    long long rank = 0;
    std::vector<std::pair<std::vector<long long>, XElt>> terms; // exponent vector -> coefficient
};

struct XMPolySystem {
    long long rank = 0;
    std::vector<XMPoly> eqs; // square: eqs.size() == rank
};

XMPoly xmp_make(long long rank, std::vector<std::pair<std::vector<long long>, XElt>> terms);
XMPolySystem xmps_make(long long rank, std::vector<XMPoly> eqs);
XElt xmp_eval(const XF& f, const XMPoly& m, const std::vector<XElt>& at);
XMPoly xmp_derivative(const XMPoly& m, long long var);
std::vector<XElt> xmps_eval(const XF& f, const XMPolySystem& s, const std::vector<XElt>& at);
std::vector<std::vector<XElt>> xmps_jacobian(const XF& f, const XMPolySystem& s, const std::vector<XElt>& at);

} // namespace padic
