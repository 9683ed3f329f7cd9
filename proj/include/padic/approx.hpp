#pragma once

#include "padic/val.hpp"

#include <limits>
#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

namespace padic {

/// The p-adic approximation kernel: fixed-capacity approximations of elements
/// of Qp and of finite extension towers built from Eisenstein (totally
/// ramified) and inertial (unramified) defining polynomials.
///
/// A prime-level element is pi^v * (u + pi^r O) with 0 <= r <= capacity and,
/// when r > 0, u a unit mod p^r (normalizing condition); r == 0 means the
/// element is weakly zero, indistinguishable from 0 at this precision.
/// Extension elements are power-basis coefficient vectors over the base field
/// (no (v,u,r) normal form of their own).
///
/// All public valuations and precisions are absolute rationals normalized so
/// that val(p) = 1; internal per-level bookkeeping uses own-uniformizer digits.

struct ApproxField;
using FieldPtr = std::shared_ptr<const ApproxField>;

enum class FieldKind { prime, inert, eisen };

inline constexpr long long kValInf = std::numeric_limits<long long>::max();

struct ApproxElt {
    FieldPtr fld;
    // Prime-level payload (ignored for extension elements):
    long long v = 0;   // weak valuation, own-pi digits; kValInf encodes exact zero
    long long r = 0;   // relative precision, own-pi digits
    Int u;             // unit mod p^r (0 when r == 0)
    // Extension payload: exactly rel_degree coefficients over the base field.
    std::vector<ApproxElt> coeffs;
};

struct ApproxPoly {
    FieldPtr fld;
    std::vector<ApproxElt> coeffs; // coeffs[i] multiplies x^i
};

struct ApproxField : std::enable_shared_from_this<ApproxField> {
    FieldKind kind = FieldKind::prime;
    long long p = 0;
    long long capacity = 1;          // max relative precision, own-pi digits
    FieldPtr base;                   // null iff prime
    std::vector<ApproxElt> def_coeffs; // defining polynomial over base (degree m)

    // Cached structure data.
    long long rel_degree = 1; // m; 1 for prime
    long long abs_e = 1;      // absolute ramification index
    long long abs_f = 1;      // absolute inertia degree

    // x^m reduction row: x^m = -(red_row[0] + red_row[1] x + ...), def poly made monic.
    std::vector<ApproxElt> red_row;

    mutable std::map<long long, Int> pow_cache;  // p^k at prime level
    mutable std::map<long long, Int> mask_cache; // p^k - 1 (p == 2 fast path)

    const Int& ppow(long long k) const;
    const Int& pmask(long long k) const; // p^k - 1, cached (any p)
};

/// Result of checking a defining polynomial against its declared kind at the
/// current precision.
enum class DefCheck { confirmed, undecided, violated };

FieldPtr make_prime_field(long long p, long long capacity);

/// Builds an extension; raises std::invalid_argument if the defining
/// polynomial definitely violates the declared kind at this precision.
/// An undecided check is accepted (refined on demand by callers re-checking
/// at higher capacity).
FieldPtr make_extension(FieldPtr base, FieldKind kind, const std::vector<ApproxElt>& def_coeffs,
                        long long capacity);

DefCheck check_defining(FieldKind kind, const FieldPtr& base, const std::vector<ApproxElt>& def_coeffs);

/// Structural equality ignoring capacity (same tower of kinds/degrees/defining
/// values as far as both are precise).
bool same_structure(const FieldPtr& a, const FieldPtr& b);

long long abs_degree(const FieldPtr& f);

// --- element constructors -----------------------------------------------

ApproxElt exact_zero_elt(const FieldPtr& f);
ApproxElt weakly_zero_elt(const FieldPtr& f, long long abs_prec_own);
/// Embed an exact rational known to absolute precision abs_prec_own (own digits).
ApproxElt embed(const FieldPtr& f, const Rat& q, long long abs_prec_own);
/// Embed at full capacity relative precision (absolute = val + capacity).
ApproxElt embed_full(const FieldPtr& f, const Rat& q);
ApproxElt coerce_up(const FieldPtr& ext, const ApproxElt& base_elt);
/// Re-home x into field g of the same structure (clamping to g's capacity).
ApproxElt coerce_field(const FieldPtr& g, const ApproxElt& x);
ApproxElt generator(const FieldPtr& ext);

// --- queries --------------------------------------------------------------

bool is_exact_zero(const ApproxElt& x);
bool is_weakly_zero(const ApproxElt& x);
/// Own-digit weak valuation (kValInf for exact zero).
long long weak_val_own(const ApproxElt& x);
long long abs_prec_own(const ApproxElt& x);
long long rel_prec_own(const ApproxElt& x);
/// Absolute-normalized (val(p) = 1) versions.
ExtVal weak_valuation(const ApproxElt& x);
ExtVal abs_precision(const ApproxElt& x);
ExtVal rel_precision(const ApproxElt& x);

/// x and y indistinguishable at the coarser of their precisions.
bool weak_equal(const ApproxElt& x, const ApproxElt& y);

std::string to_string(const ApproxElt& x);

// --- arithmetic -------------------------------------------------------------

ApproxElt add(const ApproxElt& x, const ApproxElt& y);
ApproxElt sub(const ApproxElt& x, const ApproxElt& y);
ApproxElt neg(const ApproxElt& x);
ApproxElt mul(const ApproxElt& x, const ApproxElt& y);
/// y must not be weakly zero.
ApproxElt div_elt(const ApproxElt& x, const ApproxElt& y);
ApproxElt inverse(const ApproxElt& x);
ApproxElt pow_elt(const ApproxElt& x, long long k);

/// Truncate to absolute precision k (own digits); k must not exceed the
/// current absolute precision unless x is exactly zero.
ApproxElt change_precision_own(const ApproxElt& x, long long k);
ApproxElt change_precision(const ApproxElt& x, const ExtVal& abs_prec);
/// Enforce r <= capacity by truncation (no-op when already within).
ApproxElt clamp_capacity(const ApproxElt& x);

// --- linear algebra over a field's elements --------------------------------

/// Solve A y = b by Gaussian elimination with minimal-valuation pivoting.
/// Throws precision_error when a pivot column is indistinguishable from zero.
std::vector<ApproxElt> linear_solve(std::vector<std::vector<ApproxElt>> a,
                                    std::vector<ApproxElt> b);
ApproxElt determinant(std::vector<std::vector<ApproxElt>> a);

// --- polynomials ------------------------------------------------------------

ApproxPoly make_poly(const FieldPtr& f, std::vector<ApproxElt> coeffs);
/// Degree of the stored coefficient vector (-1 for empty).
long long degree_stored(const ApproxPoly& f);
/// Index of the last coefficient that is not exactly zero (-1 if all are).
long long weak_degree(const ApproxPoly& f);

ApproxPoly poly_add(const ApproxPoly& f, const ApproxPoly& g);
ApproxPoly poly_sub(const ApproxPoly& f, const ApproxPoly& g);
ApproxPoly poly_neg(const ApproxPoly& f);
ApproxPoly poly_mul(const ApproxPoly& f, const ApproxPoly& g);
ApproxPoly poly_scale(const ApproxPoly& f, const ApproxElt& c);
/// f(c x).
ApproxPoly poly_scale_x(const ApproxPoly& f, const ApproxElt& c);
/// f(x + a).
ApproxPoly poly_shift(const ApproxPoly& f, const ApproxElt& a);
ApproxPoly poly_derivative(const ApproxPoly& f);
ApproxElt poly_eval(const ApproxPoly& f, const ApproxElt& x);

struct DivRem {
    ApproxPoly quot;
    ApproxPoly rem;
};
/// Long division; the divisor's leading coefficient (at its weak degree) must
/// not be weakly zero.
DivRem poly_divrem(const ApproxPoly& f, const ApproxPoly& g);

/// Sylvester-matrix determinant; leading coefficients must not be weakly zero.
ApproxElt resultant(const ApproxPoly& f, const ApproxPoly& g);

std::string to_string(const ApproxPoly& f);

/// Exact representative of an approximation: a rational at prime level, a
/// coefficient vector of representatives for extensions.
struct ExactRep;
using ExactRepNode = std::variant<Rat, std::vector<ExactRep>>;
struct ExactRep {
    ExactRepNode node;
};
/// Exact element weakly equal to x at x's precision (zero for weakly zero x).
ExactRep weak_approximation(const ApproxElt& x);
/// Embed a representative back into a (structurally equal) field at given
/// absolute precision (own digits).
ApproxElt embed_rep(const FieldPtr& f, const ExactRep& rep, long long abs_prec_own);

} // namespace padic
