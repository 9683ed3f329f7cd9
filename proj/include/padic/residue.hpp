#pragma once

#include "padic/approx.hpp"

#include <optional>
#include <utility>

namespace padic {

// The residue field F_{p^f} of a field tower, realized as Z/p[t] modulo a monic
// irreducible polynomial (trivial modulus for f = 1). Towers with more than one
// inert step are not supported.
struct ResidueField {
    long long p = 2;
    long long f = 1;
    std::vector<Int> def; // monic, size f+1, entries in [0, p)
};
using FF = std::shared_ptr<const ResidueField>;

struct FFElt {
    FF fld;
    std::vector<Int> c; // size f, entries in [0, p)
};

struct FFPoly {
    FF fld;
    std::vector<FFElt> c;
};

FF make_ff(long long p);                                 // F_p
FF make_ff_ext(long long p, const std::vector<Int>& def); // F_{p^f}, def monic irreducible over F_p
Int ff_size(const FF& k);                                 // p^f

FFElt ff_zero(const FF& k);
FFElt ff_one(const FF& k);
FFElt ff_gen(const FF& k);
FFElt ff_from_int(const FF& k, const Int& n);
bool ff_is_zero(const FFElt& a);
bool ff_eq(const FFElt& a, const FFElt& b);

FFElt ff_add(const FFElt& a, const FFElt& b);
FFElt ff_sub(const FFElt& a, const FFElt& b);
FFElt ff_neg(const FFElt& a);
FFElt ff_mul(const FFElt& a, const FFElt& b);
FFElt ff_inv(const FFElt& a);
FFElt ff_div(const FFElt& a, const FFElt& b);
FFElt ff_pow(const FFElt& a, const Int& e);

// All q elements, odometer order (constant term fastest).
std::vector<FFElt> ff_elements(const FF& k);

std::string to_string(const FFElt& a);

// --- polynomials over the residue field ----------------------------------

FFPoly ffp_make(const FF& k, std::vector<FFElt> coeffs);
FFPoly ffp_from_ints(const FF& k, const std::vector<long long>& coeffs);
long long ffp_degree(const FFPoly& f); // -1 for zero
FFPoly ffp_trim(FFPoly f);
bool ffp_eq(const FFPoly& f, const FFPoly& g);

FFPoly ffp_add(const FFPoly& f, const FFPoly& g);
FFPoly ffp_sub(const FFPoly& f, const FFPoly& g);
FFPoly ffp_mul(const FFPoly& f, const FFPoly& g);
FFPoly ffp_scale(const FFPoly& f, const FFElt& c);
FFPoly ffp_monic(const FFPoly& f);
struct FFDivRem {
    FFPoly quot, rem;
};
FFDivRem ffp_divrem(const FFPoly& f, const FFPoly& g);
FFPoly ffp_gcd(const FFPoly& f, const FFPoly& g);
FFPoly ffp_pow(const FFPoly& f, long long e);
FFElt ffp_eval(const FFPoly& f, const FFElt& x);

std::string to_string(const FFPoly& f);

// Roots with multiplicities, by exhaustive evaluation.
std::vector<std::pair<FFElt, long long>> ffp_roots(const FFPoly& f);

bool ffp_is_irreducible(const FFPoly& f);

// Full factorization into monic irreducibles (with multiplicity), by exhaustive
// trial division. Throws std::runtime_error("not implemented: ...") when the
// search space exceeds the exhaustion budget (2^20 candidates).
std::vector<std::pair<FFPoly, long long>> ffp_factor(const FFPoly& f);

// If f = c * q^k with q monic irreducible, returns (q, k); otherwise nullopt.
std::optional<std::pair<FFPoly, long long>> ffp_irreducible_power(const FFPoly& f);

// --- connection to p-adic fields ------------------------------------------

// Residue field of a tower (at most one inert step). Throws
// std::runtime_error("not implemented: ...") otherwise.
FF residue_field(const FieldPtr& K);

// Image of an integral element in the residue field. Requires weak_val >= 0
// (std::invalid_argument) and absolute precision >= 1 (precision_error).
FFElt residue(const FieldPtr& K, const ApproxElt& x);

// Section of the residue map: a lift known to absolute precision exactly 1.
ApproxElt q_inv(const FieldPtr& K, const FFElt& a);

// Like check_defining, but additionally decides irreducibility modulo pi for
// inert definitions when the coefficients are precise enough.
DefCheck check_inert_irreducible(const FieldPtr& base, const std::vector<ApproxElt>& def_coeffs);

// --- quotient rings O/pi^n -------------------------------------------------

// Supported for Qp and towers whose only extension step is a single inert one.
struct QuotientRing {
    FieldPtr fld;
    long long n = 1;
};

QuotientRing make_quotient(const FieldPtr& K, long long n);
// Canonical digit vector (length n * f, base-p digits) of an integral element
// known to absolute precision >= n.
std::vector<Int> quot_project(const QuotientRing& R, const ApproxElt& x);
ApproxElt quot_lift(const QuotientRing& R, const std::vector<Int>& digits);

} // namespace padic
