#pragma once

#include "padic/epoch.hpp"
#include "padic/residue.hpp"

#include <utility>

namespace padic {

/// Exact p-adic fields and elements: handles over the epoch engine. An exact
/// field is a tower recipe (prime / Eisenstein / inertial steps) whose
/// defining polynomials are themselves exact elements; it materializes one
/// approximation field per epoch. An exact element is a DAG node producing one
/// approximation per epoch in the matching field.

struct ExactField;
using XF = std::shared_ptr<ExactField>;

struct XElt {
    XF fld;
    NodePtr node;
};

struct ExactField : std::enable_shared_from_this<ExactField> {
    Engine* eng = nullptr;
    FieldKind kind = FieldKind::prime;
    long long p = 2;
    XF base;                 // null iff prime
    std::vector<XElt> def;   // defining polynomial coefficients over base
    long long rel_degree = 1;
    long long abs_e = 1;
    long long abs_f = 1;

    /// Materialize (and cache) the epoch-n approximation field; brings the
    /// defining coefficients to epoch n and validates the defining polynomial
    /// (undecided checks are accepted, definite violations throw).
    FieldPtr at_epoch(long long n);

private:
    std::vector<FieldPtr> epoch_fields_;
};

XF xf_prime(Engine* eng, long long p);
XF xf_extension(XF base, FieldKind kind, std::vector<XElt> def_coeffs);
bool xf_same(const XF& a, const XF& b); // identity
long long xf_degree(const XF& f);       // absolute degree e*f

// --- element constructors ----------------------------------------------------

/// Constant from a rational; its epoch-n approximation has absolute precision
/// exactly 2^n own digits (exact zero for q = 0).
XElt x_const(const XF& f, const Rat& q);
/// Constant from an exact representative (power-basis tree of rationals).
XElt x_const_rep(const XF& f, const ExactRep& rep);
XElt x_zero(const XF& f);
XElt x_one(const XF& f);
/// The generator (uniformizer / inertial generator) of an extension.
XElt x_gen(const XF& f);
/// Coerce an element of the base field up into the extension.
XElt x_coerce_up(const XF& ext, const XElt& a);
/// Wrap an externally supplied update rule (used by lifting procedures).
/// compute(n, dep_apx) receives the dependencies' epoch-n approximations.
XElt x_from_compute(const XF& f, std::vector<NodePtr> deps,
                    std::function<ApproxElt(const FieldPtr&, long long, const std::vector<const Apx*>&)> fn);

// --- arithmetic ----------------------------------------------------------------

XElt x_add(const XElt& a, const XElt& b);
XElt x_sub(const XElt& a, const XElt& b);
XElt x_neg(const XElt& a);
XElt x_mul(const XElt& a, const XElt& b);
/// Division: evaluating the node first ensures the divisor is not weakly zero
/// (raising its epoch, possibly to the max_epoch error). Cache-mutating, so
/// fast-unsafe.
XElt x_div(const XElt& a, const XElt& b);
XElt x_inv(const XElt& a);
XElt x_pow(const XElt& a, long long k);

// --- queries -------------------------------------------------------------------

/// Approximation at epoch n (>= the node's min_epoch).
const ApproxElt& x_apx(const XElt& x, long long n);
/// Best approximation currently cached (epoch 1 is computed if none).
const ApproxElt& x_best(const XElt& x);
long long x_epoch(const XElt& x);

ExtVal x_weak_valuation(const XElt& x); // of the best approximation
ExtVal x_abs_precision(const XElt& x);  // of the best approximation

/// Raise epochs until the absolute precision reaches k.
void increase_absolute_precision(const XElt& x, const ExtVal& k);

/// Semi-decision of x != 0 up to absolute precision abs_bound: (true, n) with
/// n the witnessing epoch, or (false, n) when x is weakly zero at precision
/// >= abs_bound.
std::pair<bool, long long> is_definitely_nonzero(const XElt& x, const ExtVal& abs_bound);

/// val(x) >= v. Always decidable for finite v (may hit the max_epoch error
/// only when v is out of reach); v = +inf decides only for recognizable exact
/// zeros, else exhausts epochs.
bool valuation_ge(const XElt& x, const ExtVal& v);
bool valuation_gt(const XElt& x, const ExtVal& v);
bool valuation_eq(const XElt& x, const ExtVal& v);
/// Trichotomy of val(x) against finite v.
ValCmp valuation_cmp(const XElt& x, const ExtVal& v);

/// Residue of an integral element (raises epochs until precision suffices).
FFElt x_residue(const XElt& x);

std::string to_string(const XElt& x); // best approximation

} // namespace padic
