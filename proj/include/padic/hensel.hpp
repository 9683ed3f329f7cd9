#pragma once

#include "padic/error.hpp"
#include "padic/exact_poly.hpp"
#include "padic/newton.hpp"
#include "padic/residue.hpp"

#include <memory>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

namespace padic {

/// Hensel-lemma procedures: univariate root lifting and root finding,
/// multivariate system lifting, factor-pair lifting, Newton-polygon
/// factorization and slope/residual splitting. Lifted roots and factors are
/// lazy nodes whose per-epoch refinement runs the corresponding quadratic
/// iteration, warm-started from the previous epoch's iterate.

enum class LiftKind { uni_root, multi_root, factor_pair };

/// Audit record of the quantities a liftability criterion compared: s is the
/// residual valuation (a lower bound when it never resolved), t the
/// derivative / Jacobian / resultant valuation. Positive certificates satisfy
/// s > 2t (s > 0 = t in the classic univariate case). The scaling actually
/// applied, if any, is echoed in mu_nu or jk.
struct LiftCertificate {
    LiftKind kind = LiftKind::uni_root;
    ExtVal s;
    ExtVal t;
    std::optional<std::pair<std::vector<Rat>, std::vector<Rat>>> mu_nu;
    std::optional<std::pair<long long, long long>> jk;
};

/// Valuations of f at the accepted iterates of one root node, for convergence
/// audits: each epoch refinement appends one segment of resolved residual
/// valuations (the final weakly-zero residual of a segment is not recorded).
struct RootIterationLog {
    std::vector<Rat> residual_valuations;
    std::vector<std::size_t> segment_starts;
};

struct RootLift {
    bool ok = false;
    std::optional<XElt> root;
    LiftCertificate cert;
};

struct SystemLift {
    bool ok = false;
    std::optional<XTuple> root;
    LiftCertificate cert;
};

struct FactorLift {
    bool ok = false;
    std::optional<std::pair<XPoly, XPoly>> pair; // (g*, h*) with f = g* h*
    LiftCertificate cert;
};

/// Decides whether the Newton iteration from a converges to a unique nearest
/// root of f: true exactly when v(a - b) over the roots b of f is maximized
/// precisely once, decided as soon as one epoch's coefficient bounds confirm
/// or refute it. Undecidable inputs (for example a an exact multiple root)
/// raise precision_error at max_epoch.
RootLift is_hensel_liftable_root(const XPoly& f, const XElt& a,
                                 const std::shared_ptr<RootIterationLog>& log = nullptr);

/// All simple roots of f in its coefficient field, each with multiplicity 1.
/// Residual roots of multiplicity >= 2 recurse on the rescaled cluster with
/// the given depth budget; exhausting the budget raises depth_error.
std::vector<std::pair<XElt, long long>> roots(const XPoly& f, long long depth_budget = 8);

/// Multivariate Hensel test at a for the square system F, with optional
/// diagonal rescaling x~ = pi^mu x, F~ = pi^nu F(pi^-mu x~) applied
/// symbolically to the valuation bookkeeping. Throws std::invalid_argument
/// when the rescaled data is not integral.
SystemLift is_hensel_liftable_system(const XMPolySystem& F, const std::vector<XElt>& a,
                                     const std::optional<std::vector<Rat>>& mu = std::nullopt,
                                     const std::optional<std::vector<Rat>>& nu = std::nullopt);

/// Factor-pair test: h = f div g, s = val(f - g h), t = val Res(g, h),
/// criterion s > 2t. The optional scaling (j, k) runs the test on
/// f~ = pi^k f(pi^j x) (k must equal -j deg f to keep f~ monic) and maps the
/// lifted pair back to the original coordinates.
FactorLift is_hensel_liftable_factor(const XPoly& f, const XPoly& g,
                                     const std::optional<std::pair<long long, long long>>& scaling = std::nullopt);

/// One monic factor per Newton-polygon face (degree = face width, including
/// an x^z factor for an exact-zero prefix); the product weakly equals f at
/// every epoch. Single-face input yields {f}.
std::vector<XPoly> newton_polygon_factorization(const XPoly& f);

/// Identification tag of a split factor: the face slope (nullopt for the
/// x^power factor, whose face is at slope -infinity), the single irreducible
/// residual base P with residual = P^power in the face coordinates, and
/// whether the splitting went as far as residue/slope data allows (false
/// exactly when the depth budget halted a separable cluster).
struct SplitTag {
    std::optional<Rat> slope;
    FFPoly residual_base;
    long long power = 1;
    bool separated = true;
};

/// Pairwise-coprime monic factors, each with a single-slope Newton polygon
/// whose residual polynomial is a power of one irreducible; the product
/// weakly equals f at every epoch. Factors are not certified irreducible.
std::vector<std::pair<XPoly, SplitTag>> split_factorization(const XPoly& f, long long depth_budget = 8);

} // namespace padic
