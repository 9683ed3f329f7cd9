#pragma once

#include "padic/approx.hpp"

#include <functional>
#include <variant>

namespace padic {

/// The epoch engine: lazy exact p-adic objects as a DAG of nodes, each caching
/// one approximation per epoch. Epoch n carries capacity 2^n uniformizer
/// digits. Updating a node to epoch n updates its dependencies first, then
/// recomputes; intermediate epochs are filled by down-coercion (or recompute
/// for non-coercible nodes) so that every epoch up to the current one has an
/// approximation.

class Engine;
class EpochNode;
using NodePtr = std::shared_ptr<EpochNode>;

using Apx = std::variant<ApproxElt, ApproxPoly>;

inline constexpr long long kFirstEpoch = 1;

inline const ApproxElt& as_elt(const Apx& a) { return std::get<ApproxElt>(a); }
inline const ApproxPoly& as_poly(const Apx& a) { return std::get<ApproxPoly>(a); }

struct EngineStats {
    long long compute_calls = 0;  // node compute invocations
    long long slot_writes = 0;    // approximation slots written (incl. rewrites)
    long long interpolations = 0; // intermediate epochs filled
};

class Engine {
public:
    explicit Engine(long long max_epoch = 24);

    long long default_max_epoch() const { return max_epoch_; }
    /// Relative-precision capacity of epoch n: 2^n digits.
    long long capacity(long long n) const;

    EngineStats& stats() { return stats_; }
    const EngineStats& stats() const { return stats_; }

private:
    long long max_epoch_;
    EngineStats stats_;
};

class EpochNode : public std::enable_shared_from_this<EpochNode> {
public:
    enum class Kind { element, poly };

    EpochNode(Engine* eng, Kind kind, std::vector<NodePtr> deps);
    virtual ~EpochNode() = default;

    Engine* engine() const { return eng_; }
    Kind kind() const { return kind_; }
    const std::vector<NodePtr>& deps() const { return deps_; }

    /// Highest epoch with a cached approximation (kFirstEpoch - 1 when none).
    long long epoch() const { return kFirstEpoch - 1 + static_cast<long long>(slots_.size()); }
    bool has_epoch(long long n) const { return n >= kFirstEpoch && n <= epoch(); }
    const Apx& at(long long n) const;
    const Apx& current() const { return at(epoch()); }

    /// Compute the approximation at epoch n. dep_apx[i] is deps()[i]'s
    /// approximation at epoch n (cached slots in the standard path, scratch
    /// values under fast evaluation).
    virtual Apx compute(long long n, const std::vector<const Apx*>& dep_apx) = 0;

    /// The epoch-n approximation field of this node's values.
    virtual FieldPtr field_at(long long n) = 0;

    /// Intermediate epochs filled by down-coercion (default) or recomputation.
    virtual bool coercible() const { return true; }

    /// Update hook: bring this node to epoch n assuming n is already clamped
    /// to [min_epoch, max_epoch]. Default recurses on dependencies.
    virtual void update(long long n);

    long long min_epoch = kFirstEpoch;
    long long max_epoch; // defaulted from the engine
    /// Nodes whose evaluation mutates dependency caches or reads their own
    /// cache; they cannot participate in fast (scratch) evaluation.
    bool fast_unsafe = false;

private:
    friend void set_approximation(EpochNode& x, long long n, Apx apx);
    friend void rewrite_slots(EpochNode& x, long long upto, const Apx& from, long long from_epoch);

    Engine* eng_;
    Kind kind_;
    std::vector<NodePtr> deps_;
    std::vector<Apx> slots_; // slots_[i] is the approximation at epoch kFirstEpoch + i
};

/// Update x so that epochs kFirstEpoch..max(n, x.min_epoch) are all cached.
/// Throws precision_error("precision error: max_epoch exceeded") beyond
/// x.max_epoch.
void bring_to_epoch(const NodePtr& x, long long n);

/// Install an approximation at epoch n (n = current epoch + 1 or any higher;
/// gaps are interpolated). Checks the approximation's type, its field against
/// field_at(n), and weak equality with the previous epoch's slot.
void set_approximation(EpochNode& x, long long n, Apx apx);

/// Raise x until its element approximation is not weakly zero, then rewrite
/// every earlier epoch slot with a down-coercion of the witnessing one, so all
/// cached approximations have relative precision >= 1. Returns the witnessing
/// epoch.
long long ensure_all_approximations_nonzero(const NodePtr& x);

/// Same for polynomial nodes: until the leading stored coefficient is not
/// weakly zero (full weak degree), rewriting earlier slots.
long long ensure_all_approximations_full_degree(const NodePtr& x);

enum class DepMode { standard, fast };

/// Wrap root in a node that evaluates the dependency closure explicitly.
///
/// standard: keeps per-node caching and checks, but drives the flattened
/// topological list directly, each node y raised to max(n, m_y) where m_y is
/// the maximum min_epoch over y and everything in the closure depending on it.
///
/// fast: evaluates the flattened chain into scratch storage with no caching
/// and no consistency checks; only the wrapper's own slots are kept. The
/// wrapper's min_epoch is the maximum over the chain and its max_epoch the
/// minimum. Throws std::invalid_argument if any node in the closure is
/// fast_unsafe.
NodePtr with_dependencies(const NodePtr& root, DepMode mode);

/// Topologically ordered dependency closure (dependencies before dependents,
/// root last).
std::vector<NodePtr> dependency_closure(const NodePtr& root);

} // namespace padic
