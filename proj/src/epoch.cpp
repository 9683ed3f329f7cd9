#include "padic/epoch.hpp"

#include "padic/error.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>
#include <unordered_map>

namespace padic {

namespace {

Apx coerce_apx(const FieldPtr& g, const Apx& a) {
    if (std::holds_alternative<ApproxElt>(a)) return coerce_field(g, as_elt(a));
    const ApproxPoly& p = as_poly(a);
    std::vector<ApproxElt> cs;
    cs.reserve(p.coeffs.size());
    for (const auto& c : p.coeffs) cs.push_back(coerce_field(g, c));
    return ApproxPoly{g, std::move(cs)};
}

// Approximations of the same object at different epochs must agree at the
// coarser precision.
bool weakly_consistent(const Apx& coarse, const Apx& fine) {
    if (coarse.index() != fine.index()) return false;
    if (std::holds_alternative<ApproxElt>(coarse)) {
        const ApproxElt& a = as_elt(coarse);
        return weak_equal(a, coerce_field(a.fld, as_elt(fine)));
    }
    const ApproxPoly& a = as_poly(coarse);
    const ApproxPoly& b = as_poly(fine);
    std::size_t n = std::max(a.coeffs.size(), b.coeffs.size());
    for (std::size_t i = 0; i < n; ++i) {
        if (i >= a.coeffs.size()) {
            if (!is_weakly_zero(b.coeffs[i])) return false;
        } else if (i >= b.coeffs.size()) {
            if (!is_weakly_zero(a.coeffs[i])) return false;
        } else if (!weak_equal(a.coeffs[i], coerce_field(a.coeffs[i].fld, b.coeffs[i]))) {
            return false;
        }
    }
    return true;
}

} // namespace

Engine::Engine(long long max_epoch) : max_epoch_(max_epoch) {
    if (max_epoch < kFirstEpoch || max_epoch > 40)
        throw std::invalid_argument("Engine: max_epoch out of range");
}

long long Engine::capacity(long long n) const {
    if (n < 0 || n > 62) throw std::invalid_argument("Engine: bad epoch");
    return 1ll << static_cast<unsigned>(n);
}

EpochNode::EpochNode(Engine* eng, Kind kind, std::vector<NodePtr> deps)
    : max_epoch(eng->default_max_epoch()), eng_(eng), kind_(kind), deps_(std::move(deps)) {
    for (const auto& d : deps_)
        if (!d) throw std::invalid_argument("EpochNode: null dependency");
}

const Apx& EpochNode::at(long long n) const {
    if (!has_epoch(n)) throw std::logic_error("EpochNode: epoch not cached");
    return slots_[static_cast<std::size_t>(n - kFirstEpoch)];
}

void EpochNode::update(long long n) {
    for (const auto& d : deps_) bring_to_epoch(d, n);
    std::vector<const Apx*> ptrs;
    ptrs.reserve(deps_.size());
    for (const auto& d : deps_) ptrs.push_back(&d->at(n));
    eng_->stats().compute_calls++;
    Apx apx = compute(n, ptrs);
    set_approximation(*this, n, std::move(apx));
}

void bring_to_epoch(const NodePtr& x, long long n) {
    if (!x) throw std::invalid_argument("bring_to_epoch: null node");
    n = std::max(n, x->min_epoch);
    if (n > x->max_epoch) throw precision_error("precision error: max_epoch exceeded");
    if (x->epoch() >= n) return;
    x->update(n);
}

void set_approximation(EpochNode& x, long long n, Apx apx) {
    if (n < kFirstEpoch || n > x.max_epoch)
        throw std::invalid_argument("set_approximation: epoch out of range");
    bool is_el = std::holds_alternative<ApproxElt>(apx);
    if ((x.kind() == EpochNode::Kind::element) != is_el)
        throw std::invalid_argument("set_approximation: approximation type mismatch");
    FieldPtr fn = x.field_at(n);
    const FieldPtr& af = is_el ? as_elt(apx).fld : as_poly(apx).fld;
    if (!same_structure(af, fn))
        throw std::invalid_argument("set_approximation: parent field mismatch");
    EngineStats& st = x.engine()->stats();
    long long cur = x.epoch();
    if (n <= cur) {
        // replacing an existing slot: must stay weakly consistent with it
        if (!weakly_consistent(x.at(n), apx))
            throw std::invalid_argument("set_approximation: inconsistent with cached approximation");
        x.slots_[static_cast<std::size_t>(n - kFirstEpoch)] = std::move(apx);
        st.slot_writes++;
        return;
    }
    if (cur >= kFirstEpoch && !weakly_consistent(x.at(cur), apx))
        throw std::invalid_argument("set_approximation: inconsistent with cached approximation");
    // fill the gap (cur, n)
    for (long long m = cur + 1; m < n; ++m) {
        if (x.coercible()) {
            x.slots_.push_back(coerce_apx(x.field_at(m), apx));
        } else if (m >= x.min_epoch) {
            std::vector<const Apx*> ptrs;
            ptrs.reserve(x.deps().size());
            for (const auto& d : x.deps()) ptrs.push_back(&d->at(m));
            st.compute_calls++;
            x.slots_.push_back(x.compute(m, ptrs));
        } else {
            throw std::runtime_error("not implemented: InterpolateEpochs with min_epoch>1");
        }
        st.interpolations++;
        st.slot_writes++;
    }
    x.slots_.push_back(std::move(apx));
    st.slot_writes++;
}

void rewrite_slots(EpochNode& x, long long upto, const Apx& from, long long /*from_epoch*/) {
    for (long long m = kFirstEpoch; m < upto; ++m) {
        x.slots_[static_cast<std::size_t>(m - kFirstEpoch)] = coerce_apx(x.field_at(m), from);
        x.engine()->stats().slot_writes++;
    }
}

long long ensure_all_approximations_nonzero(const NodePtr& x) {
    if (x->kind() != EpochNode::Kind::element)
        throw std::invalid_argument("ensure_all_approximations_nonzero: element node required");
    long long n = std::max(x->epoch(), x->min_epoch);
    bring_to_epoch(x, n);
    n = x->epoch();
    while (is_weakly_zero(as_elt(x->at(n)))) {
        ++n;
        bring_to_epoch(x, n); // throws precision_error at max_epoch
    }
    rewrite_slots(*x, n, x->at(n), n);
    return n;
}

long long ensure_all_approximations_full_degree(const NodePtr& x) {
    if (x->kind() != EpochNode::Kind::poly)
        throw std::invalid_argument("ensure_all_approximations_full_degree: poly node required");
    long long n = std::max(x->epoch(), x->min_epoch);
    bring_to_epoch(x, n);
    n = x->epoch();
    auto full = [](const ApproxPoly& p) {
        long long d = weak_degree(p);
        return d >= 0 && !is_weakly_zero(p.coeffs[static_cast<std::size_t>(d)]);
    };
    while (!full(as_poly(x->at(n)))) {
        ++n;
        bring_to_epoch(x, n);
    }
    rewrite_slots(*x, n, x->at(n), n);
    return n;
}

std::vector<NodePtr> dependency_closure(const NodePtr& root) {
    std::vector<NodePtr> out;
    std::map<const EpochNode*, bool> state; // false = open, true = done
    std::vector<std::pair<NodePtr, std::size_t>> stack;
    stack.emplace_back(root, 0);
    state[root.get()] = false;
    while (!stack.empty()) {
        auto& [node, idx] = stack.back();
        if (idx < node->deps().size()) {
            NodePtr d = node->deps()[idx++];
            auto it = state.find(d.get());
            if (it == state.end()) {
                state[d.get()] = false;
                stack.emplace_back(std::move(d), 0);
            }
            continue;
        }
        state[node.get()] = true;
        out.push_back(node);
        stack.pop_back();
    }
    return out;
}

namespace {

class WithDepsStandard final : public EpochNode {
public:
    WithDepsStandard(const NodePtr& root, std::vector<std::pair<NodePtr, long long>> plan)
        : EpochNode(root->engine(), root->kind(), {root}), plan_(std::move(plan)) {
        min_epoch = root->min_epoch;
        max_epoch = root->max_epoch;
    }

    Apx compute(long long n, const std::vector<const Apx*>& dep_apx) override {
        (void)n;
        return *dep_apx[0];
    }

    FieldPtr field_at(long long n) override { return deps()[0]->field_at(n); }

    void update(long long n) override {
        // dependencies come first in the plan, so each bring_to_epoch finds its
        // dependencies already raised and reduces to a single compute; custom
        // node updates (e.g. divisor-ensuring division) are preserved
        for (const auto& [y, m] : plan_) bring_to_epoch(y, std::max(n, m));
        set_approximation(*this, n, deps()[0]->at(n));
    }

private:
    std::vector<std::pair<NodePtr, long long>> plan_;
};

class WithDepsFast final : public EpochNode {
public:
    WithDepsFast(const NodePtr& root, std::vector<NodePtr> chain)
        : EpochNode(root->engine(), root->kind(), {}), root_(root), chain_(std::move(chain)) {
        long long lo = kFirstEpoch, hi = root->engine()->default_max_epoch();
        for (const auto& y : chain_) {
            if (y->fast_unsafe)
                throw std::invalid_argument(
                    "with_dependencies: fast mode requires cache-independent nodes");
            lo = std::max(lo, y->min_epoch);
            hi = std::min(hi, y->max_epoch);
        }
        min_epoch = lo;
        max_epoch = hi;
        index_.reserve(chain_.size());
        for (std::size_t i = 0; i < chain_.size(); ++i) index_[chain_[i].get()] = i;
    }

    Apx compute(long long n, const std::vector<const Apx*>& /*dep_apx*/) override {
        // scratch evaluation of the flattened chain: no caching, no checks
        std::vector<Apx> scratch;
        scratch.reserve(chain_.size());
        std::vector<const Apx*> ptrs;
        for (const auto& y : chain_) {
            ptrs.clear();
            ptrs.reserve(y->deps().size());
            for (const auto& d : y->deps()) ptrs.push_back(&scratch[index_.at(d.get())]);
            engine()->stats().compute_calls++;
            scratch.push_back(y->compute(n, ptrs));
        }
        return std::move(scratch.back());
    }

    FieldPtr field_at(long long n) override { return root_->field_at(n); }

    void update(long long n) override { set_approximation(*this, n, compute(n, {})); }

private:
    NodePtr root_;
    std::vector<NodePtr> chain_;
    std::unordered_map<const EpochNode*, std::size_t> index_;
};

} // namespace

NodePtr with_dependencies(const NodePtr& root, DepMode mode) {
    std::vector<NodePtr> topo = dependency_closure(root);
    if (mode == DepMode::fast) return std::make_shared<WithDepsFast>(root, std::move(topo));
    // m_y: max min_epoch over y and everything in the closure that depends on it
    std::map<const EpochNode*, long long> m;
    for (const auto& y : topo) m[y.get()] = y->min_epoch;
    for (auto it = topo.rbegin(); it != topo.rend(); ++it) {
        long long mz = m[it->get()];
        for (const auto& d : (*it)->deps()) {
            auto& md = m[d.get()];
            md = std::max(md, mz);
        }
    }
    std::vector<std::pair<NodePtr, long long>> plan;
    plan.reserve(topo.size());
    for (auto& y : topo) {
        long long my = m[y.get()];
        plan.emplace_back(std::move(y), my);
    }
    return std::make_shared<WithDepsStandard>(root, std::move(plan));
}

} // namespace padic
