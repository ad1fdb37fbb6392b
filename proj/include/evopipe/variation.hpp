#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evopipe/pipeline.hpp"

namespace evopipe {

using NodePath = std::vector<int>; // child indices from the root

namespace detail {

inline void collect_paths(const PipelineNode& n, NodePath& cur, std::vector<NodePath>& out)
{
    out.push_back(cur);
    for (int i = 0; i < static_cast<int>(n.children.size()); ++i) {
        cur.push_back(i);
        collect_paths(n.children[i], cur, out);
        cur.pop_back();
    }
}

inline std::vector<NodePath> all_paths(const PipelineTree& t)
{
    std::vector<NodePath> out;
    NodePath cur;
    collect_paths(t.root, cur, out);
    return out;
}

inline PipelineNode& node_at(PipelineTree& t, const NodePath& p)
{
    PipelineNode* n = &t.root;
    for (int i : p) n = &n->children[i];
    return *n;
}

inline const PipelineNode& node_at(const PipelineTree& t, const NodePath& p)
{
    const PipelineNode* n = &t.root;
    for (int i : p) n = &n->children[i];
    return *n;
}

// Cartesian product of a primitive's hyperparameter grid.
inline std::vector<std::vector<ParamValue>> enumerate_assignments(const PrimitiveSpec& spec)
{
    std::vector<std::vector<ParamValue>> out{{}};
    for (const auto& g : spec.grid) {
        std::vector<std::vector<ParamValue>> next;
        next.reserve(out.size() * g.values.size());
        for (const auto& partial : out) {
            for (const auto& v : g.values) {
                auto a = partial;
                a.push_back(v);
                next.push_back(std::move(a));
            }
        }
        out = std::move(next);
    }
    return out;
}

struct OutcomeSet {
    std::vector<PipelineTree> trees;
    KeySet keys;

    void add(PipelineTree t, const KeySet& cache)
    {
        std::string key = canonical_key(t);
        if (cache.contains(key) || keys.contains(key)) return;
        keys.insert(std::move(key));
        trees.push_back(std::move(t));
    }

    bool empty() const { return trees.empty(); }
};

// replace-node: swap one node's primitive for a different one of the same
// kind, children preserved. The lone combiner has no alternative, so it
// never yields outcomes.
inline OutcomeSet enum_replace(const PipelineTree& t, const Registry& reg, const KeySet& cache)
{
    OutcomeSet out;
    for (const auto& path : all_paths(t)) {
        const PipelineNode& n = node_at(t, path);
        for (const PrimitiveSpec* prim : reg.of_kind(n.spec->kind)) {
            if (prim == n.spec) continue;
            for (auto& assignment : enumerate_assignments(*prim)) {
                PipelineTree copy = t;
                PipelineNode& target = node_at(copy, path);
                target.spec = prim;
                target.params = std::move(assignment);
                out.add(std::move(copy), cache);
            }
        }
    }
    return out;
}

// insert-preprocessor: splice a new preprocessor above an existing non-root
// node, or attach one as a fresh leaf child where arity allows. Refuses
// outright at the node cap and drops placements that would break the depth
// cap.
inline OutcomeSet enum_insert(const PipelineTree& t, const Registry& reg, const KeySet& cache,
                              const TreeLimits& limits)
{
    OutcomeSet out;
    if (complexity(t) + 1 > limits.max_nodes) return out;
    const auto preprocs = reg.of_kind(PrimitiveKind::preprocessor);

    auto try_add = [&](PipelineTree&& candidate) {
        if (depth(candidate) <= limits.max_depth) out.add(std::move(candidate), cache);
    };

    for (const auto& path : all_paths(t)) {
        const PipelineNode& n = node_at(t, path);
        const bool is_root = path.empty();

        // above this node
        if (!is_root) {
            for (const PrimitiveSpec* prim : preprocs) {
                for (auto& assignment : enumerate_assignments(*prim)) {
                    PipelineTree copy = t;
                    PipelineNode& target = node_at(copy, path);
                    PipelineNode inserted{prim, std::move(assignment), {std::move(target)}};
                    target = std::move(inserted);
                    try_add(std::move(copy));
                }
            }
        }

        // as a new leaf child
        const bool has_slack = (n.spec->kind == PrimitiveKind::classifier && n.children.empty())
            || (n.spec->kind == PrimitiveKind::preprocessor && n.children.empty());
        if (has_slack) {
            for (const PrimitiveSpec* prim : preprocs) {
                for (auto& assignment : enumerate_assignments(*prim)) {
                    PipelineTree copy = t;
                    node_at(copy, path).children.push_back(PipelineNode{prim, std::move(assignment), {}});
                    try_add(std::move(copy));
                }
            }
        }
    }
    return out;
}

// remove-node: drop a non-root node, reattaching a child in its place. A
// combiner offers two reattachment choices; a leaf can only vanish when its
// parent tolerates losing a child (combiners cannot).
inline OutcomeSet enum_remove(const PipelineTree& t, const KeySet& cache)
{
    OutcomeSet out;
    for (const auto& path : all_paths(t)) {
        if (path.empty()) continue;
        const PipelineNode& n = node_at(t, path);
        if (n.children.empty()) {
            NodePath parent_path(path.begin(), path.end() - 1);
            if (node_at(t, parent_path).spec->kind == PrimitiveKind::combiner) continue;
            PipelineTree copy = t;
            PipelineNode& parent = node_at(copy, parent_path);
            parent.children.erase(parent.children.begin() + path.back());
            out.add(std::move(copy), cache);
        } else {
            for (std::size_t c = 0; c < n.children.size(); ++c) {
                PipelineTree copy = t;
                PipelineNode& target = node_at(copy, path);
                PipelineNode lifted = std::move(target.children[c]);
                target = std::move(lifted);
                out.add(std::move(copy), cache);
            }
        }
    }
    return out;
}

// resample-one-hyperparameter: change exactly one assignment to a different
// grid value. A same-value "resample" would never be novel, so it is not an
// outcome.
inline OutcomeSet enum_resample(const PipelineTree& t, const KeySet& cache)
{
    OutcomeSet out;
    for (const auto& path : all_paths(t)) {
        const PipelineNode& n = node_at(t, path);
        for (std::size_t i = 0; i < n.params.size(); ++i) {
            for (const auto& v : n.spec->grid[i].values) {
                if (v == n.params[i]) continue;
                PipelineTree copy = t;
                node_at(copy, path).params[i] = v;
                out.add(std::move(copy), cache);
            }
        }
    }
    return out;
}

} // namespace detail

// Single-node pipeline: uniformly chosen classifier with uniformly chosen
// hyperparameters.
inline PipelineTree random_stump(const Registry& reg, Rng& rng)
{
    auto classifiers = reg.of_kind(PrimitiveKind::classifier);
    if (classifiers.empty()) throw ConfigError("registry has no classifiers");
    const PrimitiveSpec* spec = classifiers[rng.index(classifiers.size())];
    return PipelineTree{PipelineNode{spec, random_assignment(*spec, rng), {}}};
}

// Uniform draw over the stumps whose key is not yet cached; the final
// fallback of offspring generation. Empty optional means even the stump
// space is exhausted.
inline std::optional<PipelineTree> novel_random_stump(const Registry& reg, const KeySet& cache, Rng& rng)
{
    detail::OutcomeSet out;
    for (const PrimitiveSpec* spec : reg.of_kind(PrimitiveKind::classifier)) {
        for (auto& assignment : detail::enumerate_assignments(*spec)) {
            out.add(PipelineTree{PipelineNode{spec, std::move(assignment), {}}}, cache);
        }
    }
    if (out.empty()) return std::nullopt;
    return std::move(out.trees[rng.index(out.trees.size())]);
}

// Random tree with 1..3 nodes (stump, single preprocessor chain, or double
// chain), used by the fixed-hyperparameter arm's initialization.
inline PipelineTree random_small_tree(const Registry& reg, Rng& rng)
{
    PipelineTree t = random_stump(reg, rng);
    const std::size_t extra = rng.index(3); // 0, 1 or 2 preprocessors
    auto preprocs = reg.of_kind(PrimitiveKind::preprocessor);
    PipelineNode* attach = &t.root;
    for (std::size_t i = 0; i < extra; ++i) {
        const PrimitiveSpec* spec = preprocs[rng.index(preprocs.size())];
        attach->children.push_back(PipelineNode{spec, random_assignment(*spec, rng), {}});
        attach = &attach->children.back();
    }
    return t;
}

// One mutation. The sub-operator is drawn uniformly from those that can
// still produce an unseen individual, then the offspring uniformly from
// that operator's novel outcomes. Empty optional when the parent's whole
// one-step neighborhood is cached.
inline std::optional<PipelineTree> mutate(const PipelineTree& parent, const Registry& reg,
                                          const KeySet& cache, Rng& rng, const TreeLimits& limits = {})
{
    detail::OutcomeSet ops[4] = {
        detail::enum_replace(parent, reg, cache),
        detail::enum_insert(parent, reg, cache, limits),
        detail::enum_remove(parent, cache),
        detail::enum_resample(parent, cache),
    };
    std::vector<detail::OutcomeSet*> viable;
    for (auto& op : ops) {
        if (!op.empty()) viable.push_back(&op);
    }
    if (viable.empty()) return std::nullopt;
    auto& chosen = *viable[rng.index(viable.size())];
    return std::move(chosen.trees[rng.index(chosen.trees.size())]);
}

// One-point subtree exchange: replaces a non-root subtree of `a` with a
// non-root subtree of `b` (preprocessor/combiner subtrees interchange;
// classifiers stay at the root). One offspring, the modified copy of `a`.
// Empty optional when no compatible cut produces a novel tree within the
// size caps — two stumps being the structural extreme.
inline std::optional<PipelineTree> crossover(const PipelineTree& a, const PipelineTree& b,
                                             const KeySet& cache, Rng& rng, const TreeLimits& limits = {})
{
    if (canonical_key(a) == canonical_key(b)) {
        throw std::invalid_argument("crossover requires distinct parents");
    }
    auto paths_a = detail::all_paths(a);
    auto paths_b = detail::all_paths(b);

    detail::OutcomeSet out;
    for (const auto& pa : paths_a) {
        if (pa.empty()) continue;
        for (const auto& pb : paths_b) {
            if (pb.empty()) continue;
            PipelineTree candidate = a;
            detail::node_at(candidate, pa) = detail::node_at(b, pb);
            if (complexity(candidate) > limits.max_nodes) continue;
            if (depth(candidate) > limits.max_depth) continue;
            out.add(std::move(candidate), cache);
        }
    }
    if (out.empty()) return std::nullopt;
    return std::move(out.trees[rng.index(out.trees.size())]);
}

} // namespace evopipe
