#pragma once

#include <charconv>
#include <cstdio>
#include <string>
#include <unordered_set>
#include <vector>

#include "evopipe/errors.hpp"
#include "evopipe/primitives.hpp"
#include "evopipe/rng.hpp"

namespace evopipe {

// Genotype. A pipeline is a rooted tree: the root is always a classifier,
// preprocessors have at most one child (they read the raw input when leaf),
// and the combiner has exactly two. Children feed their parent, so the key
// `knn{k=3}(standard_scaler{})` means "scale, then classify".
struct PipelineNode {
    const PrimitiveSpec* spec = nullptr;
    std::vector<ParamValue> params; // aligned with spec->grid order
    std::vector<PipelineNode> children;
};

struct PipelineTree {
    PipelineNode root;
};

// Canonical keys already explored (evaluation cache plus in-flight
// offspring). Variation operators filter their outcome spaces against this.
using KeySet = std::unordered_set<std::string>;

inline int complexity(const PipelineNode& n)
{
    int c = 1;
    for (const auto& ch : n.children) c += complexity(ch);
    return c;
}

inline int complexity(const PipelineTree& t) { return complexity(t.root); }

// Depth counted in nodes: a stump has depth 1.
inline int depth(const PipelineNode& n)
{
    int d = 0;
    for (const auto& ch : n.children) d = std::max(d, depth(ch));
    return d + 1;
}

inline int depth(const PipelineTree& t) { return depth(t.root); }

// --- canonical serialization -------------------------------------------
//
//   node    := name '{' assigns '}' [ '(' node (',' node)* ')' ]
//   assigns := [ name '=' value (',' name '=' value)* ]
//
// Hyperparameters appear in the registry's fixed (sorted) order, integers
// print bare and reals print in shortest round-trip form, so two trees have
// equal keys iff they are structurally identical with identical assignments.

inline std::string format_param_value(const ParamValue& v)
{
    char buf[32];
    if (std::holds_alternative<std::int64_t>(v)) {
        auto [p, ec] = std::to_chars(buf, buf + sizeof buf, std::get<std::int64_t>(v));
        return std::string(buf, p);
    }
    auto [p, ec] = std::to_chars(buf, buf + sizeof buf, std::get<double>(v));
    return std::string(buf, p);
}

inline void canonical_key(const PipelineNode& n, std::string& out)
{
    out += n.spec->name;
    out += '{';
    for (std::size_t i = 0; i < n.params.size(); ++i) {
        if (i) out += ',';
        out += n.spec->grid[i].name;
        out += '=';
        out += format_param_value(n.params[i]);
    }
    out += '}';
    if (!n.children.empty()) {
        out += '(';
        for (std::size_t i = 0; i < n.children.size(); ++i) {
            if (i) out += ',';
            canonical_key(n.children[i], out);
        }
        out += ')';
    }
}

inline std::string canonical_key(const PipelineTree& t)
{
    std::string out;
    out.reserve(64);
    canonical_key(t.root, out);
    return out;
}

namespace detail {

struct KeyParser {
    const std::string& s;
    std::size_t pos = 0;
    const Registry& reg;

    [[noreturn]] void fail(const std::string& why) const
    {
        throw ConfigError("bad pipeline key at offset " + std::to_string(pos) + ": " + why);
    }

    char peek() const { return pos < s.size() ? s[pos] : '\0'; }

    void expect(char c)
    {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos;
    }

    std::string ident()
    {
        std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '_')) {
            ++pos;
        }
        if (pos == start) fail("expected identifier");
        return s.substr(start, pos - start);
    }

    ParamValue value()
    {
        std::size_t start = pos;
        while (pos < s.size() && (std::isalnum(static_cast<unsigned char>(s[pos])) || s[pos] == '.'
                                  || s[pos] == '-' || s[pos] == '+')) {
            ++pos;
        }
        std::string tok = s.substr(start, pos - start);
        if (tok.empty()) fail("expected value");
        if (tok.find('.') == std::string::npos && tok.find('e') == std::string::npos) {
            std::int64_t iv = 0;
            auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), iv);
            if (ec != std::errc{} || p != tok.data() + tok.size()) fail("bad integer '" + tok + "'");
            return ParamValue{iv};
        }
        double dv = 0;
        auto [p, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), dv);
        if (ec != std::errc{} || p != tok.data() + tok.size()) fail("bad real '" + tok + "'");
        return ParamValue{dv};
    }

    PipelineNode node()
    {
        PipelineNode n;
        std::string name = ident();
        n.spec = reg.find(name);
        if (!n.spec) fail("unknown primitive '" + name + "'");
        expect('{');
        std::size_t gi = 0;
        while (peek() != '}') {
            if (gi) expect(',');
            std::string pname = ident();
            if (gi >= n.spec->grid.size() || n.spec->grid[gi].name != pname) {
                fail("hyperparameter '" + pname + "' out of order for '" + name + "'");
            }
            expect('=');
            n.params.push_back(value());
            ++gi;
        }
        if (gi != n.spec->grid.size()) fail("missing hyperparameters for '" + name + "'");
        expect('}');
        if (peek() == '(') {
            ++pos;
            n.children.push_back(node());
            while (peek() == ',') {
                ++pos;
                n.children.push_back(node());
            }
            expect(')');
        }
        return n;
    }
};

} // namespace detail

inline PipelineTree parse_key(const std::string& key, const Registry& reg)
{
    detail::KeyParser p{key, 0, reg};
    PipelineTree t{p.node()};
    if (p.pos != key.size()) p.fail("trailing characters");
    return t;
}

// --- structural validation ----------------------------------------------

struct TreeLimits {
    int max_depth = 7;
    int max_nodes = 15;
};

namespace detail {

inline bool param_in_grid(const ParamGrid& g, const ParamValue& v)
{
    for (const auto& allowed : g.values) {
        if (allowed == v) return true;
    }
    return false;
}

inline void validate_node(const PipelineNode& n, bool is_root, std::vector<std::string>& issues)
{
    if (!n.spec) {
        issues.push_back("node without primitive");
        return;
    }
    switch (n.spec->kind) {
    case PrimitiveKind::classifier:
        if (!is_root) issues.push_back("classifier '" + n.spec->name + "' below root");
        if (n.children.size() > 1) issues.push_back("classifier with more than one child");
        break;
    case PrimitiveKind::preprocessor:
        if (is_root) issues.push_back("preprocessor at root");
        if (n.children.size() > 1) issues.push_back("preprocessor with more than one child");
        break;
    case PrimitiveKind::combiner:
        if (is_root) issues.push_back("combiner at root");
        if (n.children.size() != 2) issues.push_back("combiner without exactly two children");
        break;
    }
    if (n.params.size() != n.spec->grid.size()) {
        issues.push_back("assignment arity mismatch for '" + n.spec->name + "'");
    } else {
        for (std::size_t i = 0; i < n.params.size(); ++i) {
            if (!param_in_grid(n.spec->grid[i], n.params[i])) {
                issues.push_back("value outside grid for '" + n.spec->name + "." + n.spec->grid[i].name + "'");
            }
        }
    }
    for (const auto& ch : n.children) validate_node(ch, false, issues);
}

} // namespace detail

inline std::vector<std::string> validate(const PipelineTree& t, const TreeLimits& limits = {})
{
    std::vector<std::string> issues;
    if (!t.root.spec || t.root.spec->kind != PrimitiveKind::classifier) {
        issues.push_back("root is not a classifier");
    }
    detail::validate_node(t.root, true, issues);
    if (depth(t) > limits.max_depth) issues.push_back("depth exceeds limit");
    if (complexity(t) > limits.max_nodes) issues.push_back("node count exceeds limit");
    return issues;
}

inline bool is_valid(const PipelineTree& t, const TreeLimits& limits = {})
{
    return validate(t, limits).empty();
}

// Uniform random hyperparameter assignment over a primitive's grid.
inline std::vector<ParamValue> random_assignment(const PrimitiveSpec& spec, Rng& rng)
{
    std::vector<ParamValue> params;
    params.reserve(spec.grid.size());
    for (const auto& g : spec.grid) {
        params.push_back(g.values[rng.index(g.values.size())]);
    }
    return params;
}

} // namespace evopipe
