#pragma once

#include <algorithm>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

#include "evopipe/errors.hpp"

namespace evopipe {

enum class PrimitiveKind { classifier, preprocessor, combiner };

inline const char* to_string(PrimitiveKind k)
{
    switch (k) {
    case PrimitiveKind::classifier: return "classifier";
    case PrimitiveKind::preprocessor: return "preprocessor";
    case PrimitiveKind::combiner: return "combiner";
    }
    return "?";
}

// Hyperparameter values are either integers or reals; grids are finite and
// ordered so that novelty is enumerable and cache keys are exact.
using ParamValue = std::variant<std::int64_t, double>;

struct ParamGrid {
    std::string name;
    std::vector<ParamValue> values;
};

struct PrimitiveSpec {
    std::string name;
    PrimitiveKind kind;
    std::vector<ParamGrid> grid; // kept sorted by hyperparameter name

    std::size_t assignment_count() const
    {
        std::size_t n = 1;
        for (const auto& g : grid) n *= g.values.size();
        return n;
    }
};

class Registry {
public:
    void add(PrimitiveSpec spec)
    {
        for (const auto& g : spec.grid) {
            if (g.values.empty()) {
                throw ConfigError("primitive '" + spec.name + "': empty domain for '" + g.name + "'");
            }
        }
        for (const auto& p : prims_) {
            if (p.name == spec.name) {
                throw ConfigError("duplicate primitive name '" + spec.name + "'");
            }
        }
        std::sort(spec.grid.begin(), spec.grid.end(),
                  [](const ParamGrid& a, const ParamGrid& b) { return a.name < b.name; });
        prims_.push_back(std::move(spec));
    }

    const std::vector<PrimitiveSpec>& all() const { return prims_; }

    const PrimitiveSpec* find(const std::string& name) const
    {
        for (const auto& p : prims_) {
            if (p.name == name) return &p;
        }
        return nullptr;
    }

    std::vector<const PrimitiveSpec*> of_kind(PrimitiveKind k) const
    {
        std::vector<const PrimitiveSpec*> out;
        for (const auto& p : prims_) {
            if (p.kind == k) out.push_back(&p);
        }
        return out;
    }

private:
    std::vector<PrimitiveSpec> prims_;
};

// The native operator set. Deliberately small but heterogeneous enough that
// score/complexity trade-offs are real: four classifier families, four
// preprocessors, and a two-branch feature union.
inline Registry default_registry()
{
    Registry reg;
    auto ints = [](std::initializer_list<std::int64_t> xs) {
        std::vector<ParamValue> v;
        for (auto x : xs) v.emplace_back(x);
        return v;
    };
    auto reals = [](std::initializer_list<double> xs) {
        std::vector<ParamValue> v;
        for (auto x : xs) v.emplace_back(x);
        return v;
    };

    reg.add({"decision_tree", PrimitiveKind::classifier,
             {{"max_depth", ints({1, 2, 3, 4, 5, 6, 7, 8, 9, 10})}}});
    reg.add({"knn", PrimitiveKind::classifier, {{"k", ints({1, 3, 5, 7, 9})}}});
    reg.add({"gaussian_nb", PrimitiveKind::classifier, {}});
    reg.add({"logistic", PrimitiveKind::classifier,
             {{"l2", reals({0.001, 0.01, 0.1, 1.0, 10.0})}}});

    reg.add({"standard_scaler", PrimitiveKind::preprocessor, {}});
    reg.add({"minmax_scaler", PrimitiveKind::preprocessor, {}});
    reg.add({"variance_top_k", PrimitiveKind::preprocessor, {{"k", ints({1, 2, 3, 5, 8})}}});
    reg.add({"binarizer", PrimitiveKind::preprocessor, {}});

    reg.add({"feature_union", PrimitiveKind::combiner, {}});
    return reg;
}

} // namespace evopipe
