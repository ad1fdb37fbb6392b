#pragma once

#include "evopipe/learners.hpp"
#include "evopipe/pipeline.hpp"

namespace evopipe {

// Accumulates a digest of every fitted model in DFS order. Lets tests assert
// that fitted state depends only on training data: perturbing the test set
// must leave the trace unchanged.
struct FitTrace {
    std::uint64_t digest = 14695981039346656037ULL;

    void absorb(std::uint64_t model_hash)
    {
        detail::fnv_absorb(digest, &model_hash, sizeof model_hash);
    }
};

namespace detail {

struct Flow {
    Matrix train;
    Matrix test;
};

// Depth-first execution of the feature-producing part of the tree. All
// statistics are fitted on the training flow only and then applied to both.
inline Flow execute_node(const PipelineNode& node, const Flow& input, const Deadline& deadline,
                         FitTrace* trace)
{
    switch (node.spec->kind) {
    case PrimitiveKind::preprocessor: {
        Flow below = node.children.empty()
            ? input
            : execute_node(node.children[0], input, deadline, trace);
        auto model = fit_preprocessor(*node.spec, node.params, below.train, deadline);
        if (trace) trace->absorb(model_digest(model));
        return Flow{transform(model, below.train), transform(model, below.test)};
    }
    case PrimitiveKind::combiner: {
        Flow left = execute_node(node.children[0], input, deadline, trace);
        Flow right = execute_node(node.children[1], input, deadline, trace);
        return Flow{Matrix::hconcat(left.train, right.train),
                    Matrix::hconcat(left.test, right.test)};
    }
    case PrimitiveKind::classifier:
        break;
    }
    throw ConfigError("classifier below the root");
}

} // namespace detail

// Runs the genotype: preprocessor subtrees fit on train and transform both
// flows, the feature union concatenates its branches column-wise, and the
// root classifier fits on the final training representation and predicts
// the test rows.
inline std::vector<int> predict_pipeline(const PipelineTree& tree, const Dataset& train,
                                         const Matrix& test_features, const Deadline& deadline = {},
                                         FitTrace* trace = nullptr)
{
    if (train.n_features() != test_features.cols()) {
        throw ConfigError("train/test feature counts differ");
    }
    detail::Flow flow{train.features, test_features};
    if (!tree.root.children.empty()) {
        flow = detail::execute_node(tree.root.children[0], flow, deadline, trace);
    }
    auto model = fit_classifier(*tree.root.spec, tree.root.params, flow.train, train.labels,
                                train.n_classes, deadline);
    if (trace) trace->absorb(model_digest(model));
    return predict(model, flow.test, deadline);
}

} // namespace evopipe
