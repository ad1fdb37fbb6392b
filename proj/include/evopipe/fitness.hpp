#pragma once

namespace evopipe {

// Two objectives: mean cross-validated macro-F1 in [0,1] (maximize) and
// pipeline node count >= 1 (minimize).
struct FitnessVector {
    double score = 0.0;
    int complexity = 1;

    friend bool operator==(const FitnessVector& a, const FitnessVector& b)
    {
        return a.score == b.score && a.complexity == b.complexity;
    }
};

} // namespace evopipe
