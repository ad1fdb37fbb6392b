#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <variant>
#include <vector>

#include "evopipe/dataset.hpp"
#include "evopipe/errors.hpp"
#include "evopipe/primitives.hpp"

namespace evopipe {

// Wall-clock allowance for one pipeline evaluation, checked cooperatively
// inside the expensive fit/predict loops.
class Deadline {
public:
    Deadline() = default; // unlimited

    static Deadline after(double seconds)
    {
        Deadline d;
        d.unlimited_ = false;
        d.end_ = std::chrono::steady_clock::now()
            + std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                std::chrono::duration<double>(seconds));
        return d;
    }

    bool expired() const
    {
        return !unlimited_ && std::chrono::steady_clock::now() >= end_;
    }

    void check() const
    {
        if (expired()) throw EvalTimeout{};
    }

private:
    std::chrono::steady_clock::time_point end_{};
    bool unlimited_ = true;
};

// Counts model fits so tests can assert a cache hit performs none.
struct FitCounter {
    static std::atomic<std::uint64_t>& count()
    {
        static std::atomic<std::uint64_t> c{0};
        return c;
    }
    static void reset() { count() = 0; }
    static std::uint64_t value() { return count().load(); }
};

namespace detail {

inline std::int64_t int_param(const PrimitiveSpec& spec, const std::vector<ParamValue>& params,
                              const char* name)
{
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        if (spec.grid[i].name == name) return std::get<std::int64_t>(params[i]);
    }
    throw ConfigError(std::string("missing hyperparameter '") + name + "'");
}

inline double real_param(const PrimitiveSpec& spec, const std::vector<ParamValue>& params,
                         const char* name)
{
    for (std::size_t i = 0; i < spec.grid.size(); ++i) {
        if (spec.grid[i].name == name) return std::get<double>(params[i]);
    }
    throw ConfigError(std::string("missing hyperparameter '") + name + "'");
}

inline void digest_absorb(std::uint64_t& h, double v) { fnv_absorb(h, &v, sizeof v); }
inline void digest_absorb(std::uint64_t& h, std::int64_t v) { fnv_absorb(h, &v, sizeof v); }

inline std::uint64_t digest_seed() { return 14695981039346656037ULL; }

// Majority label with ties going to the smallest label value.
inline int majority_label(const std::vector<std::size_t>& counts)
{
    std::size_t best = 0;
    int label = 0;
    for (int c = 0; c < static_cast<int>(counts.size()); ++c) {
        if (counts[c] > best) {
            best = counts[c];
            label = c;
        }
    }
    return label;
}

} // namespace detail

// ---- classifiers ---------------------------------------------------------

// Degenerate single-class training data collapses every classifier to this.
struct ConstantClassifier {
    int label = 0;

    std::vector<int> predict(const Matrix& X, const Deadline&) const
    {
        return std::vector<int>(X.rows(), label);
    }

    std::uint64_t digest() const
    {
        auto h = detail::digest_seed();
        detail::digest_absorb(h, static_cast<std::int64_t>(label));
        return h;
    }
};

// CART with Gini impurity. Thresholds sit at midpoints of adjacent distinct
// feature values; the best split is the largest impurity decrease with ties
// going to the lowest feature index, then the lowest threshold. Leaves
// predict the majority label.
struct DecisionTreeModel {
    struct Node {
        int feature = -1; // -1 marks a leaf
        double threshold = 0.0;
        int left = -1;
        int right = -1;
        int label = 0;
    };
    std::vector<Node> nodes;

    static DecisionTreeModel fit(const Matrix& X, const std::vector<int>& y, int n_classes,
                                 int max_depth, const Deadline& deadline)
    {
        DecisionTreeModel model;
        std::vector<std::size_t> idx(X.rows());
        for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
        model.build(X, y, n_classes, idx, max_depth, deadline);
        return model;
    }

    std::vector<int> predict(const Matrix& X, const Deadline& deadline) const
    {
        std::vector<int> out(X.rows());
        for (std::size_t r = 0; r < X.rows(); ++r) {
            if ((r & 0xff) == 0) deadline.check();
            int n = 0;
            while (nodes[n].feature >= 0) {
                n = X(r, nodes[n].feature) <= nodes[n].threshold ? nodes[n].left : nodes[n].right;
            }
            out[r] = nodes[n].label;
        }
        return out;
    }

    std::uint64_t digest() const
    {
        auto h = detail::digest_seed();
        for (const auto& n : nodes) {
            detail::digest_absorb(h, static_cast<std::int64_t>(n.feature));
            detail::digest_absorb(h, n.threshold);
            detail::digest_absorb(h, static_cast<std::int64_t>(n.label));
        }
        return h;
    }

private:
    int build(const Matrix& X, const std::vector<int>& y, int n_classes,
              std::vector<std::size_t>& idx, int depth_left, const Deadline& deadline)
    {
        deadline.check();
        std::vector<std::size_t> counts(n_classes, 0);
        for (auto i : idx) ++counts[y[i]];
        const int leaf_label = detail::majority_label(counts);
        const std::size_t n = idx.size();

        bool pure = false;
        for (auto c : counts) {
            if (c == n) pure = true;
        }
        if (pure || n < 2 || depth_left == 0) {
            nodes.push_back({-1, 0.0, -1, -1, leaf_label});
            return static_cast<int>(nodes.size()) - 1;
        }

        // best split: minimize the weighted child Gini
        int best_feature = -1;
        double best_threshold = 0.0;
        double best_score = std::numeric_limits<double>::infinity();
        std::vector<std::size_t> order(idx);
        std::vector<std::size_t> left_counts(n_classes);
        for (std::size_t f = 0; f < X.cols(); ++f) {
            std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
                return X(a, f) < X(b, f);
            });
            std::fill(left_counts.begin(), left_counts.end(), 0);
            for (std::size_t i = 0; i + 1 < n; ++i) {
                ++left_counts[y[order[i]]];
                const double v0 = X(order[i], f), v1 = X(order[i + 1], f);
                if (v0 == v1) continue;
                const std::size_t nl = i + 1, nr = n - nl;
                double sl = 0.0, sr = 0.0;
                for (int c = 0; c < n_classes; ++c) {
                    const double lc = static_cast<double>(left_counts[c]);
                    const double rc = static_cast<double>(counts[c] - left_counts[c]);
                    sl += lc * lc;
                    sr += rc * rc;
                }
                const double gini_l = 1.0 - sl / (static_cast<double>(nl) * nl);
                const double gini_r = 1.0 - sr / (static_cast<double>(nr) * nr);
                const double score = (nl * gini_l + nr * gini_r) / static_cast<double>(n);
                if (score < best_score) {
                    best_score = score;
                    best_feature = static_cast<int>(f);
                    best_threshold = v0 + (v1 - v0) / 2.0;
                }
            }
        }
        if (best_feature < 0) { // all features constant on this subset
            nodes.push_back({-1, 0.0, -1, -1, leaf_label});
            return static_cast<int>(nodes.size()) - 1;
        }

        std::vector<std::size_t> li, ri;
        for (auto i : idx) {
            (X(i, best_feature) <= best_threshold ? li : ri).push_back(i);
        }
        const int self = static_cast<int>(nodes.size());
        nodes.push_back({best_feature, best_threshold, -1, -1, leaf_label});
        nodes[self].left = build(X, y, n_classes, li, depth_left - 1, deadline);
        nodes[self].right = build(X, y, n_classes, ri, depth_left - 1, deadline);
        return self;
    }
};

// Exact k-nearest-neighbour vote. Neighbour order is the strict total order
// (squared distance, training row); label ties in the vote go to the
// smallest label value.
struct KnnModel {
    Matrix train;
    std::vector<int> labels;
    int k = 1;
    int n_classes = 2;

    static KnnModel fit(const Matrix& X, const std::vector<int>& y, int n_classes, int k)
    {
        return KnnModel{X, y, k, n_classes};
    }

    std::vector<int> predict(const Matrix& X, const Deadline& deadline) const
    {
        const std::size_t n = train.rows();
        const std::size_t kk = std::min<std::size_t>(k, n);
        std::vector<int> out(X.rows());
        std::vector<std::pair<double, std::size_t>> dist(n);
        for (std::size_t r = 0; r < X.rows(); ++r) {
            deadline.check();
            for (std::size_t i = 0; i < n; ++i) {
                double d2 = 0.0;
                const double* a = X.row(r);
                const double* b = train.row(i);
                for (std::size_t f = 0; f < train.cols(); ++f) {
                    const double diff = a[f] - b[f];
                    d2 += diff * diff;
                }
                dist[i] = {d2, i};
            }
            std::partial_sort(dist.begin(), dist.begin() + kk, dist.end());
            std::vector<std::size_t> counts(n_classes, 0);
            for (std::size_t i = 0; i < kk; ++i) ++counts[labels[dist[i].second]];
            out[r] = detail::majority_label(counts);
        }
        return out;
    }

    std::uint64_t digest() const
    {
        auto h = detail::digest_seed();
        detail::digest_absorb(h, static_cast<std::int64_t>(k));
        for (double v : train.data()) detail::digest_absorb(h, v);
        for (int v : labels) detail::digest_absorb(h, static_cast<std::int64_t>(v));
        return h;
    }
};

// Gaussian naive Bayes with variance smoothing relative to the largest
// feature variance.
struct GaussianNbModel {
    std::vector<double> log_prior;          // per class
    std::vector<std::vector<double>> mean;  // [class][feature]
    std::vector<std::vector<double>> var;   // [class][feature]

    static GaussianNbModel fit(const Matrix& X, const std::vector<int>& y, int n_classes)
    {
        const std::size_t n = X.rows(), d = X.cols();
        GaussianNbModel m;
        m.log_prior.resize(n_classes);
        m.mean.assign(n_classes, std::vector<double>(d, 0.0));
        m.var.assign(n_classes, std::vector<double>(d, 0.0));
        std::vector<std::size_t> counts(n_classes, 0);
        for (std::size_t i = 0; i < n; ++i) {
            ++counts[y[i]];
            for (std::size_t f = 0; f < d; ++f) m.mean[y[i]][f] += X(i, f);
        }
        for (int c = 0; c < n_classes; ++c) {
            for (std::size_t f = 0; f < d; ++f) {
                if (counts[c]) m.mean[c][f] /= static_cast<double>(counts[c]);
            }
        }
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t f = 0; f < d; ++f) {
                const double dv = X(i, f) - m.mean[y[i]][f];
                m.var[y[i]][f] += dv * dv;
            }
        }
        double max_var = 0.0;
        for (int c = 0; c < n_classes; ++c) {
            for (std::size_t f = 0; f < d; ++f) {
                if (counts[c]) m.var[c][f] /= static_cast<double>(counts[c]);
                max_var = std::max(max_var, m.var[c][f]);
            }
        }
        const double eps = max_var > 0.0 ? 1e-9 * max_var : 1e-9;
        for (auto& row : m.var) {
            for (auto& v : row) v += eps;
        }
        for (int c = 0; c < n_classes; ++c) {
            m.log_prior[c] = counts[c]
                ? std::log(static_cast<double>(counts[c]) / static_cast<double>(n))
                : -std::numeric_limits<double>::infinity();
        }
        return m;
    }

    std::vector<int> predict(const Matrix& X, const Deadline& deadline) const
    {
        const int n_classes = static_cast<int>(log_prior.size());
        std::vector<int> out(X.rows());
        for (std::size_t r = 0; r < X.rows(); ++r) {
            if ((r & 0xff) == 0) deadline.check();
            double best = -std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (int c = 0; c < n_classes; ++c) {
                double ll = log_prior[c];
                for (std::size_t f = 0; f < X.cols(); ++f) {
                    const double dv = X(r, f) - mean[c][f];
                    ll -= 0.5 * (std::log(2.0 * M_PI * var[c][f]) + dv * dv / var[c][f]);
                }
                if (ll > best) {
                    best = ll;
                    best_c = c;
                }
            }
            out[r] = best_c;
        }
        return out;
    }

    std::uint64_t digest() const
    {
        auto h = detail::digest_seed();
        for (double v : log_prior) detail::digest_absorb(h, v);
        for (const auto& row : mean) {
            for (double v : row) detail::digest_absorb(h, v);
        }
        for (const auto& row : var) {
            for (double v : row) detail::digest_absorb(h, v);
        }
        return h;
    }
};

// One-vs-rest logistic regression, full-batch gradient descent with a fixed
// budget: learning rate 0.1, 200 epochs, inputs standardized internally.
struct LogisticModel {
    static constexpr int kEpochs = 200;
    static constexpr double kLearningRate = 0.1;

    std::vector<double> feat_mean, feat_scale;
    std::vector<std::vector<double>> weights; // [class][feature]
    std::vector<double> bias;                 // [class]

    static LogisticModel fit(const Matrix& X, const std::vector<int>& y, int n_classes,
                             double l2, const Deadline& deadline)
    {
        const std::size_t n = X.rows(), d = X.cols();
        LogisticModel m;
        m.feat_mean.assign(d, 0.0);
        m.feat_scale.assign(d, 1.0);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t f = 0; f < d; ++f) m.feat_mean[f] += X(i, f);
        }
        for (std::size_t f = 0; f < d; ++f) m.feat_mean[f] /= static_cast<double>(n);
        for (std::size_t f = 0; f < d; ++f) {
            double ssd = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dv = X(i, f) - m.feat_mean[f];
                ssd += dv * dv;
            }
            const double sd = n > 1 ? std::sqrt(ssd / static_cast<double>(n - 1)) : 0.0;
            m.feat_scale[f] = sd > 0.0 ? sd : 1.0;
        }
        Matrix Z(n, d);
        for (std::size_t i = 0; i < n; ++i) {
            for (std::size_t f = 0; f < d; ++f) {
                Z(i, f) = (X(i, f) - m.feat_mean[f]) / m.feat_scale[f];
            }
        }

        m.weights.assign(n_classes, std::vector<double>(d, 0.0));
        m.bias.assign(n_classes, 0.0);
        std::vector<double> p(n), grad(d);
        for (int c = 0; c < n_classes; ++c) {
            auto& w = m.weights[c];
            double& b = m.bias[c];
            for (int epoch = 0; epoch < kEpochs; ++epoch) {
                deadline.check();
                double gb = 0.0;
                std::fill(grad.begin(), grad.end(), 0.0);
                for (std::size_t i = 0; i < n; ++i) {
                    double z = b;
                    for (std::size_t f = 0; f < d; ++f) z += w[f] * Z(i, f);
                    const double pi = sigmoid(z);
                    const double err = pi - (y[i] == c ? 1.0 : 0.0);
                    gb += err;
                    for (std::size_t f = 0; f < d; ++f) grad[f] += err * Z(i, f);
                }
                const double inv_n = 1.0 / static_cast<double>(n);
                for (std::size_t f = 0; f < d; ++f) {
                    w[f] -= kLearningRate * (grad[f] * inv_n + l2 * inv_n * w[f]);
                }
                b -= kLearningRate * gb * inv_n;
            }
        }
        return m;
    }

    std::vector<int> predict(const Matrix& X, const Deadline& deadline) const
    {
        const int n_classes = static_cast<int>(bias.size());
        std::vector<int> out(X.rows());
        for (std::size_t r = 0; r < X.rows(); ++r) {
            if ((r & 0xff) == 0) deadline.check();
            double best = -std::numeric_limits<double>::infinity();
            int best_c = 0;
            for (int c = 0; c < n_classes; ++c) {
                double z = bias[c];
                for (std::size_t f = 0; f < X.cols(); ++f) {
                    z += weights[c][f] * (X(r, f) - feat_mean[f]) / feat_scale[f];
                }
                if (z > best) {
                    best = z;
                    best_c = c;
                }
            }
            out[r] = best_c;
        }
        return out;
    }

    std::uint64_t digest() const
    {
        auto h = detail::digest_seed();
        for (const auto& row : weights) {
            for (double v : row) detail::digest_absorb(h, v);
        }
        for (double v : bias) detail::digest_absorb(h, v);
        return h;
    }

private:
    static double sigmoid(double z)
    {
        if (z >= 0.0) return 1.0 / (1.0 + std::exp(-z));
        const double e = std::exp(z);
        return e / (1.0 + e);
    }
};

// ---- preprocessors -------------------------------------------------------

// Center/scale by training mean and sample standard deviation. Constant
// columns (min == max) pass through unchanged.
struct StandardScalerModel {
    std::vector<double> mean, scale;
    std::vector<bool> passthrough;

    static StandardScalerModel fit(const Matrix& X)
    {
        const std::size_t n = X.rows(), d = X.cols();
        StandardScalerModel m;
        m.mean.assign(d, 0.0);
        m.scale.assign(d, 1.0);
        m.passthrough.assign(d, false);
        for (std::size_t f = 0; f < d; ++f) {
            double lo = X(0, f), hi = X(0, f), sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                lo = std::min(lo, X(i, f));
                hi = std::max(hi, X(i, f));
                sum += X(i, f);
            }
            if (lo == hi || n < 2) {
                m.passthrough[f] = true;
                continue;
            }
            m.mean[f] = sum / static_cast<double>(n);
            double ssd = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dv = X(i, f) - m.mean[f];
                ssd += dv * dv;
            }
            m.scale[f] = std::sqrt(ssd / static_cast<double>(n - 1));
        }
        return m;
    }

    Matrix transform(const Matrix& X) const
    {
        Matrix out(X.rows(), X.cols());
        for (std::size_t i = 0; i < X.rows(); ++i) {
            for (std::size_t f = 0; f < X.cols(); ++f) {
                out(i, f) = passthrough[f] ? X(i, f) : (X(i, f) - mean[f]) / scale[f];
            }
        }
        return out;
    }

    std::uint64_t digest() const
    {
        auto h = detail::digest_seed();
        for (double v : mean) detail::digest_absorb(h, v);
        for (double v : scale) detail::digest_absorb(h, v);
        return h;
    }
};

struct MinMaxScalerModel {
    std::vector<double> min, range;
    std::vector<bool> passthrough;

    static MinMaxScalerModel fit(const Matrix& X)
    {
        const std::size_t n = X.rows(), d = X.cols();
        MinMaxScalerModel m;
        m.min.assign(d, 0.0);
        m.range.assign(d, 1.0);
        m.passthrough.assign(d, false);
        for (std::size_t f = 0; f < d; ++f) {
            double lo = X(0, f), hi = X(0, f);
            for (std::size_t i = 0; i < n; ++i) {
                lo = std::min(lo, X(i, f));
                hi = std::max(hi, X(i, f));
            }
            if (lo == hi) {
                m.passthrough[f] = true;
            } else {
                m.min[f] = lo;
                m.range[f] = hi - lo;
            }
        }
        return m;
    }

    Matrix transform(const Matrix& X) const
    {
        Matrix out(X.rows(), X.cols());
        for (std::size_t i = 0; i < X.rows(); ++i) {
            for (std::size_t f = 0; f < X.cols(); ++f) {
                out(i, f) = passthrough[f] ? X(i, f) : (X(i, f) - min[f]) / range[f];
            }
        }
        return out;
    }

    std::uint64_t digest() const
    {
        auto h = detail::digest_seed();
        for (double v : min) detail::digest_absorb(h, v);
        for (double v : range) detail::digest_absorb(h, v);
        return h;
    }
};

// Keep the k columns with the largest training sample variance; variance
// ties prefer the lower column index. k is clamped to the feature count.
struct VarianceTopKModel {
    std::vector<std::size_t> keep;

    static VarianceTopKModel fit(const Matrix& X, std::int64_t k)
    {
        const std::size_t n = X.rows(), d = X.cols();
        std::vector<std::pair<double, std::size_t>> var(d);
        for (std::size_t f = 0; f < d; ++f) {
            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) sum += X(i, f);
            const double mean = sum / static_cast<double>(n);
            double ssd = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                const double dv = X(i, f) - mean;
                ssd += dv * dv;
            }
            var[f] = {n > 1 ? ssd / static_cast<double>(n - 1) : 0.0, f};
        }
        std::stable_sort(var.begin(), var.end(), [](const auto& a, const auto& b) {
            return a.first > b.first;
        });
        VarianceTopKModel m;
        const std::size_t kept = std::min<std::size_t>(std::max<std::int64_t>(k, 1), d);
        for (std::size_t i = 0; i < kept; ++i) m.keep.push_back(var[i].second);
        std::sort(m.keep.begin(), m.keep.end());
        return m;
    }

    Matrix transform(const Matrix& X) const { return X.select_cols(keep); }

    std::uint64_t digest() const
    {
        auto h = detail::digest_seed();
        for (auto f : keep) detail::digest_absorb(h, static_cast<std::int64_t>(f));
        return h;
    }
};

// Threshold each column at its training median: strictly above -> 1.
struct BinarizerModel {
    std::vector<double> median;

    static BinarizerModel fit(const Matrix& X)
    {
        const std::size_t n = X.rows(), d = X.cols();
        BinarizerModel m;
        m.median.assign(d, 0.0);
        std::vector<double> col(n);
        for (std::size_t f = 0; f < d; ++f) {
            for (std::size_t i = 0; i < n; ++i) col[i] = X(i, f);
            std::sort(col.begin(), col.end());
            m.median[f] = n % 2 ? col[n / 2] : col[n / 2 - 1] + (col[n / 2] - col[n / 2 - 1]) / 2.0;
        }
        return m;
    }

    Matrix transform(const Matrix& X) const
    {
        Matrix out(X.rows(), X.cols());
        for (std::size_t i = 0; i < X.rows(); ++i) {
            for (std::size_t f = 0; f < X.cols(); ++f) {
                out(i, f) = X(i, f) > median[f] ? 1.0 : 0.0;
            }
        }
        return out;
    }

    std::uint64_t digest() const
    {
        auto h = detail::digest_seed();
        for (double v : median) detail::digest_absorb(h, v);
        return h;
    }
};

// ---- dispatch ------------------------------------------------------------

using ClassifierModel = std::variant<ConstantClassifier, DecisionTreeModel, KnnModel,
                                     GaussianNbModel, LogisticModel>;
using PreprocessorModel = std::variant<StandardScalerModel, MinMaxScalerModel,
                                       VarianceTopKModel, BinarizerModel>;

inline ClassifierModel fit_classifier(const PrimitiveSpec& spec, const std::vector<ParamValue>& params,
                                      const Matrix& X, const std::vector<int>& y, int n_classes,
                                      const Deadline& deadline = {})
{
    if (X.rows() == 0) throw ConfigError("cannot fit classifier on empty data");
    FitCounter::count()++;
    deadline.check();

    // single-class fold: predict that class constantly
    bool single = true;
    for (std::size_t i = 1; i < y.size(); ++i) {
        if (y[i] != y[0]) {
            single = false;
            break;
        }
    }
    if (single) return ConstantClassifier{y[0]};

    if (spec.name == "decision_tree") {
        return DecisionTreeModel::fit(X, y, n_classes,
                                      static_cast<int>(detail::int_param(spec, params, "max_depth")),
                                      deadline);
    }
    if (spec.name == "knn") {
        return KnnModel::fit(X, y, n_classes, static_cast<int>(detail::int_param(spec, params, "k")));
    }
    if (spec.name == "gaussian_nb") {
        return GaussianNbModel::fit(X, y, n_classes);
    }
    if (spec.name == "logistic") {
        return LogisticModel::fit(X, y, n_classes, detail::real_param(spec, params, "l2"), deadline);
    }
    throw ConfigError("unknown classifier '" + spec.name + "'");
}

inline std::vector<int> predict(const ClassifierModel& model, const Matrix& X,
                                const Deadline& deadline = {})
{
    return std::visit([&](const auto& m) { return m.predict(X, deadline); }, model);
}

inline PreprocessorModel fit_preprocessor(const PrimitiveSpec& spec, const std::vector<ParamValue>& params,
                                          const Matrix& X, const Deadline& deadline = {})
{
    if (X.rows() == 0) throw ConfigError("cannot fit preprocessor on empty data");
    FitCounter::count()++;
    deadline.check();
    if (spec.name == "standard_scaler") return StandardScalerModel::fit(X);
    if (spec.name == "minmax_scaler") return MinMaxScalerModel::fit(X);
    if (spec.name == "variance_top_k") {
        return VarianceTopKModel::fit(X, detail::int_param(spec, params, "k"));
    }
    if (spec.name == "binarizer") return BinarizerModel::fit(X);
    throw ConfigError("unknown preprocessor '" + spec.name + "'");
}

inline Matrix transform(const PreprocessorModel& model, const Matrix& X)
{
    return std::visit([&](const auto& m) { return m.transform(X); }, model);
}

inline std::uint64_t model_digest(const ClassifierModel& model)
{
    return std::visit([](const auto& m) { return m.digest(); }, model);
}

inline std::uint64_t model_digest(const PreprocessorModel& model)
{
    return std::visit([](const auto& m) { return m.digest(); }, model);
}

} // namespace evopipe
