#pragma once

#include <cstdint>
#include <cstring>
#include <string>
#include <vector>

#include "evopipe/errors.hpp"

namespace evopipe {

// Dense row-major matrix of doubles. Small on purpose; everything the
// learners need is element access and column slicing.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill)
    {
    }

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    const double* row(std::size_t r) const { return data_.data() + r * cols_; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    Matrix select_rows(const std::vector<std::size_t>& idx) const
    {
        Matrix out(idx.size(), cols_);
        for (std::size_t i = 0; i < idx.size(); ++i) {
            std::memcpy(&out.data_[i * cols_], row(idx[i]), cols_ * sizeof(double));
        }
        return out;
    }

    Matrix select_cols(const std::vector<std::size_t>& idx) const
    {
        Matrix out(rows_, idx.size());
        for (std::size_t r = 0; r < rows_; ++r) {
            for (std::size_t j = 0; j < idx.size(); ++j) {
                out(r, j) = (*this)(r, idx[j]);
            }
        }
        return out;
    }

    // Column-wise concatenation; both operands must have equal row counts.
    static Matrix hconcat(const Matrix& a, const Matrix& b)
    {
        Matrix out(a.rows(), a.cols() + b.cols());
        for (std::size_t r = 0; r < a.rows(); ++r) {
            std::memcpy(&out.data_[r * out.cols_], a.row(r), a.cols() * sizeof(double));
            std::memcpy(&out.data_[r * out.cols_ + a.cols()], b.row(r), b.cols() * sizeof(double));
        }
        return out;
    }

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

// Supervised classification dataset: labels are dense 0..K-1.
struct Dataset {
    Matrix features;
    std::vector<int> labels;
    int n_classes = 0;

    std::size_t n_instances() const { return features.rows(); }
    std::size_t n_features() const { return features.cols(); }

    void validate() const
    {
        if (features.rows() != labels.size()) {
            throw ConfigError("dataset: feature rows and label count differ");
        }
        if (n_classes < 2) {
            throw ConfigError("dataset: need at least 2 classes");
        }
        for (int y : labels) {
            if (y < 0 || y >= n_classes) {
                throw ConfigError("dataset: label outside 0..K-1");
            }
        }
    }
};

namespace detail {
inline void fnv_absorb(std::uint64_t& h, const void* bytes, std::size_t n)
{
    const auto* p = static_cast<const unsigned char*>(bytes);
    for (std::size_t i = 0; i < n; ++i) {
        h ^= p[i];
        h *= 1099511628211ULL;
    }
}
} // namespace detail

// Stable content hash used to pair run logs with the data they ran on.
inline std::string dataset_digest(const Dataset& d)
{
    std::uint64_t h = 14695981039346656037ULL;
    const std::uint64_t rows = d.features.rows(), cols = d.features.cols();
    detail::fnv_absorb(h, &rows, sizeof rows);
    detail::fnv_absorb(h, &cols, sizeof cols);
    detail::fnv_absorb(h, d.features.data().data(), d.features.data().size() * sizeof(double));
    detail::fnv_absorb(h, d.labels.data(), d.labels.size() * sizeof(int));
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string(buf);
}

} // namespace evopipe
