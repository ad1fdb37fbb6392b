#pragma once

#include <cmath>
#include <string>

#include "evopipe/dataset.hpp"
#include "evopipe/rng.hpp"

namespace evopipe {

// Desk-scale classification generators. Labels are assigned round-robin
// (instance i gets class i mod K), so class balance is exact to within one
// instance by construction.
struct SyntheticSpec {
    std::string kind = "blobs"; // blobs | xor | spirals
    std::size_t instances = 200;
    std::size_t features = 2;
    int classes = 2;
    double noise = 0.1;
    std::uint64_t seed = 0;
};

inline Dataset generate_synthetic(const SyntheticSpec& spec)
{
    if (spec.classes < 2) throw ConfigError("synthetic: need at least 2 classes");
    if (spec.instances < 10 * static_cast<std::size_t>(spec.classes)) {
        throw ConfigError("synthetic: need at least 10 instances per class");
    }
    if (spec.features < 1) throw ConfigError("synthetic: need at least 1 feature");
    if (spec.noise < 0.0) throw ConfigError("synthetic: noise must be non-negative");

    Rng rng = Rng::substream(spec.seed, "generator");
    Dataset d;
    d.features = Matrix(spec.instances, spec.features);
    d.labels.resize(spec.instances);
    d.n_classes = spec.classes;
    for (std::size_t i = 0; i < spec.instances; ++i) {
        d.labels[i] = static_cast<int>(i % spec.classes);
    }

    if (spec.kind == "blobs") {
        // Gaussian clusters at well-separated random centers in [-10, 10]^d.
        Matrix centers(spec.classes, spec.features);
        for (int c = 0; c < spec.classes; ++c) {
            for (int attempt = 0; attempt < 1000; ++attempt) {
                for (std::size_t f = 0; f < spec.features; ++f) {
                    centers(c, f) = rng.real(-10.0, 10.0);
                }
                double min_dist2 = std::numeric_limits<double>::infinity();
                for (int o = 0; o < c; ++o) {
                    double d2 = 0.0;
                    for (std::size_t f = 0; f < spec.features; ++f) {
                        const double dv = centers(c, f) - centers(o, f);
                        d2 += dv * dv;
                    }
                    min_dist2 = std::min(min_dist2, d2);
                }
                if (min_dist2 >= 4.0) break;
            }
        }
        for (std::size_t i = 0; i < spec.instances; ++i) {
            for (std::size_t f = 0; f < spec.features; ++f) {
                d.features(i, f) = centers(d.labels[i], f) + spec.noise * rng.normal();
            }
        }
        return d;
    }

    if (spec.kind == "xor") {
        if (spec.classes != 2) throw ConfigError("synthetic: xor requires exactly 2 classes");
        if (spec.features < 2) throw ConfigError("synthetic: xor requires >= 2 features");
        for (std::size_t i = 0; i < spec.instances; ++i) {
            // quadrant with the requested parity, kept off the axes
            const double sx = rng.bernoulli(0.5) ? 1.0 : -1.0;
            const double sy = d.labels[i] == 0 ? sx : -sx;
            d.features(i, 0) = sx * rng.real(0.1, 1.0) + spec.noise * rng.normal();
            d.features(i, 1) = sy * rng.real(0.1, 1.0) + spec.noise * rng.normal();
            for (std::size_t f = 2; f < spec.features; ++f) {
                d.features(i, f) = rng.real(-1.0, 1.0);
            }
        }
        return d;
    }

    if (spec.kind == "spirals") {
        if (spec.features < 2) throw ConfigError("synthetic: spirals requires >= 2 features");
        const double two_pi = 2.0 * M_PI;
        for (std::size_t i = 0; i < spec.instances; ++i) {
            const double u = rng.real();
            const double r = 0.1 + 0.9 * u;
            const double theta = 3.0 * M_PI * u + two_pi * d.labels[i] / spec.classes;
            d.features(i, 0) = r * std::cos(theta) + spec.noise * rng.normal();
            d.features(i, 1) = r * std::sin(theta) + spec.noise * rng.normal();
            for (std::size_t f = 2; f < spec.features; ++f) {
                d.features(i, f) = rng.real(-1.0, 1.0);
            }
        }
        return d;
    }

    throw ConfigError("synthetic: unknown kind '" + spec.kind + "'");
}

} // namespace evopipe
