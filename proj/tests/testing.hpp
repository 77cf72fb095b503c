#pragma once

// Shared generators for the property tests. Fixed seeds everywhere.

#include "holodot/qcore.hpp"

#include <cmath>
#include <cstdint>
#include <random>

namespace holodot::gen {

class Gen {
public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    cplx complex_normal() {
        std::normal_distribution<double> n(0.0, 1.0);
        return {n(rng_), n(rng_)};
    }

    Vec5 vec5() {
        Vec5 v;
        for (int i = 0; i < 5; ++i) v(i) = complex_normal();
        return v;
    }

    StateVector state() { return normalize(StateVector(vec5())); }

    Mat5 hermitian5(double scale = 1.0) {
        Mat5 m;
        for (int i = 0; i < 5; ++i) {
            for (int j = 0; j < 5; ++j) m(i, j) = complex_normal();
        }
        return scale * 0.5 * (m + m.adjoint());
    }

    Mat2 unitary2() {
        Mat2 h;
        h << uniform(-2, 2), complex_normal(), 0.0, uniform(-2, 2);
        h(1, 0) = std::conj(h(0, 1));
        return dense_expm(Mat2(-kI * h), 1.0);
    }

private:
    std::mt19937_64 rng_;
};

}  // namespace holodot::gen
