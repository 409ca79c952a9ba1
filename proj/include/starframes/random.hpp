#pragma once

#include <complex>
#include <cstdint>
#include <random>

#include <Eigen/Dense>

namespace starframes {

// Deterministic source of standard complex normal variates (E|z|^2 = 1).
// One engine, one distribution; identical seeds replay identical streams on a
// given platform.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::complex<double> gaussian() {
        const double re = gauss_(engine_);
        const double im = gauss_(engine_);
        return {re, im};
    }

    Eigen::MatrixXcd matrix(Eigen::Index rows, Eigen::Index cols) {
        Eigen::MatrixXcd m(rows, cols);
        for (Eigen::Index i = 0; i < rows; ++i)
            for (Eigen::Index j = 0; j < cols; ++j)
                m(i, j) = gaussian();
        return m;
    }

private:
    std::mt19937_64 engine_;
    std::normal_distribution<double> gauss_{0.0, 0.7071067811865476}; // stddev 1/sqrt(2)
};

} // namespace starframes
