#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "starframes/errors.hpp"
#include "starframes/tolerances.hpp"

namespace starframes {

using Complex = std::complex<double>;

inline bool is_finite(const Complex& z) {
    return std::isfinite(z.real()) && std::isfinite(z.imag());
}

// An element of the C*-algebra of n x n complex matrices. Immutable after
// construction; entries are required to be finite.
class AlgebraElement {
public:
    explicit AlgebraElement(Eigen::MatrixXcd m) : mat_(std::move(m)) {
        if (mat_.rows() < 1 || mat_.rows() != mat_.cols())
            throw DimensionMismatch("algebra element must be a square matrix of dim >= 1");
        if (!mat_.allFinite())
            throw InvalidArgument("algebra element entries must be finite");
    }

    static AlgebraElement identity(Eigen::Index n) {
        return AlgebraElement(Eigen::MatrixXcd::Identity(n, n));
    }

    static AlgebraElement zero(Eigen::Index n) {
        return AlgebraElement(Eigen::MatrixXcd::Zero(n, n));
    }

    Eigen::Index dim() const { return mat_.rows(); }
    const Eigen::MatrixXcd& mat() const { return mat_; }

private:
    Eigen::MatrixXcd mat_;
};

namespace detail {

inline void require_same_dim(const AlgebraElement& a, const AlgebraElement& b) {
    if (a.dim() != b.dim())
        throw DimensionMismatch("algebra elements have different dimensions");
}

} // namespace detail

inline AlgebraElement operator+(const AlgebraElement& a, const AlgebraElement& b) {
    detail::require_same_dim(a, b);
    return AlgebraElement(a.mat() + b.mat());
}

inline AlgebraElement operator-(const AlgebraElement& a, const AlgebraElement& b) {
    detail::require_same_dim(a, b);
    return AlgebraElement(a.mat() - b.mat());
}

inline AlgebraElement operator*(const AlgebraElement& a, const AlgebraElement& b) {
    detail::require_same_dim(a, b);
    return AlgebraElement(a.mat() * b.mat());
}

inline AlgebraElement operator*(const Complex& s, const AlgebraElement& a) {
    return AlgebraElement(s * a.mat());
}

inline AlgebraElement operator*(const AlgebraElement& a, const Complex& s) {
    return AlgebraElement(a.mat() * s);
}

inline AlgebraElement operator-(const AlgebraElement& a) {
    return AlgebraElement(-a.mat());
}

// The involution a -> a*.
inline AlgebraElement adjoint(const AlgebraElement& a) {
    return AlgebraElement(a.mat().adjoint());
}

inline double frobenius_norm(const AlgebraElement& a) { return a.mat().norm(); }

// Largest singular value.
inline double operator_norm(const AlgebraElement& a) {
    if (a.mat().isZero(0.0)) return 0.0;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.mat());
    return svd.singularValues()(0);
}

inline double hermitian_defect(const Eigen::MatrixXcd& m) {
    return (m - m.adjoint()).norm();
}

inline bool is_hermitian(const AlgebraElement& a, const Tolerances& tol = {}) {
    return hermitian_defect(a.mat()) <= tol.herm * std::max(1.0, a.mat().norm());
}

// Ascending real eigenvalues of a Hermitian element.
inline Eigen::VectorXd spectrum_hermitian(const AlgebraElement& a, const Tolerances& tol = {}) {
    if (!is_hermitian(a, tol))
        throw NotHermitian("spectrum_hermitian requires a Hermitian element");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.mat(), Eigen::EigenvaluesOnly);
    return es.eigenvalues();
}

// a >= 0: Hermitian with spectrum in R+ (up to a relative eigenvalue floor).
// The zero element counts as positive.
inline bool is_positive(const AlgebraElement& a, const Tolerances& tol = {}) {
    if (!is_hermitian(a, tol)) return false;
    if (a.mat().isZero(0.0)) return true;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(a.mat(), Eigen::EigenvaluesOnly);
    const Eigen::VectorXd& eigs = es.eigenvalues();
    const double scale = std::max(std::abs(eigs(0)), std::abs(eigs(eigs.size() - 1)));
    return eigs(0) >= -tol.psd * scale;
}

// "Strictly nonzero" in the sense of invertible: the smallest singular value
// stays a fixed fraction of the largest.
inline bool is_strictly_nonzero(const AlgebraElement& a, const Tolerances& tol = {}) {
    if (a.mat().isZero(0.0)) return false;
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(a.mat());
    const auto& sv = svd.singularValues();
    const double largest = sv(0);
    const double smallest = sv(sv.size() - 1);
    return largest > 0.0 && smallest >= tol.inv * largest;
}

inline AlgebraElement inverse(const AlgebraElement& a, const Tolerances& tol = {}) {
    if (!is_strictly_nonzero(a, tol))
        throw SingularElement("element is not invertible at the configured tolerance");
    return AlgebraElement(a.mat().inverse());
}

} // namespace starframes
