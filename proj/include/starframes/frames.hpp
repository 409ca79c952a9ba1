#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "starframes/algebra.hpp"
#include "starframes/errors.hpp"
#include "starframes/module_space.hpp"
#include "starframes/random.hpp"

namespace starframes {

// Spectral data of the frame operator S = sum_i T_i^* T_i in flattened form
// G = sum_i M_i M_i^H. Computed once per frame and shared by copies; the
// inverse is stored only when G is numerically invertible.
struct FrameSpectrum {
    Eigen::MatrixXcd gram;
    Eigen::VectorXd eigenvalues; // ascending
    Eigen::MatrixXcd eigenvectors;
    Eigen::MatrixXcd inverse; // empty unless invertible
    bool has_inverse = false;

    double eig_min() const { return eigenvalues(0); }
    double eig_max() const { return eigenvalues(eigenvalues.size() - 1); }
};

// A finite indexed family {T_i} of adjointable operators sharing one context.
class OperatorFrame {
public:
    explicit OperatorFrame(std::vector<ModuleOperator> ops, std::string label = "")
        : ops_(std::move(ops)), label_(std::move(label)) {
        if (ops_.empty()) throw EmptyFrame("an operator frame needs at least one operator");
        ctx_ = ops_.front().ctx();
        for (const auto& op : ops_) detail::require_same_ctx(ctx_, op.ctx());
        spectrum_ = compute_spectrum();
    }

    const FrameContext& ctx() const { return ctx_; }
    int size() const { return static_cast<int>(ops_.size()); }
    const std::vector<ModuleOperator>& ops() const { return ops_; }
    const ModuleOperator& op(int i) const {
        if (i < 0 || i >= size()) throw IndexOutOfRange("frame index out of range");
        return ops_[static_cast<std::size_t>(i)];
    }
    const std::string& label() const { return label_; }
    const FrameSpectrum& spectrum() const { return *spectrum_; }

private:
    std::shared_ptr<const FrameSpectrum> compute_spectrum() const {
        auto spec = std::make_shared<FrameSpectrum>();
        const int d = ctx_.flat_dim();
        spec->gram = Eigen::MatrixXcd::Zero(d, d);
        for (const auto& op : ops_) spec->gram += op.mat() * op.mat().adjoint();
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(spec->gram);
        spec->eigenvalues = es.eigenvalues();
        spec->eigenvectors = es.eigenvectors();
        // Inverting past this ratio would only produce noise.
        if (spec->eig_min() > 0.0 && spec->eig_min() >= 1e-14 * spec->eig_max()) {
            const Eigen::VectorXd recip = spec->eigenvalues.cwiseInverse();
            spec->inverse =
                spec->eigenvectors * recip.asDiagonal() * spec->eigenvectors.adjoint();
            spec->has_inverse = true;
        }
        return spec;
    }

    FrameContext ctx_;
    std::vector<ModuleOperator> ops_;
    std::string label_;
    std::shared_ptr<const FrameSpectrum> spectrum_;
};

// Flattened frame operator; Hermitian PSD by construction.
class GramMatrix {
public:
    GramMatrix(FrameContext ctx, Eigen::MatrixXcd mat, const Tolerances& tol = {})
        : ctx_(ctx), mat_(std::move(mat)) {
        if (mat_.rows() != ctx_.flat_dim() || mat_.cols() != ctx_.flat_dim())
            throw DimensionMismatch("gram matrix must be nk x nk");
        if (hermitian_defect(mat_) > tol.herm * std::max(1.0, mat_.norm()))
            throw NotHermitian("gram matrix must be Hermitian");
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(mat_, Eigen::EigenvaluesOnly);
        const Eigen::VectorXd& eigs = es.eigenvalues();
        const double scale = std::max(std::abs(eigs(0)), std::abs(eigs(eigs.size() - 1)));
        if (eigs(0) < -tol.psd * scale)
            throw InvalidArgument("gram matrix must be positive semidefinite");
    }

    const FrameContext& ctx() const { return ctx_; }
    const Eigen::MatrixXcd& mat() const { return mat_; }
    ModuleOperator as_operator() const { return ModuleOperator(ctx_, mat_); }

private:
    FrameContext ctx_;
    Eigen::MatrixXcd mat_;
};

inline GramMatrix frame_operator(const OperatorFrame& F) {
    return GramMatrix(F.ctx(), F.spectrum().gram);
}

// The frame transform x -> (T_i x)_i.
inline SequenceOperator analysis(const OperatorFrame& F) {
    return SequenceOperator(F.ctx(), F.ops());
}

// G is invertible exactly when a positive lower frame bound exists.
inline bool is_frame(const OperatorFrame& F, const Tolerances& tol = {}) {
    const FrameSpectrum& s = F.spectrum();
    return s.eig_max() > 0.0 && s.eig_min() >= tol.inv * s.eig_max();
}

// Largest lower / smallest upper scalar constants a, b with
// a <x,x> a^* <= sum_i <T_i x, T_i x> <= b <x,x> b^*, i.e. a^2 I <= G <= b^2 I.
inline std::pair<double, double> optimal_scalar_bounds(const OperatorFrame& F) {
    const FrameSpectrum& s = F.spectrum();
    return {std::sqrt(std::max(s.eig_min(), 0.0)), std::sqrt(std::max(s.eig_max(), 0.0))};
}

// Finite families are always Bessel; returns the optimal upper bound.
inline std::pair<bool, double> is_bessel(const OperatorFrame& F) {
    return {true, std::sqrt(std::max(F.spectrum().eig_max(), 0.0))};
}

inline double gram_condition(const OperatorFrame& F) {
    const FrameSpectrum& s = F.spectrum();
    if (s.eig_min() <= 0.0) return std::numeric_limits<double>::infinity();
    return s.eig_max() / s.eig_min();
}

namespace detail {

// G^{-1}, cached with the frame's spectral data.
inline const Eigen::MatrixXcd& gram_inverse(const OperatorFrame& F, const Tolerances& tol = {}) {
    if (!is_frame(F, tol) || !F.spectrum().has_inverse)
        throw NotAFrame("frame operator is numerically singular");
    return F.spectrum().inverse;
}

} // namespace detail

// Lower/upper bound candidates for the frame inequality, either positive
// scalars (embedded as multiples of the identity) or invertible algebra
// elements.
class StarBounds {
public:
    enum class Kind { scalar, algebra };

    static StarBounds scalar(double lower, double upper) {
        if (!(lower > 0.0) || !(upper >= lower))
            throw InvalidBounds("scalar bounds require 0 < lower <= upper");
        StarBounds b;
        b.kind_ = Kind::scalar;
        b.scalar_lower_ = lower;
        b.scalar_upper_ = upper;
        return b;
    }

    static StarBounds algebra(AlgebraElement lower, AlgebraElement upper,
                              const Tolerances& tol = {}) {
        if (lower.dim() != upper.dim())
            throw InvalidBounds("bound elements must share one algebra dim");
        if (!is_strictly_nonzero(lower, tol) || !is_strictly_nonzero(upper, tol))
            throw InvalidBounds("bound elements must be strictly nonzero (invertible)");
        StarBounds b;
        b.kind_ = Kind::algebra;
        b.lower_ = std::move(lower);
        b.upper_ = std::move(upper);
        return b;
    }

    Kind kind() const { return kind_; }
    double scalar_lower() const { return scalar_lower_; }
    double scalar_upper() const { return scalar_upper_; }
    const AlgebraElement& lower() const { return *lower_; }
    const AlgebraElement& upper() const { return *upper_; }

private:
    StarBounds() = default;

    Kind kind_ = Kind::scalar;
    double scalar_lower_ = 1.0;
    double scalar_upper_ = 1.0;
    std::optional<AlgebraElement> lower_;
    std::optional<AlgebraElement> upper_;
};

struct BoundsSample {
    bool pass_lower = false;
    bool pass_upper = false;
    double violation = 0.0; // most negative defect eigenvalue, clamped at 0

    bool pass() const { return pass_lower && pass_upper; }
};

// Result of the sampled bound check. Sampling can only refute the frame
// inequality, never prove it, so an all-pass report is evidence, not proof.
struct StarBoundsReport {
    int samples = 0;
    std::uint64_t seed = 0;
    std::vector<BoundsSample> results; // in sample-index order
    bool all_pass = true;
    double worst_violation = 0.0;
    std::string note = "sampled positivity check: a pass is evidence, not proof";
};

inline ModuleVector random_module_vector(const FrameContext& ctx, Rng& rng) {
    return ModuleVector(ctx, rng.matrix(ctx.algebra_dim, ctx.flat_dim()));
}

namespace detail {

struct PositivityProbe {
    bool positive = false;
    double min_eig = 0.0;
};

// `scale` is the magnitude of the terms whose difference m is; a tight frame
// makes the optimal-bound defect itself vanish, so m's own norm cannot serve
// as the reference.
inline PositivityProbe probe_positivity(const Eigen::MatrixXcd& m, double scale,
                                        const Tolerances& tol) {
    PositivityProbe p;
    if (hermitian_defect(m) > tol.herm * std::max(1.0, scale)) return p;
    if (m.isZero(0.0)) {
        p.positive = true;
        return p;
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(m, Eigen::EigenvaluesOnly);
    p.min_eig = es.eigenvalues()(0);
    p.positive = p.min_eig >= -tol.psd * scale;
    return p;
}

} // namespace detail

// Checks A<x,x>A^* <= sum_i <T_i x, T_i x> <= B<x,x>B^* on seeded random
// sample vectors.
inline StarBoundsReport verify_star_bounds(const OperatorFrame& F, const StarBounds& bounds,
                                           int samples, std::uint64_t seed,
                                           const Tolerances& tol = {}) {
    if (samples < 1) throw InvalidArgument("sample count must be >= 1");
    if (bounds.kind() == StarBounds::Kind::algebra &&
        bounds.lower().dim() != F.ctx().algebra_dim)
        throw InvalidBounds("bound elements must live in the frame's algebra");

    StarBoundsReport report;
    report.samples = samples;
    report.seed = seed;
    report.results.reserve(static_cast<std::size_t>(samples));

    Rng rng(seed);
    for (int s = 0; s < samples; ++s) {
        const ModuleVector x = random_module_vector(F.ctx(), rng);
        const Eigen::MatrixXcd p = x.flat() * x.flat().adjoint(); // <x,x>
        Eigen::MatrixXcd q = Eigen::MatrixXcd::Zero(p.rows(), p.cols());
        for (const auto& op : F.ops()) {
            const Eigen::MatrixXcd tx = x.flat() * op.mat();
            q += tx * tx.adjoint(); // <T_i x, T_i x>
        }

        Eigen::MatrixXcd lower_defect, upper_defect;
        double lower_scale, upper_scale;
        if (bounds.kind() == StarBounds::Kind::scalar) {
            const double a2 = bounds.scalar_lower() * bounds.scalar_lower();
            const double b2 = bounds.scalar_upper() * bounds.scalar_upper();
            lower_defect = q - a2 * p;
            upper_defect = b2 * p - q;
            lower_scale = q.norm() + a2 * p.norm();
            upper_scale = q.norm() + b2 * p.norm();
        } else {
            const Eigen::MatrixXcd& a = bounds.lower().mat();
            const Eigen::MatrixXcd& b = bounds.upper().mat();
            const Eigen::MatrixXcd apa = a * p * a.adjoint();
            const Eigen::MatrixXcd bpb = b * p * b.adjoint();
            lower_defect = q - apa;
            upper_defect = bpb - q;
            lower_scale = q.norm() + apa.norm();
            upper_scale = q.norm() + bpb.norm();
        }

        const auto lo = detail::probe_positivity(lower_defect, lower_scale, tol);
        const auto hi = detail::probe_positivity(upper_defect, upper_scale, tol);
        BoundsSample result;
        result.pass_lower = lo.positive;
        result.pass_upper = hi.positive;
        result.violation = std::max({0.0, -lo.min_eig, -hi.min_eig});
        report.all_pass = report.all_pass && result.pass();
        report.worst_violation = std::max(report.worst_violation, result.violation);
        report.results.push_back(result);
    }
    return report;
}

// The operator family induced by module elements f_j of A itself (rank-one
// context): f -> <f, f_j> acts by right multiplication with f_j^H.
inline OperatorFrame vector_frame(const FrameContext& ctx,
                                  const std::vector<AlgebraElement>& vectors,
                                  std::string label = "") {
    if (ctx.module_rank != 1)
        throw BadRank("vector-induced frames require module_rank = 1");
    std::vector<ModuleOperator> ops;
    ops.reserve(vectors.size());
    for (const auto& f : vectors) {
        if (f.dim() != ctx.algebra_dim)
            throw DimensionMismatch("vector dim differs from the algebra dim");
        ops.emplace_back(ctx, f.mat().adjoint());
    }
    return OperatorFrame(std::move(ops), std::move(label));
}

// Deterministic test-instance generator: `count` operators with i.i.d.
// standard complex normal entries.
inline OperatorFrame random_frame(const FrameContext& ctx, int count, std::uint64_t seed,
                                  std::string label = "") {
    detail::require_valid(ctx);
    if (count < 1) throw EmptyFrame("an operator frame needs at least one operator");
    Rng rng(seed);
    std::vector<ModuleOperator> ops;
    ops.reserve(static_cast<std::size_t>(count));
    const int d = ctx.flat_dim();
    for (int i = 0; i < count; ++i) ops.emplace_back(ctx, rng.matrix(d, d));
    return OperatorFrame(std::move(ops), std::move(label));
}

} // namespace starframes
