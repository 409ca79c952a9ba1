#pragma once

#include <cmath>
#include <cstdint>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "starframes/frames.hpp"

namespace starframes {

namespace detail {

// mat(theta^* eta) = sum_i W_i M_i^H, where M_i are the frame matrices and
// W_i the candidate-dual matrices. Duality of the pair is exactly this
// matrix being the identity.
inline Eigen::MatrixXcd synthesis_product(const std::vector<ModuleOperator>& frame_ops,
                                          const std::vector<ModuleOperator>& dual_ops) {
    const int d = frame_ops.front().ctx().flat_dim();
    Eigen::MatrixXcd acc = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t i = 0; i < frame_ops.size(); ++i)
        acc += dual_ops[i].mat() * frame_ops[i].mat().adjoint();
    return acc;
}

inline double dual_residual(const std::vector<ModuleOperator>& frame_ops,
                            const std::vector<ModuleOperator>& dual_ops) {
    const int d = frame_ops.front().ctx().flat_dim();
    return (synthesis_product(frame_ops, dual_ops) - Eigen::MatrixXcd::Identity(d, d)).norm();
}

inline void require_compatible_family(const OperatorFrame& F, const FrameContext& ctx, int count) {
    require_same_ctx(F.ctx(), ctx);
    if (F.size() != count)
        throw LengthMismatch("families must have the same number of operators");
}

} // namespace detail

// A frame together with a candidate dual and the measured defect of the
// reconstruction identity x = sum_i T_i^* Lambda_i x.
struct DualPair {
    OperatorFrame frame;
    OperatorFrame dual;
    double residual = 0.0;                  // ||sum_i W_i M_i^H - I||_F
    int n_samples = 0;                      // reconstruction spot-check size
    double max_reconstruction_error = 0.0;  // worst relative error over the samples
    bool pass = false;
};

// {T_i S^{-1}}: the dual every frame has.
inline OperatorFrame canonical_dual(const OperatorFrame& F, const Tolerances& tol = {}) {
    const Eigen::MatrixXcd& ginv = detail::gram_inverse(F, tol);
    std::vector<ModuleOperator> ops;
    ops.reserve(static_cast<std::size_t>(F.size()));
    for (const auto& op : F.ops()) ops.emplace_back(F.ctx(), ginv * op.mat());
    return OperatorFrame(std::move(ops));
}

// Measures the duality defect and spot-checks reconstruction on seeded
// random vectors. Symmetric in its arguments up to conjugation of the
// defect matrix.
inline DualPair verify_dual(const OperatorFrame& F, const OperatorFrame& D,
                            const Tolerances& tol = {}) {
    detail::require_compatible_family(D, F.ctx(), F.size());

    const int d = F.ctx().flat_dim();
    const Eigen::MatrixXcd recon = detail::synthesis_product(F.ops(), D.ops());
    const double residual = (recon - Eigen::MatrixXcd::Identity(d, d)).norm();

    constexpr int kSpotChecks = 10;
    constexpr std::uint64_t kSpotCheckSeed = 0x5eedc0deULL;
    Rng rng(kSpotCheckSeed);
    double worst = 0.0;
    for (int s = 0; s < kSpotChecks; ++s) {
        const ModuleVector x = random_module_vector(F.ctx(), rng);
        const double nx = x.flat().norm();
        if (nx == 0.0) continue;
        const double err = (x.flat() * recon - x.flat()).norm() / nx;
        worst = std::max(worst, err);
    }

    DualPair pair{F, D, residual, kSpotChecks, worst, false};
    const double budget = tol.eq * d;
    pair.pass = residual <= budget && worst <= budget;
    return pair;
}

// ||mat(theta^* eta) - I||_F: the transform-side view of the same identity
// verify_dual measures.
inline double theta_eta_identity(const OperatorFrame& F, const OperatorFrame& D) {
    detail::require_compatible_family(D, F.ctx(), F.size());
    return detail::dual_residual(F.ops(), D.ops());
}

namespace detail {

// Rows of theta S^{-1} + (I - theta S^{-1} theta^*) psi for an arbitrary
// adjointable psi given by rows Q_i:
//   row_i = G^{-1} M_i + Q_i - E G^{-1} M_i,  E = sum_j Q_j M_j^H.
inline std::vector<ModuleOperator> parametrized_dual_rows(const OperatorFrame& F,
                                                          const std::vector<ModuleOperator>& aux,
                                                          const Tolerances& tol) {
    const Eigen::MatrixXcd& ginv = gram_inverse(F, tol);
    const int d = F.ctx().flat_dim();
    Eigen::MatrixXcd mix = Eigen::MatrixXcd::Zero(d, d);
    for (std::size_t j = 0; j < aux.size(); ++j)
        mix += aux[j].mat() * F.ops()[j].mat().adjoint();
    std::vector<ModuleOperator> rows;
    rows.reserve(aux.size());
    for (std::size_t i = 0; i < aux.size(); ++i) {
        const Eigen::MatrixXcd canonical = ginv * F.ops()[i].mat();
        rows.emplace_back(F.ctx(), canonical + aux[i].mat() - mix * canonical);
    }
    return rows;
}

} // namespace detail

// Dual built from an arbitrary Bessel family {Delta_j}:
//   Omega_j = Ltilde_j + Delta_j - sum_k Ltilde_j Lambda_k^* Delta_k.
inline OperatorFrame dual_from_bessel(const OperatorFrame& F, const OperatorFrame& Delta,
                                      const Tolerances& tol = {}) {
    detail::require_compatible_family(Delta, F.ctx(), F.size());
    return OperatorFrame(detail::parametrized_dual_rows(F, Delta.ops(), tol));
}

// Right inverse of theta^* in the form theta S^{-1} + (I - theta S^{-1}
// theta^*) psi; every adjointable right inverse arises this way.
inline SequenceOperator right_inverse_from_psi(const OperatorFrame& F, const SequenceOperator& Psi,
                                               const Tolerances& tol = {}) {
    detail::require_same_ctx(F.ctx(), Psi.ctx());
    if (Psi.size() != F.size())
        throw LengthMismatch("psi must have one row per frame operator");
    return SequenceOperator(F.ctx(), detail::parametrized_dual_rows(F, Psi.rows(), tol));
}

// Coordinates of an adjointable right inverse of theta^* form a dual frame.
inline OperatorFrame dual_from_right_inverse(const OperatorFrame& F,
                                             const SequenceOperator& eta_prime,
                                             const Tolerances& tol = {}) {
    detail::require_same_ctx(F.ctx(), eta_prime.ctx());
    if (eta_prime.size() != F.size())
        throw LengthMismatch("eta' must have one row per frame operator");
    const double defect = detail::dual_residual(F.ops(), eta_prime.rows());
    if (defect > tol.eq * F.ctx().flat_dim())
        throw NotARightInverse("theta^* eta' deviates from the identity beyond tolerance");
    return OperatorFrame(eta_prime.rows());
}

// Frame operator of a dual against its closed form
// S^{-1} + eta^*(I - theta S^{-1} theta^*) eta; returns (absolute, relative)
// Frobenius deviation. The correction term is assembled from the stacked
// block matrices, independently of the frame-operator accumulation.
inline std::pair<double, double> dual_frame_operator_identity(const OperatorFrame& F,
                                                              const OperatorFrame& D,
                                                              const Tolerances& tol = {}) {
    const DualPair pair = verify_dual(F, D, tol);
    if (!pair.pass)
        throw NotADualPair("the operator families do not reconstruct the identity");

    const Eigen::MatrixXcd& ginv = detail::gram_inverse(F, tol);
    const int d = F.ctx().flat_dim();
    const int N = F.size();

    Eigen::MatrixXcd theta(d, N * d); // [M_1 ... M_N]
    Eigen::MatrixXcd eta(d, N * d);   // [W_1 ... W_N]
    for (int i = 0; i < N; ++i) {
        theta.block(0, i * d, d, d) = F.ops()[static_cast<std::size_t>(i)].mat();
        eta.block(0, i * d, d, d) = D.ops()[static_cast<std::size_t>(i)].mat();
    }
    const Eigen::MatrixXcd projector =
        Eigen::MatrixXcd::Identity(N * d, N * d) - theta.adjoint() * ginv * theta;
    const Eigen::MatrixXcd rhs = ginv + eta * projector * eta.adjoint();
    const Eigen::MatrixXcd lhs = D.spectrum().gram;

    const double abs_err = (lhs - rhs).norm();
    return {abs_err, abs_err / lhs.norm()};
}

// Module-element form of the dual family for vector-induced frames:
//   g_j = S^{-1} f_j + h_j - sum_k <S^{-1} f_j, f_k> h_k.
inline std::vector<AlgebraElement> vector_dual(const std::vector<AlgebraElement>& fs,
                                               const std::vector<AlgebraElement>& hs,
                                               const Tolerances& tol = {}) {
    if (fs.empty()) throw EmptyFrame("need at least one frame vector");
    if (fs.size() != hs.size())
        throw LengthMismatch("need one Bessel vector per frame vector");
    const FrameContext ctx{static_cast<int>(fs.front().dim()), 1};
    const OperatorFrame Fv = vector_frame(ctx, fs);
    const Eigen::MatrixXcd& ginv = detail::gram_inverse(Fv, tol);

    std::vector<AlgebraElement> gs;
    gs.reserve(fs.size());
    for (std::size_t j = 0; j < fs.size(); ++j) {
        if (hs[j].dim() != ctx.algebra_dim)
            throw DimensionMismatch("Bessel vector dim differs from the algebra dim");
        const Eigen::MatrixXcd canon = fs[j].mat() * ginv; // S^{-1} f_j in module form
        Eigen::MatrixXcd g = canon + hs[j].mat();
        for (std::size_t k = 0; k < fs.size(); ++k)
            g -= (canon * fs[k].mat().adjoint()) * hs[k].mat();
        gs.emplace_back(std::move(g));
    }
    return gs;
}

} // namespace starframes
