#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include "starframes/duals.hpp"
#include "starframes/frames.hpp"

namespace starframes {

// The product of two contexts: algebra M_n (x) M_m = M_{nm}, module rank
// k*l. One global convention everywhere: the LEFT factor is the outer
// (slow) Kronecker index, for vectors, operators, and frame-pair order.
struct TensorContext {
    FrameContext left;
    FrameContext right;
    FrameContext product;

    static TensorContext of(const FrameContext& l, const FrameContext& r) {
        detail::require_valid(l);
        detail::require_valid(r);
        return {l, r, FrameContext{l.algebra_dim * r.algebra_dim, l.module_rank * r.module_rank}};
    }
};

inline ModuleVector tensor_vector(const ModuleVector& x, const ModuleVector& y) {
    const TensorContext tc = TensorContext::of(x.ctx(), y.ctx());
    return ModuleVector(tc.product, Eigen::kroneckerProduct(x.flat(), y.flat()).eval());
}

inline ModuleOperator tensor_operator(const ModuleOperator& M, const ModuleOperator& N) {
    const TensorContext tc = TensorContext::of(M.ctx(), N.ctx());
    return ModuleOperator(tc.product, Eigen::kroneckerProduct(M.mat(), N.mat()).eval());
}

// All pairwise tensors {T_i (x) U_j}, row-major with the left index outer.
inline OperatorFrame tensor_frame(const OperatorFrame& F, const OperatorFrame& G,
                                  std::string label = "") {
    std::vector<ModuleOperator> ops;
    ops.reserve(static_cast<std::size_t>(F.size()) * static_cast<std::size_t>(G.size()));
    for (const auto& f : F.ops())
        for (const auto& g : G.ops()) ops.push_back(tensor_operator(f, g));
    return OperatorFrame(std::move(ops), std::move(label));
}

// Tensor of dual pairs is again a dual pair; both product families use the
// identical row-major pairing.
inline DualPair verify_tensor_dual(const OperatorFrame& F, const OperatorFrame& Fd,
                                   const OperatorFrame& G, const OperatorFrame& Gd,
                                   const Tolerances& tol = {}) {
    if (!verify_dual(F, Fd, tol).pass)
        throw NotADualPair("left input pair fails the duality check");
    if (!verify_dual(G, Gd, tol).pass)
        throw NotADualPair("right input pair fails the duality check");
    return verify_dual(tensor_frame(F, G), tensor_frame(Fd, Gd), tol);
}

// Pairing of the factor families in an n-fold tensor: `full` enumerates the
// whole product index set (the two-factor product iterated), `diagonal`
// tensors entries sharing one index and requires equal family sizes.
enum class TensorMode { full, diagonal };

inline DualPair nfold_tensor(const std::vector<OperatorFrame>& frames,
                             const std::vector<OperatorFrame>& duals, TensorMode mode,
                             const Tolerances& tol = {}) {
    if (frames.size() != duals.size())
        throw LengthMismatch("need one dual family per frame family");
    if (frames.size() < 2) throw InvalidArgument("n-fold tensor needs at least two factors");
    for (std::size_t i = 0; i < frames.size(); ++i)
        if (!verify_dual(frames[i], duals[i], tol).pass)
            throw NotADualPair("an input pair fails the duality check");

    if (mode == TensorMode::full) {
        OperatorFrame tf = frames[0];
        OperatorFrame td = duals[0];
        for (std::size_t i = 1; i < frames.size(); ++i) {
            tf = tensor_frame(tf, frames[i]);
            td = tensor_frame(td, duals[i]);
        }
        return verify_dual(tf, td, tol);
    }

    const int count = frames[0].size();
    for (const auto& f : frames)
        if (f.size() != count)
            throw LengthMismatch("diagonal mode requires equal family sizes");

    std::vector<ModuleOperator> fops;
    std::vector<ModuleOperator> dops;
    fops.reserve(static_cast<std::size_t>(count));
    dops.reserve(static_cast<std::size_t>(count));
    for (int j = 0; j < count; ++j) {
        ModuleOperator f = frames[0].op(j);
        ModuleOperator d = duals[0].op(j);
        for (std::size_t i = 1; i < frames.size(); ++i) {
            f = tensor_operator(f, frames[i].op(j));
            d = tensor_operator(d, duals[i].op(j));
        }
        fops.push_back(std::move(f));
        dops.push_back(std::move(d));
    }
    return verify_dual(OperatorFrame(std::move(fops)), OperatorFrame(std::move(dops)), tol);
}

} // namespace starframes
