#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "starframes/algebra.hpp"
#include "starframes/errors.hpp"

namespace starframes {

// The ambient pair: algebra M_n(C) and module H = A^k. Elements of H are
// k-tuples of n x n matrices, stored flattened as the n x nk row of blocks
// [x_1 x_2 ... x_k]. Adjointable A-linear operators on H act by RIGHT
// multiplication with an nk x nk matrix on the flattened form; their adjoint
// is the conjugate transpose of that matrix, and composition reverses matrix
// order (apply-B-then-A has matrix B_mat * A_mat read left to right as
// flat * B_mat * A_mat).
struct FrameContext {
    int algebra_dim = 1; // n
    int module_rank = 1; // k

    int flat_dim() const { return algebra_dim * module_rank; }
    bool operator==(const FrameContext&) const = default;
};

namespace detail {

inline void require_valid(const FrameContext& ctx) {
    if (ctx.algebra_dim < 1 || ctx.module_rank < 1)
        throw InvalidArgument("frame context dims must be >= 1");
}

inline void require_same_ctx(const FrameContext& a, const FrameContext& b) {
    if (!(a == b))
        throw ContextMismatch("operands belong to different (algebra_dim, module_rank) contexts");
}

} // namespace detail

class ModuleVector {
public:
    ModuleVector(FrameContext ctx, Eigen::MatrixXcd flat) : ctx_(ctx), flat_(std::move(flat)) {
        detail::require_valid(ctx_);
        if (flat_.rows() != ctx_.algebra_dim || flat_.cols() != ctx_.flat_dim())
            throw DimensionMismatch("flattened module vector must be n x nk");
        if (!flat_.allFinite())
            throw InvalidArgument("module vector entries must be finite");
    }

    static ModuleVector from_coords(FrameContext ctx, const std::vector<AlgebraElement>& coords) {
        detail::require_valid(ctx);
        if (static_cast<int>(coords.size()) != ctx.module_rank)
            throw DimensionMismatch("coordinate count must equal the module rank");
        Eigen::MatrixXcd flat(ctx.algebra_dim, ctx.flat_dim());
        for (int i = 0; i < ctx.module_rank; ++i) {
            if (coords[i].dim() != ctx.algebra_dim)
                throw DimensionMismatch("coordinate dim differs from the algebra dim");
            flat.block(0, i * ctx.algebra_dim, ctx.algebra_dim, ctx.algebra_dim) = coords[i].mat();
        }
        return ModuleVector(ctx, std::move(flat));
    }

    static ModuleVector zero(FrameContext ctx) {
        detail::require_valid(ctx);
        return ModuleVector(ctx, Eigen::MatrixXcd::Zero(ctx.algebra_dim, ctx.flat_dim()));
    }

    const FrameContext& ctx() const { return ctx_; }
    const Eigen::MatrixXcd& flat() const { return flat_; }

    AlgebraElement coord(int i) const {
        if (i < 0 || i >= ctx_.module_rank)
            throw IndexOutOfRange("coordinate index out of range");
        const int n = ctx_.algebra_dim;
        return AlgebraElement(flat_.block(0, i * n, n, n));
    }

private:
    FrameContext ctx_;
    Eigen::MatrixXcd flat_;
};

class ModuleOperator {
public:
    ModuleOperator(FrameContext ctx, Eigen::MatrixXcd mat) : ctx_(ctx), mat_(std::move(mat)) {
        detail::require_valid(ctx_);
        if (mat_.rows() != ctx_.flat_dim() || mat_.cols() != ctx_.flat_dim())
            throw DimensionMismatch("module operator matrix must be nk x nk");
        if (!mat_.allFinite())
            throw InvalidArgument("module operator entries must be finite");
    }

    static ModuleOperator identity(FrameContext ctx) {
        detail::require_valid(ctx);
        return ModuleOperator(ctx, Eigen::MatrixXcd::Identity(ctx.flat_dim(), ctx.flat_dim()));
    }

    static ModuleOperator zero(FrameContext ctx) {
        detail::require_valid(ctx);
        return ModuleOperator(ctx, Eigen::MatrixXcd::Zero(ctx.flat_dim(), ctx.flat_dim()));
    }

    const FrameContext& ctx() const { return ctx_; }
    const Eigen::MatrixXcd& mat() const { return mat_; }

private:
    FrameContext ctx_;
    Eigen::MatrixXcd mat_;
};

class SequenceVector {
public:
    explicit SequenceVector(FrameContext ctx, std::vector<ModuleVector> items = {})
        : ctx_(ctx), items_(std::move(items)) {
        detail::require_valid(ctx_);
        for (const auto& item : items_) detail::require_same_ctx(ctx_, item.ctx());
    }

    const FrameContext& ctx() const { return ctx_; }
    int size() const { return static_cast<int>(items_.size()); }
    const std::vector<ModuleVector>& items() const { return items_; }

private:
    FrameContext ctx_;
    std::vector<ModuleVector> items_;
};

// A map H -> H^N given row-wise by N module operators; this one shape covers
// analysis transforms, their duals, and arbitrary adjointable maps into the
// sequence space.
class SequenceOperator {
public:
    explicit SequenceOperator(FrameContext ctx, std::vector<ModuleOperator> rows = {})
        : ctx_(ctx), rows_(std::move(rows)) {
        detail::require_valid(ctx_);
        for (const auto& row : rows_) detail::require_same_ctx(ctx_, row.ctx());
    }

    const FrameContext& ctx() const { return ctx_; }
    int size() const { return static_cast<int>(rows_.size()); }
    const std::vector<ModuleOperator>& rows() const { return rows_; }
    const ModuleOperator& row(int i) const {
        if (i < 0 || i >= size()) throw IndexOutOfRange("row index out of range");
        return rows_[static_cast<std::size_t>(i)];
    }

private:
    FrameContext ctx_;
    std::vector<ModuleOperator> rows_;
};

// <x,y> = sum_i x_i y_i^*; linear in the first argument, so it collapses to
// one product of the flattened forms.
inline AlgebraElement inner_product(const ModuleVector& x, const ModuleVector& y) {
    detail::require_same_ctx(x.ctx(), y.ctx());
    return AlgebraElement(x.flat() * y.flat().adjoint());
}

// Left action a.x = (a x_1, ..., a x_k).
inline ModuleVector module_action(const AlgebraElement& a, const ModuleVector& x) {
    if (a.dim() != x.ctx().algebra_dim)
        throw ContextMismatch("algebra element dim differs from the context algebra dim");
    return ModuleVector(x.ctx(), a.mat() * x.flat());
}

inline ModuleVector apply(const ModuleOperator& M, const ModuleVector& x) {
    detail::require_same_ctx(M.ctx(), x.ctx());
    return ModuleVector(x.ctx(), x.flat() * M.mat());
}

inline ModuleOperator adjoint(const ModuleOperator& M) {
    return ModuleOperator(M.ctx(), M.mat().adjoint());
}

// Operator product "apply M2 first, then M1". Right multiplication reverses
// the matrix order, so the stored matrix is M2.mat * M1.mat.
inline ModuleOperator compose(const ModuleOperator& M1, const ModuleOperator& M2) {
    detail::require_same_ctx(M1.ctx(), M2.ctx());
    return ModuleOperator(M1.ctx(), M2.mat() * M1.mat());
}

inline const ModuleVector& coordinate_projection(int i, const SequenceVector& s) {
    if (i < 0 || i >= s.size()) throw IndexOutOfRange("sequence index out of range");
    return s.items()[static_cast<std::size_t>(i)];
}

inline SequenceVector apply(const SequenceOperator& P, const ModuleVector& x) {
    detail::require_same_ctx(P.ctx(), x.ctx());
    std::vector<ModuleVector> items;
    items.reserve(static_cast<std::size_t>(P.size()));
    for (const auto& row : P.rows()) items.push_back(apply(row, x));
    return SequenceVector(P.ctx(), std::move(items));
}

// The adjoint map H^N -> H: (y_i)_i -> sum_i row_i^* y_i.
inline ModuleVector adjoint_apply(const SequenceOperator& P, const SequenceVector& s) {
    detail::require_same_ctx(P.ctx(), s.ctx());
    if (P.size() != s.size())
        throw LengthMismatch("sequence length differs from the row count");
    ModuleVector acc = ModuleVector::zero(P.ctx());
    for (int i = 0; i < P.size(); ++i) {
        const ModuleVector term = apply(adjoint(P.row(i)), s.items()[static_cast<std::size_t>(i)]);
        acc = ModuleVector(P.ctx(), acc.flat() + term.flat());
    }
    return acc;
}

// Frobenius norm of the flattened form.
inline double norm(const ModuleVector& x) { return x.flat().norm(); }

} // namespace starframes
