#pragma once

#include <span>
#include <vector>

#include "cfastap/types.hpp"

namespace cfastap {

// Column pointers into column-major storage, each of length `rows`.
struct ColumnSet {
    std::vector<const cplx*> columns;
    Eigen::Index rows = 0;

    static ColumnSet all(const CMatrix& m);
    static ColumnSet subset(const CMatrix& m, std::span<const Eigen::Index> indices);

    std::size_t size() const { return columns.size(); }
};

// sum_i weights[i]^2 * c_i c_i^H  (rows x rows, Hermitian).
CMatrix weighted_gram(const ColumnSet& cols, std::span<const double> weights);

// Entry i: c_i^H x.
CVector adjoint_apply(const ColumnSet& cols, const CVector& x);

// (M + M^H) / 2
CMatrix hermitian_part(const CMatrix& m);

}  // namespace cfastap
