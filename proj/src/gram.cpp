#include "cfastap/gram.hpp"

#include <stdexcept>

#include "cfastap/simd/kernels.hpp"

namespace cfastap {

ColumnSet ColumnSet::all(const CMatrix& m) {
    ColumnSet set;
    set.rows = m.rows();
    set.columns.reserve(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index c = 0; c < m.cols(); ++c) set.columns.push_back(m.col(c).data());
    return set;
}

ColumnSet ColumnSet::subset(const CMatrix& m, std::span<const Eigen::Index> indices) {
    ColumnSet set;
    set.rows = m.rows();
    set.columns.reserve(indices.size());
    for (Eigen::Index c : indices) {
        if (c < 0 || c >= m.cols()) throw std::out_of_range("column index out of range");
        set.columns.push_back(m.col(c).data());
    }
    return set;
}

CMatrix weighted_gram(const ColumnSet& cols, std::span<const double> weights) {
    if (weights.size() != cols.size()) throw std::invalid_argument("weighted_gram: weight count mismatch");
    const auto& k = simd::kernels();
    const Eigen::Index n = cols.rows;
    const std::size_t kc = cols.size();

    // Row-major copy of the weighted columns so each Gram entry is one
    // contiguous dot product over the column count.
    std::vector<cplx> rows(static_cast<std::size_t>(n) * kc);
    for (std::size_t c = 0; c < kc; ++c) {
        const cplx* col = cols.columns[c];
        const double w = weights[c];
        for (Eigen::Index r = 0; r < n; ++r) rows[static_cast<std::size_t>(r) * kc + c] = w * col[r];
    }

    CMatrix g(n, n);
    for (Eigen::Index r = 0; r < n; ++r) {
        const cplx* br = rows.data() + static_cast<std::size_t>(r) * kc;
        for (Eigen::Index s = 0; s <= r; ++s) {
            const cplx* bs = rows.data() + static_cast<std::size_t>(s) * kc;
            const cplx v = k.cdotc(bs, br, kc);
            g(r, s) = v;
            g(s, r) = std::conj(v);
        }
        g(r, r) = g(r, r).real();
    }
    return g;
}

CVector adjoint_apply(const ColumnSet& cols, const CVector& x) {
    if (x.size() != cols.rows) throw std::invalid_argument("adjoint_apply: length mismatch");
    const auto& k = simd::kernels();
    CVector out(static_cast<Eigen::Index>(cols.size()));
    for (std::size_t c = 0; c < cols.size(); ++c) {
        out[static_cast<Eigen::Index>(c)] = k.cdotc(cols.columns[c], x.data(), static_cast<std::size_t>(cols.rows));
    }
    return out;
}

CMatrix hermitian_part(const CMatrix& m) { return 0.5 * (m + m.adjoint()); }

}  // namespace cfastap
