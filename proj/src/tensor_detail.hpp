#ifndef JUMPDYN_SRC_TENSOR_DETAIL_HPP
#define JUMPDYN_SRC_TENSOR_DETAIL_HPP

#include <cstddef>
#include <vector>

#include "jumpdyn/errors.hpp"
#include "jumpdyn/hierarchy.hpp"

namespace jumpdyn {
namespace detail {

// Row-major strides for an order-n tensor on an M-point 1-d grid:
// flat = sum_k idx[k] * M^{n-1-k}.
inline std::vector<std::size_t> tensor_strides(int n, int M) {
    std::vector<std::size_t> s(n);
    std::size_t acc = 1;
    for (int k = n - 1; k >= 0; --k) {
        s[k] = acc;
        acc *= static_cast<std::size_t>(M);
    }
    return s;
}

inline std::size_t tensor_size(int n, int M) {
    std::size_t acc = 1;
    for (int k = 0; k < n; ++k) acc *= static_cast<std::size_t>(M);
    return acc;
}

// Decode flat index into digits (grid coordinates of the n points).
inline void tensor_digits(std::size_t flat, int n, int M, int* out) {
    for (int k = n - 1; k >= 0; --k) {
        out[k] = static_cast<int>(flat % M);
        flat /= M;
    }
}

inline int mod_idx(int v, int M) {
    int r = v % M;
    return r < 0 ? r + M : r;
}

inline void require_tensor_grid(const TorusGrid& g) {
    if (g.dim() != 1)
        throw ConfigError("tensor hierarchy: only 1-d grids are supported");
    if (g.res() > 64)
        throw ConfigError(
            "tensor hierarchy: resolution capped at 64 (use the reduced "
            "representation for finer grids)");
}

inline void require_order(const TensorVector& k, int n) {
    if (n < 0 || n > k.N)
        throw ConfigError("tensor hierarchy: order out of range");
}

} // namespace detail
} // namespace jumpdyn

#endif
