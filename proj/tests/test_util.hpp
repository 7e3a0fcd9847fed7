#pragma once

#include <vector>

#include "multiform/gen.hpp"
#include "multiform/multi_form.hpp"

namespace testutil {

using multiform::Kind;
using multiform::LinearMap;
using multiform::MultiForm;
using multiform::Scalar;
using multiform::SplitMix64;

inline Scalar random_small(SplitMix64& rng, Kind kind) {
    return Scalar::from_int(rng.next_int(-3, 3), kind);
}

inline MultiForm random_form(SplitMix64& rng, int arity, int dim, Kind kind) {
    MultiForm f(arity, dim, kind);
    for (std::size_t i = 0; i < f.size(); ++i) f.at_flat(i) = random_small(rng, kind);
    return f;
}

inline LinearMap random_matrix(SplitMix64& rng, int rows, int cols, Kind kind) {
    LinearMap m(rows, cols, kind);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) m.at(i, j) = random_small(rng, kind);
    return m;
}

inline LinearMap random_invertible(SplitMix64& rng, int n, Kind kind) {
    for (;;) {
        LinearMap m = random_matrix(rng, n, n, kind);
        if (!multiform::det(m).is_zero()) return m;
    }
}

inline std::vector<Scalar> random_vector(SplitMix64& rng, int dim, Kind kind) {
    std::vector<Scalar> v;
    v.reserve(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) v.push_back(random_small(rng, kind));
    return v;
}

}  // namespace testutil
