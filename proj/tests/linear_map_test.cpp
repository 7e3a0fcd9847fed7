#include <doctest.h>

#include "multiform/linear_map.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

using namespace multiform;
using testutil::random_invertible;
using testutil::random_matrix;

TEST_CASE("inverse agrees with the adjugate oracle") {
    SplitMix64 rng(3);
    TolerancePolicy pol;
    for (int trial = 0; trial < 50; ++trial) {
        int n = static_cast<int>(rng.next_int(1, 4));
        LinearMap a = random_invertible(rng, n, Kind::Q);
        LinearMap inv = inverse(a, pol);
        CHECK(inv == oracle::inverse_adjugate(a));
        CHECK(a * inv == LinearMap::identity(n, Kind::Q));
    }
}

TEST_CASE("det agrees with Laplace expansion") {
    SplitMix64 rng(5);
    for (int trial = 0; trial < 50; ++trial) {
        int n = static_cast<int>(rng.next_int(1, 4));
        LinearMap a = random_matrix(rng, n, n, Kind::Qi);
        CHECK(det(a) == oracle::det_laplace(a));
    }
}

TEST_CASE("kernel basis spans the null space exactly") {
    SplitMix64 rng(9);
    TolerancePolicy pol;
    for (int trial = 0; trial < 40; ++trial) {
        int rows = static_cast<int>(rng.next_int(1, 5));
        int cols = static_cast<int>(rng.next_int(1, 5));
        LinearMap a = random_matrix(rng, rows, cols, Kind::Q);
        LinearMap k = kernel_basis(a, pol);
        CHECK(rank(a, pol) + k.cols() == cols);
        if (k.cols() > 0) {
            LinearMap image = a * k;
            CHECK(image.max_abs() == 0.0);
            CHECK(rank(k, pol) == k.cols());
        }
    }
}

TEST_CASE("solve_consistent recovers restrictions") {
    SplitMix64 rng(21);
    TolerancePolicy pol;
    // B X = (B R) has the unique solution R for full-column-rank B
    for (int trial = 0; trial < 30; ++trial) {
        int m = static_cast<int>(rng.next_int(2, 5));
        int d = static_cast<int>(rng.next_int(1, m));
        LinearMap b = random_matrix(rng, m, d, Kind::Q);
        if (rank(b, pol) != d) continue;
        LinearMap r = random_matrix(rng, d, d, Kind::Q);
        LinearMap x = solve_consistent(b, b * r, pol);
        CHECK(x == r);
    }
}

TEST_CASE("singular matrix is rejected") {
    TolerancePolicy pol;
    LinearMap a = LinearMap::from_rows(Kind::Q, {{1, 2}, {2, 4}});
    CHECK_THROWS_AS(inverse(a, pol), SingularMatrix);
    CHECK(det(a).is_zero());
    CHECK(condition_estimate(a.convert_to(Kind::R64), pol) ==
          std::numeric_limits<double>::infinity());
}

TEST_CASE("pow_int handles negative exponents") {
    TolerancePolicy pol;
    LinearMap a = LinearMap::from_rows(Kind::Q, {{2, 1}, {1, 1}});
    LinearMap p = pow_int(a, 3, pol) * pow_int(a, -3, pol);
    CHECK(p == LinearMap::identity(2, Kind::Q));
    CHECK(pow_int(a, 0, pol) == LinearMap::identity(2, Kind::Q));
}

TEST_CASE("float kernel with forced nullity") {
    TolerancePolicy pol;
    // rank-1 matrix plus noise well above the tolerance; forcing nullity 2
    // still extracts a two-dimensional kernel
    LinearMap a(3, 3, Kind::R64);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            a.at(i, j) = Scalar::real((i + 1.0) * (j + 1.0) + ((i * 3 + j) % 2 ? 1e-7 : -1e-7));
    LinearMap k = kernel_basis(a, pol, 2);
    CHECK(k.cols() == 2);
    CHECK((a * k).max_abs() < 1e-5);
}

TEST_CASE("zero-dimensional edge cases stay legal") {
    TolerancePolicy pol;
    LinearMap a(0, 0, Kind::Q);
    CHECK(inverse(a, pol).rows() == 0);
    CHECK(det(a) == Scalar::one(Kind::Q));
    CHECK(rank(a, pol) == 0);
}
