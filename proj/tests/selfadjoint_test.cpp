#include <doctest.h>

#include "multiform/gen.hpp"
#include "multiform/selfadjoint.hpp"
#include "test_util.hpp"

using namespace multiform;
using testutil::random_form;
using testutil::random_invertible;

namespace {

GenSpec pair_spec(std::uint64_t seed, Kind kind) {
    GenSpec spec;
    spec.seed = seed;
    spec.arity = 3;
    spec.kind = kind;
    spec.block_dims = {2, 1};
    spec.eigenvalues = {EigenvalueSpec::real_value(Scalar::from_int(2, kind)),
                        EigenvalueSpec::real_value(Scalar::from_int(5, kind))};
    return spec;
}

}  // namespace

TEST_CASE("scalar multiples are selfadjoint for any form") {
    SplitMix64 rng(41);
    TolerancePolicy pol;
    for (int trial = 0; trial < 20; ++trial) {
        MultiForm g = random_form(rng, 3, 3, Kind::Q);
        LinearMap tau = LinearMap::identity(3, Kind::Q).scaled(Scalar::rational(rng.next_int(-3, 3)));
        CHECK(is_selfadjoint(g, tau, pol).ok);
        CHECK(is_selfadjoint(g, tau, pol, true).ok);
    }
}

TEST_CASE("block scalar maps are selfadjoint for block forms") {
    SplitMix64 rng(42);
    TolerancePolicy pol;
    MultiForm g1 = random_form(rng, 3, 2, Kind::Q);
    MultiForm g2 = random_form(rng, 3, 2, Kind::Q);
    MultiForm g = direct_sum(g1, g2);
    LinearMap tau = LinearMap::zeros(4, 4, Kind::Q);
    for (int i = 0; i < 2; ++i) tau.at(i, i) = Scalar::rational(2);
    for (int i = 2; i < 4; ++i) tau.at(i, i) = Scalar::rational(7);
    CHECK(is_selfadjoint(g, tau, pol).ok);
}

TEST_CASE("a hand-checkable violation with its witness") {
    TolerancePolicy pol;
    MultiForm g(2, 2, Kind::Q);
    g.at({0, 1}) = Scalar::rational(1);
    LinearMap tau = LinearMap::from_rows(Kind::Q, {{2, 0}, {0, 1}});
    SelfadjointReport rep = is_selfadjoint(g, tau, pol);
    CHECK(!rep.ok);
    CHECK(rep.slot_a == 0);
    CHECK(rep.slot_b == 1);
    REQUIRE(rep.index.size() == 2);
    // the contractions differ at (0,1): 2*1 against 1*1
    CHECK(rep.index == std::vector<int>{0, 1});
}

TEST_CASE("pairwise check agrees with the slot-0 shortcut") {
    SplitMix64 rng(43);
    TolerancePolicy pol;
    for (int trial = 0; trial < 25; ++trial) {
        MultiForm g = random_form(rng, 3, 2, Kind::Q);
        LinearMap tau = testutil::random_matrix(rng, 2, 2, Kind::Q);
        CHECK(is_selfadjoint(g, tau, pol).ok == is_selfadjoint(g, tau, pol, true).ok);
    }
}

TEST_CASE("selfadjointness is invariant under simultaneous change of basis") {
    SplitMix64 rng(44);
    TolerancePolicy pol;
    for (int trial = 0; trial < 15; ++trial) {
        SelfadjointPair p = gen_selfadjoint_pair(pair_spec(1000 + static_cast<std::uint64_t>(trial), Kind::Q));
        LinearMap c = random_invertible(rng, p.form.dim(), Kind::Q);
        MultiForm g2 = change_basis(p.form, c);
        LinearMap tau2 = inverse(c, pol) * p.tau * c;
        CHECK(is_selfadjoint(p.form, p.tau, pol).ok);
        CHECK(is_selfadjoint(g2, tau2, pol).ok);
    }
}

TEST_CASE("polynomial closure along random polynomials") {
    SplitMix64 rng(45);
    TolerancePolicy pol;
    for (int trial = 0; trial < 20; ++trial) {
        SelfadjointPair p = gen_selfadjoint_pair(pair_spec(2000 + static_cast<std::uint64_t>(trial), Kind::Q));
        std::vector<Scalar> cs;
        int deg = static_cast<int>(rng.next_int(0, 5));
        for (int i = 0; i <= deg; ++i) cs.push_back(Scalar::from_int(rng.next_int(-2, 2), Kind::Q));
        if (cs.back().is_zero()) cs.back() = Scalar::rational(1);
        CHECK(polynomial_closure(p.form, p.tau, Poly::from_coeffs(cs), pol));
    }
    // the trivial polynomials
    SelfadjointPair p = gen_selfadjoint_pair(pair_spec(3000, Kind::Q));
    CHECK(polynomial_closure(p.form, p.tau, Poly::constant(Scalar::rational(4)), pol));
    std::vector<Scalar> sq = {Scalar::rational(1), Scalar::rational(0), Scalar::rational(1)};
    CHECK(polynomial_closure(p.form, p.tau, Poly::from_coeffs(sq), pol));
}

TEST_CASE("block splitting returns the visible blocks in the trivial basis") {
    SplitMix64 rng(46);
    TolerancePolicy pol;
    MultiForm g1 = random_form(rng, 3, 2, Kind::Q);
    MultiForm g2 = random_form(rng, 3, 1, Kind::Q);
    MultiForm g = direct_sum(g1, g2);
    LinearMap tau = LinearMap::zeros(3, 3, Kind::Q);
    tau.at(0, 0) = Scalar::rational(2);
    tau.at(1, 1) = Scalar::rational(2);
    tau.at(2, 2) = Scalar::rational(3);
    SpectralSplit split = spectral_split(tau, SplitMode::Real);
    Decomposition d = direct_sum_from_split(g, split, pol);
    REQUIRE(d.blocks.size() == 2);
    CHECK(d.blocks[0].cols() == 2);
    CHECK(d.blocks[1].cols() == 1);
}

TEST_CASE("single spectral group returns the whole space") {
    SplitMix64 rng(47);
    TolerancePolicy pol;
    MultiForm g = random_form(rng, 3, 2, Kind::Q);
    LinearMap tau = LinearMap::identity(2, Kind::Q).scaled(Scalar::rational(5));
    SpectralSplit split = spectral_split(tau, SplitMode::Real);
    Decomposition d = direct_sum_from_split(g, split, pol);
    REQUIRE(d.blocks.size() == 1);
    CHECK(d.blocks[0].cols() == 2);
}

TEST_CASE("mixed coefficients vanish after conjugation, exact and float") {
    TolerancePolicy pol;
    for (int trial = 0; trial < 20; ++trial) {
        Kind kind = trial % 2 == 0 ? Kind::Q : Kind::R64;
        GenSpec spec = pair_spec(4000 + static_cast<std::uint64_t>(trial), kind);
        spec.conjugate = true;
        SelfadjointPair p = gen_selfadjoint_pair(spec);
        SpectralSplit split = spectral_split(p.tau, SplitMode::Real);
        double max_mixed = 0.0;
        Decomposition d = direct_sum_from_split(p.form, split, pol, &max_mixed);
        // dims recovered regardless of the hiding basis
        std::vector<int> dims;
        for (const auto& b : d.blocks) dims.push_back(b.cols());
        std::sort(dims.begin(), dims.end());
        CHECK(dims == std::vector<int>{1, 2});
        if (kind == Kind::Q) CHECK(max_mixed == 0.0);
        else CHECK(max_mixed < 1e-9);
    }
}

TEST_CASE("a non-selfadjoint pairing trips the mixed-block alarm") {
    SplitMix64 rng(48);
    TolerancePolicy pol;
    // tau with distinct eigenvalues but no compatibility with g
    for (int trial = 0; trial < 20; ++trial) {
        MultiForm g = random_form(rng, 3, 2, Kind::Q);
        LinearMap tau = LinearMap::from_rows(Kind::Q, {{2, 0}, {0, 3}});
        if (is_selfadjoint(g, tau, pol).ok) continue;  // dense g: essentially never
        SpectralSplit split = spectral_split(tau, SplitMode::Real);
        CHECK_THROWS_AS(direct_sum_from_split(g, split, pol), MixedBlockNonzero);
        return;
    }
    FAIL("every random form was selfadjoint for a generic diagonal, which is absurd");
}
