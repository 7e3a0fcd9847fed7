#include <doctest.h>

#include "multiform/gen.hpp"
#include "multiform/json_io.hpp"
#include "multiform/selfadjoint.hpp"

using namespace multiform;

namespace {

GenSpec witness_spec(std::uint64_t seed, Kind kind) {
    GenSpec spec;
    spec.seed = seed;
    spec.arity = 3;
    spec.kind = kind;
    spec.block_dims = {2, 2};
    if (kind == Kind::Q || kind == Kind::R64) {
        spec.eigenvalues = {EigenvalueSpec::real_value(Scalar::from_int(4, kind)),
                            EigenvalueSpec::real_value(Scalar::from_int(-9, kind))};
    } else {
        spec.eigenvalues = {EigenvalueSpec::real_value(Scalar::from_int(4, kind)),
                            EigenvalueSpec::real_value(Scalar::from_int(-9, kind))};
    }
    return spec;
}

}  // namespace

TEST_CASE("same seed gives bit-identical witnesses") {
    GenSpec spec = witness_spec(42, Kind::Q);
    Witness a = gen_witness(spec);
    Witness b = gen_witness(spec);
    CHECK(a.source == b.source);
    CHECK(a.target == b.target);
    REQUIRE(a.maps.size() == b.maps.size());
    for (std::size_t i = 0; i < a.maps.size(); ++i) CHECK(a.maps[i] == b.maps[i]);
    // serialized fixtures are likewise identical
    CHECK(form_to_json(a.source).dump() == form_to_json(b.source).dump());

    Witness c = gen_witness(witness_spec(43, Kind::Q));
    CHECK(!(a.source == c.source));
}

TEST_CASE("generated witnesses satisfy their defining identity") {
    TolerancePolicy pol;
    for (std::uint64_t seed = 1; seed <= 15; ++seed) {
        for (Kind kind : {Kind::Q, Kind::R64, Kind::C64}) {
            GenSpec spec = witness_spec(seed, kind);
            Witness w = gen_witness(spec);
            CHECK(check_witness(w, pol).ok);
            CHECK(w.source.dim() == 4);
        }
    }
}

TEST_CASE("all-zero exponents give a plain congruence") {
    // with one block and eigenvalue 1, tau = I and every map equals phi
    GenSpec spec;
    spec.seed = 7;
    spec.arity = 3;
    spec.kind = Kind::Q;
    spec.block_dims = {3};
    spec.eigenvalues = {EigenvalueSpec::real_value(Scalar::rational(1))};
    spec.conjugate = false;
    Witness w = gen_witness(spec);
    for (std::size_t i = 1; i < w.maps.size(); ++i) CHECK(w.maps[i] == w.maps[0]);
}

TEST_CASE("pair eigenvalue groups produce valid real witnesses") {
    TolerancePolicy pol;
    for (std::uint64_t seed = 100; seed < 110; ++seed) {
        GenSpec spec;
        spec.seed = seed;
        spec.arity = 3;
        spec.kind = Kind::Q;
        spec.block_dims = {2, 1};
        spec.eigenvalues = {EigenvalueSpec::conjugate_pair(Scalar::rational(0), Scalar::rational(1)),
                            EigenvalueSpec::real_value(Scalar::rational(4))};
        Witness w = gen_witness(spec);
        CHECK(check_witness(w, pol).ok);
    }
}

TEST_CASE("generator rejects malformed specs") {
    GenSpec spec;
    spec.arity = 3;
    spec.kind = Kind::Q;
    spec.block_dims = {2};
    spec.eigenvalues = {EigenvalueSpec::real_value(Scalar::rational(0))};
    CHECK_THROWS_AS(gen_witness(spec), Error);

    spec.eigenvalues = {EigenvalueSpec::conjugate_pair(Scalar::rational(1), Scalar::rational(1))};
    spec.block_dims = {3};  // odd dimension cannot carry a pair
    CHECK_THROWS_AS(gen_witness(spec), Error);

    spec.block_dims = {2, 2};
    spec.eigenvalues = {EigenvalueSpec::real_value(Scalar::rational(3)),
                        EigenvalueSpec::real_value(Scalar::rational(3))};
    CHECK_THROWS_AS(gen_witness(spec), Error);
}

TEST_CASE("selfadjoint pairs pass their own check across kinds") {
    TolerancePolicy pol;
    for (Kind kind : {Kind::Q, Kind::R64}) {
        GenSpec spec;
        spec.seed = 5;
        spec.arity = 3;
        spec.kind = kind;
        spec.block_dims = {2, 2};
        spec.eigenvalues = {EigenvalueSpec::conjugate_pair(Scalar::from_int(1, kind), Scalar::from_int(2, kind)),
                            EigenvalueSpec::real_value(Scalar::from_int(3, kind))};
        SelfadjointPair p = gen_selfadjoint_pair(spec);
        CHECK(is_selfadjoint(p.form, p.tau, pol, true).ok);
    }
}

TEST_CASE("decomposable instances validate and stay deterministic") {
    TolerancePolicy pol;
    GenSpec spec;
    spec.seed = 11;
    spec.arity = 3;
    spec.kind = Kind::Q;
    spec.block_dims = {2, 1, 2};
    spec.radical_dim = 2;
    DecomposableInstance a = gen_decomposable(spec);
    DecomposableInstance b = gen_decomposable(spec);
    CHECK(a.form == b.form);
    CHECK(a.hidden_perm == b.hidden_perm);
    validate_decomposition(a.form, a.d1, pol, true);
    validate_decomposition(a.form, a.d2, pol, true);
    CHECK(a.form.dim() == 7);
    CHECK(a.d2.blocks.size() == 3);
    // construction blocks are support-connected, so the support splitter
    // sees exactly the construction blocks in the d1 basis
    Decomposition sup = support_blocks(a.form, pol);
    CHECK(sup.blocks.size() == 3);
    CHECK(sup.radical_basis.cols() == 2);
}
