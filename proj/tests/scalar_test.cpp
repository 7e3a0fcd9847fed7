#include <doctest.h>

#include "multiform/gen.hpp"
#include "multiform/scalar.hpp"

using namespace multiform;

TEST_CASE("approx_eq structural identity and canonical form") {
    TolerancePolicy pol;
    CHECK(Scalar::approx_eq(Scalar::rational(1, 2), Scalar::rational(1, 2), pol));
    // unreduced input canonicalizes on construction
    CHECK(Scalar::rational(2, 4) == Scalar::rational(1, 2));
    CHECK(Scalar::rational(1, -2) == Scalar::rational(-1, 2));
}

TEST_CASE("approx_eq absolute tolerance window") {
    TolerancePolicy pol{1e-9, 1e-9};
    CHECK(Scalar::approx_eq(Scalar::real(0.0), Scalar::real(1e-12), pol));
    CHECK(!Scalar::approx_eq(Scalar::real(0.0), Scalar::real(1e-6), pol));
    CHECK_THROWS_AS(Scalar::approx_eq(Scalar::real(0.0), Scalar::rational(0), pol), KindMismatch);
}

TEST_CASE("canonicalization is idempotent across arithmetic") {
    SplitMix64 rng(7);
    for (int i = 0; i < 200; ++i) {
        Scalar a = Scalar::rational(rng.next_int(-20, 20), rng.next_int(1, 9));
        Scalar b = Scalar::rational(rng.next_int(-20, 20), rng.next_int(1, 9));
        Scalar s = a + b;
        // re-canonicalizing the parts changes nothing
        CHECK(s == Scalar::rational(s.rational_value()));
    }
}

TEST_CASE("field axioms on random exact scalars") {
    SplitMix64 rng(11);
    for (int i = 0; i < 300; ++i) {
        Scalar a = Scalar::gaussian(mpq_class(rng.next_int(-9, 9), rng.next_int(1, 7)),
                                    mpq_class(rng.next_int(-9, 9), rng.next_int(1, 7)));
        Scalar b = Scalar::gaussian(mpq_class(rng.next_int(-9, 9), rng.next_int(1, 7)),
                                    mpq_class(rng.next_int(-9, 9), rng.next_int(1, 7)));
        Scalar c = Scalar::gaussian(mpq_class(rng.next_int(-9, 9), rng.next_int(1, 7)),
                                    mpq_class(rng.next_int(-9, 9), rng.next_int(1, 7)));
        CHECK((a + b) + c == a + (b + c));
        CHECK(a * (b + c) == a * b + a * c);
        CHECK((a * b) * c == a * (b * c));
        if (!a.is_zero()) CHECK(a * a.inverse() == Scalar::one(Kind::Qi));
    }
}

TEST_CASE("nth_root exact rationals") {
    auto r = Scalar::nth_root(Scalar::rational(8), 3);
    REQUIRE(r.has_value());
    CHECK(*r == Scalar::rational(2));

    CHECK(!Scalar::nth_root(Scalar::rational(2), 2).has_value());  // sqrt(2) leaves Q

    auto neg = Scalar::nth_root(Scalar::rational(-27), 3);
    REQUIRE(neg.has_value());
    CHECK(*neg == Scalar::rational(-3));
    CHECK(!Scalar::nth_root(Scalar::rational(-4), 2).has_value());

    auto frac = Scalar::nth_root(Scalar::rational(9, 4), 2);
    REQUIRE(frac.has_value());
    CHECK(*frac == Scalar::rational(3, 2));

    CHECK_THROWS_AS(Scalar::nth_root(Scalar::rational(0), 2), Error);
}

TEST_CASE("nth_root principal complex branch") {
    auto r = Scalar::nth_root(Scalar::cplx({-1.0, 0.0}), 2);
    REQUIRE(r.has_value());
    CHECK(r->complex_value().real() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(r->complex_value().imag() == doctest::Approx(1.0));
}

TEST_CASE("nth_root exact Gaussian rationals") {
    // (2+i)^2 = 3+4i
    auto r = Scalar::nth_root(Scalar::gaussian(3, 4), 2);
    REQUIRE(r.has_value());
    CHECK(*r == Scalar::gaussian(2, 1));

    // sqrt(-2^24) = 2^12 i
    mpq_class big(-1);
    for (int i = 0; i < 24; ++i) big *= 2;
    auto r2 = Scalar::nth_root(Scalar::gaussian(big, 0), 2);
    REQUIRE(r2.has_value());
    CHECK(*r2 == Scalar::gaussian(0, mpq_class(1) << 12));

    // (1+i)^4 = -4: roots of negative reals can exist in Q(i)
    auto r3 = Scalar::nth_root(Scalar::gaussian(-4, 0), 4);
    REQUIRE(r3.has_value());
    CHECK(*r3 == Scalar::gaussian(1, 1));

    // e^{i pi/4} itself is not Gaussian rational
    CHECK(!Scalar::nth_root(Scalar::gaussian(-1, 0), 4).has_value());
}

TEST_CASE("nth_root float roundtrip property") {
    SplitMix64 rng(13);
    TolerancePolicy pol{1e-9, 1e-12};
    for (int i = 0; i < 1000; ++i) {
        int k = static_cast<int>(rng.next_int(1, 5));
        if (i % 2 == 0) {
            double x = 0.1 + 5.0 * rng.next_double();
            Scalar a = Scalar::real(x);
            auto r = Scalar::nth_root(a, k);
            REQUIRE(r.has_value());
            Scalar back = *r;
            for (int j = 1; j < k; ++j) back = back * *r;
            CHECK(Scalar::approx_eq(back, a, pol));
        } else {
            Scalar a = Scalar::cplx({rng.next_double() * 4 - 2, rng.next_double() * 4 - 2});
            if (a.is_zero()) continue;
            auto r = Scalar::nth_root(a, k);
            REQUIRE(r.has_value());
            Scalar back = *r;
            for (int j = 1; j < k; ++j) back = back * *r;
            CHECK(Scalar::approx_eq(back, a, pol));
        }
    }
}

TEST_CASE("string round trip, all kinds") {
    for (const char* s : {"-7/3", "0", "12"}) {
        Scalar v = Scalar::parse(s, Kind::Q);
        CHECK(Scalar::parse(v.str(), Kind::Q) == v);
    }
    Scalar g = Scalar::gaussian(mpq_class(1, 2), mpq_class(-3, 4));
    CHECK(g.str() == "1/2-3/4*i");
    CHECK(Scalar::parse(g.str(), Kind::Qi) == g);
    CHECK(Scalar::parse("5", Kind::Qi) == Scalar::gaussian(5, 0));

    Scalar d = Scalar::real(-1.25e-7);
    CHECK(Scalar::parse(d.str(), Kind::R64) == d);
    Scalar z = Scalar::cplx({1.5e6, -2.25});
    CHECK(Scalar::parse(z.str(), Kind::C64) == z);

    CHECK_THROWS_AS(Scalar::parse("zzz", Kind::Q), ParseError);
    CHECK_THROWS_AS(Scalar::parse("1/0", Kind::Q), ParseError);
}

TEST_CASE("float construction rejects non-finite values") {
    CHECK_THROWS_AS(Scalar::real(std::numeric_limits<double>::infinity()), Error);
    CHECK_THROWS_AS(Scalar::real(std::numeric_limits<double>::quiet_NaN()), Error);
}
