#include <doctest.h>

#include "endoscope/chars.hpp"
#include "endoscope/cyclo.hpp"

using namespace endoscope;
using chars::AddChar;
using chars::MultChar;
using chars::U1Char;
using cyclo::CycRing;
using gf::make_tower;
using gf::QuadExt;

TEST_SUITE_BEGIN("chars");

TEST_CASE("additive character values on GF(3)") {
    QuadExt t = make_tower(3, 1, 2);
    CycRing R(3);
    AddChar psi(t.base(), 1);
    CHECK(psi.eval(R, t.base_elem(0)) == R.one());
    CHECK(psi.eval(R, t.base_elem(1)) == R.root(1)); // psi(1) = zeta_3
    // additivity, exhaustively
    for (int64_t a = 0; a < 3; ++a)
        for (int64_t b = 0; b < 3; ++b)
            CHECK(psi.eval(R, t.base_elem(t.base().add(a, b))) ==
                  psi.eval(R, t.base_elem(a)) * psi.eval(R, t.base_elem(b)));
}

TEST_CASE("multiplicative character values and rejection at zero") {
    QuadExt t = make_tower(3, 1, 2);
    CycRing R(8);
    MultChar triv(t.ext(), 0);
    for (int64_t v = 1; v < 9; ++v) CHECK(triv.eval(R, t.ext_elem(v)) == R.one());
    MultChar full(t.ext(), 1);
    CHECK_THROWS_AS(full.at(t.ext_elem(0)), ConfigError);
    // multiplicativity, exhaustively
    for (int64_t a = 1; a < 9; ++a)
        for (int64_t b = 1; b < 9; ++b)
            CHECK(full.eval(R, t.ext_elem(t.ext().mul(a, b))) ==
                  full.eval(R, t.ext_elem(a)) * full.eval(R, t.ext_elem(b)));
}

TEST_CASE("orthogonality sums vanish for nontrivial characters") {
    for (int64_t p : {3, 5}) {
        QuadExt t = make_tower(p, 1, 2);
        const auto& kF = t.base();
        CycRing R(cyclo::lcm_order({p, kF.q() - 1}));
        for (int64_t b = 1; b < p; ++b) {
            AddChar psi(kF, b);
            auto s = R.zero();
            for (int64_t v = 0; v < kF.q(); ++v) s = s + psi.eval(R, t.base_elem(v));
            CHECK(s.is_zero());
        }
        for (int64_t j = 1; j < kF.q() - 1; ++j) {
            MultChar chi(kF, j);
            auto s = R.zero();
            for (int64_t v = 1; v < kF.q(); ++v) s = s + chi.eval(R, t.base_elem(v));
            CHECK(s.is_zero());
        }
    }
}

TEST_CASE("character counts") {
    QuadExt t = make_tower(3, 1, 2);
    CHECK(chars::enumerate_mult_chars(t.base()).size() == 2);
    CHECK(chars::enumerate_mult_chars(t.ext()).size() == 8);
    CHECK(chars::enumerate_u1_chars(t).size() == 4);
}

TEST_CASE("conjugate self-duality: both criteria agree on every character") {
    for (int64_t p : {3, 5, 7}) {
        QuadExt t = make_tower(p, 1, 2);
        int64_t q = t.base().q();
        int self_dual = 0;
        for (auto& omega : chars::enumerate_mult_chars(t.ext())) {
            bool sd = chars::is_conjugate_self_dual(omega, t);
            if (sd) ++self_dual;
            // self-dual <=> index divisible by q - 1
            CHECK(sd == (omega.j % (q - 1) == 0));
        }
        CHECK(self_dual == q + 1);
    }
}

TEST_CASE("full-order character of GF(9)^x is not self-dual") {
    QuadExt t = make_tower(3, 1, 2);
    MultChar omega(t.ext(), 1);
    CHECK_FALSE(chars::is_conjugate_self_dual(omega, t));
    MultChar triv(t.ext(), 0);
    CHECK(chars::is_conjugate_self_dual(triv, t));
}

TEST_CASE("omega <-> omega' dictionary") {
    for (int64_t p : {3, 5}) {
        QuadExt t = make_tower(p, 1, 2);
        int64_t q = t.base().q();
        for (auto& omega_p : chars::enumerate_u1_chars(t)) {
            MultChar omega = chars::omega_from_u1(omega_p);
            // produced omega is conjugate self-dual and trivial on k_F^x
            CHECK(chars::is_conjugate_self_dual(omega, t));
            // defining identity omega(z) = omega'(z / c(z)) on all of k_E^x
            CycRing R(q + 1);
            for (int64_t v = 1; v < t.ext().q(); ++v) {
                gf::FqElem z = t.ext_elem(v);
                gf::FqElem w = z / t.conj(z);
                CHECK(omega.eval(R, z) == omega_p.eval(R, w));
            }
            // round trip
            U1Char back = chars::u1_from_omega(omega, t);
            CHECK(back.j == omega_p.j);
        }
        // inverse rejects non-self-dual omega
        CHECK_THROWS_AS(chars::u1_from_omega(MultChar(t.ext(), 1), t), ConfigError);
    }
}

TEST_CASE("omega'(-1) equals omega(eps): the parity bookkeeping identity") {
    // eps / c(eps) = -1 because Tr(eps) = 0, so omega(eps) = omega'(-1)
    for (int64_t p : {3, 5, 7}) {
        QuadExt t = make_tower(p, 1, 2);
        CHECK(t.eps() / t.conj(t.eps()) == -t.ext_one());
        CycRing R(t.base().q() + 1);
        for (auto& omega_p : chars::enumerate_u1_chars(t)) {
            MultChar omega = chars::omega_from_u1(omega_p);
            int sign = omega.at(t.eps()).sign();
            CHECK(sign == omega_p.sign_at_minus_one());
            CHECK(omega.eval(R, t.eps()) ==
                  omega_p.eval(R, -t.ext_one()));
        }
    }
}

TEST_CASE("order-4 U(1) character pulls back to an order-4 self-dual omega at q=3") {
    QuadExt t = make_tower(3, 1, 2);
    U1Char op(t, 1); // generator character of U(1), order 4
    MultChar omega = chars::omega_from_u1(op);
    CHECK(omega.order() == 4);
    for (int64_t v = 1; v < 3; ++v) CHECK(omega.at(t.embed(t.base_elem(v))).is_one());
}

TEST_SUITE_END();
