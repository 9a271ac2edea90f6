#include <doctest.h>

#include <set>

#include "endoscope/endo.hpp"

using namespace endoscope;
using chars::AddChar;
using chars::MultChar;
using chars::U1Char;
using cyclo::CycRing;
using endo::Parity;
using gf::FqElem;
using gf::make_tower;
using gf::QuadExt;
using padic::LocalRing;
using sscchar::SscU;

TEST_SUITE_BEGIN("endo");

namespace {
CycRing task_ring(const QuadExt& T) {
    return CycRing(cyclo::lcm_order({T.base().p(), T.base().q() + 1}));
}
} // namespace

TEST_CASE("parity constants zeta_omega") {
    for (int64_t p : {3, 5, 7}) {
        QuadExt T = make_tower(p, 1, 2);
        MultChar triv = chars::omega_from_u1(U1Char(T, 0));
        CHECK(endo::parity_zeta(triv, Parity::Even, T) == -1);
        CHECK(endo::parity_zeta(triv, Parity::Odd, T) == 1);
        for (auto& op : chars::enumerate_u1_chars(T)) {
            MultChar omega = chars::omega_from_u1(op);
            int we = endo::parity_zeta(omega, Parity::Even, T);
            int wo = endo::parity_zeta(omega, Parity::Odd, T);
            CHECK(we * we == 1);
            CHECK(we == -wo);
            // zeta_omega = -omega(eps) (even), +omega(eps) (odd)
            int s = omega.at(T.eps()).sign();
            CHECK(we == -s);
            CHECK(wo == s);
            // and omega(eps) = omega'(-1)
            CHECK(s == op.sign_at_minus_one());
        }
        // non-self-dual omega rejected
        CHECK_THROWS_AS(endo::parity_zeta(MultChar(T.ext(), 1), Parity::Even, T), ConfigError);
    }
}

TEST_CASE("parity_zeta does not depend on auxiliary generator choices") {
    // omega(eps) is unchanged when eps is replaced by -eps (the other square
    // root) or by any k_F^x multiple: conjugate self-duality kills the factor
    for (int64_t p : {3, 5, 7}) {
        QuadExt T = make_tower(p, 1, 2);
        for (auto& op : chars::enumerate_u1_chars(T)) {
            MultChar omega = chars::omega_from_u1(op);
            int s = omega.at(T.eps()).sign();
            CHECK(omega.at(-T.eps()).sign() == s);
            for (int64_t t = 1; t < p; ++t)
                CHECK(omega.at(T.embed(T.base_elem(t)) * T.eps()).sign() == s);
        }
    }
}

TEST_CASE("lifting maps of the two main formulas") {
    QuadExt T = make_tower(3, 1, 2);
    AddChar psi(T.base(), 1);
    // even, b=1, omega' trivial, kappa=+1 -> (1, -1, trivial omega)
    SscU se(T, T.base_elem(1), U1Char(T, 0), true, 1, psi);
    auto le = endo::lift(se, 1);
    CHECK(le.target.a == T.ext_one());
    CHECK(le.target.zeta.sign() == -1);
    CHECK(le.target.omega.trivial());
    // odd, b=1, omega' trivial, kappa=-1 -> (eps, -1, trivial omega)
    SscU so(T, T.base_elem(1), U1Char(T, 0), false, 1, psi);
    auto lo = endo::lift(so, -1);
    CHECK(lo.target.a == T.eps());
    CHECK(lo.target.zeta.sign() == -1);
    // kappa = +1 vs -1: same (a, omega), zeta negated
    for (bool even : {true, false}) {
        for (int64_t bv = 1; bv < 3; ++bv)
            for (auto& op : chars::enumerate_u1_chars(T)) {
                SscU s(T, T.base_elem(bv), op, even, 1, psi);
                auto l1 = endo::lift(s, 1);
                auto l2 = endo::lift(s, -1);
                CHECK(l1.target.a == l2.target.a);
                CHECK(l1.target.omega.j == l2.target.omega.j);
                CHECK(l1.target.zeta.sign() == -l2.target.zeta.sign());
                CHECK(endo::kappa_bookkeeping(s).passed());
            }
    }
}

TEST_CASE("lift is injective on (b, omega') for fixed kappa and parity") {
    for (int64_t p : {3, 5}) {
        QuadExt T = make_tower(p, 1, 2);
        AddChar psi(T.base(), 1);
        for (bool even : {true, false}) {
            for (int kappa : {1, -1}) {
                std::set<std::tuple<int64_t, int, int64_t>> targets;
                for (int64_t bv = 1; bv < p; ++bv)
                    for (auto& op : chars::enumerate_u1_chars(T)) {
                        SscU s(T, T.base_elem(bv), op, even, 1, psi);
                        auto l = endo::lift(s, kappa);
                        targets.insert({l.target.a.v, l.target.zeta.sign(), l.target.omega.j});
                    }
                CHECK(targets.size() == size_t((p - 1) * (p + 1)));
            }
        }
    }
}

TEST_CASE("norm witness certificates") {
    for (int64_t p : {3, 5}) {
        QuadExt T = make_tower(p, 1, 2);
        LocalRing LR(T, 4);
        for (auto parity : {Parity::Even, Parity::Odd}) {
            for (int n : {1, 2}) {
                for (int64_t uv = 1; uv < p; ++uv) {
                    for (bool twisted : {false, true}) {
                        auto w = endo::norm_witness(parity, n, T.base_elem(uv),
                                                    T.ext_elem(T.ext().generator()), twisted, LR);
                        CHECK(w.theta_commutes);
                        CHECK(w.unitary);
                        CHECK(w.regular_elliptic);
                        CHECK(w.generic);
                        CHECK(w.twisted_identity);
                        // expected components (2,...,2,2u) resp. (2,...,2,2 eps^-1 u)
                        FqElem two = T.embed(T.base_elem(T.base().from_int(2)));
                        for (int i = 0; i < n; ++i) CHECK(w.h_comps[size_t(i)] == two);
                        FqElem corner = (parity == Parity::Even)
                                            ? two * T.embed(T.base_elem(uv))
                                            : two * T.embed(T.base_elem(uv)) * T.eps().inv();
                        CHECK(w.h_comps.back() == corner);
                    }
                }
            }
        }
    }
}

TEST_CASE("ECR end to end at q = 3, n = 1, all b and omega'") {
    QuadExt T = make_tower(3, 1, 2);
    LocalRing LR(T, 4);
    CycRing R = task_ring(T);
    AddChar psi(T.base(), 1);
    for (auto parity : {Parity::Even, Parity::Odd}) {
        for (int64_t bv = 1; bv < 3; ++bv) {
            for (auto& op : chars::enumerate_u1_chars(T)) {
                auto reports =
                    endo::verify_ecr(parity, 1, T, T.base_elem(bv), op, 1, LR, R, psi);
                REQUIRE(reports.size() == 2);
                for (const auto& rep : reports) {
                    INFO(rep.family, " b=", bv, " omega'=", op.j);
                    CHECK(rep.verdict);
                    CHECK(rep.rows.size() == size_t(2 * 8)); // all u, all Teichmueller z
                }
            }
        }
    }
}

TEST_CASE("ECR row values match the published Kloosterman forms") {
    QuadExt T = make_tower(3, 1, 2);
    LocalRing LR(T, 4);
    CycRing R = task_ring(T);
    AddChar psi(T.base(), 1);
    // even, b=1, omega' trivial: rows carry -Kl^{1,0}_{4u} = -Kl_u
    auto reports = endo::verify_ecr(Parity::Even, 1, T, T.base_elem(1), U1Char(T, 0), 1, LR, R,
                                    psi);
    for (const auto& row : reports[0].rows) {
        auto kl = sums::kloosterman(
            sums::KlSpec(T, psi, 1, 0, T.base_elem(T.base().from_int(4)) * row.u), R);
        CHECK(row.lhs_closed == -kl);
    }
    // odd, b=1: rows carry Kl^{1,1}_{8u}
    auto odd_reports = endo::verify_ecr(Parity::Odd, 1, T, T.base_elem(1), U1Char(T, 0), 1, LR, R,
                                        psi);
    for (const auto& row : odd_reports[0].rows) {
        auto kl = sums::kloosterman(
            sums::KlSpec(T, psi, 1, 1, T.base_elem(T.base().from_int(8)) * row.u), R);
        CHECK(row.lhs_closed == kl);
    }
    // kappa = -1 is rejected by the analytic path
    CHECK_THROWS_AS(endo::verify_ecr(Parity::Even, 1, T, T.base_elem(1), U1Char(T, 0), -1, LR, R,
                                     psi),
                    ConfigError);
}

TEST_CASE("fourier uniqueness witnesses") {
    for (int64_t p : {3, 5}) {
        QuadExt T = make_tower(p, 1, 2);
        CycRing R(T.base().p());
        AddChar psi(T.base(), 1);
        for (auto parity : {Parity::Even, Parity::Odd})
            for (int n : {1, 2}) CHECK(endo::fourier_uniqueness_check(parity, n, T, psi, R).passed());
    }
}


TEST_CASE("norm witness certificates for every central z at both precisions") {
    QuadExt T = make_tower(3, 1, 2);
    LocalRing LR4(T, 4), LR6(T, 6);
    for (auto parity : {Parity::Even, Parity::Odd}) {
        for (int64_t uv = 1; uv < 3; ++uv) {
            for (int64_t zv = 1; zv < 9; ++zv) {
                for (bool twisted : {false, true}) {
                    auto w4 = endo::norm_witness(parity, 1, T.base_elem(uv), T.ext_elem(zv),
                                                 twisted, LR4);
                    auto w6 = endo::norm_witness(parity, 1, T.base_elem(uv), T.ext_elem(zv),
                                                 twisted, LR6);
                    CHECK(w4.all_pass());
                    CHECK(w6.all_pass());
                    CHECK(w4.h_comps == w6.h_comps);
                    CHECK(w4.h_central == w6.h_central);
                    // central part: z/c(z), negated for the twisted family
                    FqElem z = T.ext_elem(zv);
                    FqElem expect = z / T.conj(z);
                    if (twisted) expect = -expect;
                    CHECK(w4.h_central == expect);
                }
            }
        }
    }
}


TEST_CASE("ECR smoke test on the degree-two tower GF(81)/GF(9)") {
    QuadExt T = make_tower(3, 2, 2);
    LocalRing LR(T, 4);
    CycRing R(cyclo::lcm_order({3, T.base().q() + 1}));
    AddChar psi(T.base(), 1);
    auto reps = endo::verify_ecr(Parity::Even, 1, T, T.base_elem(1), U1Char(T, 1), 1, LR, R, psi);
    for (const auto& rep : reps) {
        CHECK(rep.verdict);
        CHECK(rep.rows.size() == size_t(8 * 80));
    }
}

TEST_SUITE_END();
