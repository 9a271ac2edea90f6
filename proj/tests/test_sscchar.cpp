#include <doctest.h>

#include <random>

#include "endoscope/sscchar.hpp"

using namespace endoscope;
using chars::AddChar;
using chars::MultChar;
using chars::U1Char;
using cyclo::CycNum;
using cyclo::CycRing;
using cyclo::RootOfUnity;
using gf::FqElem;
using gf::make_tower;
using gf::QuadExt;
using padic::LocalMatrix;
using padic::LocalRing;
using sscchar::Method;
using sscchar::SscGL;
using sscchar::SscU;
using sscchar::TorusFamily;

TEST_SUITE_BEGIN("sscchar");

namespace {

CycRing task_ring(const QuadExt& T) {
    return CycRing(cyclo::lcm_order({T.base().p(), T.ext().q() - 1}));
}

SscGL pi_even(const QuadExt& T, int zeta_sign, int64_t omega_u1_idx = 0) {
    MultChar omega = chars::omega_from_u1(U1Char(T, omega_u1_idx));
    return SscGL(T, T.ext_one(), zeta_sign > 0 ? RootOfUnity::one() : RootOfUnity::minus_one(),
                 omega, AddChar(T.base(), 1));
}

SscGL pi_odd(const QuadExt& T, int zeta_sign, int64_t omega_u1_idx = 0) {
    MultChar omega = chars::omega_from_u1(U1Char(T, omega_u1_idx));
    return SscGL(T, T.eps(), zeta_sign > 0 ? RootOfUnity::one() : RootOfUnity::minus_one(), omega,
                 AddChar(T.base(), 1));
}

std::vector<FqElem> witness_comps_even(const QuadExt& T, int n, FqElem u) {
    std::vector<FqElem> g(size_t(2 * n), T.ext_one());
    g.back() = T.embed(u);
    return g;
}

std::vector<FqElem> witness_comps_odd(const QuadExt& T, int n, FqElem u) {
    std::vector<FqElem> g(size_t(2 * n + 1), T.ext_one());
    g.back() = T.eps().inv() * T.embed(u);
    return g;
}

CycNum kl(const QuadExt& T, const CycRing& R, int n, int m, FqElem a) {
    return sums::kloosterman(sums::KlSpec(T, AddChar(T.base(), 1), n, m, a), R);
}

} // namespace

TEST_CASE("frozen values for GL(2) over GF(9)/GF(3)") {
    QuadExt T = make_tower(3, 1, 2);
    CycRing R = task_ring(T);
    SscGL pi = pi_even(T, -1);
    // comps (1, u): value -Kl^{1,0}_{4u} = -Kl_u; Kl_1 = 1, Kl_2 = -2
    auto v1 = sscchar::theta_gl_even(witness_comps_even(T, 1, T.base_elem(1)), pi,
                                     Method::Closed, R);
    CHECK(v1.value == R.from_int(-1));
    auto v2 = sscchar::theta_gl_even(witness_comps_even(T, 1, T.base_elem(2)), pi,
                                     Method::Closed, R);
    CHECK(v2.value == R.from_int(2));
    // brute force agrees
    CHECK(sscchar::theta_gl_even(witness_comps_even(T, 1, T.base_elem(1)), pi, Method::Brute, R)
              .value == v1.value);
    CHECK(sscchar::theta_gl_even(witness_comps_even(T, 1, T.base_elem(2)), pi, Method::Brute, R)
              .value == v2.value);
}

TEST_CASE("witness families match the Kloosterman forms, all six evaluators") {
    for (int64_t p : {3, 5}) {
        QuadExt T = make_tower(p, 1, 2);
        CycRing R = task_ring(T);
        const auto& kF = T.base();
        for (int n : {1, 2}) {
            for (int64_t uv = 1; uv < p; ++uv) {
                FqElem u = T.base_elem(uv);
                FqElem pw2 = T.base_elem(kF.pow(kF.from_int(2), 2 * n)); // 2^{2n}
                FqElem pw2o = T.base_elem(kF.pow(kF.from_int(2), 2 * n + 1));
                for (int zs : {1, -1}) {
                    SscGL pe = pi_even(T, zs);
                    SscGL po = pi_odd(T, zs);
                    CycNum zeta = R.eval(pe.zeta);
                    // GL even plain: -Kl^{n,0}_{2^{2n} u}
                    auto ge = witness_comps_even(T, n, u);
                    CycNum expect = -kl(T, R, n, 0, pw2 * u);
                    CHECK(sscchar::theta_gl_even(ge, pe, Method::Closed, R).value == expect);
                    CHECK(sscchar::theta_gl_even(ge, pe, Method::Brute, R).value == expect);
                    // GL even phi: zeta Kl^{n,0}_{2^{2n} u}
                    CycNum expect_phi = zeta * kl(T, R, n, 0, pw2 * u);
                    CHECK(sscchar::theta_gl_even_phi(ge, u, pe, Method::Closed, R).value ==
                          expect_phi);
                    CHECK(sscchar::theta_gl_even_phi(ge, u, pe, Method::Brute, R).value ==
                          expect_phi);
                    // GL odd plain: Kl^{n,1}_{2^{2n+1} u}
                    auto go = witness_comps_odd(T, n, u);
                    CycNum expect_o = kl(T, R, n, 1, pw2o * u);
                    CHECK(sscchar::theta_gl_odd(go, po, Method::Closed, R).value == expect_o);
                    CHECK(sscchar::theta_gl_odd(go, po, Method::Brute, R).value == expect_o);
                    // GL odd phi: zeta Kl^{n,1}_{2^{2n+1} u}
                    CycNum expect_op = zeta * kl(T, R, n, 1, pw2o * u);
                    CHECK(sscchar::theta_gl_odd_phi(go, u, po, Method::Closed, R).value ==
                          expect_op);
                    CHECK(sscchar::theta_gl_odd_phi(go, u, po, Method::Brute, R).value ==
                          expect_op);
                }
                for (int64_t bv = 1; bv < p; ++bv) {
                    FqElem b = T.base_elem(bv);
                    SscU pu_e(T, b, U1Char(T, 1), true, n, AddChar(kF, 1));
                    SscU pu_o(T, b, U1Char(T, 1), false, n, AddChar(kF, 1));
                    FqElem two = T.base_elem(kF.from_int(2));
                    // U even at (2,...,2,2u): -Kl^{n,0}_{2^{2n} u b}
                    std::vector<FqElem> he(size_t(n + 1), T.embed(two));
                    he.back() = T.embed(two * u);
                    CycNum expect_u = -kl(T, R, n, 0, pw2 * u * b);
                    CHECK(sscchar::theta_u_even(he, pu_e, Method::Closed, R).value == expect_u);
                    CHECK(sscchar::theta_u_even(he, pu_e, Method::Brute, R).value == expect_u);
                    // U odd at (2,...,2,2 eps^{-1} u): Kl^{n,1}_{2^{2n+1} u b}
                    std::vector<FqElem> ho(size_t(n + 1), T.embed(two));
                    ho.back() = T.embed(two * u) * T.eps().inv();
                    CycNum expect_uo = kl(T, R, n, 1, pw2o * u * b);
                    CHECK(sscchar::theta_u_odd(ho, pu_o, Method::Closed, R).value == expect_uo);
                    CHECK(sscchar::theta_u_odd(ho, pu_o, Method::Brute, R).value == expect_uo);
                }
            }
        }
    }
}

TEST_CASE("closed equals brute on randomized generic tuples") {
    std::mt19937 rng(2026);
    for (int64_t p : {3, 5}) {
        QuadExt T = make_tower(p, 1, 2);
        CycRing R = task_ring(T);
        std::uniform_int_distribution<int64_t> unit(1, T.ext().q() - 1);
        std::uniform_int_distribution<int64_t> base_unit(1, p - 1);
        for (int n : {1, 2}) {
            int done = 0;
            while (done < 12) {
                std::vector<FqElem> g(size_t(2 * n));
                for (auto& x : g) x = T.ext_elem(unit(rng));
                FqElem u = T.base_elem(base_unit(rng));
                SscGL pe = pi_even(T, done % 2 ? 1 : -1, done % 3);
                try {
                    auto c = sscchar::theta_gl_even(g, pe, Method::Closed, R);
                    auto b = sscchar::theta_gl_even(g, pe, Method::Brute, R);
                    CHECK(c.value == b.value);
                    auto cp = sscchar::theta_gl_even_phi(g, u, pe, Method::Closed, R);
                    auto bp = sscchar::theta_gl_even_phi(g, u, pe, Method::Brute, R);
                    CHECK(cp.value == bp.value);
                    ++done;
                } catch (const ConfigError&) {
                    continue; // non-generic sample
                }
            }
            done = 0;
            while (done < 12) {
                std::vector<FqElem> g(size_t(2 * n + 1));
                for (auto& x : g) x = T.ext_elem(unit(rng));
                FqElem u = T.base_elem(base_unit(rng));
                SscGL po = pi_odd(T, done % 2 ? 1 : -1, done % 3);
                try {
                    auto c = sscchar::theta_gl_odd(g, po, Method::Closed, R);
                    auto b = sscchar::theta_gl_odd(g, po, Method::Brute, R);
                    CHECK(c.value == b.value);
                    auto cp = sscchar::theta_gl_odd_phi(g, u, po, Method::Closed, R);
                    auto bp = sscchar::theta_gl_odd_phi(g, u, po, Method::Brute, R);
                    CHECK(cp.value == bp.value);
                    ++done;
                } catch (const ConfigError&) {
                    continue;
                }
            }
            done = 0;
            while (done < 12) {
                // U side: n-1 free k_E entries, then two k_F entries (even)
                std::vector<FqElem> h(size_t(n + 1));
                for (int i = 0; i < n - 1; ++i) h[size_t(i)] = T.ext_elem(unit(rng));
                h[size_t(n - 1)] = T.embed(T.base_elem(base_unit(rng)));
                h[size_t(n)] = T.embed(T.base_elem(base_unit(rng)));
                SscU pu(T, T.base_elem(base_unit(rng)), U1Char(T, done % (p + 1)), true, n,
                        AddChar(T.base(), 1));
                auto c = sscchar::theta_u_even(h, pu, Method::Closed, R);
                auto b = sscchar::theta_u_even(h, pu, Method::Brute, R);
                CHECK(c.value == b.value);
                // odd: n free k_E entries, trace-zero corner
                std::vector<FqElem> ho(size_t(n + 1));
                for (int i = 0; i < n; ++i) ho[size_t(i)] = T.ext_elem(unit(rng));
                ho[size_t(n)] = T.eps().inv() * T.embed(T.base_elem(base_unit(rng)));
                SscU puo(T, T.base_elem(base_unit(rng)), U1Char(T, done % (p + 1)), false, n,
                         AddChar(T.base(), 1));
                auto co = sscchar::theta_u_odd(ho, puo, Method::Closed, R);
                auto bo = sscchar::theta_u_odd(ho, puo, Method::Brute, R);
                CHECK(co.value == bo.value);
                ++done;
            }
        }
    }
}

TEST_CASE("closed form depends only on the Kloosterman invariant") {
    QuadExt T = make_tower(3, 1, 2);
    CycRing R = task_ring(T);
    SscGL pi = pi_even(T, 1);
    std::vector<FqElem> g1 = {T.ext_elem(4), T.ext_one(), T.ext_elem(7), T.embed(T.base_elem(1))};
    auto inv_of = [&](const std::vector<FqElem>& g) {
        return T.norm(g[0] + T.conj(g[2])) * T.trace(g[1]) * T.trace(g[3]);
    };
    std::mt19937 rng(9);
    std::uniform_int_distribution<int64_t> unit(1, 8);
    int matched = 0;
    while (matched < 5) {
        std::vector<FqElem> g2 = {T.ext_elem(unit(rng)), T.ext_elem(unit(rng)),
                                  T.ext_elem(unit(rng)), T.ext_elem(unit(rng))};
        try {
            if (inv_of(g2) != inv_of(g1)) continue;
            auto v1 = sscchar::theta_gl_even(g1, pi, Method::Closed, R);
            auto v2 = sscchar::theta_gl_even(g2, pi, Method::Closed, R);
            CHECK(v1.value == v2.value);
            ++matched;
        } catch (const ConfigError&) {
            continue;
        }
    }
}

TEST_CASE("genericity violations are rejected") {
    QuadExt T = make_tower(3, 1, 2);
    CycRing R = task_ring(T);
    SscGL po = pi_odd(T, 1);
    std::vector<FqElem> g(size_t(3), T.ext_one());
    g.back() = T.ext_one(); // g_{2n+1} - c(g_{2n+1}) = 0
    CHECK_THROWS_AS(sscchar::theta_gl_odd(g, po, Method::Closed, R), ConfigError);
    SscU pu(T, T.base_elem(1), U1Char(T, 0), false, 1, AddChar(T.base(), 1));
    std::vector<FqElem> h = {T.ext_one(), T.ext_elem(0)};
    CHECK_THROWS_AS(sscchar::theta_u_odd(h, pu, Method::Closed, R), ConfigError);
    // a != 1 must be rejected by the even evaluator
    SscGL bad(T, T.ext_elem(T.ext().generator()), RootOfUnity::one(),
              chars::omega_from_u1(U1Char(T, 0)), AddChar(T.base(), 1));
    CHECK_THROWS_AS(
        sscchar::theta_gl_even(witness_comps_even(T, 1, T.base_elem(1)), bad, Method::Closed, R),
        ConfigError);
}

TEST_CASE("chi_eval on K = Z I+ <phi_{a^-1}>") {
    QuadExt T = make_tower(3, 1, 2);
    CycRing R = task_ring(T);
    LocalRing LR(T, 4);
    for (int N : {2, 3, 4}) {
        bool even = (N % 2 == 0);
        SscGL pi = even ? pi_even(T, -1, 1) : pi_odd(T, -1, 1);
        auto id = LocalMatrix::identity(LR, N);
        CHECK(sscchar::chi_eval(pi, id, R) == R.one());
        // chi(phi_{a^{-1}}) = zeta
        auto ph = padic::phi(LR, pi.a.inv(), N);
        CHECK(sscchar::chi_eval(pi, ph, R) == R.eval(pi.zeta));
        // chi(1 + phi_c) = psi o Tr((N-1) * 1 + a * c)
        FqElem corner = even ? T.embed(T.base_elem(1)) : T.eps().inv() * T.embed(T.base_elem(1));
        auto g = LocalMatrix::identity(LR, N) + padic::phi(LR, corner, N);
        FqElem s = T.ext_elem(0);
        for (int i = 0; i < N - 1; ++i) s = s + T.ext_one();
        s = s + pi.a * corner;
        CHECK(sscchar::chi_eval(pi, g, R) == AddChar(T.base(), 1).eval(R, T.trace(s)));
        // central scaling: chi(z g) = omega(z-bar) chi(g)
        for (int64_t zv : {2, 4, 7}) {
            FqElem z = T.ext_elem(zv);
            auto zg = g.scaled(LR.teich(z));
            CHECK(sscchar::chi_eval(pi, zg, R) ==
                  pi.omega.eval(R, z) * sscchar::chi_eval(pi, g, R));
        }
        // phi scaling: chi(phi g) = zeta chi(g)
        auto pg = ph * g;
        CHECK(sscchar::chi_eval(pi, pg, R) == R.eval(pi.zeta) * sscchar::chi_eval(pi, g, R));
        // outside K: the permutation matrix swapping two basis vectors
        if (N == 2) {
            LocalMatrix w(LR, 2);
            w.at(0, 1) = LR.one();
            w.at(1, 0) = LR.one();
            CHECK_THROWS_AS(sscchar::chi_eval(pi, w, R), ConfigError);
        }
    }
}

TEST_CASE("torus representative validation at n = 1, q = 3, precision 4") {
    QuadExt T = make_tower(3, 1, 2);
    LocalRing LR(T, 4);
    for (auto fam : {TorusFamily::EvenPlain, TorusFamily::EvenPhi, TorusFamily::OddPlain,
                     TorusFamily::OddPhi}) {
        for (int64_t uv = 1; uv < 3; ++uv) {
            auto rep = sscchar::validate_torus_reps(fam, T, 1, T.base_elem(uv), LR);
            INFO("family ", int(fam), " u ", uv, " : ", rep.inputs.dump());
            CHECK(rep.passed());
        }
    }
}


namespace {

// Matrix-level twisted-character sum: enumerate the pinned Teichmueller
// torus, keep the y with y g theta(y)^{-1} in K, and sum chi there.  An
// independent route to Theta_{pi,theta}(g) through the group itself.
CycNum matrix_theta(const SscGL& pi, const LocalMatrix& g, int pinned, const LocalRing& LR,
                    const CycRing& R) {
    const QuadExt& T = *pi.T;
    int N = g.n();
    CycNum total = R.zero();
    std::vector<int64_t> tv(size_t(N + 1), 1);
    std::function<void(int)> loop = [&](int idx) {
        if (idx > N) {
            LocalMatrix y(LR, N);
            for (int i = 1; i <= N; ++i) y.at(i - 1, i - 1) = LR.teich(T.ext_elem(tv[size_t(i)]));
            LocalMatrix m = y * g * padic::theta(y).inverse();
            try {
                total = total + sscchar::chi_eval(pi, m, R);
            } catch (const ConfigError&) {
                // y does not conjugate g into K
            }
            return;
        }
        if (idx == pinned) {
            tv[size_t(idx)] = 1;
            loop(idx + 1);
            return;
        }
        for (int64_t v = 1; v < T.ext().q(); ++v) {
            tv[size_t(idx)] = v;
            loop(idx + 1);
        }
    };
    loop(1);
    return total;
}

} // namespace

TEST_CASE("matrix-level character sum matches the residue evaluators") {
    QuadExt T = make_tower(3, 1, 2);
    CycRing R = task_ring(T);
    LocalRing LR(T, 4);
    int n = 1;
    for (int64_t uv = 1; uv < 3; ++uv) {
        FqElem u = T.base_elem(uv);
        for (int64_t oj : {0, 1}) {
            // even: g = 1 + phi_u, pinned coordinate t_n
            SscGL pe = pi_even(T, -1, oj);
            auto ge = LocalMatrix::identity(LR, 2 * n) + padic::phi(LR, T.embed(u), 2 * n);
            CycNum via_matrix = matrix_theta(pe, ge, n, LR, R);
            CycNum via_residue =
                sscchar::theta_gl_even(witness_comps_even(T, n, u), pe, Method::Brute, R).value;
            CHECK(via_matrix == via_residue);
            // twisted family: phi_u (1 + phi_u), pinned coordinate t_{2n}
            auto gphi = padic::phi(LR, T.embed(u), 2 * n) * ge;
            CycNum via_matrix_phi = matrix_theta(pe, gphi, 2 * n, LR, R);
            CycNum via_residue_phi =
                sscchar::theta_gl_even_phi(witness_comps_even(T, n, u), u, pe, Method::Brute, R)
                    .value;
            CHECK(via_matrix_phi == via_residue_phi);
            // odd: g = 1 + phi_{eps^-1 u}, pinned coordinate t_{n+1}
            SscGL po = pi_odd(T, -1, oj);
            FqElem c = T.eps().inv() * T.embed(u);
            auto go = LocalMatrix::identity(LR, 2 * n + 1) + padic::phi(LR, c, 2 * n + 1);
            CycNum via_matrix_o = matrix_theta(po, go, n + 1, LR, R);
            CycNum via_residue_o =
                sscchar::theta_gl_odd(witness_comps_odd(T, n, u), po, Method::Brute, R).value;
            CHECK(via_matrix_o == via_residue_o);
            // odd twisted family: phi_{eps^-1 u} (1 + phi_{eps^-1 u}), pinned t_{2n+1}
            auto gophi = padic::phi(LR, c, 2 * n + 1) * go;
            CycNum via_matrix_ophi = matrix_theta(po, gophi, 2 * n + 1, LR, R);
            CycNum via_residue_ophi =
                sscchar::theta_gl_odd_phi(witness_comps_odd(T, n, u), u, po, Method::Brute, R)
                    .value;
            CHECK(via_matrix_ophi == via_residue_ophi);
        }
    }
}

TEST_CASE("twisted character is invariant under theta-conjugation, at matrix level") {
    QuadExt T = make_tower(3, 1, 2);
    CycRing R = task_ring(T);
    LocalRing LR(T, 4);
    SscGL pe = pi_even(T, -1, 1);
    FqElem u = T.base_elem(2);
    auto g = LocalMatrix::identity(LR, 2) + padic::phi(LR, T.embed(u), 2);
    CycNum base_val = matrix_theta(pe, g, 1, LR, R);
    // conjugate by torus elements x: g -> x g theta(x)^{-1}
    for (int64_t xv = 1; xv < 9; ++xv) {
        LocalMatrix x(LR, 2);
        x.at(0, 0) = LR.teich(T.ext_elem(xv));
        x.at(1, 1) = LR.one();
        LocalMatrix conj = x * g * padic::theta(x).inverse();
        CHECK(matrix_theta(pe, conj, 1, LR, R) == base_val);
    }
    // the odd case, conjugating by diag(x, 1, c(x)^{-1})
    SscGL po = pi_odd(T, -1, 1);
    FqElem c = T.eps().inv() * T.embed(u);
    auto go = LocalMatrix::identity(LR, 3) + padic::phi(LR, c, 3);
    CycNum base_odd = matrix_theta(po, go, 2, LR, R);
    for (int64_t xv = 1; xv < 9; ++xv) {
        LocalMatrix x(LR, 3);
        x.at(0, 0) = LR.teich(T.ext_elem(xv));
        x.at(1, 1) = LR.one();
        x.at(2, 2) = LR.teich(T.conj(T.ext_elem(xv))).inv();
        LocalMatrix conj = x * go * padic::theta(x).inverse();
        CHECK(matrix_theta(po, conj, 2, LR, R) == base_odd);
    }
}


TEST_CASE("chi_eval handles central pi powers in the decomposition") {
    QuadExt T = make_tower(3, 1, 2);
    CycRing R = task_ring(T);
    LocalRing LR(T, 5);
    for (int N : {2, 3}) {
        bool even = (N % 2 == 0);
        SscGL pi = even ? pi_even(T, -1, 1) : pi_odd(T, -1, 1);
        FqElem corner = even ? T.embed(T.base_elem(1)) : T.eps().inv() * T.embed(T.base_elem(1));
        auto g = LocalMatrix::identity(LR, N) + padic::phi(LR, corner, N);
        // chi(pi I_N g) = zeta^N omega(a-bar) chi(g)
        auto scaled = g.scaled(LR.pi(1));
        CycNum expect =
            R.eval(pi.zeta.pow(N)) * pi.omega.eval(R, pi.a) * sscchar::chi_eval(pi, g, R);
        CHECK(sscchar::chi_eval(pi, scaled, R) == expect);
        // and the inverse power
        auto scaled_down = g.scaled(LR.pi(-1));
        CycNum expect_down = R.eval(pi.zeta.pow(-N)) *
                             pi.omega.eval(R, pi.a.inv()) * sscchar::chi_eval(pi, g, R);
        CHECK(sscchar::chi_eval(pi, scaled_down, R) == expect_down);
    }
}

TEST_SUITE_END();
