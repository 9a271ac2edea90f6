#include "endoscope/endo.hpp"

namespace endoscope::endo {

using cyclo::RootOfUnity;
using padic::IwahoriClass;
using padic::Variant;
using sscchar::Method;

int parity_zeta(const MultChar& omega, Parity parity, const QuadExt& T) {
    if (!chars::is_conjugate_self_dual(omega, T))
        throw ConfigError("parity_zeta: omega must be conjugate self-dual");
    int s = omega.at(T.eps()).sign();
    return parity == Parity::Even ? -s : s;
}

LiftResult lift(const SscU& source, int kappa) {
    if (kappa != 1 && kappa != -1) throw ConfigError("lift: kappa must be +-1");
    const QuadExt& T = *source.T;
    MultChar omega = chars::omega_from_u1(source.omega_p);
    int sign_m1 = source.omega_p.sign_at_minus_one();
    int zeta_sign = source.even ? -kappa * sign_m1 : kappa * sign_m1;
    FqElem a = source.even ? T.embed(source.b) : T.embed(source.b) * T.eps();
    SscGL target(T, a, zeta_sign > 0 ? RootOfUnity::one() : RootOfUnity::minus_one(), omega,
                 source.psi);
    nlohmann::json deriv{{"parity", source.even ? "even" : "odd"},
                         {"kappa", kappa},
                         {"omega_prime_minus_one", sign_m1},
                         {"zeta", zeta_sign},
                         {"a", a.v},
                         {"omega_index", omega.j}};
    return {source, kappa, target, deriv};
}

VerifyReport kappa_bookkeeping(const SscU& source) {
    LiftResult plus = lift(source, 1);
    LiftResult minus = lift(source, -1);
    nlohmann::json in{{"b", source.b.v},
                      {"omega_prime", source.omega_p.j},
                      {"parity", source.even ? "even" : "odd"}};
    bool ok = plus.target.a == minus.target.a && plus.target.omega.j == minus.target.omega.j &&
              plus.target.zeta.sign() == -minus.target.zeta.sign();
    return ok ? VerifyReport::pass("kappa_bookkeeping", in)
              : VerifyReport::fail("kappa_bookkeeping", "targets do not differ by zeta sign", in);
}

nlohmann::json NormWitness::to_json() const {
    nlohmann::json comps = nlohmann::json::array();
    for (const auto& c : h_comps) comps.push_back(c.v);
    return nlohmann::json{{"theta_commutes", theta_commutes},
                          {"unitary", unitary},
                          {"regular_elliptic", regular_elliptic},
                          {"affine_generic", generic},
                          {"twisted_identity", twisted_identity},
                          {"h_central", h_central.v},
                          {"h_components", comps}};
}

NormWitness norm_witness(Parity parity, int n, FqElem u, std::optional<FqElem> z, bool twisted,
                         const LocalRing& LR) {
    const QuadExt& T = LR.tower();
    if (u.F != &T.base() || u.is_zero()) throw ConfigError("norm_witness: u must lie in k_F^x");
    if (LR.prec() < 4) throw ConfigError("norm_witness: precision must be at least 4");
    bool even = (parity == Parity::Even);
    int N = even ? 2 * n : 2 * n + 1;
    FqElem c = even ? T.embed(u) : T.eps().inv() * T.embed(u);

    LocalMatrix base = LocalMatrix::identity(LR, N) + padic::phi(LR, c, N);
    LocalMatrix g = twisted ? padic::phi(LR, c, N) * base : base;
    if (z) {
        if (z->F != &T.ext() || z->is_zero())
            throw ConfigError("norm_witness: z must lie in k_E^x");
        g = g.scaled(LR.teich(*z));
    }

    NormWitness w;
    w.g = g;
    LocalMatrix tg = padic::theta(g);
    w.h = g * tg;
    w.theta_commutes = (g * tg).eq_at_precision(tg * g);
    w.unitary = padic::is_unitary(w.h);

    // strip the central Teichmueller part of h and read the components
    const padic::LocalElem& head = w.h.at(0, 0);
    if (!head.visible() || head.val() != 0)
        throw CheckFailure("norm_witness: norm has no unit diagonal");
    FqElem z0 = head.residue_unit();
    if (T.norm(z0).v != 1) throw CheckFailure("norm_witness: central part is not in U(1)");
    w.h_central = z0;
    LocalMatrix x = w.h.scaled(LR.teich(z0).inv());
    // the Eisenstein criterion certifies the I_H^+ part; central scaling
    // preserves strong regularity
    w.regular_elliptic = padic::is_regular_elliptic(x);
    Variant var = even ? Variant::u_even(n) : Variant::u_odd(n);
    auto comps = padic::affine_components(x, var);
    w.h_comps = comps.comps;
    w.generic = padic::is_affine_generic(comps);

    if (twisted) {
        // N(phi_c (1+phi_c)) = -N(1+phi_c), with the central z factor applied
        LocalMatrix ref = -padic::norm_elem(base);
        if (z) {
            FqElem zratio = *z / T.conj(*z);
            ref = ref.scaled(LR.teich(zratio));
        }
        w.twisted_identity = w.h.eq_at_precision(ref);
    }
    return w;
}

nlohmann::json EcrReport::to_json() const {
    nlohmann::json jrows = nlohmann::json::array();
    for (const auto& r : rows) {
        jrows.push_back(nlohmann::json{{"u", r.u.v},
                                       {"z", r.z.v},
                                       {"lhs", report::cyc_json(r.lhs_closed)},
                                       {"rhs", report::cyc_json(r.rhs_closed)},
                                       {"lhs_brute", report::cyc_json(r.lhs_brute)},
                                       {"rhs_brute", report::cyc_json(r.rhs_brute)},
                                       {"equal", r.equal}});
    }
    return nlohmann::json{
        {"family", family}, {"inputs", inputs}, {"rows", jrows}, {"verdict", verdict}};
}

namespace {

// Components of the I+ part of z (1+phi_c) resp. z phi_c (1+phi_c), read
// back off the matrix, with the central residue.
struct GlSide {
    FqElem zbar;
    std::vector<FqElem> comps;
};

GlSide strip_gl(const LocalMatrix& g, bool twisted, FqElem c, const LocalRing& LR) {
    LocalMatrix m = g;
    if (twisted) m = padic::phi(LR, c, g.n()).inverse() * m;
    const padic::LocalElem& head = m.at(0, 0);
    if (!head.visible() || head.val() != 0)
        throw CheckFailure("verify_ecr: GL witness has no unit diagonal");
    FqElem zbar = head.residue_unit();
    LocalMatrix x = m.scaled(LR.teich(zbar).inv());
    auto comps = padic::affine_components(x, Variant::gl(g.n()));
    return {zbar, comps.comps};
}

} // namespace

std::vector<EcrReport> verify_ecr(Parity parity, int n, const QuadExt& T, FqElem b,
                                  const U1Char& omega_p, int kappa, const LocalRing& LR,
                                  const CycRing& R, const AddChar& psi) {
    if (kappa != 1)
        throw ConfigError(
            "verify_ecr: only kappa = +1 carries an analytic check; kappa = -1 is the "
            "zeta-sign bookkeeping identity (see kappa_bookkeeping)");
    if (b.F != &T.base() || b.is_zero()) throw ConfigError("verify_ecr: b must lie in k_F^x");
    bool even = (parity == Parity::Even);

    SscU source(T, b, omega_p, even, n, psi);
    LiftResult lr = lift(source, kappa);
    // reduced parameter: a = 1 resp. eps, reached by renormalizing the
    // uniformizer; components rescale by b below
    SscGL reduced(T, even ? T.ext_one() : T.eps(), lr.target.zeta, lr.target.omega, psi);

    nlohmann::json inputs{{"parity", even ? "even" : "odd"},
                          {"n", n},
                          {"q", T.base().q()},
                          {"b", b.v},
                          {"omega_prime", omega_p.j},
                          {"kappa", kappa},
                          {"zeta", lr.target.zeta.sign()},
                          {"prec", LR.prec()}};
    if (b.v != 1) inputs["reduction"] = "corner *= b; twisted families also u *= b";

    std::vector<EcrReport> out;
    for (bool twisted : {false, true}) {
        EcrReport rep;
        rep.family =
            std::string(even ? "even" : "odd") + (twisted ? ":phi_u(1+phi_u)" : ":1+phi_u");
        rep.inputs = inputs;
        rep.verdict = true;
        for (int64_t uv = 1; uv < T.base().q(); ++uv) {
            FqElem u = T.base_elem(uv);
            for (int64_t zv = 1; zv < T.ext().q(); ++zv) {
                FqElem z = T.ext_elem(zv);
                NormWitness w = norm_witness(parity, n, u, z, twisted, LR);
                if (!w.all_pass()) throw CheckFailure("verify_ecr: witness certificates failed");

                // U side
                CycNum lhs_c, lhs_b;
                if (even) {
                    lhs_c = sscchar::theta_u_even(w.h_comps, source, Method::Closed, R,
                                                  w.h_central)
                                .value;
                    lhs_b =
                        sscchar::theta_u_even(w.h_comps, source, Method::Brute, R, w.h_central)
                            .value;
                } else {
                    lhs_c =
                        sscchar::theta_u_odd(w.h_comps, source, Method::Closed, R, w.h_central)
                            .value;
                    lhs_b = sscchar::theta_u_odd(w.h_comps, source, Method::Brute, R, w.h_central)
                                .value;
                }

                // GL side, with the b-rescaling of the corner (and of u for
                // the phi families)
                FqElem c = even ? T.embed(u) : T.eps().inv() * T.embed(u);
                GlSide gs = strip_gl(w.g, twisted, c, LR);
                std::vector<FqElem> comps = gs.comps;
                comps.back() = comps.back() * T.embed(b);
                FqElem u_red = u * b;
                CycNum rhs_c, rhs_b;
                if (!twisted) {
                    if (even) {
                        rhs_c = sscchar::theta_gl_even(comps, reduced, Method::Closed, R, gs.zbar)
                                    .value;
                        rhs_b = sscchar::theta_gl_even(comps, reduced, Method::Brute, R, gs.zbar)
                                    .value;
                    } else {
                        rhs_c = sscchar::theta_gl_odd(comps, reduced, Method::Closed, R, gs.zbar)
                                    .value;
                        rhs_b = sscchar::theta_gl_odd(comps, reduced, Method::Brute, R, gs.zbar)
                                    .value;
                    }
                } else {
                    if (even) {
                        rhs_c = sscchar::theta_gl_even_phi(comps, u_red, reduced, Method::Closed,
                                                           R, gs.zbar)
                                    .value;
                        rhs_b = sscchar::theta_gl_even_phi(comps, u_red, reduced, Method::Brute,
                                                           R, gs.zbar)
                                    .value;
                    } else {
                        rhs_c = sscchar::theta_gl_odd_phi(comps, u_red, reduced, Method::Closed,
                                                          R, gs.zbar)
                                    .value;
                        rhs_b = sscchar::theta_gl_odd_phi(comps, u_red, reduced, Method::Brute, R,
                                                          gs.zbar)
                                    .value;
                    }
                }

                EcrRow row{u, z, lhs_c, lhs_b, rhs_c, rhs_b, false};
                row.equal = (lhs_c == lhs_b) && (lhs_c == rhs_c) && (lhs_c == rhs_b);
                if (!row.equal) rep.verdict = false;
                rep.rows.push_back(std::move(row));
            }
        }
        out.push_back(std::move(rep));
    }
    return out;
}

VerifyReport fourier_uniqueness_check(Parity parity, int n, const QuadExt& T, const AddChar& psi,
                                      const CycRing& R) {
    const auto& kF = T.base();
    bool even = (parity == Parity::Even);
    int m = even ? 0 : 1;
    FqElem pw = T.base_elem(kF.pow(kF.from_int(2), even ? 2 * n : 2 * n + 1));
    nlohmann::json in{{"parity", even ? "even" : "odd"}, {"n", n}, {"q", kF.q()}};
    nlohmann::json witnesses = nlohmann::json::array();
    for (int64_t bv = 1; bv < kF.q(); ++bv) {
        FqElem b = T.base_elem(bv);
        if (b.v == 1) continue;
        bool found = false;
        for (int64_t uv = 1; uv < kF.q(); ++uv) {
            FqElem u = T.base_elem(uv);
            CycNum k1 = sums::kloosterman(sums::KlSpec(T, psi, n, m, pw * u), R);
            CycNum kb = sums::kloosterman(sums::KlSpec(T, psi, n, m, pw * u * b), R);
            if (k1 != kb) {
                witnesses.push_back(nlohmann::json{{"b", b.v}, {"u", u.v}});
                found = true;
                break;
            }
        }
        if (!found)
            throw CheckFailure("fourier_uniqueness_check: uniqueness falsified at b = " +
                               std::to_string(b.v));
    }
    auto rep = VerifyReport::pass("fourier_uniqueness", in);
    rep.values.push_back(witnesses);
    return rep;
}

} // namespace endoscope::endo
