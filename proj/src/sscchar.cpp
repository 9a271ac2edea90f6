#include "endoscope/sscchar.hpp"

#include <functional>
#include <sstream>

namespace endoscope::sscchar {

using cyclo::RootAccum;
using gf::FqField;
using padic::IwahoriClass;
using padic::Variant;

namespace {

FqElem pull_or_throw(const QuadExt& T, FqElem x, const char* what) {
    if (!T.in_base_image(x)) throw CheckFailure(std::string(what) + ": value not in k_F");
    return T.pullback(x);
}

void require_generic(const std::vector<FqElem>& derived, const char* who) {
    for (const auto& d : derived)
        if (d.is_zero())
            throw ConfigError(std::string(who) +
                              ": derived norm components are not affine generic");
}

std::string desc_comps(const std::vector<FqElem>& comps) {
    std::ostringstream os;
    os << "(";
    for (size_t i = 0; i < comps.size(); ++i) os << (i ? "," : "") << comps[i].v;
    os << ")";
    return os.str();
}

// Accumulates omega(central) psi(Tr arg) terms as exponent histograms.
struct TermSum {
    const CycRing& R;
    RootAccum acc;
    explicit TermSum(const CycRing& ring) : R(ring), acc(ring) {}

    void add(const RootOfUnity& rw, const RootOfUnity& rp) {
        int64_t M = R.M();
        if (M % rw.den != 0 || M % rp.den != 0)
            throw ConfigError("theta evaluation: ring M incompatible with character orders");
        acc.add(rw.num * (M / rw.den) + rp.num * (M / rp.den));
    }
};

} // namespace

SscGL::SscGL(const QuadExt& tower, FqElem a_, RootOfUnity zeta_, MultChar omega_, AddChar psi_)
    : T(&tower), a(a_), zeta(zeta_), omega(omega_), psi(psi_) {
    if (a.F != &tower.ext() || a.is_zero()) throw ConfigError("SscGL: a must lie in k_E^x");
    if (omega.k != &tower.ext()) throw ConfigError("SscGL: omega must live on k_E^x");
    if (psi.k != &tower.base() || psi.trivial())
        throw ConfigError("SscGL: psi must be a nontrivial character of k_F");
}

SscU::SscU(const QuadExt& tower, FqElem b_, U1Char omega_p_, bool even_, int n_, AddChar psi_)
    : T(&tower), b(b_), omega_p(omega_p_), even(even_), n(n_), psi(psi_) {
    if (b.F != &tower.base() || b.is_zero()) throw ConfigError("SscU: b must lie in k_F^x");
    if (psi.k != &tower.base() || psi.trivial())
        throw ConfigError("SscU: psi must be a nontrivial character of k_F");
    if (n < 1) throw ConfigError("SscU: n must be >= 1");
}

namespace {

void check_gl_even(const SscGL& pi, const std::vector<FqElem>& comps, int& n_out) {
    const QuadExt& T = *pi.T;
    if (comps.size() % 2 != 0 || comps.empty())
        throw ConfigError("theta_gl_even: component count must be 2n");
    n_out = int(comps.size()) / 2;
    if (pi.a != T.ext_one())
        throw ConfigError("theta_gl_even: requires a = 1 (renormalize the uniformizer first)");
    if (!pi.zeta.is_real()) throw ConfigError("theta_gl_even: zeta must be +-1");
    if (!chars::is_conjugate_self_dual(pi.omega, T))
        throw ConfigError("theta_gl_even: omega must be conjugate self-dual");
}

void check_gl_odd(const SscGL& pi, const std::vector<FqElem>& comps, int& n_out) {
    const QuadExt& T = *pi.T;
    if (comps.size() % 2 != 1 || comps.size() < 3)
        throw ConfigError("theta_gl_odd: component count must be 2n+1 >= 3");
    n_out = int(comps.size()) / 2;
    if (pi.a != T.eps())
        throw ConfigError("theta_gl_odd: requires a = eps (renormalize the uniformizer first)");
    if (!pi.zeta.is_real()) throw ConfigError("theta_gl_odd: zeta must be +-1");
    if (!chars::is_conjugate_self_dual(pi.omega, T))
        throw ConfigError("theta_gl_odd: omega must be conjugate self-dual");
}

CycNum central_factor_gl(const SscGL& pi, const CycRing& R, const std::optional<FqElem>& z) {
    if (!z) return R.one();
    return pi.omega.eval(R, *z);
}

CycNum central_factor_u(const SscU& pi, const CycRing& R, const std::optional<FqElem>& z) {
    if (!z) return R.one();
    return pi.omega_p.eval(R, *z);
}

} // namespace

CharValue theta_gl_even(const std::vector<FqElem>& g, const SscGL& pi, Method method,
                        const CycRing& R, std::optional<FqElem> central) {
    const QuadExt& T = *pi.T;
    const FqField& kF = T.base();
    const FqField& kE = T.ext();
    int n = 0;
    check_gl_even(pi, g, n);
    int N = 2 * n;
    // components of N(g): (g_1 + c(g_{2n-1}), ..., g_{2n-1} + c(g_1), Tr(g_{2n}))
    std::vector<FqElem> derived;
    for (int i = 1; i <= N - 1; ++i)
        derived.push_back(g[size_t(i - 1)] + T.conj(g[size_t(N - i - 1)]));
    derived.push_back(T.embed(T.trace(g[size_t(N - 1)])));
    require_generic(derived, "theta_gl_even");

    CycNum cf = central_factor_gl(pi, R, central);
    if (method == Method::Closed) {
        FqElem A = T.base_elem(1);
        for (int i = 1; i <= n - 1; ++i) A = A * T.norm(derived[size_t(i - 1)]);
        A = A * pull_or_throw(T, derived[size_t(n - 1)], "theta_gl_even"); // Tr(g_n)
        A = A * T.trace(g[size_t(N - 1)]);                                // Tr(g_{2n})
        CycNum kl = sums::kloosterman(sums::KlSpec(T, pi.psi, n, 0, A), R);
        return {-(kl * cf), method, "I+ " + desc_comps(g)};
    }
    // representatives: alpha in k_F^x, t_1..t_{n-1} free, t_n = 1,
    // t_{2n+1-i} = alpha / c(t_i)
    TermSum sum(R);
    std::vector<int64_t> tv(size_t(N + 1), 1); // 1-based
    std::function<void(int)> loop = [&](int idx) {
        if (idx == n) {
            for (int64_t av = 1; av < kF.q(); ++av) {
                tv[size_t(n)] = 1;
                FqElem alphaE = T.embed(T.base_elem(av));
                for (int i = 1; i <= n; ++i) {
                    FqElem ti = T.ext_elem(tv[size_t(i)]);
                    tv[size_t(N + 1 - i)] = (alphaE / T.conj(ti)).v;
                }
                FqElem S = T.ext_elem(0);
                for (int i = 1; i <= N - 1; ++i) {
                    FqElem ti = T.ext_elem(tv[size_t(i)]);
                    FqElem tj = T.ext_elem(tv[size_t(N - i)]);
                    S = S + ti * T.conj(tj) * g[size_t(i - 1)];
                }
                FqElem t2n = T.ext_elem(tv[size_t(N)]);
                S = S + T.embed(T.norm(t2n)) * g[size_t(N - 1)];
                sum.add(pi.omega.at(alphaE), pi.psi.at(T.trace(S / alphaE)));
            }
            return;
        }
        for (int64_t v = 1; v < kE.q(); ++v) {
            tv[size_t(idx)] = v;
            loop(idx + 1);
        }
    };
    loop(1);
    return {sum.acc.to_cyc() * cf, method, "I+ " + desc_comps(g)};
}

CharValue theta_gl_even_phi(const std::vector<FqElem>& g, FqElem u, const SscGL& pi, Method method,
                            const CycRing& R, std::optional<FqElem> central) {
    const QuadExt& T = *pi.T;
    const FqField& kF = T.base();
    const FqField& kE = T.ext();
    int n = 0;
    check_gl_even(pi, g, n);
    int N = 2 * n;
    if (u.F != &kF || u.is_zero()) throw ConfigError("theta_gl_even_phi: u must lie in k_F^x");
    FqElem uE = T.embed(u);
    // components of -N(phi_u g): (g_2+c(g_{2n-1}), ..., g_{2n-1}+c(g_2),
    //                             u^{-1} g_{2n} + c(g_1), u g_1 + c(g_{2n}))
    std::vector<FqElem> derived;
    for (int i = 2; i <= N - 1; ++i)
        derived.push_back(g[size_t(i - 1)] + T.conj(g[size_t(N - i)]));
    derived.push_back(uE.inv() * g[size_t(N - 1)] + T.conj(g[0]));
    derived.push_back(uE * g[0] + T.conj(g[size_t(N - 1)]));
    require_generic(derived, "theta_gl_even_phi");

    CycNum cf = central_factor_gl(pi, R, central);
    CycNum zeta = R.eval(pi.zeta);
    if (method == Method::Closed) {
        FqElem A = T.norm(uE * g[0] + T.conj(g[size_t(N - 1)]));
        for (int i = 2; i <= n; ++i) A = A * T.norm(g[size_t(i - 1)] + T.conj(g[size_t(N - i)]));
        A = A / u;
        CycNum kl = sums::kloosterman(sums::KlSpec(T, pi.psi, n, 0, A), R);
        return {zeta * kl * cf, method, "phi_u I+ " + desc_comps(g)};
    }
    // representatives: t_1..t_{n-1} free, Nr(t_n) = u, t_{2n} = 1,
    // t_{2n-i} = u / c(t_i)
    TermSum sum(R);
    std::vector<int64_t> tv(size_t(N + 1), 1);
    std::vector<int64_t> fiber;
    for (int64_t v = 1; v < kE.q(); ++v)
        if (T.norm(T.ext_elem(v)) == u) fiber.push_back(v);
    std::function<void(int)> loop = [&](int idx) {
        if (idx == n) {
            for (int64_t tn : fiber) {
                tv[size_t(n)] = tn;
                tv[size_t(N)] = 1;
                for (int i = 1; i <= n - 1; ++i) {
                    FqElem ti = T.ext_elem(tv[size_t(i)]);
                    tv[size_t(N - i)] = (uE / T.conj(ti)).v;
                }
                FqElem S = uE * T.conj(T.ext_elem(tv[size_t(N - 1)])) * g[0];
                for (int i = 2; i <= N - 1; ++i) {
                    FqElem ta = T.ext_elem(tv[size_t(i - 1)]);
                    FqElem tb = T.ext_elem(tv[size_t(N - i)]);
                    S = S + ta * T.conj(tb) * g[size_t(i - 1)];
                }
                S = S + T.ext_elem(tv[size_t(N - 1)]) * T.conj(T.ext_elem(tv[size_t(N)])) *
                            g[size_t(N - 1)];
                sum.add(pi.omega.at(uE), pi.psi.at(T.trace(S / uE)));
            }
            return;
        }
        for (int64_t v = 1; v < kE.q(); ++v) {
            tv[size_t(idx)] = v;
            loop(idx + 1);
        }
    };
    loop(1);
    return {zeta * sum.acc.to_cyc() * cf, method, "phi_u I+ " + desc_comps(g)};
}

CharValue theta_gl_odd(const std::vector<FqElem>& g, const SscGL& pi, Method method,
                       const CycRing& R, std::optional<FqElem> central) {
    const QuadExt& T = *pi.T;
    const FqField& kE = T.ext();
    int n = 0;
    check_gl_odd(pi, g, n);
    int N = 2 * n + 1;
    // components of N(g): (g_1+c(g_{2n}), ..., g_{2n}+c(g_1), g_{2n+1}-c(g_{2n+1}))
    std::vector<FqElem> derived;
    for (int i = 1; i <= N - 1; ++i)
        derived.push_back(g[size_t(i - 1)] + T.conj(g[size_t(N - 1 - i)]));
    derived.push_back(g[size_t(N - 1)] - T.conj(g[size_t(N - 1)]));
    require_generic(derived, "theta_gl_odd");

    CycNum cf = central_factor_gl(pi, R, central);
    if (method == Method::Closed) {
        FqElem A = T.base_elem(1);
        for (int i = 1; i <= n; ++i) A = A * T.norm(derived[size_t(i - 1)]);
        A = A * T.trace(T.eps() * g[size_t(N - 1)]);
        CycNum kl = sums::kloosterman(sums::KlSpec(T, pi.psi, n, 1, A), R);
        return {kl * cf, method, "I+ " + desc_comps(g)};
    }
    // representatives: t_1..t_n free, t_{n+1} = 1, t_{2n+2-i} = 1 / c(t_i)
    TermSum sum(R);
    std::vector<int64_t> tv(size_t(N + 1), 1);
    std::function<void(int)> loop = [&](int idx) {
        if (idx == n + 1) {
            tv[size_t(n + 1)] = 1;
            for (int i = 1; i <= n; ++i) {
                FqElem ti = T.ext_elem(tv[size_t(i)]);
                tv[size_t(N + 1 - i)] = T.conj(ti).inv().v;
            }
            FqElem S = T.ext_elem(0);
            for (int i = 1; i <= N - 1; ++i) {
                FqElem ta = T.ext_elem(tv[size_t(i)]);
                FqElem tb = T.ext_elem(tv[size_t(N - i)]);
                S = S + ta * T.conj(tb) * g[size_t(i - 1)];
            }
            FqElem tN = T.ext_elem(tv[size_t(N)]);
            S = S + T.eps() * T.embed(T.norm(tN)) * g[size_t(N - 1)];
            sum.add(RootOfUnity::one(), pi.psi.at(T.trace(S)));
            return;
        }
        for (int64_t v = 1; v < kE.q(); ++v) {
            tv[size_t(idx)] = v;
            loop(idx + 1);
        }
    };
    loop(1);
    return {sum.acc.to_cyc() * cf, method, "I+ " + desc_comps(g)};
}

CharValue theta_gl_odd_phi(const std::vector<FqElem>& g, FqElem u, const SscGL& pi, Method method,
                           const CycRing& R, std::optional<FqElem> central) {
    const QuadExt& T = *pi.T;
    const FqField& kF = T.base();
    const FqField& kE = T.ext();
    int n = 0;
    check_gl_odd(pi, g, n);
    int N = 2 * n + 1;
    if (u.F != &kF || u.is_zero()) throw ConfigError("theta_gl_odd_phi: u must lie in k_F^x");
    FqElem uE = T.embed(u);
    // components of -N(phi_{eps^-1 u} g): (g_2+c(g_{2n}), ..., g_{2n}+c(g_2),
    //      eps u^{-1} g_{2n+1} + c(g_1), eps^{-1} u g_1 - c(g_{2n+1}))
    std::vector<FqElem> derived;
    for (int i = 2; i <= N - 1; ++i)
        derived.push_back(g[size_t(i - 1)] + T.conj(g[size_t(N - i)]));
    derived.push_back(T.eps() * uE.inv() * g[size_t(N - 1)] + T.conj(g[0]));
    derived.push_back(T.eps().inv() * uE * g[0] - T.conj(g[size_t(N - 1)]));
    require_generic(derived, "theta_gl_odd_phi");

    CycNum cf = central_factor_gl(pi, R, central);
    CycNum zeta = R.eval(pi.zeta);
    if (method == Method::Closed) {
        FqElem A = T.norm(uE * g[0] - T.eps() * T.conj(g[size_t(N - 1)]));
        for (int i = 2; i <= n; ++i)
            A = A * T.norm(g[size_t(i - 1)] + T.conj(g[size_t(N - i)]));
        A = A * T.trace(g[size_t(n)]); // Tr(g_{n+1})
        A = A / u;
        CycNum kl = sums::kloosterman(sums::KlSpec(T, pi.psi, n, 1, A), R);
        return {zeta * kl * cf, method, "phi_(eps^-1 u) I+ " + desc_comps(g)};
    }
    // representatives: t_1..t_n free, t_{2n+1} = 1, t_{2n+1-i} = u / c(t_i)
    TermSum sum(R);
    std::vector<int64_t> tv(size_t(N + 1), 1);
    std::function<void(int)> loop = [&](int idx) {
        if (idx == n + 1) {
            tv[size_t(N)] = 1;
            for (int i = 1; i <= n; ++i) {
                FqElem ti = T.ext_elem(tv[size_t(i)]);
                tv[size_t(N - i)] = (uE / T.conj(ti)).v;
            }
            FqElem S = uE * T.conj(T.ext_elem(tv[size_t(N - 1)])) * g[0];
            for (int i = 2; i <= N - 1; ++i) {
                FqElem ta = T.ext_elem(tv[size_t(i - 1)]);
                FqElem tb = T.ext_elem(tv[size_t(N - i)]);
                S = S + ta * T.conj(tb) * g[size_t(i - 1)];
            }
            S = S + T.eps() * T.ext_elem(tv[size_t(N - 1)]) * T.conj(T.ext_elem(tv[size_t(N)])) *
                        g[size_t(N - 1)];
            sum.add(pi.omega.at(uE), pi.psi.at(T.trace(S / uE)));
            return;
        }
        for (int64_t v = 1; v < kE.q(); ++v) {
            tv[size_t(idx)] = v;
            loop(idx + 1);
        }
    };
    loop(1);
    return {zeta * sum.acc.to_cyc() * cf, method, "phi_(eps^-1 u) I+ " + desc_comps(g)};
}

CharValue theta_u_even(const std::vector<FqElem>& h, const SscU& pi, Method method,
                       const CycRing& R, std::optional<FqElem> central) {
    const QuadExt& T = *pi.T;
    const FqField& kE = T.ext();
    if (!pi.even) throw ConfigError("theta_u_even: parity mismatch");
    int n = pi.n;
    if (int(h.size()) != n + 1) throw ConfigError("theta_u_even: component count must be n+1");
    require_generic(h, "theta_u_even");
    FqElem hn = pull_or_throw(T, h[size_t(n - 1)], "theta_u_even");
    FqElem hcorner = pull_or_throw(T, h[size_t(n)], "theta_u_even");

    CycNum cf = central_factor_u(pi, R, central);
    if (method == Method::Closed) {
        FqElem A = hn * hcorner * pi.b;
        for (int i = 1; i <= n - 1; ++i) A = A * T.norm(h[size_t(i - 1)]);
        CycNum kl = sums::kloosterman(sums::KlSpec(T, pi.psi, n, 0, A), R);
        return {-(kl * cf), method, "I_H+ " + desc_comps(h)};
    }
    // sum over t_1..t_{n-1} in k_E^x and t_n over the U(1) coset transversal
    TermSum sum(R);
    auto transversal = T.coset_transversal_u1();
    std::vector<int64_t> tv(size_t(n + 1), 1);
    std::function<void(int)> loop = [&](int idx) {
        if (idx == n) {
            for (const FqElem& tn : transversal) {
                tv[size_t(n)] = tn.v;
                FqElem S = T.ext_elem(0);
                for (int i = 1; i <= n - 1; ++i) {
                    FqElem ta = T.ext_elem(tv[size_t(i)]);
                    FqElem tb = T.ext_elem(tv[size_t(i + 1)]);
                    S = S + (ta / tb) * h[size_t(i - 1)];
                }
                FqElem t1 = T.ext_elem(tv[1]);
                FqElem arg = T.norm(tn) * hn + pi.b * hcorner / T.norm(t1);
                sum.add(RootOfUnity::one(), pi.psi.at(T.trace(S) + arg));
            }
            return;
        }
        for (int64_t v = 1; v < kE.q(); ++v) {
            tv[size_t(idx)] = v;
            loop(idx + 1);
        }
    };
    loop(1);
    return {sum.acc.to_cyc() * cf, method, "I_H+ " + desc_comps(h)};
}

CharValue theta_u_odd(const std::vector<FqElem>& h, const SscU& pi, Method method,
                      const CycRing& R, std::optional<FqElem> central) {
    const QuadExt& T = *pi.T;
    const FqField& kE = T.ext();
    if (pi.even) throw ConfigError("theta_u_odd: parity mismatch");
    int n = pi.n;
    if (int(h.size()) != n + 1) throw ConfigError("theta_u_odd: component count must be n+1");
    require_generic(h, "theta_u_odd");
    if (!T.trace(h[size_t(n)]).is_zero())
        throw ConfigError("theta_u_odd: corner component must be trace-zero");
    FqElem corner_eps = pull_or_throw(T, h[size_t(n)] * T.eps(), "theta_u_odd");

    CycNum cf = central_factor_u(pi, R, central);
    if (method == Method::Closed) {
        FqElem A = corner_eps * pi.b;
        for (int i = 1; i <= n; ++i) A = A * T.norm(h[size_t(i - 1)]);
        CycNum kl = sums::kloosterman(sums::KlSpec(T, pi.psi, n, 1, A), R);
        return {kl * cf, method, "I_H+ " + desc_comps(h)};
    }
    // sum over t_1..t_n in k_E^x
    TermSum sum(R);
    std::vector<int64_t> tv(size_t(n + 1), 1);
    std::function<void(int)> loop = [&](int idx) {
        if (idx == n + 1) {
            FqElem S = T.ext_elem(0);
            for (int i = 1; i <= n - 1; ++i) {
                FqElem ta = T.ext_elem(tv[size_t(i)]);
                FqElem tb = T.ext_elem(tv[size_t(i + 1)]);
                S = S + (ta / tb) * h[size_t(i - 1)];
            }
            S = S + T.ext_elem(tv[size_t(n)]) * h[size_t(n - 1)];
            FqElem t1 = T.ext_elem(tv[1]);
            FqElem arg = pi.b * corner_eps / T.norm(t1);
            sum.add(RootOfUnity::one(), pi.psi.at(T.trace(S) + arg));
            return;
        }
        for (int64_t v = 1; v < kE.q(); ++v) {
            tv[size_t(idx)] = v;
            loop(idx + 1);
        }
    };
    loop(1);
    return {sum.acc.to_cyc() * cf, method, "I_H+ " + desc_comps(h)};
}

KDecomp decompose_K(const LocalMatrix& g, FqElem a) {
    const LocalRing& R = g.ring();
    int N = g.n();
    KDecomp out;
    // pre-normalize the central valuation so determinants stay in the window
    int vmin = 1 << 28;
    for (int i = 0; i < N; ++i)
        for (int k = 0; k < N; ++k)
            if (g.at(i, k).visible()) vmin = std::min(vmin, g.at(i, k).val());
    if (vmin == (1 << 28)) return out;
    LocalMatrix cur = (vmin != 0) ? g.shifted(-vmin) : g;
    LocalMatrix phi_inv = padic::phi(R, a.inv(), N).inverse();
    padic::LocalElem d = cur.det();
    if (!d.visible()) return out;
    int j = ((d.val() % N) + N) % N;
    for (int i = 0; i < j; ++i) cur = cur * phi_inv;
    padic::LocalElem d2 = cur.det();
    if (!d2.visible() || d2.val() % N != 0) return out;
    int v = d2.val() / N + vmin;
    if (v != vmin) cur = cur.shifted(vmin - v);
    const padic::LocalElem& head = cur.at(0, 0);
    if (!head.visible() || head.val() != 0) return out;
    FqElem zbar = head.residue_unit();
    cur = cur.scaled(R.teich(zbar).inv());
    IwahoriClass cls;
    try {
        cls = padic::classify_iwahori(cur, Variant::gl(N));
    } catch (const InsufficientPrecision&) {
        return out;
    }
    if (cls != IwahoriClass::IPlus && cls != IwahoriClass::IPlusPlus) return out;
    out.in_K = true;
    out.j = j;
    out.v = v;
    out.zbar = zbar;
    out.comps = padic::affine_components(cur, Variant::gl(N)).comps;
    return out;
}

CycNum chi_eval(const SscGL& pi, const LocalMatrix& g, const CycRing& R) {
    const QuadExt& T = *pi.T;
    KDecomp d = decompose_K(g, pi.a);
    if (!d.in_K) throw ConfigError("chi_eval: element lies outside Z I+ <phi_{a^-1}>");
    int N = g.n();
    // chi(pi^v I) = zeta^{N v} omega(a-bar)^v, since pi I = phi_{a^{-1}}^N (a I)
    RootOfUnity zeta_part = pi.zeta.pow(int64_t(N) * d.v + d.j);
    RootOfUnity omega_part = pi.omega.at(pi.a).pow(d.v) * pi.omega.at(d.zbar);
    FqElem S = T.ext_elem(0);
    for (int i = 0; i + 1 < N; ++i) S = S + d.comps[size_t(i)];
    S = S + pi.a * d.comps[size_t(N - 1)];
    RootOfUnity psi_part = pi.psi.at(T.trace(S));
    return R.eval(zeta_part) * R.eval(omega_part) * R.eval(psi_part);
}

VerifyReport validate_torus_reps(TorusFamily family, const QuadExt& T, int n, FqElem u,
                                 const LocalRing& LR) {
    const FqField& kE = T.ext();
    bool even = (family == TorusFamily::EvenPlain || family == TorusFamily::EvenPhi);
    bool twisted = (family == TorusFamily::EvenPhi || family == TorusFamily::OddPhi);
    int N = even ? 2 * n : 2 * n + 1;
    FqElem a = even ? T.ext_one() : T.eps();
    FqElem corner = even ? T.embed(u) : T.eps().inv() * T.embed(u);

    LocalMatrix base = LocalMatrix::identity(LR, N) + padic::phi(LR, corner, N);
    LocalMatrix tested = twisted ? padic::phi(LR, corner, N) * base : base;

    int pinned;
    switch (family) {
        case TorusFamily::EvenPlain: pinned = n; break;
        case TorusFamily::EvenPhi: pinned = 2 * n; break;
        case TorusFamily::OddPlain: pinned = n + 1; break;
        default: pinned = 2 * n + 1; break;
    }

    auto constraint = [&](const std::vector<int64_t>& tv) -> bool {
        auto at = [&](int i) { return T.ext_elem(tv[size_t(i)]); };
        switch (family) {
            case TorusFamily::EvenPlain: {
                FqElem c = at(1) * T.conj(at(2 * n));
                for (int i = 2; i <= 2 * n; ++i)
                    if (at(i) * T.conj(at(2 * n + 1 - i)) != c) return false;
                return true;
            }
            case TorusFamily::EvenPhi: {
                FqElem uE = T.embed(u);
                for (int i = 1; i <= 2 * n - 1; ++i)
                    if (at(i) * T.conj(at(2 * n - i)) != uE) return false;
                return true;
            }
            case TorusFamily::OddPlain: {
                FqElem c = at(1) * T.conj(at(2 * n + 1));
                for (int i = 2; i <= 2 * n + 1; ++i)
                    if (at(i) * T.conj(at(2 * n + 2 - i)) != c) return false;
                return true;
            }
            default: {
                FqElem uE = T.embed(u);
                for (int i = 1; i <= 2 * n; ++i)
                    if (at(i) * T.conj(at(2 * n + 1 - i)) != uE) return false;
                return true;
            }
        }
    };

    long mismatches = 0, passing = 0, expected = 0;
    std::vector<int64_t> tv(size_t(N + 1), 1);
    std::function<void(int)> loop = [&](int idx) {
        if (idx > N) {
            LocalMatrix y(LR, N);
            for (int i = 1; i <= N; ++i) y.at(i - 1, i - 1) = LR.teich(T.ext_elem(tv[size_t(i)]));
            LocalMatrix m = y * tested * padic::theta(y).inverse();
            bool in_K = decompose_K(m, a).in_K;
            bool in_set = constraint(tv);
            if (in_K) ++passing;
            if (in_set) ++expected;
            if (in_K != in_set) ++mismatches;
            return;
        }
        if (idx == pinned) {
            tv[size_t(idx)] = 1;
            loop(idx + 1);
            return;
        }
        for (int64_t v = 1; v < kE.q(); ++v) {
            tv[size_t(idx)] = v;
            loop(idx + 1);
        }
    };
    loop(1);

    nlohmann::json in{{"family", int(family)}, {"n", n},
                      {"q", T.base().q()},     {"u", u.v},
                      {"passing", passing},    {"expected", expected}};
    if (mismatches == 0 && passing == expected && passing > 0)
        return VerifyReport::pass("validate_torus_reps", in);
    return VerifyReport::fail("validate_torus_reps",
                              std::to_string(mismatches) + " set mismatches", in);
}

} // namespace endoscope::sscchar
