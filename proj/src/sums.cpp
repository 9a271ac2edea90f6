#include "endoscope/sums.hpp"

#include <functional>

namespace endoscope::sums {

using cyclo::RootAccum;
using gf::FqField;

CycNum gauss_sum(const FqField& k, const MultChar& chi, const AddChar& psi, const CycRing& R) {
    if (chi.k != &k || psi.k != &k) throw ConfigError("gauss_sum: characters on wrong field");
    if (psi.trivial()) throw ConfigError("gauss_sum: psi must be nontrivial");
    RootAccum acc(R);
    int64_t M = R.M();
    for (int64_t v = 1; v < k.q(); ++v) {
        FqElem t(k, v);
        auto rc = chi.at(t);
        auto rp = psi.at(t);
        if (M % rc.den != 0 || M % rp.den != 0)
            throw ConfigError("gauss_sum: ring M incompatible with character orders");
        acc.add(rc.num * (M / rc.den) + rp.num * (M / rp.den));
    }
    return acc.to_cyc();
}

namespace {

// Shared loop: iterate over tuples (t_1..t_n, s_1..s_m) subject to the norm
// constraint, with one variable eliminated.  Terms are accumulated as psi
// exponents.
void kl_accumulate(const KlSpec& spec, const CycRing& R, RootAccum& acc) {
    const QuadExt& T = *spec.T;
    const FqField& kF = T.base();
    const FqField& kE = T.ext();
    int64_t M = R.M();
    if (M % kF.p() != 0) throw ConfigError("kloosterman: ring M not divisible by p");
    int64_t psi_scale = M / kF.p();

    int n = spec.n, m = spec.m;
    if (n == 0 && m == 0) {
        if (spec.a.v == 1) acc.add(0);
        return;
    }

    // Norm fibers: elements of k_E^x with Nr = given value of k_F^x.
    std::vector<std::vector<int64_t>> fiber(size_t(kF.q()));
    for (int64_t v = 1; v < kE.q(); ++v) fiber[size_t(T.norm(T.ext_elem(v)).v)].push_back(v);

    // Free variables: t_1..t_{n-1} (plus t_n when m >= 1 <-> s_m eliminated),
    // s_1..s_{m-1}.
    int free_t = (m >= 1) ? n : n - 1;
    int free_s = (m >= 1) ? m - 1 : 0;
    std::vector<int64_t> tv(size_t(std::max(free_t, 0)), 1);
    std::vector<int64_t> sv(size_t(free_s), 1);

    std::function<void(int)> loop_s = [&](int is) {
        if (is == free_s) {
            // assemble: product of norms of free t's and free s's
            int64_t prod = 1;
            int64_t trace_acc = 0;
            for (int i = 0; i < free_t; ++i) {
                prod = kF.mul(prod, T.norm(T.ext_elem(tv[size_t(i)])).v);
                trace_acc = kF.add(trace_acc, T.trace(T.ext_elem(tv[size_t(i)])).v);
            }
            int64_t s_sum = 0;
            for (int i = 0; i < free_s; ++i) {
                prod = kF.mul(prod, sv[size_t(i)]);
                s_sum = kF.add(s_sum, sv[size_t(i)]);
            }
            int64_t rest = kF.div(spec.a.v, prod);
            if (m >= 1) {
                // s_m := rest
                int64_t arg = kF.add(kF.add(trace_acc, s_sum), rest);
                acc.add(kF.abs_trace(kF.mul(spec.psi.b, arg)) * psi_scale);
            } else {
                // t_n ranges over the norm fiber of rest
                for (int64_t tn : fiber[size_t(rest)]) {
                    int64_t arg = kF.add(trace_acc, T.trace(T.ext_elem(tn)).v);
                    acc.add(kF.abs_trace(kF.mul(spec.psi.b, arg)) * psi_scale);
                }
            }
            return;
        }
        for (int64_t v = 1; v < kF.q(); ++v) {
            sv[size_t(is)] = v;
            loop_s(is + 1);
        }
    };

    std::function<void(int)> loop_t = [&](int it) {
        if (it == free_t) {
            loop_s(0);
            return;
        }
        for (int64_t v = 1; v < kE.q(); ++v) {
            tv[size_t(it)] = v;
            loop_t(it + 1);
        }
    };
    loop_t(0);
}

} // namespace

CycNum kloosterman(const KlSpec& spec, const CycRing& R) {
    RootAccum acc(R);
    kl_accumulate(spec, R, acc);
    return acc.to_cyc();
}

CycNum kloosterman_filtered(const KlSpec& spec, const CycRing& R) {
    const QuadExt& T = *spec.T;
    const FqField& kF = T.base();
    const FqField& kE = T.ext();
    int64_t M = R.M();
    int64_t psi_scale = M / kF.p();
    RootAccum acc(R);

    int n = spec.n, m = spec.m;
    if (n == 0 && m == 0) {
        if (spec.a.v == 1) acc.add(0);
        return acc.to_cyc();
    }
    std::vector<int64_t> tv(size_t(n), 1), sv(size_t(m), 1);
    std::function<void(int)> loop_s = [&](int is) {
        if (is == m) {
            int64_t prod = 1, trace_acc = 0, s_sum = 0;
            for (int i = 0; i < n; ++i) {
                prod = kF.mul(prod, T.norm(T.ext_elem(tv[size_t(i)])).v);
                trace_acc = kF.add(trace_acc, T.trace(T.ext_elem(tv[size_t(i)])).v);
            }
            for (int i = 0; i < m; ++i) {
                prod = kF.mul(prod, sv[size_t(i)]);
                s_sum = kF.add(s_sum, sv[size_t(i)]);
            }
            if (prod != spec.a.v) return;
            acc.add(kF.abs_trace(kF.mul(spec.psi.b, kF.add(trace_acc, s_sum))) * psi_scale);
            return;
        }
        for (int64_t v = 1; v < kF.q(); ++v) {
            sv[size_t(is)] = v;
            loop_s(is + 1);
        }
    };
    std::function<void(int)> loop_t = [&](int it) {
        if (it == n) {
            loop_s(0);
            return;
        }
        for (int64_t v = 1; v < kE.q(); ++v) {
            tv[size_t(it)] = v;
            loop_t(it + 1);
        }
    };
    loop_t(0);
    return acc.to_cyc();
}

uint64_t kl_term_count(const QuadExt& T, int n, int m) {
    uint64_t qe = uint64_t(T.ext().q() - 1);
    uint64_t qf = uint64_t(T.base().q() - 1);
    uint64_t fiber = uint64_t(T.ext().q() - 1) / qf;
    uint64_t total = 1;
    if (m >= 1) {
        for (int i = 0; i < n; ++i) total *= qe;
        for (int i = 0; i < m - 1; ++i) total *= qf;
    } else if (n >= 1) {
        for (int i = 0; i < n - 1; ++i) total *= qe;
        total *= fiber;
    }
    return total;
}

std::pair<CycNum, CycNum> kl_fourier(const QuadExt& T, const AddChar& psi, int n, int m,
                                     const MultChar& chi, const CycRing& R) {
    if (chi.k != &T.base() || psi.k != &T.base())
        throw ConfigError("kl_fourier: characters must live on k_F");
    CycNum lhs = R.zero();
    for (int64_t v = 1; v < T.base().q(); ++v) {
        FqElem a = T.base_elem(v);
        KlSpec spec(T, psi, n, m, a);
        lhs = lhs + chi.eval(R, a) * kloosterman(spec, R);
    }
    MultChar chiN = chars::pullback_norm(chi, T);
    AddChar psiT = chars::pullback_trace(psi, T);
    CycNum rhs = gauss_sum(T.ext(), chiN, psiT, R).pow(n) * gauss_sum(T.base(), chi, psi, R).pow(m);
    return {lhs, rhs};
}

VerifyReport verify_hasse_davenport(const QuadExt& T, const MultChar& chi, const AddChar& psi,
                                    const CycRing& R) {
    nlohmann::json in{{"p", T.base().p()}, {"f", T.base().f()}, {"r", T.r()},
                      {"chi", chi.name("F")}, {"psi", psi.name()}};
    MultChar chiN = chars::pullback_norm(chi, T);
    AddChar psiT = chars::pullback_trace(psi, T);
    CycNum lhs = gauss_sum(T.ext(), chiN, psiT, R);
    CycNum base = gauss_sum(T.base(), chi, psi, R).pow(T.r());
    CycNum rhs = (T.r() % 2 == 0) ? -base : base;
    auto rep = (lhs == rhs) ? VerifyReport::pass("hasse_davenport", in)
                            : VerifyReport::fail("hasse_davenport", "sides differ", in);
    rep.values = {report::cyc_json(lhs), report::cyc_json(rhs)};
    return rep;
}

VerifyReport verify_hd_kl(const QuadExt& T, const AddChar& psi, int n, FqElem a,
                          const CycRing& R) {
    nlohmann::json in{{"p", T.base().p()}, {"f", T.base().f()}, {"r", T.r()},
                      {"n", n}, {"a", a.v}};
    CycNum lhs = kloosterman(KlSpec(T, psi, n, T.r(), a), R);
    CycNum base = kloosterman(KlSpec(T, psi, n + 1, 0, a), R);
    CycNum rhs = (T.r() % 2 == 0) ? -base : base;
    auto rep = (lhs == rhs) ? VerifyReport::pass("hd_kl_collapse", in)
                            : VerifyReport::fail("hd_kl_collapse", "sides differ", in);
    rep.values = {report::cyc_json(lhs), report::cyc_json(rhs)};
    return rep;
}

std::pair<FqElem, FqElem> kl_nonconstancy_witness(const QuadExt& T, const AddChar& psi, int n,
                                                  int m, const CycRing& R) {
    const FqField& kF = T.base();
    FqElem first = T.base_elem(1);
    CycNum v0 = kloosterman(KlSpec(T, psi, n, m, first), R);
    for (int64_t v = 2; v < kF.q(); ++v) {
        FqElem a = T.base_elem(v);
        if (kloosterman(KlSpec(T, psi, n, m, a), R) != v0) return {first, a};
    }
    throw CheckFailure("kl_nonconstancy_witness: corollary falsified (constant in a)");
}

FqElem kl_nonzero_witness(const QuadExt& T, const AddChar& psi, int n, int m, const CycRing& R) {
    for (int64_t v = 1; v < T.base().q(); ++v) {
        FqElem a = T.base_elem(v);
        if (!kloosterman(KlSpec(T, psi, n, m, a), R).is_zero()) return a;
    }
    throw CheckFailure("kl_nonzero_witness: corollary falsified (identically zero)");
}

std::optional<FqElem> distinguish(const QuadExt& T, const AddChar& psi, int n, int m, FqElem a,
                                  FqElem b, const CycRing& R) {
    if (a == b) return std::nullopt;
    for (int64_t v = 1; v < T.base().q(); ++v) {
        FqElem t = T.base_elem(v);
        CycNum va = kloosterman(KlSpec(T, psi, n, m, t * a), R);
        CycNum vb = kloosterman(KlSpec(T, psi, n, m, t * b), R);
        if (va != vb) return t;
    }
    throw CheckFailure("distinguish: proposition falsified (no separating t)");
}

} // namespace endoscope::sums
