#include "endoscope/suite.hpp"

#include <atomic>
#include <sstream>

namespace endoscope::suite {

using chars::AddChar;
using chars::MultChar;
using chars::U1Char;
using cyclo::CycNum;
using cyclo::CycRing;
using endo::Parity;
using gf::FqElem;
using gf::QuadExt;
using padic::LocalRing;
using report::VerifyReport;
using sscchar::Method;
using sscchar::SscGL;
using sscchar::SscU;

void RunConfig::validate() const {
    if (p < 3) throw ConfigError("config: p must be an odd prime >= 3");
    if (f < 1 || r < 1) throw ConfigError("config: degrees must be positive");
    if (n < 1) throw ConfigError("config: n must be >= 1");
    if (parity != "even" && parity != "odd" && parity != "both")
        throw ConfigError("config: parity must be even, odd or both");
    if (precision < 2) throw ConfigError("config: precision must be >= 2");
    if (threads < 1) throw ConfigError("config: threads must be >= 1");
}

namespace {

VerifyReport gf_selftest(const QuadExt& T) {
    const auto& kE = T.ext();
    const auto& kF = T.base();
    // embedding compatibility holds at any relative degree
    for (int64_t v = 0; v < kF.q(); ++v) {
        FqElem t = T.base_elem(v);
        if (T.norm(T.embed(t)) != t.pow(T.r()) && v != 0)
            return VerifyReport::fail("gf_selftest", "Nr o embed != power map");
    }
    if (T.r() == 2) {
        // conj fixes exactly the base image; eps data; U(1) size; transversal
        long fixed = 0;
        for (int64_t v = 0; v < kE.q(); ++v) {
            FqElem x = T.ext_elem(v);
            if (T.conj(T.conj(x)) != x)
                return VerifyReport::fail("gf_selftest", "conj not involutive");
            if (T.conj(x) == x) ++fixed;
        }
        if (fixed != kF.q())
            return VerifyReport::fail("gf_selftest", "conj fixed field wrong size");
        if ((T.eps() * T.eps()) != T.embed(T.eps_f()))
            return VerifyReport::fail("gf_selftest", "eps^2 != eps_f");
        if (!T.trace(T.eps()).is_zero()) return VerifyReport::fail("gf_selftest", "Tr(eps) != 0");
        for (int64_t v = 0; v < kF.q(); ++v)
            if (kF.mul(v, v) == T.eps_f().v)
                return VerifyReport::fail("gf_selftest", "eps_f is a square");
        if (int64_t(T.unit_circle().size()) != kF.q() + 1)
            return VerifyReport::fail("gf_selftest", "wrong U(1) size");
        auto tr = T.coset_transversal_u1();
        std::vector<bool> seen(size_t(kF.q()), false);
        for (auto& x : tr) seen[size_t(T.norm(x).v)] = true;
        for (int64_t v = 1; v < kF.q(); ++v)
            if (!seen[size_t(v)])
                return VerifyReport::fail("gf_selftest", "transversal norms not surjective");
    }
    nlohmann::json in{{"p", kF.p()}, {"f", kF.f()}, {"r", T.r()}};
    return VerifyReport::pass("gf_selftest", in);
}

VerifyReport cyclo_selftest(const QuadExt& T, const CycRing& R) {
    // orthogonality of characters and the Gauss-sum magnitude, exact
    AddChar psi(T.base(), 1);
    CycNum s = R.zero();
    for (int64_t v = 0; v < T.base().q(); ++v) s = s + psi.eval(R, T.base_elem(v));
    if (!s.is_zero()) return VerifyReport::fail("cyclo_selftest", "psi orthogonality failed");
    for (auto& chi : chars::enumerate_mult_chars(T.base())) {
        if (chi.trivial()) continue;
        CycNum g = sums::gauss_sum(T.base(), chi, psi, R);
        if (g * g.conjugate() != R.from_int(T.base().q()))
            return VerifyReport::fail("cyclo_selftest", "|G|^2 != q");
    }
    nlohmann::json in{{"M", R.M()}, {"dim", R.dim()}};
    return VerifyReport::pass("cyclo_selftest", in);
}

} // namespace

std::vector<VerifyReport> appendix_reports(const RunConfig& cfg, const QuadExt& T,
                                           const CycRing& R) {
    std::vector<VerifyReport> reports;
    AddChar psi(T.base(), cfg.psi_b);
    for (auto& chi : chars::enumerate_mult_chars(T.base()))
        reports.push_back(sums::verify_hasse_davenport(T, chi, psi, R));
    for (auto& chi : chars::enumerate_mult_chars(T.base())) {
        for (int n = 0; n <= 2 * cfg.max_n; ++n)
            for (int m = 0; n + m <= 2 * cfg.max_n; ++m) {
                if (n == 0 && m == 0) continue;
                nlohmann::json in{{"chi", chi.name("F")}, {"n", n}, {"m", m}};
                if (sums::kl_term_count(T, n, m) * uint64_t(T.base().q()) > cfg.term_cap) {
                    reports.push_back(
                        VerifyReport::skipped("kl_fourier", "term cap exceeded", in));
                    continue;
                }
                auto [lhs, rhs] = sums::kl_fourier(T, psi, n, m, chi, R);
                auto rep = (lhs == rhs) ? VerifyReport::pass("kl_fourier", in)
                                        : VerifyReport::fail("kl_fourier", "sides differ", in);
                rep.values = {report::cyc_json(lhs), report::cyc_json(rhs)};
                reports.push_back(std::move(rep));
            }
    }
    for (int n = 0; n <= cfg.max_n; ++n)
        for (int64_t a = 1; a < T.base().q(); ++a)
            reports.push_back(sums::verify_hd_kl(T, psi, n, T.base_elem(a), R));
    for (auto [n, m] : {std::pair<int, int>{1, 0}, {2, 0}, {1, 1}}) {
        nlohmann::json in{{"n", n}, {"m", m}};
        try {
            auto [a1, a2] = sums::kl_nonconstancy_witness(T, psi, n, m, R);
            FqElem nz = sums::kl_nonzero_witness(T, psi, n, m, R);
            auto rep = VerifyReport::pass("kl_witnesses", in);
            rep.values.push_back(nlohmann::json{{"distinct", {a1.v, a2.v}}, {"nonzero", nz.v}});
            reports.push_back(std::move(rep));
        } catch (const CheckFailure& e) {
            reports.push_back(VerifyReport::fail("kl_witnesses", e.what(), in));
        }
        for (int64_t a = 1; a < T.base().q(); ++a)
            for (int64_t b = 1; b < T.base().q(); ++b) {
                nlohmann::json din{{"n", n}, {"m", m}, {"a", a}, {"b", b}};
                try {
                    auto t = sums::distinguish(T, psi, n, m, T.base_elem(a), T.base_elem(b), R);
                    auto rep = VerifyReport::pass("kl_distinguish", din);
                    rep.values.push_back(t ? nlohmann::json(t->v)
                                           : nlohmann::json("equal parameters"));
                    reports.push_back(std::move(rep));
                } catch (const CheckFailure& e) {
                    reports.push_back(VerifyReport::fail("kl_distinguish", e.what(), din));
                }
            }
    }
    return reports;
}

namespace {

void witness_suite(const RunConfig& cfg, const QuadExt& T, std::vector<VerifyReport>& reports,
                   Parity parity) {
    LocalRing LR(T, cfg.precision, cfg.window_low);
    LocalRing LR2(T, cfg.precision + 2, cfg.window_low);
    for (int64_t uv = 1; uv < T.base().q(); ++uv) {
        for (bool twisted : {false, true}) {
            nlohmann::json in{{"parity", parity == Parity::Even ? "even" : "odd"},
                              {"n", cfg.n},
                              {"u", uv},
                              {"twisted", twisted}};
            auto w1 = endo::norm_witness(parity, cfg.n, T.base_elem(uv), std::nullopt, twisted, LR);
            auto w2 =
                endo::norm_witness(parity, cfg.n, T.base_elem(uv), std::nullopt, twisted, LR2);
            bool same = w1.all_pass() == w2.all_pass() && w1.h_comps == w2.h_comps;
            auto rep = (w1.all_pass() && same)
                           ? VerifyReport::pass("norm_witness", in)
                           : VerifyReport::fail("norm_witness",
                                                same ? "certificate failed"
                                                     : "precision-dependent verdict",
                                                in);
            rep.values.push_back(w1.to_json());
            reports.push_back(std::move(rep));
        }
    }
}

void char_suite(const RunConfig& cfg, const QuadExt& T, const CycRing& R,
                std::vector<VerifyReport>& reports, Parity parity) {
    AddChar psi(T.base(), cfg.psi_b);
    bool even = parity == Parity::Even;
    for (int64_t uv = 1; uv < T.base().q(); ++uv) {
        FqElem u = T.base_elem(uv);
        nlohmann::json in{{"parity", even ? "even" : "odd"}, {"n", cfg.n}, {"u", uv}};
        SscGL pi(T, even ? T.ext_one() : T.eps(), cyclo::RootOfUnity::minus_one(),
                 chars::omega_from_u1(U1Char(T, 1)), psi);
        std::vector<FqElem> comps(size_t(even ? 2 * cfg.n : 2 * cfg.n + 1), T.ext_one());
        comps.back() = even ? T.embed(u) : T.eps().inv() * T.embed(u);
        CycNum c, b;
        if (even) {
            c = sscchar::theta_gl_even(comps, pi, Method::Closed, R).value;
            b = sscchar::theta_gl_even(comps, pi, Method::Brute, R).value;
        } else {
            c = sscchar::theta_gl_odd(comps, pi, Method::Closed, R).value;
            b = sscchar::theta_gl_odd(comps, pi, Method::Brute, R).value;
        }
        auto rep = (c == b) ? VerifyReport::pass("char_closed_vs_brute", in)
                            : VerifyReport::fail("char_closed_vs_brute", "methods differ", in);
        rep.values = {report::cyc_json(c), report::cyc_json(b)};
        reports.push_back(std::move(rep));
        CycNum cp, bp;
        if (even) {
            cp = sscchar::theta_gl_even_phi(comps, u, pi, Method::Closed, R).value;
            bp = sscchar::theta_gl_even_phi(comps, u, pi, Method::Brute, R).value;
        } else {
            cp = sscchar::theta_gl_odd_phi(comps, u, pi, Method::Closed, R).value;
            bp = sscchar::theta_gl_odd_phi(comps, u, pi, Method::Brute, R).value;
        }
        auto rep2 = (cp == bp)
                        ? VerifyReport::pass("char_closed_vs_brute_phi", in)
                        : VerifyReport::fail("char_closed_vs_brute_phi", "methods differ", in);
        rep2.values = {report::cyc_json(cp), report::cyc_json(bp)};
        reports.push_back(std::move(rep2));
    }
}

void endo_suite(const RunConfig& cfg, const QuadExt& T, const CycRing& R,
                std::vector<VerifyReport>& reports, std::vector<nlohmann::json>& ecr_reports,
                Parity parity) {
    AddChar psi(T.base(), cfg.psi_b);
    LocalRing LR(T, cfg.precision, cfg.window_low);
    bool even = parity == Parity::Even;

    struct Combo {
        int64_t b;
        int64_t j;
    };
    std::vector<Combo> combos;
    for (int64_t bv = 1; bv < T.base().q(); ++bv)
        for (int64_t j = 0; j < T.base().q() + 1; ++j) combos.push_back({bv, j});

    std::function<nlohmann::json(size_t)> work = [&](size_t i) -> nlohmann::json {
        const Combo& c = combos[i];
        auto reps = endo::verify_ecr(parity, cfg.n, T, T.base_elem(c.b), U1Char(T, c.j), 1, LR, R,
                                     psi);
        nlohmann::json out = nlohmann::json::array();
        for (auto& r : reps) out.push_back(r.to_json());
        return out;
    };
    auto results = parallel_map<nlohmann::json>(combos.size(), cfg.threads, work);
    for (size_t i = 0; i < results.size(); ++i) {
        bool ok = true;
        for (const auto& fam : results[i])
            if (!fam["verdict"].get<bool>()) ok = false;
        nlohmann::json in{{"parity", even ? "even" : "odd"},
                          {"n", cfg.n},
                          {"b", combos[i].b},
                          {"omega_prime", combos[i].j}};
        reports.push_back(ok ? VerifyReport::pass("ecr", in)
                             : VerifyReport::fail("ecr", "some row differs", in));
        for (const auto& fam : results[i]) ecr_reports.push_back(fam);
    }

    try {
        reports.push_back(endo::fourier_uniqueness_check(parity, cfg.n, T, psi, R));
    } catch (const CheckFailure& e) {
        reports.push_back(VerifyReport::fail("fourier_uniqueness", e.what()));
    }
    for (int64_t bv = 1; bv < T.base().q(); ++bv)
        for (int64_t j = 0; j < T.base().q() + 1; ++j)
            reports.push_back(
                endo::kappa_bookkeeping(SscU(T, T.base_elem(bv), U1Char(T, j), even, cfg.n, psi)));
}

} // namespace

int run_suite(const RunConfig& cfg, std::ostream& out) {
    cfg.validate();
    QuadExt T = gf::make_tower(cfg.p, cfg.f, cfg.r);
    CycRing R(cyclo::lcm_order({cfg.p, T.ext().q() - 1}));

    std::vector<VerifyReport> reports;
    std::vector<nlohmann::json> ecr_reports;
    reports.push_back(gf_selftest(T));
    reports.push_back(cyclo_selftest(T, R));
    for (auto& r : appendix_reports(cfg, T, R)) reports.push_back(std::move(r));
    if (T.r() == 2) {
        std::vector<Parity> parities;
        if (cfg.parity != "odd") parities.push_back(Parity::Even);
        if (cfg.parity != "even") parities.push_back(Parity::Odd);
        for (Parity par : parities) {
            witness_suite(cfg, T, reports, par);
            char_suite(cfg, T, R, reports, par);
            endo_suite(cfg, T, R, reports, ecr_reports, par);
        }
    }

    bool all_pass = true;
    nlohmann::json jreports = nlohmann::json::array();
    for (auto& r : reports) {
        if (!cfg.timings) r.timing_ms.reset();
        if (r.outcome == report::Outcome::Fail) all_pass = false;
        jreports.push_back(r.to_json());
    }
    nlohmann::json doc{{"schema", 1},
                       {"config",
                        {{"p", cfg.p},
                         {"f", cfg.f},
                         {"r", cfg.r},
                         {"n", cfg.n},
                         {"parity", cfg.parity},
                         {"precision", cfg.precision},
                         {"psi_b", cfg.psi_b}}},
                       {"reports", jreports},
                       {"ecr", ecr_reports},
                       {"verdict", all_pass ? "pass" : "fail"}};
    out << doc.dump(1) << "\n";
    return all_pass ? 0 : 1;
}

std::string run_suite_to_string(const RunConfig& cfg) {
    std::ostringstream os;
    run_suite(cfg, os);
    return os.str();
}

void emit_kl_table(const RunConfig& cfg, int max_n, int max_m, std::ostream& out) {
    cfg.validate();
    QuadExt T = gf::make_tower(cfg.p, cfg.f, cfg.r);
    CycRing R(cfg.p);
    AddChar psi(T.base(), cfg.psi_b);
    out << "a";
    for (int n = 0; n <= max_n; ++n)
        for (int m = 0; m <= max_m; ++m) {
            if (n == 0 && m == 0) continue;
            out << ",Kl(n=" << n << " m=" << m << ")";
        }
    out << "\n";
    for (int64_t a = 1; a < T.base().q(); ++a) {
        out << a;
        for (int n = 0; n <= max_n; ++n)
            for (int m = 0; m <= max_m; ++m) {
                if (n == 0 && m == 0) continue;
                if (sums::kl_term_count(T, n, m) > cfg.term_cap) {
                    out << ",skipped(term cap)";
                    continue;
                }
                CycNum v =
                    sums::kloosterman(sums::KlSpec(T, psi, n, m, T.base_elem(a)), R);
                auto z = v.complex_approx();
                out << "," << v.str() << " ~ (" << z.real() << (z.imag() < 0 ? "" : "+")
                    << z.imag() << "i)";
            }
        out << "\n";
    }
    // highlight a non-constancy witness pair for the smallest nontrivial case
    try {
        auto [a1, a2] = sums::kl_nonconstancy_witness(T, psi, 1, 0, R);
        out << "# nonconstancy witness (n=1 m=0): a=" << a1.v << " vs a=" << a2.v << "\n";
    } catch (const CheckFailure&) {
        out << "# nonconstancy witness: none found (corollary falsified)\n";
    }
}

} // namespace endoscope::suite
