#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "endoscope/suite.hpp"

using namespace endoscope;
using chars::AddChar;
using chars::MultChar;
using chars::U1Char;
using cyclo::CycRing;
using endo::Parity;
using gf::FqElem;
using gf::QuadExt;
using padic::LocalMatrix;
using padic::LocalRing;
using sscchar::Method;

namespace {

struct TowerOpts {
    int64_t p = 3;
    int f = 1;
    int r = 2;
    void attach(CLI::App* cmd) {
        cmd->add_option("--p", p, "residue characteristic (odd prime)");
        cmd->add_option("--f", f, "degree of k_F over the prime field");
        cmd->add_option("--r", r, "relative degree of k_E over k_F");
        // --q is accepted as a synonym for --p at f = 1
        cmd->add_option_function<int64_t>(
            "--q", [this](int64_t q) { p = q; }, "cardinality of k_F (prime; implies --f 1)");
    }
    QuadExt make() const { return gf::make_tower(p, f, r); }
};

int64_t ring_m(const QuadExt& T) {
    return cyclo::lcm_order({T.base().p(), T.ext().q() - 1});
}

// character selectors: add:b=<elt>, mul:F:j=<int>, mul:E:j=<int>, mul:U1:j=<int>
AddChar parse_add_char(const QuadExt& T, const std::string& s) {
    if (s.rfind("add:b=", 0) != 0) throw ConfigError("expected add:b=<elt>, got " + s);
    return AddChar(T.base(), std::stoll(s.substr(6)));
}

MultChar parse_mult_char(const QuadExt& T, const std::string& s) {
    if (s.rfind("mul:F:j=", 0) == 0) return MultChar(T.base(), std::stoll(s.substr(8)));
    if (s.rfind("mul:E:j=", 0) == 0) return MultChar(T.ext(), std::stoll(s.substr(8)));
    throw ConfigError("expected mul:F:j=<int> or mul:E:j=<int>, got " + s);
}

U1Char parse_u1_char(const QuadExt& T, const std::string& s) {
    if (s.rfind("mul:U1:j=", 0) == 0) return U1Char(T, std::stoll(s.substr(9)));
    if (s.rfind("j=", 0) == 0) return U1Char(T, std::stoll(s.substr(2)));
    throw ConfigError("expected mul:U1:j=<int> or j=<int>, got " + s);
}

std::vector<FqElem> parse_comps(const QuadExt& T, const std::string& csv) {
    std::vector<FqElem> out;
    std::stringstream ss(csv);
    std::string tok;
    while (std::getline(ss, tok, ',')) out.push_back(T.ext_elem(std::stoll(tok)));
    return out;
}

LocalMatrix parse_matrix(const LocalRing& R, const nlohmann::json& j) {
    int n = j.at("n").get<int>();
    LocalMatrix m(R, n);
    const auto& entries = j.at("entries");
    for (int i = 0; i < n; ++i)
        for (int k = 0; k < n; ++k) {
            const auto& e = entries.at(size_t(i)).at(size_t(k));
            if (e.is_number_integer()) {
                m.at(i, k) = R.from_int(e.get<int64_t>());
                continue;
            }
            int v = e.at("v").get<int>();
            LocalRing::Unit u = R.uzero();
            const auto& coeffs = e.at("u");
            for (size_t c = 0; c < coeffs.size() && c < u.size(); ++c)
                u[c] = ((coeffs.at(c).get<int64_t>() % R.pk()) + R.pk()) % R.pk();
            m.at(i, k) = R.make(v, std::move(u), R.prec());
        }
    return m;
}

nlohmann::json matrix_json(const LocalMatrix& m) {
    nlohmann::json rows = nlohmann::json::array();
    for (int i = 0; i < m.n(); ++i) {
        nlohmann::json row = nlohmann::json::array();
        for (int j = 0; j < m.n(); ++j) row.push_back(m.at(i, j).str());
        rows.push_back(row);
    }
    return rows;
}

nlohmann::json read_json_input(const std::string& path) {
    if (path.empty() || path == "-") {
        nlohmann::json j;
        std::cin >> j;
        return j;
    }
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open " + path);
    nlohmann::json j;
    in >> j;
    return j;
}

void emit(const nlohmann::json& j) { std::cout << j.dump(1) << "\n"; }

Parity parse_parity(const std::string& s) {
    if (s == "even") return Parity::Even;
    if (s == "odd") return Parity::Odd;
    throw ConfigError("parity must be even or odd");
}

Method parse_method_one(const std::string& s) {
    if (s == "closed") return Method::Closed;
    if (s == "brute") return Method::Brute;
    throw ConfigError("method must be closed, brute or both");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verification of simple supercuspidal character identities"};
    app.require_subcommand(1);

    // ---- sums ----------------------------------------------------------
    auto* sums_cmd = app.add_subcommand("sums", "Gauss and Kloosterman sums");
    sums_cmd->require_subcommand(1);
    TowerOpts sums_tower;
    int sums_n = 1, sums_m = 0, sums_maxn = 2, sums_maxm = 2;
    int64_t sums_a = 1, sums_psib = 1;
    std::string sums_chi = "mul:F:j=0";

    std::string sums_psi_sel;
    auto* kl_cmd = sums_cmd->add_subcommand("kl", "one Kloosterman sum");
    sums_tower.attach(kl_cmd);
    kl_cmd->add_option("--n", sums_n);
    kl_cmd->add_option("--m", sums_m);
    kl_cmd->add_option("--a", sums_a, "constraint value, element of k_F^x");
    kl_cmd->add_option("--psi-b", sums_psib, "additive character twist");
    kl_cmd->add_option("--psi", sums_psi_sel, "additive character selector add:b=<elt>");
    kl_cmd->callback([&] {
        QuadExt T = sums_tower.make();
        CycRing R(sums_tower.p);
        AddChar psi = sums_psi_sel.empty() ? AddChar(T.base(), sums_psib)
                                           : parse_add_char(T, sums_psi_sel);
        uint64_t terms = sums::kl_term_count(T, sums_n, sums_m);
        if (terms > 100000000)
            throw ConfigError("term cap exceeded: " + std::to_string(terms) +
                              " terms > 10^8 (see --help)");
        auto v = sums::kloosterman(
            sums::KlSpec(T, psi, sums_n, sums_m, T.base_elem(sums_a)), R);
        emit({{"schema", 1}, {"kl", report::cyc_json(v)}, {"terms", terms}});
    });

    auto* gauss_cmd = sums_cmd->add_subcommand("gauss", "one Gauss sum on k_F");
    sums_tower.attach(gauss_cmd);
    gauss_cmd->add_option("--chi", sums_chi, "multiplicative character selector");
    gauss_cmd->add_option("--psi-b", sums_psib);
    gauss_cmd->callback([&] {
        QuadExt T = sums_tower.make();
        CycRing R(ring_m(T));
        MultChar chi = parse_mult_char(T, sums_chi);
        AddChar psi(T.base(), sums_psib);
        auto v = (chi.k == &T.ext())
                     ? sums::gauss_sum(T.ext(), chi, chars::pullback_trace(psi, T), R)
                     : sums::gauss_sum(T.base(), chi, psi, R);
        emit({{"schema", 1}, {"gauss", report::cyc_json(v)}});
    });

    auto* app_cmd = sums_cmd->add_subcommand("verify-appendix", "every appendix identity");
    TowerOpts app_tower;
    app_tower.attach(app_cmd);
    app_cmd->add_option("--max-n", sums_maxn);
    bool app_csv = false;
    app_cmd->add_flag("--csv", app_csv, "also emit the Kl table as CSV on stderr");
    app_cmd->callback([&] {
        suite::RunConfig cfg;
        cfg.p = app_tower.p;
        cfg.f = app_tower.f;
        cfg.r = app_tower.r;
        cfg.max_n = sums_maxn;
        cfg.validate();
        QuadExt T = gf::make_tower(cfg.p, cfg.f, cfg.r);
        CycRing R(cyclo::lcm_order({cfg.p, T.base().q() - 1}));
        nlohmann::json arr = nlohmann::json::array();
        bool ok = true;
        for (auto& r : suite::appendix_reports(cfg, T, R)) {
            if (r.outcome == report::Outcome::Fail) ok = false;
            arr.push_back(r.to_json());
        }
        if (app_csv) suite::emit_kl_table(cfg, 2, 2, std::cerr);
        emit({{"schema", 1}, {"reports", arr}, {"verdict", ok ? "pass" : "fail"}});
        if (!ok) throw CheckFailure("appendix suite failed");
    });

    auto* table_cmd = sums_cmd->add_subcommand("table", "CSV of Kl values indexed by a");
    TowerOpts table_tower;
    table_tower.attach(table_cmd);
    table_cmd->add_option("--max-n", sums_maxn);
    table_cmd->add_option("--max-m", sums_maxm);
    table_cmd->callback([&] {
        suite::RunConfig cfg;
        cfg.p = table_tower.p;
        cfg.f = table_tower.f;
        cfg.r = table_tower.r;
        suite::emit_kl_table(cfg, sums_maxn, sums_maxm, std::cout);
    });

    // ---- padic ---------------------------------------------------------
    auto* padic_cmd = app.add_subcommand("padic", "truncated p-adic matrix operations");
    padic_cmd->require_subcommand(1);
    TowerOpts pd_tower;
    int pd_prec = 4, pd_window = -2, pd_N = 2, pd_bound = 1;
    int64_t pd_u = 1;
    std::string pd_in, pd_variant = "gl";
    int pd_var_n = 1;

    auto attach_padic = [&](CLI::App* c) {
        pd_tower.attach(c);
        c->add_option("--precision", pd_prec);
        c->add_option("--window-low", pd_window);
        c->add_option("--in", pd_in, "matrix JSON file ('-' for stdin)");
    };

    auto* th_cmd = padic_cmd->add_subcommand("theta", "theta(g) = J tc(g)^-1 J^-1");
    attach_padic(th_cmd);
    th_cmd->callback([&] {
        QuadExt T = pd_tower.make();
        LocalRing R(T, pd_prec, pd_window);
        auto g = parse_matrix(R, read_json_input(pd_in));
        emit({{"schema", 1}, {"theta", matrix_json(padic::theta(g))}});
    });

    auto* nm_cmd = padic_cmd->add_subcommand("norm", "N(g) = g theta(g)");
    attach_padic(nm_cmd);
    nm_cmd->callback([&] {
        QuadExt T = pd_tower.make();
        LocalRing R(T, pd_prec, pd_window);
        auto g = parse_matrix(R, read_json_input(pd_in));
        emit({{"schema", 1}, {"norm", matrix_json(padic::norm_elem(g))}});
    });

    auto* cl_cmd = padic_cmd->add_subcommand("classify", "Iwahori membership");
    attach_padic(cl_cmd);
    cl_cmd->add_option("--variant", pd_variant, "gl | u-even | u-odd");
    cl_cmd->add_option("--var-n", pd_var_n, "n for the unitary variants");
    cl_cmd->callback([&] {
        QuadExt T = pd_tower.make();
        LocalRing R(T, pd_prec, pd_window);
        auto g = parse_matrix(R, read_json_input(pd_in));
        padic::Variant v = pd_variant == "gl" ? padic::Variant::gl(g.n())
                           : pd_variant == "u-even" ? padic::Variant::u_even(pd_var_n)
                                                    : padic::Variant::u_odd(pd_var_n);
        auto cls = padic::classify_iwahori(g, v);
        const char* name[] = {"outside", "I", "I+", "I++"};
        emit({{"schema", 1}, {"class", name[int(cls)]}});
    });

    auto* co_cmd = padic_cmd->add_subcommand("components", "affine simple components");
    attach_padic(co_cmd);
    co_cmd->add_option("--variant", pd_variant);
    co_cmd->add_option("--var-n", pd_var_n);
    co_cmd->callback([&] {
        QuadExt T = pd_tower.make();
        LocalRing R(T, pd_prec, pd_window);
        auto g = parse_matrix(R, read_json_input(pd_in));
        padic::Variant v = pd_variant == "gl" ? padic::Variant::gl(g.n())
                           : pd_variant == "u-even" ? padic::Variant::u_even(pd_var_n)
                                                    : padic::Variant::u_odd(pd_var_n);
        auto comps = padic::affine_components(g, v);
        nlohmann::json arr = nlohmann::json::array();
        for (auto& c : comps.comps) arr.push_back(c.v);
        emit({{"schema", 1},
              {"components", arr},
              {"affine_generic", padic::is_affine_generic(comps)}});
    });

    auto* klm_cmd = padic_cmd->add_subcommand("key-lemma", "bounded key lemma probe");
    pd_tower.attach(klm_cmd);
    klm_cmd->add_option("--precision", pd_prec);
    klm_cmd->add_option("--N", pd_N, "matrix size");
    klm_cmd->add_option("--u", pd_u, "corner component of 1+phi_u (k_F element)");
    klm_cmd->add_option("--bound", pd_bound, "valuation bound K");
    klm_cmd->callback([&] {
        QuadExt T = pd_tower.make();
        LocalRing R(T, pd_prec, pd_window);
        auto g = LocalMatrix::identity(R, pd_N) +
                 padic::phi(R, T.embed(T.base_elem(pd_u)), pd_N);
        auto rep = padic::key_lemma_probe(g, pd_bound);
        emit({{"schema", 1}, {"report", rep.to_json()}});
        if (!rep.passed()) throw CheckFailure("key lemma probe failed");
    });

    // ---- char ----------------------------------------------------------
    auto* char_cmd = app.add_subcommand("char", "character values");
    char_cmd->require_subcommand(1);
    TowerOpts ch_tower;
    int ch_n = 1, ch_prec = 4;
    int64_t ch_u = 1, ch_b = 1, ch_zeta = -1, ch_psib = 1;
    std::string ch_comps = "1,1", ch_omega = "mul:E:j=0", ch_omega_p = "j=0",
                ch_method = "both", ch_family = "even";

    auto attach_char = [&](CLI::App* c, bool gl) {
        ch_tower.attach(c);
        c->add_option("--n", ch_n);
        c->add_option("--comps", ch_comps, "component encodings, comma separated");
        c->add_option("--method", ch_method, "closed | brute | both");
        c->add_option("--psi-b", ch_psib);
        if (gl) {
            c->add_option("--zeta", ch_zeta, "+1 or -1");
            c->add_option("--omega", ch_omega, "conjugate self-dual character of k_E^x");
        } else {
            c->add_option("--b", ch_b, "k_F^x parameter of pi'");
            c->add_option("--omega-prime", ch_omega_p, "U(1) character selector");
        }
    };

    auto run_char = [&](const std::string& which) {
        QuadExt T = ch_tower.make();
        CycRing R(ring_m(T));
        auto comps = parse_comps(T, ch_comps);
        std::vector<Method> methods;
        if (ch_method == "both") {
            methods = {Method::Closed, Method::Brute};
        } else {
            methods = {parse_method_one(ch_method)};
        }
        nlohmann::json vals = nlohmann::json::array();
        std::optional<cyclo::CycNum> first;
        bool agree = true;
        for (Method m : methods) {
            sscchar::CharValue cv = [&] {
                if (which == "u-even" || which == "u-odd") {
                    sscchar::SscU pi(T, T.base_elem(ch_b), parse_u1_char(T, ch_omega_p),
                                     which == "u-even", ch_n, AddChar(T.base(), ch_psib));
                    return which == "u-even" ? sscchar::theta_u_even(comps, pi, m, R)
                                             : sscchar::theta_u_odd(comps, pi, m, R);
                }
                bool even = which.rfind("gl-even", 0) == 0;
                sscchar::SscGL pi(T, even ? T.ext_one() : T.eps(),
                                  ch_zeta >= 0 ? cyclo::RootOfUnity::one()
                                               : cyclo::RootOfUnity::minus_one(),
                                  parse_mult_char(T, ch_omega), AddChar(T.base(), ch_psib));
                if (which == "gl-even") return sscchar::theta_gl_even(comps, pi, m, R);
                if (which == "gl-even-phi")
                    return sscchar::theta_gl_even_phi(comps, T.base_elem(ch_u), pi, m, R);
                if (which == "gl-odd") return sscchar::theta_gl_odd(comps, pi, m, R);
                return sscchar::theta_gl_odd_phi(comps, T.base_elem(ch_u), pi, m, R);
            }();
            vals.push_back({{"method", m == Method::Closed ? "closed" : "brute"},
                            {"value", report::cyc_json(cv.value)},
                            {"element", cv.element_desc}});
            if (!first)
                first = cv.value;
            else if (!(*first == cv.value))
                agree = false;
        }
        emit({{"schema", 1}, {"values", vals}, {"methods_agree", agree}});
        if (!agree) throw CheckFailure("closed and brute force disagree");
    };

    for (std::string which : {"gl-even", "gl-even-phi", "gl-odd", "gl-odd-phi"}) {
        auto* c = char_cmd->add_subcommand(which, "twisted GL character value");
        attach_char(c, true);
        if (which.find("phi") != std::string::npos)
            c->add_option("--u", ch_u, "phi-family parameter u in k_F^x");
        c->callback([&, which] { run_char(which); });
    }
    for (std::string which : {"u-even", "u-odd"}) {
        auto* c = char_cmd->add_subcommand(which, "unitary group character value");
        attach_char(c, false);
        c->callback([&, which] { run_char(which); });
    }

    auto* vr_cmd = char_cmd->add_subcommand("validate-reps", "matrix-level representative sets");
    ch_tower.attach(vr_cmd);
    vr_cmd->add_option("--n", ch_n);
    vr_cmd->add_option("--u", ch_u);
    vr_cmd->add_option("--family", ch_family, "even | even-phi | odd | odd-phi");
    vr_cmd->add_option("--precision", ch_prec);
    vr_cmd->callback([&] {
        QuadExt T = ch_tower.make();
        LocalRing R(T, ch_prec);
        sscchar::TorusFamily fam =
            ch_family == "even" ? sscchar::TorusFamily::EvenPlain
            : ch_family == "even-phi" ? sscchar::TorusFamily::EvenPhi
            : ch_family == "odd" ? sscchar::TorusFamily::OddPlain
                                 : sscchar::TorusFamily::OddPhi;
        auto rep = sscchar::validate_torus_reps(fam, T, ch_n, T.base_elem(ch_u), R);
        emit({{"schema", 1}, {"report", rep.to_json()}});
        if (!rep.passed()) throw CheckFailure("representative validation failed");
    });

    // ---- endo ----------------------------------------------------------
    auto* endo_cmd = app.add_subcommand("endo", "endoscopic lifting layer");
    endo_cmd->require_subcommand(1);
    TowerOpts en_tower;
    int en_n = 1, en_kappa = 1, en_prec = 4;
    int64_t en_b = 1, en_psib = 1;
    std::string en_parity = "even", en_omega_p = "j=0", en_omega = "mul:E:j=0";
    bool en_all = false;

    auto* lift_cmd = endo_cmd->add_subcommand("lift", "lifting target of pi'_{b, omega'}");
    en_tower.attach(lift_cmd);
    lift_cmd->add_option("--parity", en_parity);
    lift_cmd->add_option("--n", en_n);
    lift_cmd->add_option("--b", en_b);
    lift_cmd->add_option("--omega-prime", en_omega_p);
    lift_cmd->add_option("--kappa", en_kappa);
    lift_cmd->callback([&] {
        QuadExt T = en_tower.make();
        sscchar::SscU src(T, T.base_elem(en_b), parse_u1_char(T, en_omega_p),
                          en_parity == "even", en_n, AddChar(T.base(), en_psib));
        auto l = endo::lift(src, en_kappa);
        emit({{"schema", 1}, {"lift", l.derivation}});
    });

    auto* ecr_cmd = endo_cmd->add_subcommand("verify-ecr", "endoscopic character relation");
    en_tower.attach(ecr_cmd);
    ecr_cmd->add_option("--parity", en_parity);
    ecr_cmd->add_option("--n", en_n);
    ecr_cmd->add_option("--b", en_b);
    ecr_cmd->add_option("--omega-prime", en_omega_p);
    ecr_cmd->add_option("--kappa", en_kappa);
    ecr_cmd->add_option("--precision", en_prec);
    ecr_cmd->add_flag("--all", en_all, "all b and omega'");
    ecr_cmd->callback([&] {
        QuadExt T = en_tower.make();
        LocalRing LR(T, en_prec);
        CycRing R(cyclo::lcm_order({en_tower.p, T.base().q() + 1}));
        AddChar psi(T.base(), en_psib);
        Parity par = parse_parity(en_parity);
        nlohmann::json out = nlohmann::json::array();
        bool ok = true;
        auto run_one = [&](FqElem b, U1Char op) {
            auto reps = endo::verify_ecr(par, en_n, T, b, op, en_kappa, LR, R, psi);
            for (auto& r : reps) {
                if (!r.verdict) ok = false;
                out.push_back(r.to_json());
            }
        };
        if (en_all) {
            for (int64_t bv = 1; bv < T.base().q(); ++bv)
                for (auto& op : chars::enumerate_u1_chars(T)) run_one(T.base_elem(bv), op);
        } else {
            run_one(T.base_elem(en_b), parse_u1_char(T, en_omega_p));
        }
        emit({{"schema", 1}, {"ecr", out}, {"verdict", ok ? "pass" : "fail"}});
        if (!ok) throw CheckFailure("endoscopic character relation failed");
    });

    auto* uq_cmd = endo_cmd->add_subcommand("uniqueness", "Fourier uniqueness of the target");
    en_tower.attach(uq_cmd);
    uq_cmd->add_option("--parity", en_parity);
    uq_cmd->add_option("--n", en_n);
    uq_cmd->callback([&] {
        QuadExt T = en_tower.make();
        CycRing R(en_tower.p);
        auto rep = endo::fourier_uniqueness_check(parse_parity(en_parity), en_n, T,
                                                  AddChar(T.base(), en_psib), R);
        emit({{"schema", 1}, {"report", rep.to_json()}});
    });

    auto* par_cmd = endo_cmd->add_subcommand("parity", "the parity constant zeta_omega");
    en_tower.attach(par_cmd);
    par_cmd->add_option("--parity", en_parity);
    par_cmd->add_option("--omega", en_omega);
    par_cmd->callback([&] {
        QuadExt T = en_tower.make();
        MultChar omega = parse_mult_char(T, en_omega);
        int z = endo::parity_zeta(omega, parse_parity(en_parity), T);
        emit({{"schema", 1}, {"zeta_omega", z}});
    });

    // ---- suite ---------------------------------------------------------
    auto* suite_cmd = app.add_subcommand("suite", "full verification suite");
    suite::RunConfig cfg;
    suite_cmd->add_option("--p", cfg.p);
    suite_cmd->add_option("--f", cfg.f);
    suite_cmd->add_option("--r", cfg.r);
    suite_cmd->add_option("--n", cfg.n);
    suite_cmd->add_option("--parity", cfg.parity);
    suite_cmd->add_option("--precision", cfg.precision);
    suite_cmd->add_option("--window-low", cfg.window_low);
    suite_cmd->add_option("--psi-b", cfg.psi_b);
    suite_cmd->add_option("--max-n", cfg.max_n);
    suite_cmd->add_option("--term-cap", cfg.term_cap);
    suite_cmd->add_option("--threads", cfg.threads);
    suite_cmd->add_flag("--timings", cfg.timings);
    suite_cmd->callback([&] {
        int rc = suite::run_suite(cfg, std::cout);
        if (rc != 0) throw CheckFailure("suite failed");
    });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const CheckFailure& e) {
        std::cerr << "verification failure: " << e.what() << "\n";
        return 1;
    } catch (const WindowOverflow& e) {
        std::cerr << "window overflow: " << e.what() << "\n";
        return 2;
    } catch (const InsufficientPrecision& e) {
        std::cerr << "insufficient precision: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
