#include "endoscope/gf.hpp"

#include <algorithm>
#include <numeric>

namespace endoscope::gf {

namespace {

constexpr int64_t kMaxFieldSize = int64_t(1) << 20;

bool is_prime(int64_t n) {
    if (n < 2) return false;
    for (int64_t d = 2; d * d <= n; ++d)
        if (n % d == 0) return false;
    return true;
}

std::vector<int64_t> prime_divisors(int64_t n) {
    std::vector<int64_t> out;
    for (int64_t d = 2; d * d <= n; ++d) {
        if (n % d == 0) {
            out.push_back(d);
            while (n % d == 0) n /= d;
        }
    }
    if (n > 1) out.push_back(n);
    return out;
}

using Poly = std::vector<int64_t>; // dense, coefficients in [0,p)

void poly_trim(Poly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

Poly poly_mulmod(const Poly& a, const Poly& b, const Poly& m, int64_t p) {
    Poly c(a.size() + b.size() > 0 ? a.size() + b.size() - 1 : 0, 0);
    for (size_t i = 0; i < a.size(); ++i) {
        if (a[i] == 0) continue;
        for (size_t j = 0; j < b.size(); ++j)
            c[i + j] = (c[i + j] + a[i] * b[j]) % p;
    }
    // reduce by monic m
    int deg_m = int(m.size()) - 1;
    for (int i = int(c.size()) - 1; i >= deg_m; --i) {
        int64_t t = c[i];
        if (t == 0) continue;
        c[i] = 0;
        for (int j = 0; j < deg_m; ++j)
            c[i - deg_m + j] = ((c[i - deg_m + j] - t * m[j]) % p + p * p) % p;
    }
    c.resize(deg_m, 0);
    return c;
}

Poly poly_powmod(Poly base, int64_t e, const Poly& m, int64_t p) {
    Poly r{1};
    r.resize(m.size() - 1, 0);
    base.resize(m.size() - 1, 0);
    while (e > 0) {
        if (e & 1) r = poly_mulmod(r, base, m, p);
        base = poly_mulmod(base, base, m, p);
        e >>= 1;
    }
    return r;
}

Poly poly_mod(Poly a, const Poly& m, int64_t p) {
    poly_trim(a);
    int deg_m = int(m.size()) - 1;
    int64_t lead_inv = 1;
    // m monic in our use
    for (int i = int(a.size()) - 1; i >= deg_m; --i) {
        int64_t t = a[i] * lead_inv % p;
        if (t == 0) continue;
        a[i] = 0;
        for (int j = 0; j < deg_m; ++j)
            a[i - deg_m + j] = ((a[i - deg_m + j] - t * m[j]) % p + p * p) % p;
    }
    a.resize(std::max<size_t>(deg_m, 1), 0);
    poly_trim(a);
    return a;
}

Poly poly_gcd(Poly a, Poly b, int64_t p) {
    poly_trim(a);
    poly_trim(b);
    while (!b.empty()) {
        // make b monic
        int64_t lead = b.back();
        if (lead != 1) {
            // modular inverse of lead
            int64_t inv = 1, base = lead, e = p - 2;
            while (e) {
                if (e & 1) inv = inv * base % p;
                base = base * base % p;
                e >>= 1;
            }
            for (auto& c : b) c = c * inv % p;
        }
        Poly r = poly_mod(a, b, p);
        a = std::move(b);
        b = std::move(r);
    }
    return a;
}

bool poly_is_x(const Poly& a) {
    return a.size() == 2 && a[0] == 0 && a[1] == 1;
}

bool is_irreducible(const Poly& m, int64_t p) {
    int d = int(m.size()) - 1;
    if (d < 1) return false;
    if (d == 1) return true;
    if (m[0] == 0) return false; // divisible by x
    // x^(p^d) == x mod m, and gcd(x^(p^(d/l)) - x, m) = 1 for prime l | d
    Poly xp = poly_powmod(Poly{0, 1}, p, m, p); // x^p
    Poly acc = xp;
    // acc = x^(p^k) computed by iterated Frobenius via powmod composition:
    // x^(p^(k+1)) = (x^(p^k))^p
    std::vector<Poly> frob_pows(d + 1);
    frob_pows[1] = xp;
    for (int k = 2; k <= d; ++k)
        frob_pows[k] = poly_powmod(frob_pows[k - 1], p, m, p);
    Poly top = frob_pows[d];
    poly_trim(top);
    if (!poly_is_x(top)) return false;
    for (int64_t l : prime_divisors(d)) {
        Poly t = frob_pows[d / l];
        // t - x
        if (t.size() < 2) t.resize(2, 0);
        t[1] = ((t[1] - 1) % p + p) % p;
        Poly g = poly_gcd(m, t, p);
        poly_trim(g);
        if (g.size() != 1) return false;
    }
    return true;
}

} // namespace

FqField::FqField(int64_t p, int f) : p_(p), f_(f) {
    if (!is_prime(p) || p < 3)
        throw ConfigError("FqField: p must be an odd prime, got " + std::to_string(p));
    if (f < 1) throw ConfigError("FqField: extension degree must be >= 1");
    q_ = 1;
    for (int i = 0; i < f; ++i) {
        q_ *= p;
        if (q_ > kMaxFieldSize) throw ConfigError("FqField: field too large to enumerate");
    }

    // Lexicographically smallest monic irreducible modulus, coefficients
    // (c_0, ..., c_{f-1}) compared with c_0 most significant.
    int64_t count = q_; // p^f tuples
    for (int64_t idx = 0; idx < count; ++idx) {
        Poly m(f + 1, 0);
        m[f] = 1;
        // decode idx with c_0 as the most significant base-p digit
        int64_t tmp = idx;
        for (int i = f - 1; i >= 0; --i) {
            m[i] = tmp % p;
            tmp /= p;
        }
        if (is_irreducible(m, p)) {
            modulus_ = m;
            break;
        }
    }
    if (modulus_.empty()) throw ConfigError("FqField: no irreducible modulus found");

    // Find the lex-smallest primitive element using table-free multiplication.
    auto ord_div = prime_divisors(q_ - 1);
    std::vector<int64_t> candidates;
    for (int64_t v = 1; v < q_; ++v) candidates.push_back(v);
    std::sort(candidates.begin(), candidates.end(),
              [&](int64_t a, int64_t b) { return lex_less(a, b); });
    for (int64_t cand : candidates) {
        bool primitive = true;
        for (int64_t l : ord_div) {
            // cand^((q-1)/l) via raw arithmetic
            int64_t e = (q_ - 1) / l;
            int64_t r = 1, b = cand;
            while (e) {
                if (e & 1) r = raw_mul(r, b);
                b = raw_mul(b, b);
                e >>= 1;
            }
            if (r == 1) {
                primitive = false;
                break;
            }
        }
        if (primitive) {
            gen_ = cand;
            break;
        }
    }
    if (gen_ == 0) throw ConfigError("FqField: no primitive element found");

    exp_.resize(q_ - 1);
    log_.assign(q_, -1);
    int64_t cur = 1;
    for (int64_t k = 0; k < q_ - 1; ++k) {
        exp_[k] = cur;
        log_[cur] = k;
        cur = raw_mul(cur, gen_);
    }

    abs_tr_.resize(q_);
    for (int64_t v = 0; v < q_; ++v) {
        int64_t s = 0, x = v;
        for (int i = 0; i < f_; ++i) {
            s = add(s, x);
            // Frobenius via raw power
            int64_t r = 1, b = x, e = p_;
            while (e) {
                if (e & 1) r = raw_mul(r, b);
                b = raw_mul(b, b);
                e >>= 1;
            }
            x = r;
        }
        // s lies in the prime field: constant polynomial
        abs_tr_[v] = s % p_;
    }
}

int64_t FqField::raw_mul(int64_t a, int64_t b) const {
    Poly pa(f_), pb(f_);
    for (int i = 0; i < f_; ++i) {
        pa[i] = a % p_;
        a /= p_;
        pb[i] = b % p_;
        b /= p_;
    }
    Poly c = poly_mulmod(pa, pb, modulus_, p_);
    int64_t enc = 0;
    for (int i = f_ - 1; i >= 0; --i) enc = enc * p_ + c[i];
    return enc;
}

int64_t FqField::add(int64_t a, int64_t b) const {
    int64_t enc = 0, mult = 1;
    for (int i = 0; i < f_; ++i) {
        enc += ((a % p_ + b % p_) % p_) * mult;
        mult *= p_;
        a /= p_;
        b /= p_;
    }
    return enc;
}

int64_t FqField::sub(int64_t a, int64_t b) const { return add(a, neg(b)); }

int64_t FqField::neg(int64_t a) const {
    int64_t enc = 0, mult = 1;
    for (int i = 0; i < f_; ++i) {
        enc += ((p_ - a % p_) % p_) * mult;
        mult *= p_;
        a /= p_;
    }
    return enc;
}

int64_t FqField::mul(int64_t a, int64_t b) const {
    if (a == 0 || b == 0) return 0;
    return exp_[(log_[a] + log_[b]) % (q_ - 1)];
}

int64_t FqField::inv(int64_t a) const {
    if (a == 0) throw ConfigError("FqField: inverse of zero");
    return exp_[(q_ - 1 - log_[a]) % (q_ - 1)];
}

int64_t FqField::div(int64_t a, int64_t b) const { return mul(a, inv(b)); }

int64_t FqField::pow(int64_t a, int64_t e) const {
    if (a == 0) {
        if (e < 0) throw ConfigError("FqField: negative power of zero");
        return e == 0 ? 1 : 0;
    }
    int64_t n = q_ - 1;
    int64_t k = (log_[a] % n) * (e % n) % n;
    k = ((k % n) + n) % n;
    return exp_[k];
}

int64_t FqField::dlog(int64_t a) const {
    if (a == 0) throw ConfigError("FqField: dlog of zero");
    return log_[a];
}

int64_t FqField::exp(int64_t k) const {
    int64_t n = q_ - 1;
    return exp_[((k % n) + n) % n];
}

int64_t FqField::abs_trace(int64_t a) const { return abs_tr_[a]; }

int64_t FqField::from_int(int64_t n) const { return ((n % p_) + p_) % p_; }

bool FqField::is_square(int64_t a) const {
    if (a == 0) return true;
    return log_[a] % 2 == 0 || p_ == 2;
}

bool FqField::lex_less(int64_t a, int64_t b) const {
    for (int i = 0; i < f_; ++i) {
        int64_t da = a % p_, db = b % p_;
        if (da != db) return da < db;
        a /= p_;
        b /= p_;
    }
    return false;
}

std::string FqField::elem_str(int64_t a) const { return std::to_string(a); }

QuadExt::QuadExt(int64_t p, int f, int r) : r_(r) {
    if (r < 1) throw ConfigError("QuadExt: relative degree must be >= 1");
    base_ = std::make_shared<FqField>(p, f);
    ext_ = std::make_shared<FqField>(p, f * r);

    // Choose the embedding root: the lex-smallest root of the base modulus in
    // the extension (all roots give Frobenius-conjugate embeddings).
    const auto& m = base_->modulus();
    std::vector<int64_t> roots;
    for (int64_t v = 0; v < ext_->q(); ++v) {
        // evaluate m at v using ext arithmetic (Horner)
        int64_t acc = 0;
        for (int i = f; i >= 0; --i) {
            acc = ext_->mul(acc, v);
            acc = ext_->add(acc, ext_->from_int(m[i]));
        }
        if (acc == 0) roots.push_back(v);
    }
    if (roots.empty()) throw ConfigError("QuadExt: base modulus has no root in extension");
    std::sort(roots.begin(), roots.end(),
              [&](int64_t a, int64_t b) { return ext_->lex_less(a, b); });
    embed_root_ = roots.front();

    embed_tab_.resize(base_->q());
    pull_tab_.assign(ext_->q(), -1);
    for (int64_t v = 0; v < base_->q(); ++v) {
        // v encodes a polynomial in the base modulus root; evaluate at embed_root_
        int64_t acc = 0;
        int64_t tmp = v;
        std::vector<int64_t> digits(f);
        for (int i = 0; i < f; ++i) {
            digits[i] = tmp % p;
            tmp /= p;
        }
        for (int i = f - 1; i >= 0; --i) {
            acc = ext_->mul(acc, embed_root_);
            acc = ext_->add(acc, ext_->from_int(digits[i]));
        }
        embed_tab_[v] = acc;
        pull_tab_[acc] = v;
    }

    // eps_f: lex-smallest non-square of the base; eps: its lex-smaller square
    // root in the extension (r = 2).
    std::vector<int64_t> base_units;
    for (int64_t v = 1; v < base_->q(); ++v) base_units.push_back(v);
    std::sort(base_units.begin(), base_units.end(),
              [&](int64_t a, int64_t b) { return base_->lex_less(a, b); });
    for (int64_t v : base_units) {
        if (!base_->is_square(v)) {
            eps_f_ = v;
            break;
        }
    }
    if (r_ == 2 && eps_f_ != 0) {
        int64_t target = embed_tab_[eps_f_];
        int64_t lg = ext_->dlog(target);
        // lg is even: index-2 subgroup argument with q odd
        int64_t half = lg / 2;
        int64_t r1 = ext_->exp(half);
        int64_t r2 = ext_->exp(half + (ext_->q() - 1) / 2);
        eps_ = ext_->lex_less(r1, r2) ? r1 : r2;
    }
}

FqElem QuadExt::embed(FqElem t) const {
    if (t.F != base_.get()) throw ConfigError("QuadExt::embed: element not in base field");
    return FqElem(*ext_, embed_tab_[t.v]);
}

bool QuadExt::in_base_image(FqElem x) const {
    if (x.F != ext_.get()) throw ConfigError("QuadExt: element not in extension");
    return pull_tab_[x.v] >= 0;
}

FqElem QuadExt::pullback(FqElem x) const {
    if (!in_base_image(x)) throw ConfigError("QuadExt::pullback: element not in base image");
    return FqElem(*base_, pull_tab_[x.v]);
}

FqElem QuadExt::norm(FqElem x) const {
    if (x.F != ext_.get()) throw ConfigError("QuadExt::norm: element not in extension");
    if (x.v == 0) return FqElem(*base_, 0);
    int64_t q = base_->q();
    int64_t e = 0, qe = 1;
    for (int i = 0; i < r_; ++i) {
        e += qe;
        qe *= q;
    }
    int64_t nv = ext_->pow(x.v, e);
    return pullback(FqElem(*ext_, nv));
}

FqElem QuadExt::trace(FqElem x) const {
    if (x.F != ext_.get()) throw ConfigError("QuadExt::trace: element not in extension");
    int64_t q = base_->q();
    int64_t acc = 0, cur = x.v;
    for (int i = 0; i < r_; ++i) {
        acc = ext_->add(acc, cur);
        cur = ext_->pow(cur, q);
    }
    return pullback(FqElem(*ext_, acc));
}

FqElem QuadExt::conj(FqElem x) const {
    if (r_ != 2) throw ConfigError("QuadExt::conj: requires relative degree 2");
    if (x.F != ext_.get()) throw ConfigError("QuadExt::conj: element not in extension");
    return FqElem(*ext_, ext_->pow(x.v, base_->q()));
}

FqElem QuadExt::eps_f() const { return FqElem(*base_, eps_f_); }

FqElem QuadExt::eps() const {
    if (r_ != 2) throw ConfigError("QuadExt::eps: requires relative degree 2");
    return FqElem(*ext_, eps_);
}

FqElem QuadExt::u1_gen() const {
    if (r_ != 2) throw ConfigError("QuadExt::u1_gen: requires relative degree 2");
    return FqElem(*ext_, ext_->exp(base_->q() - 1));
}

std::vector<FqElem> QuadExt::unit_circle() const {
    if (r_ != 2) throw ConfigError("QuadExt::unit_circle: requires relative degree 2");
    int64_t q = base_->q();
    std::vector<FqElem> out;
    out.reserve(q + 1);
    FqElem u = u1_gen();
    FqElem cur = ext_one();
    for (int64_t i = 0; i <= q; ++i) {
        out.push_back(cur);
        cur = cur * u;
    }
    return out;
}

std::vector<FqElem> QuadExt::coset_transversal_u1() const {
    if (r_ != 2) throw ConfigError("QuadExt::coset_transversal_u1: requires relative degree 2");
    int64_t q = base_->q();
    std::vector<FqElem> out;
    out.reserve(q - 1);
    for (int64_t i = 0; i < q - 1; ++i) out.push_back(FqElem(*ext_, ext_->exp(i)));
    return out;
}

int64_t QuadExt::u1_dlog(FqElem z) const {
    if (r_ != 2) throw ConfigError("QuadExt::u1_dlog: requires relative degree 2");
    if (z.F != ext_.get() || z.v == 0) throw ConfigError("QuadExt::u1_dlog: bad element");
    if (norm(z).v != 1) throw ConfigError("QuadExt::u1_dlog: element not in U(1)");
    int64_t q = base_->q();
    int64_t lg = ext_->dlog(z.v);
    if (lg % (q - 1) != 0) throw ConfigError("QuadExt::u1_dlog: inconsistent element");
    return (lg / (q - 1)) % (q + 1);
}

QuadExt make_tower(int64_t p, int f, int r) {
    if (p == 2) throw ConfigError("make_tower: p = 2 is rejected (odd residual characteristic)");
    if (f < 1 || r < 1) throw ConfigError("make_tower: degrees must be >= 1");
    double total = 1;
    for (int i = 0; i < f * r; ++i) {
        total *= double(p);
        if (total > double(int64_t(1) << 20))
            throw ConfigError("make_tower: q^r exceeds the 2^20 enumeration guard");
    }
    return QuadExt(p, f, r);
}

} // namespace endoscope::gf
