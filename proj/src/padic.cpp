#include "endoscope/padic.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace endoscope::padic {

namespace {

int64_t ipow(int64_t b, int e) {
    int64_t r = 1;
    while (e-- > 0) r *= b;
    return r;
}

} // namespace

LocalRing::LocalRing(const QuadExt& tower, int prec, int window_low)
    : T_(&tower), prec_(prec), window_low_(window_low) {
    if (tower.r() != 2) throw ConfigError("LocalRing: tower must have relative degree 2");
    if (prec < 2) throw ConfigError("LocalRing: precision must be at least 2");
    if (prec > 12) throw ConfigError("LocalRing: precision too large for the int64 backend");
    if (window_low > 0) throw ConfigError("LocalRing: window_low must be <= 0");
    p_ = tower.base().p();
    d_ = tower.ext().f();
    pk_ = ipow(p_, prec_);

    // fixed monic lift of the k_E modulus
    modulus_.resize(size_t(d_) + 1);
    for (int i = 0; i <= d_; ++i) modulus_[size_t(i)] = tower.ext().modulus()[size_t(i)];

    // Teichmueller section, by iterating x -> x^(q^2)
    int64_t qe = tower.ext().q();
    teich_cache_.resize(size_t(qe));
    for (int64_t v = 0; v < qe; ++v) {
        Unit u = ufrom_residue(tower.ext_elem(v));
        for (int it = 0; it < prec_; ++it) u = upow(u, qe);
        teich_cache_[size_t(v)] = u;
    }

    auto eval_int_poly = [&](const std::vector<int64_t>& poly, const Unit& at) -> Unit {
        Unit acc = uzero();
        for (int i = int(poly.size()) - 1; i >= 0; --i) {
            acc = umul(acc, at);
            Unit c = uzero();
            c[0] = ((poly[size_t(i)] % pk_) + pk_) % pk_;
            acc = uadd(acc, c);
        }
        return acc;
    };
    auto derivative = [](const std::vector<int64_t>& poly) {
        std::vector<int64_t> dp(poly.size() - 1);
        for (size_t i = 1; i < poly.size(); ++i) dp[i - 1] = int64_t(i) * poly[i];
        return dp;
    };
    auto hensel_root = [&](const std::vector<int64_t>& poly, Unit start) -> Unit {
        Unit r = std::move(start);
        std::vector<int64_t> dpoly = derivative(poly);
        for (int it = 0; it < prec_ + 2; ++it) {
            Unit fr = eval_int_poly(poly, r);
            if (uval(fr) >= prec_) break;
            Unit dfr = eval_int_poly(dpoly, r);
            if (uis_zero_modp(dfr)) throw CheckFailure("LocalRing: Hensel derivative not a unit");
            r = usub(r, umul(fr, uinv(dfr)));
        }
        if (uval(eval_int_poly(poly, r)) < prec_)
            throw CheckFailure("LocalRing: Hensel iteration did not converge");
        return r;
    };

    // conj root: Hensel lift of the Frobenius image of the presentation root
    if (d_ > 1) {
        FqElem x = tower.ext_elem(p_); // encoding of the polynomial "x"
        Unit conj_start =
            ufrom_residue(FqElem(tower.ext(), tower.ext().pow(x.v, tower.base().q())));
        conj_root_ = hensel_root(modulus_, conj_start);
    } else {
        conj_root_ = uzero();
    }

    conj_mat_.assign(size_t(d_), std::vector<int64_t>(size_t(d_), 0));
    Unit rpow = uone();
    for (int i = 0; i < d_; ++i) {
        for (int j = 0; j < d_; ++j) conj_mat_[size_t(i)][size_t(j)] = rpow[size_t(j)];
        rpow = umul(rpow, conj_root_);
    }

    // lifted image of the base presentation root (identifies O_F inside)
    std::vector<int64_t> base_mod(tower.base().modulus().begin(), tower.base().modulus().end());
    if (tower.base().f() == 1) {
        base_root_ = uzero();
        base_root_[0] = ((-base_mod[0]) % pk_ + pk_) % pk_;
    } else {
        Unit base_start = ufrom_residue(tower.embed(tower.base_elem(tower.base().p())));
        base_root_ = hensel_root(base_mod, base_start);
    }

    // conj is involutive and fixes the lifted base subring
    if (d_ > 1) {
        Unit xunit = uzero();
        xunit[1] = 1;
        if (uval(usub(uconj(uconj(xunit)), xunit)) < prec_)
            throw CheckFailure("LocalRing: lifted conjugation is not involutive");
        if (uval(usub(uconj(base_root_), base_root_)) < prec_)
            throw CheckFailure("LocalRing: lifted conjugation moves the base subring");
    }
}

LocalRing::Unit LocalRing::uone() const {
    Unit u = uzero();
    u[0] = 1;
    return u;
}

LocalRing::Unit LocalRing::uadd(const Unit& a, const Unit& b) const {
    Unit c = uzero();
    for (int i = 0; i < d_; ++i) c[size_t(i)] = (a[size_t(i)] + b[size_t(i)]) % pk_;
    return c;
}

LocalRing::Unit LocalRing::usub(const Unit& a, const Unit& b) const {
    Unit c = uzero();
    for (int i = 0; i < d_; ++i) c[size_t(i)] = ((a[size_t(i)] - b[size_t(i)]) % pk_ + pk_) % pk_;
    return c;
}

LocalRing::Unit LocalRing::uneg(const Unit& a) const { return usub(uzero(), a); }

LocalRing::Unit LocalRing::umul(const Unit& a, const Unit& b) const {
    std::vector<int64_t> c(size_t(2 * d_ - 1), 0);
    for (int i = 0; i < d_; ++i) {
        if (a[size_t(i)] == 0) continue;
        for (int j = 0; j < d_; ++j) {
            if (b[size_t(j)] == 0) continue;
            c[size_t(i + j)] = (c[size_t(i + j)] + a[size_t(i)] * b[size_t(j)]) % pk_;
        }
    }
    for (int i = 2 * d_ - 2; i >= d_; --i) {
        int64_t t = c[size_t(i)];
        if (t == 0) continue;
        c[size_t(i)] = 0;
        for (int j = 0; j < d_; ++j)
            c[size_t(i - d_ + j)] =
                ((c[size_t(i - d_ + j)] - t * modulus_[size_t(j)]) % pk_ + pk_) % pk_;
    }
    c.resize(size_t(d_));
    return c;
}

LocalRing::Unit LocalRing::upow(Unit a, int64_t e) const {
    Unit r = uone();
    while (e > 0) {
        if (e & 1) r = umul(r, a);
        a = umul(a, a);
        e >>= 1;
    }
    return r;
}

bool LocalRing::uis_zero_modp(const Unit& a) const {
    for (int i = 0; i < d_; ++i)
        if (a[size_t(i)] % p_ != 0) return false;
    return true;
}

LocalRing::Unit LocalRing::uinv(const Unit& a) const {
    if (uis_zero_modp(a)) throw ConfigError("LocalRing::uinv: not a unit");
    FqElem r = uresidue(a);
    Unit w = ufrom_residue(r.inv());
    for (int it = 0; it < prec_ + 1; ++it) {
        Unit two_minus = uneg(umul(a, w));
        two_minus[0] = (two_minus[0] + 2) % pk_;
        w = umul(w, two_minus);
    }
    return w;
}

LocalRing::Unit LocalRing::uconj(const Unit& a) const {
    Unit c = uzero();
    for (int i = 0; i < d_; ++i) {
        if (a[size_t(i)] == 0) continue;
        for (int j = 0; j < d_; ++j)
            c[size_t(j)] = (c[size_t(j)] + a[size_t(i)] * conj_mat_[size_t(i)][size_t(j)]) % pk_;
    }
    return c;
}

FqElem LocalRing::uresidue(const Unit& a) const {
    int64_t enc = 0;
    for (int i = d_ - 1; i >= 0; --i) enc = enc * p_ + (a[size_t(i)] % p_);
    return T_->ext_elem(enc);
}

LocalRing::Unit LocalRing::ufrom_residue(FqElem t) const {
    if (t.F != &T_->ext()) throw ConfigError("LocalRing: residue must lie in k_E");
    Unit u = uzero();
    int64_t v = t.v;
    for (int i = 0; i < d_; ++i) {
        u[size_t(i)] = v % p_;
        v /= p_;
    }
    return u;
}

int LocalRing::uval(const Unit& a) const {
    int best = prec_;
    for (int i = 0; i < d_; ++i) {
        if (a[size_t(i)] == 0) continue;
        int v = 0;
        int64_t x = a[size_t(i)];
        while (x % p_ == 0) {
            x /= p_;
            ++v;
        }
        best = std::min(best, v);
    }
    return best;
}

LocalElem LocalRing::zero() const { return LocalElem(*this, LocalElem::kExactZero, 0, uzero()); }

LocalElem LocalRing::one() const { return LocalElem(*this, 0, prec_, uone()); }

LocalElem LocalRing::from_int(int64_t n) const {
    if (n == 0) return zero();
    int v = 0;
    while (n % p_ == 0) {
        n /= p_;
        ++v;
    }
    Unit u = uzero();
    u[0] = ((n % pk_) + pk_) % pk_;
    return LocalElem(*this, v, prec_, std::move(u));
}

LocalElem LocalRing::pi(int power) const {
    if (power < window_low_) throw WindowOverflow("LocalRing::pi: below the digit window");
    return LocalElem(*this, power, prec_, uone());
}

LocalElem LocalRing::teich(FqElem t) const {
    if (t.F != &T_->ext()) throw ConfigError("LocalRing::teich: element must lie in k_E");
    if (t.v == 0) return zero();
    return LocalElem(*this, 0, prec_, teich_cache_[size_t(t.v)]);
}

LocalElem LocalRing::teich_base(FqElem t) const { return teich(T_->embed(t)); }

LocalElem LocalRing::from_residue(FqElem t) const {
    if (t.F != &T_->ext()) throw ConfigError("LocalRing::from_residue: element must lie in k_E");
    if (t.v == 0) return LocalElem(*this, prec_, 0, uzero());
    return LocalElem(*this, 0, prec_, ufrom_residue(t));
}

LocalElem LocalRing::make(int val, Unit u, int rel) const {
    if (rel <= 0) {
        if (val < window_low_) throw WindowOverflow("LocalElem: zero bound below window");
        return LocalElem(*this, std::min(val, int(LocalElem::kExactZero)), 0, uzero());
    }
    rel = std::min(rel, prec_);
    int s = uval(u);
    if (s >= rel) {
        if (val + rel < window_low_) throw WindowOverflow("LocalElem: zero bound below window");
        return LocalElem(*this, val + rel, 0, uzero());
    }
    if (s > 0) {
        int64_t ps = ipow(p_, s);
        for (auto& c : u) c /= ps;
        val += s;
        rel -= s;
    }
    if (val < window_low_) throw WindowOverflow("LocalElem: valuation below window");
    return LocalElem(*this, val, rel, std::move(u));
}

int LocalElem::val() const {
    if (!visible()) throw InsufficientPrecision("LocalElem::val: element has no visible digits");
    return val_;
}

LocalElem LocalElem::operator+(const LocalElem& o) const {
    check_ring(o);
    const LocalRing& R = *R_;
    if (!visible() && !o.visible())
        return LocalElem(R, std::min(val_, o.val_), 0, R.uzero());
    if (!visible()) return o + *this;
    if (!o.visible()) {
        int b = o.val_;
        if (b <= val_) return LocalElem(R, b, 0, R.uzero());
        return LocalElem(R, val_, std::min(rel_, b - val_), u_);
    }
    int a = std::min(abs_prec(), o.abs_prec());
    int v = std::min(val_, o.val_);
    if (a <= v) return LocalElem(R, a, 0, R.uzero());
    LocalRing::Unit w = R.uzero();
    // a shift of prec or more digits vanishes mod p^prec
    int64_t sx = (val_ - v >= R.prec()) ? 0 : ipow(R.p(), val_ - v);
    int64_t sy = (o.val_ - v >= R.prec()) ? 0 : ipow(R.p(), o.val_ - v);
    for (int i = 0; i < R.dim(); ++i)
        w[size_t(i)] = (u_[size_t(i)] * sx + o.u_[size_t(i)] * sy) % R.pk();
    return R.make(v, std::move(w), a - v);
}

LocalElem LocalElem::operator-() const {
    if (!visible()) return *this;
    return LocalElem(*R_, val_, rel_, R_->uneg(u_));
}

LocalElem LocalElem::operator-(const LocalElem& o) const { return *this + (-o); }

LocalElem LocalElem::operator*(const LocalElem& o) const {
    check_ring(o);
    const LocalRing& R = *R_;
    if (!visible() || !o.visible()) {
        long b = long(val_) + long(o.val_);
        return LocalElem(R, int(std::min<long>(b, kExactZero)), 0, R.uzero());
    }
    int v = val_ + o.val_;
    if (v < R.window_low()) throw WindowOverflow("LocalElem::mul: valuation below window");
    return LocalElem(R, v, std::min(rel_, o.rel_), R.umul(u_, o.u_));
}

LocalElem LocalElem::inv() const {
    if (!visible()) throw InsufficientPrecision("LocalElem::inv: no visible digits to invert");
    int v = -val_;
    if (v < R_->window_low()) throw WindowOverflow("LocalElem::inv: valuation below window");
    return LocalElem(*R_, v, rel_, R_->uinv(u_));
}

LocalElem LocalElem::conj() const {
    if (!visible()) return *this;
    return LocalElem(*R_, val_, rel_, R_->uconj(u_));
}

LocalElem LocalElem::shifted(int s) const {
    if (!visible()) {
        long b = std::min<long>(long(val_) + s, kExactZero);
        return LocalElem(*R_, int(b), 0, u_);
    }
    int v = val_ + s;
    if (v < R_->window_low()) throw WindowOverflow("LocalElem::shifted: below window");
    return LocalElem(*R_, v, rel_, u_);
}

bool LocalElem::eq_at_precision(const LocalElem& o) const {
    LocalElem d = *this - o;
    return !d.visible();
}

bool LocalElem::val_ge(int t) const {
    if (visible()) return val_ >= t;
    if (val_ >= t) return true;
    throw InsufficientPrecision("LocalElem::val_ge: undecidable at this precision");
}

FqElem LocalElem::residue_at(int v) const {
    const auto& kE = R_->tower().ext();
    if (!visible()) {
        if (val_ > v) return FqElem(kE, 0);
        throw InsufficientPrecision("LocalElem::residue_at: undecidable at this precision");
    }
    if (val_ > v) return FqElem(kE, 0);
    if (val_ < v) throw ConfigError("LocalElem::residue_at: element not divisible by p^v");
    return R_->uresidue(u_);
}

FqElem LocalElem::residue_unit() const {
    if (!visible()) throw InsufficientPrecision("LocalElem::residue_unit: nothing visible");
    return R_->uresidue(u_);
}

std::string LocalElem::str() const {
    std::ostringstream os;
    if (!visible()) {
        if (exact_zero()) return "0";
        os << "O(pi^" << val_ << ")";
        return os.str();
    }
    os << "pi^" << val_ << "*[";
    int64_t mod = 1;
    for (int i = 0; i < rel_ && i < R_->prec(); ++i) mod *= R_->p();
    for (int i = 0; i < R_->dim(); ++i) {
        if (i) os << " ";
        os << u_[size_t(i)] % mod;
    }
    os << "]+O(pi^" << val_ + rel_ << ")";
    return os.str();
}

LocalMatrix::LocalMatrix(const LocalRing& R, int n) : R_(&R), n_(n) {
    e_.assign(size_t(n) * size_t(n), R.zero());
}

LocalMatrix LocalMatrix::identity(const LocalRing& R, int n) {
    LocalMatrix m(R, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = R.one();
    return m;
}

LocalMatrix LocalMatrix::scalar(const LocalRing& R, int n, const LocalElem& z) {
    LocalMatrix m(R, n);
    for (int i = 0; i < n; ++i) m.at(i, i) = z;
    return m;
}

LocalMatrix LocalMatrix::operator+(const LocalMatrix& o) const {
    LocalMatrix m(*R_, n_);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] + o.e_[i];
    return m;
}

LocalMatrix LocalMatrix::operator-(const LocalMatrix& o) const {
    LocalMatrix m(*R_, n_);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] - o.e_[i];
    return m;
}

LocalMatrix LocalMatrix::operator*(const LocalMatrix& o) const {
    if (n_ != o.n_) throw ConfigError("LocalMatrix: size mismatch");
    LocalMatrix m(*R_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            LocalElem s = R_->zero();
            for (int k = 0; k < n_; ++k) s = s + at(i, k) * o.at(k, j);
            m.at(i, j) = s;
        }
    return m;
}

LocalMatrix LocalMatrix::scaled(const LocalElem& z) const {
    LocalMatrix m(*R_, n_);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i] * z;
    return m;
}

LocalMatrix LocalMatrix::operator-() const {
    LocalMatrix m(*R_, n_);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = -e_[i];
    return m;
}

LocalMatrix LocalMatrix::transpose() const {
    LocalMatrix m(*R_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) m.at(i, j) = at(j, i);
    return m;
}

LocalMatrix LocalMatrix::conj_entrywise() const {
    LocalMatrix m(*R_, n_);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i].conj();
    return m;
}

LocalMatrix LocalMatrix::shifted(int s) const {
    LocalMatrix m(*R_, n_);
    for (size_t i = 0; i < e_.size(); ++i) m.e_[i] = e_[i].shifted(s);
    return m;
}

LocalMatrix LocalMatrix::inverse() const {
    LocalMatrix a = *this;
    LocalMatrix inv = identity(*R_, n_);
    for (int col = 0; col < n_; ++col) {
        int pivot = -1, best_val = 1 << 28;
        for (int row = col; row < n_; ++row) {
            const LocalElem& x = a.at(row, col);
            if (x.visible() && x.val() < best_val) {
                best_val = x.val();
                pivot = row;
            }
        }
        if (pivot < 0)
            throw InsufficientPrecision("LocalMatrix::inverse: no visible pivot (singular?)");
        if (pivot != col) {
            for (int j = 0; j < n_; ++j) {
                std::swap(a.at(pivot, j), a.at(col, j));
                std::swap(inv.at(pivot, j), inv.at(col, j));
            }
        }
        LocalElem piv_inv = a.at(col, col).inv();
        for (int j = 0; j < n_; ++j) {
            a.at(col, j) = a.at(col, j) * piv_inv;
            inv.at(col, j) = inv.at(col, j) * piv_inv;
        }
        for (int row = 0; row < n_; ++row) {
            if (row == col) continue;
            LocalElem f = a.at(row, col);
            if (!f.visible()) continue;
            for (int j = 0; j < n_; ++j) {
                a.at(row, j) = a.at(row, j) - f * a.at(col, j);
                inv.at(row, j) = inv.at(row, j) - f * inv.at(col, j);
            }
        }
    }
    return inv;
}

namespace {

LocalElem det_recursive(const LocalMatrix& m, std::vector<int>& cols, int row) {
    const LocalRing& R = m.ring();
    if (cols.size() == 1) return m.at(row, cols[0]);
    LocalElem acc = R.zero();
    for (size_t k = 0; k < cols.size(); ++k) {
        int c = cols[k];
        std::vector<int> rest;
        rest.reserve(cols.size() - 1);
        for (size_t j = 0; j < cols.size(); ++j)
            if (j != k) rest.push_back(cols[j]);
        LocalElem term = m.at(row, c) * det_recursive(m, rest, row + 1);
        acc = (k % 2 == 0) ? acc + term : acc - term;
    }
    return acc;
}

} // namespace

LocalElem LocalMatrix::det() const {
    std::vector<int> cols(size_t(n_), 0);
    for (int i = 0; i < n_; ++i) cols[size_t(i)] = i;
    return det_recursive(*this, cols, 0);
}

LocalMatrix LocalMatrix::inverse_adjugate() const {
    LocalElem dinv = det().inv();
    LocalMatrix adj(*R_, n_);
    for (int i = 0; i < n_; ++i)
        for (int j = 0; j < n_; ++j) {
            LocalMatrix minor(*R_, n_ - 1);
            for (int r = 0, rr = 0; r < n_; ++r) {
                if (r == j) continue;
                int cc = 0;
                for (int c = 0; c < n_; ++c) {
                    if (c == i) continue;
                    minor.at(rr, cc) = at(r, c);
                    ++cc;
                }
                ++rr;
            }
            LocalElem cof = (n_ == 1) ? R_->one() : minor.det();
            if ((i + j) % 2 == 1) cof = -cof;
            adj.at(i, j) = cof * dinv;
        }
    return adj;
}

bool LocalMatrix::eq_at_precision(const LocalMatrix& o) const {
    if (n_ != o.n_) return false;
    for (size_t i = 0; i < e_.size(); ++i)
        if (!e_[i].eq_at_precision(o.e_[i])) return false;
    return true;
}

std::string LocalMatrix::str() const {
    std::ostringstream os;
    for (int i = 0; i < n_; ++i) {
        os << (i ? "\n" : "");
        for (int j = 0; j < n_; ++j) os << (j ? "  " : "") << at(i, j).str();
    }
    return os.str();
}

std::string Variant::str() const {
    if (kind == GroupKind::GL) return "GL(" + std::to_string(N) + ")";
    return "U(" + std::to_string(N) + ")";
}

LocalMatrix j_matrix(const LocalRing& R, int N) {
    LocalMatrix J(R, N);
    for (int i = 0; i < N; ++i) {
        LocalElem v = R.one();
        if (i % 2 == 1) v = -v;
        J.at(i, N - 1 - i) = v;
    }
    return J;
}

LocalMatrix theta(const LocalMatrix& g) {
    const LocalRing& R = g.ring();
    int N = g.n();
    LocalMatrix J = j_matrix(R, N);
    // J is monomial with entries +-1; J^{-1}_{j,i} = 1 / J_{i,j}
    LocalMatrix Jinv(R, N);
    for (int i = 0; i < N; ++i) {
        LocalElem v = R.one();
        if (i % 2 == 1) v = -v;
        Jinv.at(N - 1 - i, i) = v;
    }
    LocalMatrix tcg_inv = g.conj_entrywise().transpose().inverse();
    return J * tcg_inv * Jinv;
}

LocalMatrix norm_elem(const LocalMatrix& g) { return g * theta(g); }

LocalMatrix phi(const LocalRing& R, FqElem a, int N) {
    if (a.is_zero()) throw ConfigError("phi: a must be nonzero");
    LocalMatrix m(R, N);
    for (int i = 0; i + 1 < N; ++i) m.at(i, i + 1) = R.one();
    m.at(N - 1, 0) = R.pi() * R.teich(a);
    return m;
}

bool is_unitary(const LocalMatrix& g) {
    const LocalRing& R = g.ring();
    LocalMatrix J = j_matrix(R, g.n());
    LocalMatrix lhs = g.conj_entrywise().transpose() * J * g;
    return lhs.eq_at_precision(J);
}

IwahoriClass classify_iwahori(const LocalMatrix& g, const Variant& v) {
    const LocalRing& R = g.ring();
    if (R.prec() < 2)
        throw InsufficientPrecision("classify_iwahori: needs at least two digits");
    if (v.N != g.n()) throw ConfigError("classify_iwahori: variant size mismatch");
    if (v.kind != GroupKind::GL && !is_unitary(g)) return IwahoriClass::Outside;
    int N = g.n();
    const auto& kE = R.tower().ext();
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j)
            if (!g.at(i, j).val_ge(i > j ? 1 : 0)) return IwahoriClass::Outside;
    for (int i = 0; i < N; ++i)
        if (g.at(i, i).residue_at(0) == FqElem(kE, 0)) return IwahoriClass::Outside;
    for (int i = 0; i < N; ++i)
        if (g.at(i, i).residue_at(0) != FqElem(kE, 1)) return IwahoriClass::I;
    bool plusplus = true;
    for (int i = 0; i + 1 < N && plusplus; ++i)
        if (!g.at(i, i + 1).val_ge(1)) plusplus = false;
    if (plusplus && !g.at(N - 1, 0).val_ge(2)) plusplus = false;
    return plusplus ? IwahoriClass::IPlusPlus : IwahoriClass::IPlus;
}

AffineComponents affine_components(const LocalMatrix& g, const Variant& v) {
    IwahoriClass cls = classify_iwahori(g, v);
    if (cls != IwahoriClass::IPlus && cls != IwahoriClass::IPlusPlus)
        throw ConfigError("affine_components: element is not in I+");
    const LocalRing& R = g.ring();
    const QuadExt& T = R.tower();
    int N = g.n();
    AffineComponents out{v, {}};
    int super = v.comp_count() - 1;
    for (int i = 0; i < super; ++i) out.comps.push_back(g.at(i, i + 1).residue_at(0));
    out.comps.push_back(g.at(N - 1, 0).residue_at(1));
    if (v.kind == GroupKind::UEven) {
        size_t c = out.comps.size();
        if (!T.in_base_image(out.comps[c - 2]) || !T.in_base_image(out.comps[c - 1]))
            throw CheckFailure("affine_components: U(2n) components not in k_F");
    } else if (v.kind == GroupKind::UOdd) {
        if (!T.trace(out.comps.back()).is_zero())
            throw CheckFailure("affine_components: U(2n+1) corner component has Tr != 0");
    }
    return out;
}

bool is_affine_generic(const AffineComponents& c) {
    for (const auto& x : c.comps)
        if (x.is_zero()) return false;
    return true;
}

namespace {

using LocalPoly = std::vector<LocalElem>;

LocalPoly poly_add(const LocalRing& R, const LocalPoly& a, const LocalPoly& b) {
    LocalPoly c(std::max(a.size(), b.size()), R.zero());
    for (size_t i = 0; i < a.size(); ++i) c[i] = c[i] + a[i];
    for (size_t i = 0; i < b.size(); ++i) c[i] = c[i] + b[i];
    return c;
}

LocalPoly poly_mul(const LocalRing& R, const LocalPoly& a, const LocalPoly& b) {
    LocalPoly c(a.size() + b.size() - 1, R.zero());
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] = c[i + j] + a[i] * b[j];
    return c;
}

LocalPoly charpoly_minors(const LocalRing& R, const std::vector<std::vector<LocalPoly>>& m,
                          const std::vector<int>& cols, int row) {
    if (cols.size() == 1) return m[size_t(row)][size_t(cols[0])];
    LocalPoly acc{R.zero()};
    for (size_t k = 0; k < cols.size(); ++k) {
        std::vector<int> rest;
        rest.reserve(cols.size() - 1);
        for (size_t j = 0; j < cols.size(); ++j)
            if (j != k) rest.push_back(cols[j]);
        LocalPoly term =
            poly_mul(R, m[size_t(row)][size_t(cols[k])], charpoly_minors(R, m, rest, row + 1));
        if (k % 2 == 1)
            for (auto& c : term) c = -c;
        acc = poly_add(R, acc, term);
    }
    return acc;
}

} // namespace

std::vector<LocalElem> charpoly(const LocalMatrix& g) {
    const LocalRing& R = g.ring();
    int N = g.n();
    if (R.p() > N) {
        // Faddeev-LeVerrier; divisions by 1..N are unit divisions since p > N
        LocalMatrix M = LocalMatrix::identity(R, N);
        std::vector<LocalElem> c(size_t(N) + 1, R.zero());
        c[size_t(N)] = R.one();
        for (int k = 1; k <= N; ++k) {
            LocalMatrix AM = g * M;
            LocalElem tr = R.zero();
            for (int i = 0; i < N; ++i) tr = tr + AM.at(i, i);
            LocalElem ck = -(tr * R.from_int(k).inv());
            c[size_t(N - k)] = ck;
            M = AM + LocalMatrix::scalar(R, N, ck);
        }
        return c;
    }
    // minors route: det(t I - g) over R[t]
    std::vector<std::vector<LocalPoly>> m;
    m.resize(size_t(N));
    for (auto& row : m) row.resize(size_t(N));
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            if (i == j)
                m[size_t(i)][size_t(j)] = LocalPoly{-g.at(i, j), R.one()};
            else
                m[size_t(i)][size_t(j)] = LocalPoly{-g.at(i, j)};
        }
    std::vector<int> cols(size_t(N), 0);
    for (int i = 0; i < N; ++i) cols[size_t(i)] = i;
    LocalPoly p = charpoly_minors(R, m, cols, 0);
    p.resize(size_t(N) + 1, R.zero());
    return p;
}

bool is_regular_elliptic(const LocalMatrix& g) {
    const LocalRing& R = g.ring();
    LocalMatrix shifted = g - LocalMatrix::identity(R, g.n());
    std::vector<LocalElem> c = charpoly(shifted);
    for (int i = 0; i < g.n(); ++i)
        if (!c[size_t(i)].val_ge(1)) return false;
    const LocalElem& c0 = c[0];
    if (c0.visible()) return c0.val() == 1;
    if (c0.zero_bound() >= 2) return false; // valuation at least 2, or exactly 0
    throw InsufficientPrecision("is_regular_elliptic: constant term undecidable");
}

VerifyReport key_lemma_probe(const LocalMatrix& g, int bound) {
    const LocalRing& R = g.ring();
    const QuadExt& T = R.tower();
    int N = g.n();
    Variant v = Variant::gl(N);
    if (!is_affine_generic(affine_components(g, v)))
        throw ConfigError("key_lemma_probe: g must be affine generic");

    // Iwahori-Weyl classes of phi^m as monomial shapes: column j carries
    // (row[j], val[j]) meaning e_j -> pi^{val[j]} e_{row[j]}.
    struct Mon {
        std::vector<int> row, val;
        bool operator==(const Mon& o) const { return row == o.row && val == o.val; }
    };
    auto mon_id = [N] {
        Mon m;
        m.row.resize(size_t(N));
        m.val.assign(size_t(N), 0);
        for (int i = 0; i < N; ++i) m.row[size_t(i)] = i;
        return m;
    };
    auto mon_mul = [N](const Mon& A, const Mon& B) {
        Mon C;
        C.row.resize(size_t(N));
        C.val.resize(size_t(N));
        for (int j = 0; j < N; ++j) {
            C.row[size_t(j)] = A.row[size_t(B.row[size_t(j)])];
            C.val[size_t(j)] = B.val[size_t(j)] + A.val[size_t(B.row[size_t(j)])];
        }
        return C;
    };
    Mon phi_mon;
    phi_mon.row.resize(size_t(N));
    phi_mon.val.assign(size_t(N), 0);
    phi_mon.row[0] = N - 1;
    phi_mon.val[0] = 1;
    for (int j = 1; j < N; ++j) phi_mon.row[size_t(j)] = j - 1;
    Mon phi_inv;
    phi_inv.row.resize(size_t(N));
    phi_inv.val.resize(size_t(N));
    for (int j = 0; j < N; ++j) {
        phi_inv.row[size_t(phi_mon.row[size_t(j)])] = j;
        phi_inv.val[size_t(phi_mon.row[size_t(j)])] = -phi_mon.val[size_t(j)];
    }
    std::vector<Mon> omega_classes;
    int mmax = (bound + 2) * N;
    Mon cur = mon_id();
    for (int m = 0; m <= mmax; ++m) {
        omega_classes.push_back(cur);
        cur = mon_mul(phi_mon, cur);
    }
    cur = mon_mul(phi_inv, mon_id());
    for (int m = 1; m <= mmax; ++m) {
        omega_classes.push_back(cur);
        cur = mon_mul(phi_inv, cur);
    }

    std::vector<int> perm(size_t(N), 0);
    for (int i = 0; i < N; ++i) perm[size_t(i)] = i;
    int64_t qe = T.ext().q();
    nlohmann::json counterexamples = nlohmann::json::array();
    long checked = 0, conjugating = 0;

    std::vector<int> kv(size_t(N), 0);
    std::vector<int64_t> tv(size_t(N), 1);
    auto test_point = [&] {
        ++checked;
        LocalMatrix c(R, N);
        for (int i = 0; i < N; ++i)
            for (int j = 0; j < N; ++j) {
                LocalElem scale =
                    R.teich(T.ext_elem(tv[size_t(i)])) * R.teich(T.ext_elem(tv[size_t(j)])).inv();
                LocalElem entry = g.at(i, j) * scale;
                int dv = kv[size_t(i)] - kv[size_t(j)];
                if (dv != 0) entry = entry * R.pi(dv);
                c.at(perm[size_t(i)], perm[size_t(j)]) = entry;
            }
        bool in_I;
        try {
            in_I = classify_iwahori(c, v) != IwahoriClass::Outside;
        } catch (const InsufficientPrecision&) {
            in_I = false;
        }
        if (!in_I) return;
        ++conjugating;
        Mon y;
        y.row.resize(size_t(N));
        y.val.resize(size_t(N));
        for (int j = 0; j < N; ++j) {
            y.row[size_t(j)] = perm[size_t(j)];
            y.val[size_t(j)] = kv[size_t(j)];
        }
        bool in_omega = false;
        for (const Mon& m : omega_classes)
            if (m == y) {
                in_omega = true;
                break;
            }
        if (!in_omega)
            counterexamples.push_back(nlohmann::json{{"perm", perm}, {"vals", kv}, {"taus", tv}});
    };
    std::function<void(int)> loop_t = [&](int idx) {
        if (idx == N) {
            test_point();
            return;
        }
        for (int64_t t = 1; t < qe; ++t) {
            tv[size_t(idx)] = t;
            loop_t(idx + 1);
        }
    };
    std::function<void(int)> loop_k = [&](int idx) {
        if (idx == N) {
            loop_t(0);
            return;
        }
        for (int k = -bound; k <= bound; ++k) {
            kv[size_t(idx)] = k;
            loop_k(idx + 1);
        }
    };
    do {
        loop_k(0);
    } while (std::next_permutation(perm.begin(), perm.end()));

    nlohmann::json inputs{{"N", N},          {"q", T.base().q()},   {"bound", bound},
                          {"prec", R.prec()}, {"checked", checked}, {"conjugating", conjugating}};
    if (counterexamples.empty()) return VerifyReport::pass("key_lemma_probe", inputs);
    auto rep = VerifyReport::fail("key_lemma_probe", "counterexamples found", inputs);
    rep.values.push_back(counterexamples);
    return rep;
}

} // namespace endoscope::padic
