#include "endoscope/cyclo.hpp"

#include <cmath>
#include <cstdlib>
#include <map>
#include <sstream>

namespace endoscope::cyclo {

namespace {

using ZPoly = std::vector<mpz_class>;

void ztrim(ZPoly& a) {
    while (!a.empty() && a.back() == 0) a.pop_back();
}

// Exact division of polynomials over Z, a = b * q with b monic-led divisor.
ZPoly zdiv_exact(ZPoly a, const ZPoly& b) {
    ztrim(a);
    ZPoly q(a.size() >= b.size() ? a.size() - b.size() + 1 : 0, 0);
    while (a.size() >= b.size() && !a.empty()) {
        mpz_class lead = a.back() / b.back();
        if (lead * b.back() != a.back())
            throw CheckFailure("cyclotomic division not exact");
        size_t shift = a.size() - b.size();
        q[shift] = lead;
        for (size_t i = 0; i < b.size(); ++i) a[shift + i] -= lead * b[i];
        ztrim(a);
    }
    if (!a.empty()) throw CheckFailure("cyclotomic division left a remainder");
    return q;
}

ZPoly zmul(const ZPoly& a, const ZPoly& b) {
    if (a.empty() || b.empty()) return {};
    ZPoly c(a.size() + b.size() - 1, 0);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

ZPoly x_pow_minus_one(int64_t n) {
    ZPoly f(size_t(n) + 1, 0);
    f[0] = -1;
    f[size_t(n)] = 1;
    return f;
}

ZPoly cyclotomic(int64_t M, std::map<int64_t, ZPoly>& cache) {
    auto it = cache.find(M);
    if (it != cache.end()) return it->second;
    ZPoly f = x_pow_minus_one(M);
    for (int64_t d = 1; d < M; ++d) {
        if (M % d != 0) continue;
        f = zdiv_exact(f, cyclotomic(d, cache));
    }
    cache[M] = f;
    return f;
}

} // namespace

CycRing::CycRing(int64_t M) : M_(M) {
    if (M < 1) throw ConfigError("CycRing: M must be positive");
    if (M > (int64_t(1) << 16)) throw ConfigError("CycRing: M too large");
    std::map<int64_t, ZPoly> cache;
    phi_ = cyclotomic(M, cache);
    dim_ = int(phi_.size()) - 1;

    // Consistency check: x^M - 1 = prod_{d | M} Phi_d.
    ZPoly prod{1};
    for (int64_t d = 1; d <= M; ++d)
        if (M % d == 0) prod = zmul(prod, cache[d]);
    ZPoly target = x_pow_minus_one(M);
    if (prod != target) throw CheckFailure("CycRing: cyclotomic product check failed");

    // rows_[k] = canonical coefficients of zeta^k; iterate multiplication by x.
    rows_.assign(size_t(M_), std::vector<int64_t>(size_t(dim_), 0));
    std::vector<int64_t> cur(size_t(dim_), 0);
    cur[0] = 1;
    constexpr int64_t kCoeffGuard = int64_t(1) << 52;
    for (int64_t k = 0; k < M_; ++k) {
        rows_[size_t(k)] = cur;
        // cur <- x * cur mod Phi
        int64_t top = cur[size_t(dim_ - 1)];
        for (int i = dim_ - 1; i >= 1; --i) cur[size_t(i)] = cur[size_t(i - 1)];
        cur[0] = 0;
        if (top != 0) {
            for (int i = 0; i < dim_; ++i) {
                mpz_class adj = top * phi_[size_t(i)];
                if (!adj.fits_slong_p()) throw CheckFailure("CycRing: power row overflow");
                cur[size_t(i)] -= adj.get_si();
                if (std::llabs(cur[size_t(i)]) > kCoeffGuard)
                    throw CheckFailure("CycRing: power row overflow");
            }
        }
    }
    // closure check: x * zeta^{M-1} must come back to 1
    std::vector<int64_t> one_row(size_t(dim_), 0);
    one_row[0] = 1;
    if (cur != one_row) throw CheckFailure("CycRing: zeta^M != 1 in reduction table");
}

CycNum CycRing::zero() const { return CycNum(*this, std::vector<mpz_class>(size_t(dim_), 0)); }

CycNum CycRing::one() const { return from_int(1); }

CycNum CycRing::from_int(int64_t n) const { return from_mpz(mpz_class(long(n))); }

CycNum CycRing::from_mpz(const mpz_class& n) const {
    std::vector<mpz_class> c(size_t(dim_), 0);
    c[0] = n;
    return CycNum(*this, std::move(c));
}

CycNum CycRing::root(int64_t k) const {
    k = ((k % M_) + M_) % M_;
    std::vector<mpz_class> c(size_t(dim_), 0);
    const auto& row = rows_[size_t(k)];
    for (int i = 0; i < dim_; ++i) c[size_t(i)] = row[size_t(i)];
    return CycNum(*this, std::move(c));
}

CycNum CycRing::eval(const RootOfUnity& r) const {
    if (M_ % r.den != 0)
        throw ConfigError("CycRing::eval: root order does not divide M");
    return root(r.num * (M_ / r.den));
}

CycNum::CycNum(const CycRing& R, std::vector<mpz_class> coeffs) : R_(&R), c_(std::move(coeffs)) {
    if (int(c_.size()) != R.dim()) throw ConfigError("CycNum: bad coefficient length");
}

bool CycNum::is_zero() const {
    for (const auto& x : c_)
        if (x != 0) return false;
    return true;
}

bool operator==(const CycNum& a, const CycNum& b) {
    if (a.R_ != b.R_) throw ConfigError("CycNum: comparing across rings");
    return a.c_ == b.c_;
}

CycNum CycNum::operator+(const CycNum& o) const {
    check_ring(o);
    std::vector<mpz_class> c(c_);
    for (size_t i = 0; i < c.size(); ++i) c[i] += o.c_[i];
    return CycNum(*R_, std::move(c));
}

CycNum CycNum::operator-(const CycNum& o) const {
    check_ring(o);
    std::vector<mpz_class> c(c_);
    for (size_t i = 0; i < c.size(); ++i) c[i] -= o.c_[i];
    return CycNum(*R_, std::move(c));
}

CycNum CycNum::operator-() const {
    std::vector<mpz_class> c(c_);
    for (auto& x : c) x = -x;
    return CycNum(*R_, std::move(c));
}

CycNum CycNum::operator*(const CycNum& o) const {
    check_ring(o);
    int dim = R_->dim();
    std::vector<mpz_class> conv(size_t(2 * dim - 1), 0);
    for (int i = 0; i < dim; ++i) {
        if (c_[size_t(i)] == 0) continue;
        for (int j = 0; j < dim; ++j) {
            if (o.c_[size_t(j)] == 0) continue;
            conv[size_t(i + j)] += c_[size_t(i)] * o.c_[size_t(j)];
        }
    }
    std::vector<mpz_class> out(size_t(dim), 0);
    for (int i = 0; i < dim; ++i) out[size_t(i)] = conv[size_t(i)];
    for (int k = dim; k < 2 * dim - 1; ++k) {
        if (conv[size_t(k)] == 0) continue;
        const auto& row = R_->power_row(k % R_->M());
        for (int i = 0; i < dim; ++i)
            if (row[size_t(i)] != 0) out[size_t(i)] += conv[size_t(k)] * row[size_t(i)];
    }
    return CycNum(*R_, std::move(out));
}

CycNum CycNum::scaled(const mpz_class& k) const {
    std::vector<mpz_class> c(c_);
    for (auto& x : c) x *= k;
    return CycNum(*R_, std::move(c));
}

CycNum CycNum::pow(int64_t e) const {
    if (e < 0) throw ConfigError("CycNum::pow: negative exponent");
    CycNum r = R_->one();
    CycNum b = *this;
    while (e > 0) {
        if (e & 1) r = r * b;
        b = b * b;
        e >>= 1;
    }
    return r;
}

CycNum CycNum::galois(int64_t t) const {
    int64_t M = R_->M();
    t = ((t % M) + M) % M;
    if (std::gcd(t, M) != 1) throw ConfigError("CycNum::galois: exponent not coprime to M");
    std::vector<mpz_class> out(size_t(R_->dim()), 0);
    for (int k = 0; k < R_->dim(); ++k) {
        if (c_[size_t(k)] == 0) continue;
        const auto& row = R_->power_row((int64_t(k) * t) % M);
        for (int i = 0; i < R_->dim(); ++i)
            if (row[size_t(i)] != 0) out[size_t(i)] += c_[size_t(k)] * row[size_t(i)];
    }
    return CycNum(*R_, std::move(out));
}

std::complex<double> CycNum::complex_approx() const {
    const double tau = 6.283185307179586476925286766559;
    std::complex<double> z = 0;
    for (int k = 0; k < R_->dim(); ++k) {
        if (c_[size_t(k)] == 0) continue;
        double arg = tau * double(k) / double(R_->M());
        z += c_[size_t(k)].get_d() * std::complex<double>(std::cos(arg), std::sin(arg));
    }
    return z;
}

std::string CycNum::str() const {
    std::ostringstream os;
    os << "[";
    for (size_t i = 0; i < c_.size(); ++i) {
        if (i) os << " ";
        os << c_[i].get_str();
    }
    os << "]";
    return os.str();
}

CycNum RootAccum::to_cyc() const {
    int dim = R_->dim();
    std::vector<mpz_class> out(size_t(dim), 0);
    for (int64_t k = 0; k < R_->M(); ++k) {
        int64_t h = h_[size_t(k)];
        if (h == 0) continue;
        const auto& row = R_->power_row(k);
        for (int i = 0; i < dim; ++i)
            if (row[size_t(i)] != 0) out[size_t(i)] += mpz_class(long(h)) * row[size_t(i)];
    }
    return CycNum(*R_, std::move(out));
}

int64_t lcm_order(std::initializer_list<int64_t> orders) {
    int64_t m = 1;
    for (int64_t o : orders) {
        if (o < 1) throw ConfigError("lcm_order: orders must be positive");
        m = std::lcm(m, o);
    }
    return m;
}

} // namespace endoscope::cyclo
