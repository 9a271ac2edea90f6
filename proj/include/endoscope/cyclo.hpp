#pragma once

#include <complex>
#include <cstdint>
#include <numeric>
#include <string>
#include <vector>

#include <gmpxx.h>

#include "endoscope/errors.hpp"

namespace endoscope::cyclo {

// A root of unity zeta_den^num, kept in lowest terms.  Used to pass exact
// character values around before a value ring is chosen.
struct RootOfUnity {
    int64_t num = 0;
    int64_t den = 1;

    RootOfUnity() = default;
    RootOfUnity(int64_t n, int64_t d) {
        if (d <= 0) throw ConfigError("RootOfUnity: order must be positive");
        n = ((n % d) + d) % d;
        int64_t g = std::gcd(n, d);
        if (g == 0) g = d; // n == 0
        num = n / g;
        den = d / g;
    }
    static RootOfUnity one() { return RootOfUnity(0, 1); }
    static RootOfUnity minus_one() { return RootOfUnity(1, 2); }
    bool is_one() const { return num == 0; }
    bool is_real() const { return den <= 2; }
    int sign() const {
        if (den == 1) return 1;
        if (den == 2) return -1;
        throw ConfigError("RootOfUnity: not +-1");
    }
    RootOfUnity operator*(const RootOfUnity& o) const {
        int64_t d = std::lcm(den, o.den);
        return RootOfUnity(num * (d / den) + o.num * (d / o.den), d);
    }
    RootOfUnity pow(int64_t e) const {
        int64_t n = ((num * (e % den)) % den + den) % den;
        return RootOfUnity(n, den);
    }
    RootOfUnity inverse() const { return RootOfUnity(-num, den); }
};

class CycNum;

// Z[zeta_M] presented as Z[x]/Phi_M(x); Phi_M is computed by iterated exact
// division of x^M - 1 and checked against the product formula on
// construction.  A table of canonical forms of zeta^k, k in [0, M), makes
// root lookups and product reduction cheap.
class CycRing {
public:
    explicit CycRing(int64_t M);

    int64_t M() const { return M_; }
    int dim() const { return dim_; }
    const std::vector<mpz_class>& phi() const { return phi_; }

    CycNum zero() const;
    CycNum one() const;
    CycNum from_int(int64_t n) const;
    CycNum from_mpz(const mpz_class& n) const;
    CycNum root(int64_t k) const; // zeta_M^k
    CycNum eval(const RootOfUnity& r) const;

    const std::vector<int64_t>& power_row(int64_t k) const { return rows_[k]; }

private:
    int64_t M_;
    int dim_;
    std::vector<mpz_class> phi_;
    std::vector<std::vector<int64_t>> rows_; // zeta^k canonical, k in [0, M)
};

class CycNum {
public:
    CycNum() = default;
    CycNum(const CycRing& R, std::vector<mpz_class> coeffs);

    const CycRing& ring() const { return *R_; }
    const std::vector<mpz_class>& coeffs() const { return c_; }

    bool is_zero() const;
    friend bool operator==(const CycNum& a, const CycNum& b);
    friend bool operator!=(const CycNum& a, const CycNum& b) { return !(a == b); }

    CycNum operator+(const CycNum& o) const;
    CycNum operator-(const CycNum& o) const;
    CycNum operator-() const;
    CycNum operator*(const CycNum& o) const;
    CycNum scaled(const mpz_class& k) const;
    CycNum pow(int64_t e) const;

    // Galois action zeta -> zeta^t, t coprime to M.
    CycNum galois(int64_t t) const;
    CycNum conjugate() const { return galois(R_->M() - 1); }

    std::complex<double> complex_approx() const;
    std::string str() const;

private:
    const CycRing* R_ = nullptr;
    std::vector<mpz_class> c_;

    void check_ring(const CycNum& o) const {
        if (R_ != o.R_) throw ConfigError("CycNum: operands from different rings");
    }
    friend class CycRing;
};

// Exponent histogram: accumulate many roots of unity, reduce once.
class RootAccum {
public:
    explicit RootAccum(const CycRing& R) : R_(&R), h_(size_t(R.M()), 0) {}
    void add(int64_t exponent, int64_t multiplicity = 1) {
        int64_t M = R_->M();
        h_[size_t(((exponent % M) + M) % M)] += multiplicity;
    }
    CycNum to_cyc() const;

private:
    const CycRing* R_;
    std::vector<int64_t> h_;
};

// Smallest M containing all requested root orders.
int64_t lcm_order(std::initializer_list<int64_t> orders);

} // namespace endoscope::cyclo
