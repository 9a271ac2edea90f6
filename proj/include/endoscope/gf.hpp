#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "endoscope/errors.hpp"

namespace endoscope::gf {

// GF(p^f) with a fixed presentation: the lexicographically smallest monic
// irreducible modulus (coefficients compared low degree first) and the
// lex-smallest primitive element as generator.  Elements are encoded as
// integers sum c_i p^i with c_i the coefficients of the residue polynomial.
class FqField {
public:
    FqField(int64_t p, int f);

    int64_t p() const { return p_; }
    int f() const { return f_; }
    int64_t q() const { return q_; }
    const std::vector<int64_t>& modulus() const { return modulus_; }
    int64_t generator() const { return gen_; }

    int64_t add(int64_t a, int64_t b) const;
    int64_t sub(int64_t a, int64_t b) const;
    int64_t neg(int64_t a) const;
    int64_t mul(int64_t a, int64_t b) const;
    int64_t inv(int64_t a) const;
    int64_t div(int64_t a, int64_t b) const;
    int64_t pow(int64_t a, int64_t e) const;
    int64_t frobenius(int64_t a) const { return pow(a, p_); }

    // Discrete log against the generator; rejects 0.
    int64_t dlog(int64_t a) const;
    // generator^k, k taken mod q-1.
    int64_t exp(int64_t k) const;
    // Absolute trace down to GF(p), value in [0, p).
    int64_t abs_trace(int64_t a) const;
    int64_t from_int(int64_t n) const;
    bool is_square(int64_t a) const;

    // Lexicographic order on coefficient tuples (c_0, c_1, ...), c_0 first.
    bool lex_less(int64_t a, int64_t b) const;

    std::string elem_str(int64_t a) const;

private:
    int64_t p_;
    int f_;
    int64_t q_;
    std::vector<int64_t> modulus_;
    int64_t gen_ = 0;
    std::vector<int64_t> exp_;   // size q-1, exp_[k] = generator^k
    std::vector<int64_t> log_;   // size q,   log_[0] unused
    std::vector<int64_t> abs_tr_;

    int64_t raw_mul(int64_t a, int64_t b) const; // table-free, used at setup
};

// An element tagged with its field; arithmetic checks field identity.
struct FqElem {
    const FqField* F = nullptr;
    int64_t v = 0;

    FqElem() = default;
    FqElem(const FqField& f, int64_t val) : F(&f), v(val) {}

    bool is_zero() const { return v == 0; }
    friend bool operator==(const FqElem& a, const FqElem& b) {
        return a.F == b.F && a.v == b.v;
    }
    friend bool operator!=(const FqElem& a, const FqElem& b) { return !(a == b); }

    FqElem operator+(const FqElem& o) const { return with(o, F->add(v, o.v)); }
    FqElem operator-(const FqElem& o) const { return with(o, F->sub(v, o.v)); }
    FqElem operator*(const FqElem& o) const { return with(o, F->mul(v, o.v)); }
    FqElem operator/(const FqElem& o) const { return with(o, F->div(v, o.v)); }
    FqElem operator-() const { return FqElem(*F, F->neg(v)); }
    FqElem inv() const { return FqElem(*F, F->inv(v)); }
    FqElem pow(int64_t e) const { return FqElem(*F, F->pow(v, e)); }

private:
    FqElem with(const FqElem& o, int64_t val) const {
        if (F != o.F) throw ConfigError("FqElem: operands from different fields");
        return FqElem(*F, val);
    }
};

// The residue tower k_F = GF(p^f) inside k_E = GF(p^{f r}) with norm, trace,
// Galois conjugation (r = 2) and the distinguished non-square data.
class QuadExt {
public:
    QuadExt(int64_t p, int f, int r);

    const FqField& base() const { return *base_; }
    const FqField& ext() const { return *ext_; }
    int r() const { return r_; }

    FqElem base_elem(int64_t enc) const { return FqElem(*base_, enc); }
    FqElem ext_elem(int64_t enc) const { return FqElem(*ext_, enc); }
    FqElem base_one() const { return base_elem(1); }
    FqElem ext_one() const { return ext_elem(1); }

    FqElem embed(FqElem t) const;
    bool in_base_image(FqElem x) const;
    FqElem pullback(FqElem x) const;

    FqElem norm(FqElem x) const;   // -> base
    FqElem trace(FqElem x) const;  // -> base
    FqElem conj(FqElem x) const;   // r = 2 only

    FqElem eps_f() const;          // non-square in k_F^x
    FqElem eps() const;            // sqrt of eps_f in k_E^x (r = 2)

    std::vector<FqElem> unit_circle() const;             // |.| = q+1
    std::vector<FqElem> coset_transversal_u1() const;    // |.| = q-1
    FqElem u1_gen() const;                               // generator of U(1)
    int64_t u1_dlog(FqElem z) const;                     // index against u1_gen

private:
    std::shared_ptr<FqField> base_, ext_;
    int r_;
    int64_t embed_root_ = 0;
    std::vector<int64_t> embed_tab_;
    std::vector<int64_t> pull_tab_;
    int64_t eps_f_ = 0, eps_ = 0;
};

QuadExt make_tower(int64_t p, int f, int r);

} // namespace endoscope::gf
