#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "endoscope/gf.hpp"
#include "endoscope/report.hpp"

namespace endoscope::padic {

using gf::FqElem;
using gf::QuadExt;
using report::VerifyReport;

class LocalElem;
class LocalMatrix;

// O_E / p^prec presented as (Z/p^prec)[x]/(m(x)) with m the fixed monic lift
// of the k_E modulus.  Carries the Hensel-lifted Galois conjugation (r = 2),
// the Teichmueller section, and the digit window for Laurent elements.
class LocalRing {
public:
    using Unit = std::vector<int64_t>; // length d, coefficients mod p^prec

    LocalRing(const QuadExt& tower, int prec, int window_low = -2);

    const QuadExt& tower() const { return *T_; }
    int prec() const { return prec_; }
    int window_low() const { return window_low_; }
    int64_t p() const { return p_; }
    int64_t pk() const { return pk_; }
    int dim() const { return d_; }

    // unit-part arithmetic
    Unit uzero() const { return Unit(size_t(d_), 0); }
    Unit uone() const;
    Unit uadd(const Unit& a, const Unit& b) const;
    Unit usub(const Unit& a, const Unit& b) const;
    Unit uneg(const Unit& a) const;
    Unit umul(const Unit& a, const Unit& b) const;
    Unit uinv(const Unit& a) const;
    Unit uconj(const Unit& a) const;
    Unit upow(Unit a, int64_t e) const;
    bool uis_zero_modp(const Unit& a) const;
    FqElem uresidue(const Unit& a) const;     // in k_E
    Unit ufrom_residue(FqElem t) const;       // plain digit lift
    int uval(const Unit& a) const;            // min p-adic valuation, capped at prec

    // elements
    LocalElem zero() const;
    LocalElem one() const;
    LocalElem from_int(int64_t n) const;
    LocalElem pi(int power = 1) const; // uniformizer p^power
    LocalElem teich(FqElem t) const;   // Teichmueller lift, t in k_E
    LocalElem teich_base(FqElem t) const;
    LocalElem from_residue(FqElem t) const;
    LocalElem make(int val, Unit u, int rel) const;

    // The Hensel-lifted image of the base-field modulus root; conj fixes it.
    const Unit& base_root() const { return base_root_; }
    const Unit& conj_root() const { return conj_root_; }

private:
    const QuadExt* T_;
    int prec_;
    int window_low_;
    int64_t p_, pk_;
    int d_;
    std::vector<int64_t> modulus_; // monic integer lift, length d+1
    Unit base_root_, conj_root_;
    std::vector<std::vector<int64_t>> conj_mat_; // action of conj on the basis
    std::vector<Unit> teich_cache_;

    friend class LocalElem;
};

// p^val (unit + O(p^rel)); rel = 0 encodes "zero to precision O(p^val)".
// Valuations below the ring's window_low are a hard error.
class LocalElem {
public:
    LocalElem() = default;

    const LocalRing& ring() const { return *R_; }
    bool visible() const { return rel_ > 0; }       // has a nonzero leading digit
    bool exact_zero() const { return rel_ == 0 && val_ >= kExactZero; }
    int val() const;                                 // exact valuation, visible only
    int zero_bound() const { return val_; }          // for rel == 0: O(p^val)
    int abs_prec() const { return visible() ? val_ + rel_ : val_; }
    int rel() const { return rel_; }
    const LocalRing::Unit& unit() const { return u_; }

    LocalElem operator+(const LocalElem& o) const;
    LocalElem operator-(const LocalElem& o) const;
    LocalElem operator*(const LocalElem& o) const;
    LocalElem operator-() const;
    LocalElem inv() const;
    LocalElem conj() const;
    // exact multiplication by pi^s, tracked as a valuation shift
    LocalElem shifted(int s) const;

    // x and y indistinguishable at the shared precision
    bool eq_at_precision(const LocalElem& o) const;

    // true/false when decidable at this precision, otherwise throws
    bool val_ge(int t) const;
    // residue of x / p^v in k_E; throws if not decidable or not divisible
    FqElem residue_at(int v) const;
    FqElem residue_unit() const; // residue of the unit part

    std::string str() const;

private:
    static constexpr int kExactZero = 1 << 20;
    const LocalRing* R_ = nullptr;
    int val_ = kExactZero;
    int rel_ = 0;
    LocalRing::Unit u_;

    LocalElem(const LocalRing& R, int val, int rel, LocalRing::Unit u)
        : R_(&R), val_(val), rel_(rel), u_(std::move(u)) {}
    void check_ring(const LocalElem& o) const {
        if (R_ != o.R_) throw ConfigError("LocalElem: operands from different rings");
    }
    friend class LocalRing;
};

class LocalMatrix {
public:
    LocalMatrix() = default;
    LocalMatrix(const LocalRing& R, int n);

    const LocalRing& ring() const { return *R_; }
    int n() const { return n_; }
    LocalElem& at(int i, int j) { return e_[size_t(i * n_ + j)]; }
    const LocalElem& at(int i, int j) const { return e_[size_t(i * n_ + j)]; }

    static LocalMatrix identity(const LocalRing& R, int n);
    static LocalMatrix scalar(const LocalRing& R, int n, const LocalElem& z);

    LocalMatrix operator+(const LocalMatrix& o) const;
    LocalMatrix operator-(const LocalMatrix& o) const;
    LocalMatrix operator*(const LocalMatrix& o) const;
    LocalMatrix scaled(const LocalElem& z) const;
    LocalMatrix operator-() const;
    LocalMatrix transpose() const;
    LocalMatrix conj_entrywise() const;

    LocalMatrix shifted(int s) const;      // entrywise valuation shift by s
    LocalMatrix inverse() const;           // Gaussian elimination, unit-pivot search
    LocalMatrix inverse_adjugate() const;  // cofactor route, used as a cross-check
    LocalElem det() const;

    bool eq_at_precision(const LocalMatrix& o) const;

    std::string str() const;

private:
    const LocalRing* R_ = nullptr;
    int n_ = 0;
    std::vector<LocalElem> e_;
};

enum class GroupKind { GL, UEven, UOdd };

struct Variant {
    GroupKind kind = GroupKind::GL;
    int N = 0; // matrix size
    static Variant gl(int N) { return {GroupKind::GL, N}; }
    static Variant u_even(int n) { return {GroupKind::UEven, 2 * n}; }
    static Variant u_odd(int n) { return {GroupKind::UOdd, 2 * n + 1}; }
    // number of affine simple components
    int comp_count() const {
        switch (kind) {
            case GroupKind::GL: return N;
            case GroupKind::UEven: return N / 2 + 1;
            default: return (N - 1) / 2 + 1;
        }
    }
    std::string str() const;
};

enum class IwahoriClass { Outside, I, IPlus, IPlusPlus };

struct AffineComponents {
    Variant variant;
    std::vector<FqElem> comps; // in k_E; U(2n) tail entries lie in embed(k_F)
};

// J with antidiagonal entries (-1)^{i-1}, row i.
LocalMatrix j_matrix(const LocalRing& R, int N);

// theta(g) = J tc(g)^{-1} J^{-1}
LocalMatrix theta(const LocalMatrix& g);

// N(g) = g theta(g)
LocalMatrix norm_elem(const LocalMatrix& g);

// phi_a = (0, I_{N-1}; pi a, 0), a lifted by Teichmueller
LocalMatrix phi(const LocalRing& R, FqElem a, int N);

bool is_unitary(const LocalMatrix& g);

IwahoriClass classify_iwahori(const LocalMatrix& g, const Variant& v);

AffineComponents affine_components(const LocalMatrix& g, const Variant& v);

bool is_affine_generic(const AffineComponents& c);

// char poly coefficients of g, constant term first, leading coefficient 1.
std::vector<LocalElem> charpoly(const LocalMatrix& g);

// characteristic polynomial of g - 1 is Eisenstein
bool is_regular_elliptic(const LocalMatrix& g);

// Bounded search for counterexamples to: y g y^{-1} in I implies y in I Omega.
VerifyReport key_lemma_probe(const LocalMatrix& g, int bound);

} // namespace endoscope::padic
