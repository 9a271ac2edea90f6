#include "endoscope/chars.hpp"

namespace endoscope::chars {

RootOfUnity AddChar::at(FqElem x) const {
    if (x.F != k) throw ConfigError("AddChar: element from wrong field");
    return RootOfUnity(k->abs_trace(k->mul(b, x.v)), k->p());
}

CycNum AddChar::eval(const CycRing& R, FqElem x) const { return R.eval(at(x)); }

std::string AddChar::name() const { return "add:b=" + std::to_string(b); }

MultChar::MultChar(const FqField& field, int64_t idx) : k(&field) {
    int64_t n = field.q() - 1;
    j = ((idx % n) + n) % n;
}

int64_t MultChar::order() const {
    int64_t n = group_order();
    return n / std::gcd(j, n);
}

RootOfUnity MultChar::at(FqElem x) const {
    if (x.F != k) throw ConfigError("MultChar: element from wrong field");
    if (x.v == 0) throw ConfigError("MultChar: evaluated at zero");
    int64_t n = group_order();
    return RootOfUnity((k->dlog(x.v) % n) * (j % n) % n, n);
}

CycNum MultChar::eval(const CycRing& R, FqElem x) const { return R.eval(at(x)); }

std::string MultChar::name(const std::string& group_tag) const {
    return "mul:" + group_tag + ":j=" + std::to_string(j);
}

U1Char::U1Char(const QuadExt& tower, int64_t idx) : T(&tower) {
    int64_t n = tower.base().q() + 1;
    j = ((idx % n) + n) % n;
}

RootOfUnity U1Char::at(FqElem z) const {
    int64_t n = group_order();
    return RootOfUnity((T->u1_dlog(z) % n) * (j % n) % n, n);
}

CycNum U1Char::eval(const CycRing& R, FqElem z) const { return R.eval(at(z)); }

int U1Char::sign_at_minus_one() const { return j % 2 == 0 ? 1 : -1; }

std::string U1Char::name() const { return "mul:U1:j=" + std::to_string(j); }

bool is_conjugate_self_dual(const MultChar& omega, const QuadExt& T) {
    if (omega.k != &T.ext())
        throw ConfigError("is_conjugate_self_dual: omega must live on k_E^x");
    // Criterion 1: trivial on the image of k_F^x.
    bool crit1 = true;
    for (int64_t v = 1; v < T.base().q(); ++v) {
        if (!omega.at(T.embed(T.base_elem(v))).is_one()) {
            crit1 = false;
            break;
        }
    }
    // Criterion 2: omega(z) = omega(c(z)^{-1}) for all z.
    bool crit2 = true;
    for (int64_t v = 1; v < T.ext().q(); ++v) {
        FqElem z = T.ext_elem(v);
        RootOfUnity lhs = omega.at(z);
        RootOfUnity rhs = omega.at(T.conj(z).inv());
        if (!(lhs.num == rhs.num && lhs.den == rhs.den)) {
            crit2 = false;
            break;
        }
    }
    if (crit1 != crit2)
        throw CheckFailure("is_conjugate_self_dual: the two criteria disagree");
    return crit1;
}

MultChar omega_from_u1(const U1Char& omega_p) {
    const QuadExt& T = *omega_p.T;
    int64_t q = T.base().q();
    // z = g^i maps to z/c(z) = g^{i(1-q)} = u^{-i}; so omega(g^i) =
    // omega'(u^{-i}) = zeta_{q+1}^{-i j}, i.e. index -j (q-1) mod (q^2 - 1).
    int64_t n = q * q - 1;
    int64_t idx = ((-omega_p.j % n) + n) % n * ((q - 1) % n) % n;
    return MultChar(T.ext(), idx);
}

U1Char u1_from_omega(const MultChar& omega, const QuadExt& T) {
    if (!is_conjugate_self_dual(omega, T))
        throw ConfigError("u1_from_omega: omega is not conjugate self-dual");
    int64_t q = T.base().q();
    if (omega.j % (q - 1) != 0)
        throw CheckFailure("u1_from_omega: self-dual index not divisible by q-1");
    int64_t s = omega.j / (q - 1);
    return U1Char(T, -s);
}

MultChar pullback_norm(const MultChar& chi, const QuadExt& T) {
    if (chi.k != &T.base()) throw ConfigError("pullback_norm: chi must live on k_F^x");
    // Nr(g_E) = g_F^s; chi o Nr has index j s (q^r-1)/(q-1) against g_E.
    FqElem ng = T.norm(T.ext_elem(T.ext().generator()));
    int64_t s = T.base().dlog(ng.v);
    int64_t ratio = (T.ext().q() - 1) / (T.base().q() - 1);
    return MultChar(T.ext(), chi.j % (T.base().q() - 1) * s % (T.ext().q() - 1) * ratio);
}

AddChar pullback_trace(const AddChar& psi, const QuadExt& T) {
    if (psi.k != &T.base()) throw ConfigError("pullback_trace: psi must live on k_F");
    // Tr_{k_F/F_p}(b Tr_{k_E/k_F}(x)) = Tr_{k_E/F_p}(embed(b) x)
    return AddChar(T.ext(), T.embed(T.base_elem(psi.b)).v);
}

std::vector<MultChar> enumerate_mult_chars(const FqField& k) {
    std::vector<MultChar> out;
    for (int64_t j = 0; j < k.q() - 1; ++j) out.emplace_back(k, j);
    return out;
}

std::vector<U1Char> enumerate_u1_chars(const QuadExt& T) {
    std::vector<U1Char> out;
    for (int64_t j = 0; j < T.base().q() + 1; ++j) out.emplace_back(T, j);
    return out;
}

int sign_value(const RootOfUnity& r) { return r.sign(); }

} // namespace endoscope::chars
