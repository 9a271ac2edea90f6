#pragma once

#include <string>
#include <vector>

#include "endoscope/cyclo.hpp"
#include "endoscope/gf.hpp"

namespace endoscope::chars {

using cyclo::CycNum;
using cyclo::CycRing;
using cyclo::RootOfUnity;
using gf::FqElem;
using gf::FqField;
using gf::QuadExt;

// psi_b(x) = zeta_p^{Tr_{k/F_p}(b x)}; nontrivial iff b != 0.
struct AddChar {
    const FqField* k = nullptr;
    int64_t b = 1;

    AddChar() = default;
    AddChar(const FqField& field, int64_t twist) : k(&field), b(twist) {}

    bool trivial() const { return b == 0; }
    RootOfUnity at(FqElem x) const;
    CycNum eval(const CycRing& R, FqElem x) const;
    std::string name() const;
};

// chi_j(g^i) = zeta_N^{i j} against the field's fixed generator, N = q - 1.
struct MultChar {
    const FqField* k = nullptr;
    int64_t j = 0;

    MultChar() = default;
    MultChar(const FqField& field, int64_t idx);

    int64_t group_order() const { return k->q() - 1; }
    int64_t order() const;
    bool trivial() const { return j % group_order() == 0; }
    RootOfUnity at(FqElem x) const; // rejects x = 0
    CycNum eval(const CycRing& R, FqElem x) const;
    std::string name(const std::string& group_tag) const;
};

// omega'_j(u^i) = zeta_{q+1}^{i j} against the fixed U(1) generator.
struct U1Char {
    const QuadExt* T = nullptr;
    int64_t j = 0;

    U1Char() = default;
    U1Char(const QuadExt& tower, int64_t idx);

    int64_t group_order() const { return T->base().q() + 1; }
    bool trivial() const { return j % group_order() == 0; }
    RootOfUnity at(FqElem z) const;
    CycNum eval(const CycRing& R, FqElem z) const;
    int sign_at_minus_one() const; // omega'(-1) = (-1)^j
    std::string name() const;
};

// Both criteria (trivial on Nr(k_E^x) = k_F^x, and omega = omega-bar o inv o c)
// are evaluated and must agree.
bool is_conjugate_self_dual(const MultChar& omega, const QuadExt& T);

// omega(z) = omega'(z / c(z)); inverse direction requires conjugate
// self-duality and round-trips to the identity.
MultChar omega_from_u1(const U1Char& omega_p);
U1Char u1_from_omega(const MultChar& omega, const QuadExt& T);

// chi o Nr on k_E^x and psi o Tr on k_E, as characters of the extension.
MultChar pullback_norm(const MultChar& chi, const QuadExt& T);
AddChar pullback_trace(const AddChar& psi, const QuadExt& T);

std::vector<MultChar> enumerate_mult_chars(const FqField& k);
std::vector<U1Char> enumerate_u1_chars(const QuadExt& T);

// omega evaluated where the value must be +-1 (e.g. a self-dual omega at eps).
int sign_value(const RootOfUnity& r);

} // namespace endoscope::chars
