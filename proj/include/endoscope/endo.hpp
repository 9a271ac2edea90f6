#pragma once

#include <optional>
#include <string>
#include <vector>

#include "endoscope/sscchar.hpp"

namespace endoscope::endo {

using chars::AddChar;
using chars::MultChar;
using chars::U1Char;
using cyclo::CycNum;
using cyclo::CycRing;
using gf::FqElem;
using gf::QuadExt;
using padic::LocalMatrix;
using padic::LocalRing;
using report::VerifyReport;
using sscchar::SscGL;
using sscchar::SscU;

enum class Parity { Even, Odd };

// zeta_omega: the zeta for which the parameter factors through the standard
// base change; -omega(eps) in the even case, +omega(eps) in the odd case.
int parity_zeta(const MultChar& omega, Parity parity, const QuadExt& T);

struct LiftResult {
    SscU source;
    int kappa;
    SscGL target;
    nlohmann::json derivation;
};

// Lifting maps: even (b, omega') -> pi_{b, -kappa omega'(-1), omega};
// odd (b, omega') -> pi_{b eps, kappa omega'(-1), omega}.
LiftResult lift(const SscU& source, int kappa);

// The kappa = -1 target differs from kappa = +1 exactly by the sign of zeta.
VerifyReport kappa_bookkeeping(const SscU& source);

struct NormWitness {
    LocalMatrix g; // in GL_N(E), possibly centrally scaled
    LocalMatrix h; // its norm, in the unitary group
    FqElem h_central;            // U(1) residue of the central part of h
    std::vector<FqElem> h_comps; // components of the I_H^+ part of h
    bool theta_commutes = false;
    bool unitary = false;
    bool regular_elliptic = false;
    bool generic = false;
    bool twisted_identity = true; // N(phi_c(1+phi_c)) = -N(1+phi_c), twisted only
    bool all_pass() const {
        return theta_commutes && unitary && regular_elliptic && generic && twisted_identity;
    }
    nlohmann::json to_json() const;
};

// g = z (1+phi_c) or z phi_c (1+phi_c) with c = u resp. eps^{-1} u, and
// h = N(g); certificates are checked at the ring's precision.
NormWitness norm_witness(Parity parity, int n, FqElem u, std::optional<FqElem> z, bool twisted,
                         const LocalRing& LR);

struct EcrRow {
    FqElem u;
    FqElem z;
    CycNum lhs_closed, lhs_brute, rhs_closed, rhs_brute;
    bool equal = false;
};

struct EcrReport {
    std::string family;
    nlohmann::json inputs;
    std::vector<EcrRow> rows;
    bool verdict = false;
    nlohmann::json to_json() const;
};

// The endoscopic character relation on both witness families, all u in
// k_F^x and all central Teichmueller z; exact equality with c/eps = 1.
std::vector<EcrReport> verify_ecr(Parity parity, int n, const QuadExt& T, FqElem b,
                                  const U1Char& omega_p, int kappa, const LocalRing& LR,
                                  const CycRing& R, const AddChar& psi);

// For every b != 1 a u separating Kl_{2^{2n} u} from Kl_{2^{2n} u b}
// (odd: the Kl^{n,1} analogue); pins the lifting target uniquely.
VerifyReport fourier_uniqueness_check(Parity parity, int n, const QuadExt& T, const AddChar& psi,
                                      const CycRing& R);

} // namespace endoscope::endo
