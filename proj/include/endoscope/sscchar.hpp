#pragma once

#include <optional>
#include <string>
#include <vector>

#include "endoscope/chars.hpp"
#include "endoscope/padic.hpp"
#include "endoscope/report.hpp"
#include "endoscope/sums.hpp"

namespace endoscope::sscchar {

using chars::AddChar;
using chars::MultChar;
using chars::U1Char;
using cyclo::CycNum;
using cyclo::CycRing;
using cyclo::RootOfUnity;
using gf::FqElem;
using gf::QuadExt;
using padic::LocalMatrix;
using padic::LocalRing;
using report::VerifyReport;

// (a, zeta, omega) with the fixed nontrivial psi on k_F.  The twisted-trace
// evaluators require a = 1 (even sizes) resp. a = eps (odd sizes), zeta in
// {+-1}, and conjugate self-dual omega; other a are reached through the
// uniformizer renormalization in the endoscopic layer.
struct SscGL {
    const QuadExt* T = nullptr;
    FqElem a;
    RootOfUnity zeta;
    MultChar omega; // on k_E^x
    AddChar psi;    // on k_F

    SscGL(const QuadExt& tower, FqElem a_, RootOfUnity zeta_, MultChar omega_, AddChar psi_);
};

struct SscU {
    const QuadExt* T = nullptr;
    FqElem b; // in k_F^x
    U1Char omega_p;
    bool even = true;
    int n = 1;
    AddChar psi;

    SscU(const QuadExt& tower, FqElem b_, U1Char omega_p_, bool even_, int n_, AddChar psi_);
};

enum class Method { Closed, Brute };

struct CharValue {
    CycNum value;
    Method method;
    std::string element_desc;
};

// GL(2n), element g in I+ with components g_comps, value Theta_{pi,theta}(z g).
CharValue theta_gl_even(const std::vector<FqElem>& g_comps, const SscGL& pi, Method method,
                        const CycRing& R, std::optional<FqElem> central = std::nullopt);

// GL(2n), element phi_u g.
CharValue theta_gl_even_phi(const std::vector<FqElem>& g_comps, FqElem u, const SscGL& pi,
                            Method method, const CycRing& R,
                            std::optional<FqElem> central = std::nullopt);

// GL(2n+1), element g.
CharValue theta_gl_odd(const std::vector<FqElem>& g_comps, const SscGL& pi, Method method,
                       const CycRing& R, std::optional<FqElem> central = std::nullopt);

// GL(2n+1), element phi_{eps^{-1} u} g.
CharValue theta_gl_odd_phi(const std::vector<FqElem>& g_comps, FqElem u, const SscGL& pi,
                           Method method, const CycRing& R,
                           std::optional<FqElem> central = std::nullopt);

// U(2n), affine generic h with components h_comps (n-1 in k_E, then two in
// the k_F image); central is a U(1) residue.
CharValue theta_u_even(const std::vector<FqElem>& h_comps, const SscU& pi, Method method,
                       const CycRing& R, std::optional<FqElem> central = std::nullopt);

// U(2n+1), components n in k_E plus a trace-zero corner.
CharValue theta_u_odd(const std::vector<FqElem>& h_comps, const SscU& pi, Method method,
                      const CycRing& R, std::optional<FqElem> central = std::nullopt);

// Extended character chi_{a,zeta,omega} on K = Z I+ <phi_{a^{-1}}>, evaluated
// by decomposing the matrix; rejects elements outside K.
CycNum chi_eval(const SscGL& pi, const LocalMatrix& g, const CycRing& R);

struct KDecomp {
    bool in_K = false;
    int j = 0;          // phi exponent
    int v = 0;          // central pi power
    FqElem zbar;        // central Teichmueller residue
    std::vector<FqElem> comps;
};

// g = z pi^v x phi_{a^{-1}}^j with x in I+; the components are those of x.
KDecomp decompose_K(const LocalMatrix& g, FqElem a);

enum class TorusFamily { EvenPlain, EvenPhi, OddPlain, OddPhi };

// Enumerates all pinned Teichmueller torus elements y, tests the matrix
// condition y g theta(y)^{-1} in K, and compares the passing set with the
// residue constraint set of the corresponding representative-system lemma.
VerifyReport validate_torus_reps(TorusFamily family, const QuadExt& T, int n, FqElem u,
                                 const LocalRing& LR);

} // namespace endoscope::sscchar
