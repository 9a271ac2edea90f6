#pragma once

#include <cstdint>
#include <optional>
#include <utility>

#include "endoscope/chars.hpp"
#include "endoscope/report.hpp"

namespace endoscope::sums {

using chars::AddChar;
using chars::MultChar;
using cyclo::CycNum;
using cyclo::CycRing;
using gf::FqElem;
using gf::QuadExt;
using report::VerifyReport;

// Kl_a^{n,m}(psi; k_E/k_F): sum over (t_i) in k_E^x, (s_j) in k_F^x with
// Nr(t_1)...Nr(t_n) s_1...s_m = a of psi(Tr(t_1+...+t_n)) psi(s_1+...+s_m).
struct KlSpec {
    const QuadExt* T = nullptr;
    AddChar psi;
    int n = 0;
    int m = 0;
    FqElem a;

    KlSpec(const QuadExt& tower, AddChar character, int n_vars, int m_vars, FqElem value)
        : T(&tower), psi(character), n(n_vars), m(m_vars), a(value) {
        if (n < 0 || m < 0) throw ConfigError("KlSpec: n, m must be non-negative");
        if (a.is_zero()) throw ConfigError("KlSpec: a = 0 is rejected");
        if (psi.trivial()) throw ConfigError("KlSpec: psi must be nontrivial");
    }
};

// G(k; chi, psi) = sum_{t in k^x} chi(t) psi(t); psi must be nontrivial.
CycNum gauss_sum(const gf::FqField& k, const MultChar& chi, const AddChar& psi,
                 const CycRing& R);

// Enumerates with the constrained variable eliminated (s_m, or t_n when
// m = 0).  (n, m) = (0, 0) is the indicator of a = 1.
CycNum kloosterman(const KlSpec& spec, const CycRing& R);

// Independent route: filter the full product grid by the constraint.
CycNum kloosterman_filtered(const KlSpec& spec, const CycRing& R);

// Number of terms the eliminating enumeration visits.
uint64_t kl_term_count(const QuadExt& T, int n, int m);

// (lhs, rhs) of sum_a chi(a) Kl_a^{n,m} = G(k_E; chi o Nr, psi o Tr)^n G(k_F; chi, psi)^m.
std::pair<CycNum, CycNum> kl_fourier(const QuadExt& T, const AddChar& psi, int n, int m,
                                     const MultChar& chi, const CycRing& R);

// G(k_E; chi o Nr, psi o Tr) = (-1)^{r-1} G(k_F; chi, psi)^r.
VerifyReport verify_hasse_davenport(const QuadExt& T, const MultChar& chi, const AddChar& psi,
                                    const CycRing& R);

// Kl_a^{n,r} = (-1)^{r-1} Kl_a^{n+1,0}, both sides enumerated directly.
VerifyReport verify_hd_kl(const QuadExt& T, const AddChar& psi, int n, FqElem a,
                          const CycRing& R);

// Witnesses for: Kl not constant in a, and Kl nonzero for some a.  Throws
// CheckFailure if the corollary were falsified.
std::pair<FqElem, FqElem> kl_nonconstancy_witness(const QuadExt& T, const AddChar& psi, int n,
                                                  int m, const CycRing& R);
FqElem kl_nonzero_witness(const QuadExt& T, const AddChar& psi, int n, int m, const CycRing& R);

// If a != b, a t in k_F^x with Kl_{ta} != Kl_{tb} (throws CheckFailure if
// none exists); nullopt signals equal parameters.
std::optional<FqElem> distinguish(const QuadExt& T, const AddChar& psi, int n, int m, FqElem a,
                                  FqElem b, const CycRing& R);

} // namespace endoscope::sums
