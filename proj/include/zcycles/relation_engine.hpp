#pragma once

// The gamma_l recursion for k points summing to k{0_A}, and certificates that
// ({x_1} - {0})^{*k} lies in the ideal generated by the pushed-forward
// hypothesis plus the nilpotency span I^{*(g+1)}.
//
// Model: x_1..x_k are free generators of Z^k, h = Sum_i {x_i} - k{0} is the
// hypothesis cycle and h_j = (m_j)_* h. A certificate writes the target as
//
//     Sum_j M_j * h_j  +  Sum_gamma N_gamma * (prod of g+1 factors {x_i} - {0})
//
// with explicit multiplier cycles M_j, N_gamma, all inside the monomial
// window {Sum c_i x_i : c_i >= 0, Sum c_i <= cap}. Every returned certificate
// has been re-expanded and compared with the target; failure to find one is
// inconclusive, never a refutation.

#include "zcycles/cycle.hpp"

#include <json.hpp>

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace zcycles {

// gamma_l = Sum_{|I| = l, I in {2..k}} {x_I} over free generators x_2..x_k
// (generator index 0 of the rank-(k-1) group is x_2). gamma_0 = {0}, and
// gamma_l = 0 for l >= k.
Cycle elementary_gamma(unsigned k, unsigned l);

// Newton-type identity in the free group ring on x_2..x_k:
//   gamma_1 * gamma_l = (l+1) gamma_{l+1}
//                       + Sum_{i=1}^{l} (-1)^{i+1} ((m_{i+1})_* gamma_1) * gamma_{l-i}.
// ctx must have rank k-1. Requires 1 <= l <= k-1.
bool check_recursion_identity(unsigned k, unsigned l, const RingContext& ctx);

struct AlphaMatrix {
    unsigned k = 0;
    // alpha[l][i] for 0 <= i <= l <= k.
    std::vector<std::vector<Rational>> alpha;
    // (l, i) with 1 <= l <= k and alpha[l][i] == 0. Non-empty would contradict
    // the claim that all these coefficients are nonzero.
    std::vector<std::pair<unsigned, unsigned>> zero_entries;

    // Sum_i alpha[l][i] {i x_1} as a rank-1 cycle.
    Cycle row_cycle(unsigned l) const;
};

// Runs the recursion with gamma_0 = {0}, gamma_1 = -{x_1} + k{0} and
// (m_{i+1})_* gamma_1 = -{(i+1)x_1} + k{0}. Throws RangeError for k < 2.
AlphaMatrix alpha_coefficients(unsigned k);

// Coefficients over {0},{x_1},...,{n x_1} to coefficients over the powers
// u^{*0},...,u^{*n}, u = {x_1} - {0}, via {j x_1} = Sum_i C(j,i) u^{*i}.
std::vector<Rational> power_basis_change(const std::vector<Rational>& point_coeffs);
std::vector<Rational> inverse_power_basis_change(const std::vector<Rational>& power_coeffs);

struct MembershipCertificate {
    struct GeneratorTerm {
        std::string label;  // "h" or "(m_j)_*h"
        unsigned j = 1;
        Cycle generator;
        Cycle multiplier;
    };
    struct NilpotentTerm {
        std::string description;           // "({x_1}-{0})*({x_2}-{0})*..."
        std::vector<std::size_t> factors;  // 1-based generator indices, g+1 of them
        Cycle multiplier;
    };

    unsigned k = 0;
    unsigned g = 0;
    unsigned jmax = 0;
    std::uint64_t cap = 0;  // window in which the certificate was found
    Cycle target;
    std::vector<GeneratorTerm> generators;
    std::vector<NilpotentTerm> nilpotent_part;
};

class NotFoundWithinCaps : public std::runtime_error {
public:
    NotFoundWithinCaps(std::string what, std::vector<std::uint64_t> caps)
        : std::runtime_error(std::move(what)), caps_tried(std::move(caps))
    {
    }
    std::vector<std::uint64_t> caps_tried;
};

struct RelationOptions {
    unsigned k = 2;
    unsigned g = 1;
    std::optional<unsigned> jmax;        // default k(g+1)
    std::optional<std::uint64_t> cap;    // default k(g+1)
};

unsigned default_relation_cap(unsigned k, unsigned g);

// h_j = Sum_i {j x_i} - k{0} in rank k.
Cycle hypothesis_cycle(unsigned k, unsigned j = 1);
// u^{*k} with u = {x_1} - {0} in rank k.
Cycle relation_target(unsigned k);

// Searches windows of increasing height for a certificate using only the
// pushed-forward hypothesis; if none exists inside the window it solves in
// the finite quotient by I^{*(g+1)} and lifts, putting the remainder in the
// nilpotent part. Retries once at twice the cap. Throws NotFoundWithinCaps.
MembershipCertificate verify_relation(const RelationOptions& opts);

// For k >= g+1 the target is itself a product of g+1 augmentation generators.
MembershipCertificate nilpotent_only_certificate(unsigned k, unsigned g);

// Re-expands the certificate with the group-ring product and compares with
// u^{*k}; also checks every listed generator is the stated pushforward of h
// and every nilpotent term has exactly g+1 augmentation factors. The solver
// is not consulted.
bool reverify_certificate(const MembershipCertificate& cert);

// Sum of multiplier * generator plus multiplier * product over all terms.
Cycle expand_certificate(const MembershipCertificate& cert);

nlohmann::json certificate_to_json(const MembershipCertificate& cert);
MembershipCertificate certificate_from_json(const nlohmann::json& j);

}  // namespace zcycles
