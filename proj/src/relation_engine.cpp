#include "zcycles/relation_engine.hpp"

#include "zcycles/cycle_json.hpp"
#include "zcycles/linalg.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>

namespace zcycles {

namespace {

using Exponent = std::vector<unsigned>;
// Polynomial in y_i = {x_i} - {0}, keyed by exponent vectors.
using YPoly = std::map<Exponent, Rational>;

RingContext window_context(unsigned k, unsigned g, std::uint64_t cap)
{
    return RingContext(k, g, cap);
}

// All exponent vectors of the given rank with total degree <= h, graded.
std::vector<Exponent> monomials_up_to(std::size_t rank, unsigned h)
{
    std::vector<Exponent> out;
    Exponent e(rank, 0);
    for (unsigned total = 0; total <= h; ++total) {
        auto rec = [&](auto&& self, std::size_t pos, unsigned remaining) -> void {
            if (pos + 1 == rank) {
                e[pos] = remaining;
                out.push_back(e);
                return;
            }
            for (unsigned a = remaining + 1; a-- > 0;) {
                e[pos] = a;
                self(self, pos + 1, remaining - a);
            }
        };
        rec(rec, 0, total);
    }
    return out;
}

GroupPoint point_of(const Exponent& e)
{
    std::vector<Integer> c;
    c.reserve(e.size());
    for (unsigned a : e)
        c.emplace_back(a);
    return GroupPoint(std::move(c));
}

Cycle augmentation_generator(std::size_t rank, std::size_t index)
{
    return Cycle::point(GroupPoint::generator(rank, index)) - Cycle::unit(rank);
}

// y^e expanded in the group ring: prod_i ({x_i} - {0})^{e_i}.
void add_y_monomial(Cycle& out, const Exponent& e, const Rational& coeff)
{
    for (const Exponent& b : monomials_up_to(e.size(), std::accumulate(e.begin(), e.end(), 0u))) {
        bool below = true;
        for (std::size_t i = 0; i < e.size() && below; ++i)
            below = b[i] <= e[i];
        if (!below)
            continue;
        Integer c = 1;
        unsigned sign_exp = 0;
        for (std::size_t i = 0; i < e.size(); ++i) {
            c *= binomial(e[i], b[i]);
            sign_exp += e[i] - b[i];
        }
        Rational term = coeff * Rational(c);
        out.accumulate(point_of(b), sign_exp % 2 == 0 ? term : Rational(-term));
    }
}

Cycle ypoly_to_cycle(std::size_t rank, const YPoly& p)
{
    Cycle out(rank);
    for (const auto& [e, c] : p)
        add_y_monomial(out, e, c);
    return out;
}

// Substitutes {x_i} = {0} + y_i. Needs nonnegative coordinates.
YPoly cycle_to_ypoly(const Cycle& c)
{
    YPoly out;
    for (const auto& [p, coeff] : c.terms()) {
        Exponent pe(p.rank());
        for (std::size_t i = 0; i < p.rank(); ++i) {
            if (sgn(p[i]) < 0 || !p[i].fits_uint_p())
                throw std::logic_error("cycle_to_ypoly: point outside the monomial window");
            pe[i] = static_cast<unsigned>(p[i].get_ui());
        }
        const unsigned total = std::accumulate(pe.begin(), pe.end(), 0u);
        for (const Exponent& b : monomials_up_to(p.rank(), total)) {
            Integer m = 1;
            for (std::size_t i = 0; i < pe.size() && sgn(m) != 0; ++i)
                m *= b[i] <= pe[i] ? binomial(pe[i], b[i]) : Integer(0);
            if (sgn(m) == 0)
                continue;
            auto [it, inserted] = out.try_emplace(b, 0);
            it->second += coeff * Rational(m);
        }
    }
    for (auto it = out.begin(); it != out.end();)
        it = sgn(it->second) == 0 ? out.erase(it) : std::next(it);
    return out;
}

std::string generator_label(unsigned j)
{
    return j == 1 ? "h" : "(m_" + std::to_string(j) + ")_*h";
}

std::string product_description(const std::vector<std::size_t>& factors)
{
    std::ostringstream os;
    for (std::size_t i = 0; i < factors.size(); ++i)
        os << (i ? "*" : "") << "({x_" << factors[i] << "}-{0})";
    return os.str();
}

MembershipCertificate::GeneratorTerm make_generator_term(unsigned k, unsigned j, Cycle multiplier)
{
    return {generator_label(j), j, hypothesis_cycle(k, j), std::move(multiplier)};
}

// Splits a remainder in I^{g+1} into products of g+1 augmentation generators
// times multipliers; y^beta goes to the group keyed by its first g+1 factors.
std::vector<MembershipCertificate::NilpotentTerm> nilpotent_terms(unsigned k, unsigned g, const Cycle& remainder)
{
    std::map<std::vector<std::size_t>, YPoly> groups;
    for (const auto& [beta, c] : cycle_to_ypoly(remainder)) {
        const unsigned total = std::accumulate(beta.begin(), beta.end(), 0u);
        if (total <= g)
            throw std::logic_error("remainder is not in the nilpotency span");
        std::vector<std::size_t> factors;
        Exponent rest = beta;
        for (std::size_t i = 0; i < k && factors.size() < g + 1; ++i)
            while (rest[i] > 0 && factors.size() < g + 1) {
                factors.push_back(i + 1);
                --rest[i];
            }
        groups[factors][rest] += c;
    }
    std::vector<MembershipCertificate::NilpotentTerm> out;
    for (const auto& [factors, poly] : groups)
        out.push_back({product_description(factors), factors, ypoly_to_cycle(k, poly)});
    return out;
}

// Relation-ideal-only certificate in the window of height h.
std::optional<MembershipCertificate> solve_pure_window(unsigned k, unsigned g, unsigned jmax, unsigned h)
{
    const auto rows = monomials_up_to(k, h);
    std::map<Exponent, std::size_t> row_of;
    for (std::size_t r = 0; r < rows.size(); ++r)
        row_of.emplace(rows[r], r);

    struct Column {
        unsigned j;
        Exponent m;
    };
    std::vector<Column> cols;
    for (unsigned j = 1; j <= std::min(jmax, h); ++j)
        for (auto& m : monomials_up_to(k, h - j))
            cols.push_back({j, std::move(m)});
    if (cols.empty())
        return std::nullopt;

    linalg::Matrix a(rows.size(), cols.size());
    for (std::size_t c = 0; c < cols.size(); ++c) {
        const auto& [j, m] = cols[c];
        a(row_of.at(m), c) -= k;
        for (unsigned i = 0; i < k; ++i) {
            Exponent shifted = m;
            shifted[i] += j;
            a(row_of.at(shifted), c) += 1;
        }
    }
    linalg::Vector b(rows.size(), Rational(0));
    const Cycle target = relation_target(k);
    for (const auto& [p, coeff] : target.terms()) {
        Exponent e(k, 0);
        e[0] = static_cast<unsigned>(p[0].get_ui());
        b[row_of.at(e)] = coeff;
    }

    auto x = linalg::solve(a, b);
    if (!x)
        return std::nullopt;

    std::map<unsigned, Cycle> multipliers;
    for (std::size_t c = 0; c < cols.size(); ++c) {
        if (sgn((*x)[c]) == 0)
            continue;
        auto [it, _] = multipliers.try_emplace(cols[c].j, Cycle(k));
        it->second.accumulate(point_of(cols[c].m), (*x)[c]);
    }
    MembershipCertificate cert;
    cert.k = k;
    cert.g = g;
    cert.jmax = jmax;
    cert.target = target;
    for (auto& [j, mult] : multipliers)
        if (!mult.empty())
            cert.generators.push_back(make_generator_term(k, j, std::move(mult)));
    return cert;
}

// Solves in Q[y]/(y)^{g+1} using h_1..h_jj, then lifts to the free ring.
std::optional<MembershipCertificate> solve_via_quotient(unsigned k, unsigned g, unsigned jmax, std::uint64_t cap)
{
    const RingContext ctx = window_context(k, g, cap);
    const Cycle target = relation_target(k);

    auto finish = [&](std::vector<MembershipCertificate::GeneratorTerm> gens) -> std::optional<MembershipCertificate> {
        Cycle remainder = target;
        for (const auto& t : gens)
            remainder = remainder - pontryagin(t.multiplier, t.generator, ctx);
        MembershipCertificate cert;
        cert.k = k;
        cert.g = g;
        cert.jmax = jmax;
        cert.target = target;
        cert.generators = std::move(gens);
        cert.nilpotent_part = nilpotent_terms(k, g, remainder);
        return cert;
    };

    if (k >= g + 1)
        return cap >= k ? finish({}) : std::nullopt;

    const auto basis = monomials_up_to(k, g);
    std::map<Exponent, std::size_t> row_of;
    for (std::size_t r = 0; r < basis.size(); ++r)
        row_of.emplace(basis[r], r);
    linalg::Vector b(basis.size(), Rational(0));
    {
        Exponent e(k, 0);
        e[0] = k;
        b[row_of.at(e)] = 1;
    }

    struct Column {
        unsigned j;
        Exponent alpha;
    };
    std::vector<Column> cols;
    std::vector<linalg::Vector> col_data;
    for (unsigned jj = 1; jj <= jmax && g + jj <= cap; ++jj) {
        for (const auto& alpha : basis) {
            linalg::Vector v(basis.size(), Rational(0));
            const unsigned deg = std::accumulate(alpha.begin(), alpha.end(), 0u);
            for (unsigned i = 0; i < k; ++i)
                for (unsigned t = 1; t <= jj && deg + t <= g; ++t) {
                    Exponent e = alpha;
                    e[i] += t;
                    v[row_of.at(e)] += Rational(binomial(jj, t));
                }
            cols.push_back({jj, alpha});
            col_data.push_back(std::move(v));
        }
        linalg::Matrix a(basis.size(), cols.size());
        for (std::size_t c = 0; c < cols.size(); ++c)
            for (std::size_t r = 0; r < basis.size(); ++r)
                a(r, c) = col_data[c][r];
        auto x = linalg::solve(a, b);
        if (!x)
            continue;
        std::map<unsigned, YPoly> polys;
        for (std::size_t c = 0; c < cols.size(); ++c)
            if (sgn((*x)[c]) != 0)
                polys[cols[c].j][cols[c].alpha] += (*x)[c];
        std::vector<MembershipCertificate::GeneratorTerm> gens;
        for (const auto& [j, poly] : polys) {
            Cycle mult = ypoly_to_cycle(k, poly);
            if (!mult.empty())
                gens.push_back(make_generator_term(k, j, std::move(mult)));
        }
        return finish(std::move(gens));
    }
    return std::nullopt;
}

// Dense pure-window systems beyond this many entries are skipped.
constexpr std::size_t kMaxPureEntries = 1'500'000;

std::optional<MembershipCertificate> search_at_cap(unsigned k, unsigned g, unsigned jmax, std::uint64_t cap)
{
    for (std::uint64_t h = k; h <= cap; ++h) {
        const std::size_t rows = binomial(static_cast<unsigned long>(h + k), k).get_ui();
        std::size_t cols = 0;
        for (std::uint64_t j = 1; j <= std::min<std::uint64_t>(jmax, h); ++j)
            cols += binomial(static_cast<unsigned long>(h - j + k), k).get_ui();
        if (rows * cols > kMaxPureEntries)
            break;
        if (auto cert = solve_pure_window(k, g, jmax, static_cast<unsigned>(h))) {
            cert->cap = cap;
            return cert;
        }
    }
    if (auto cert = solve_via_quotient(k, g, jmax, cap)) {
        cert->cap = cap;
        return cert;
    }
    return std::nullopt;
}

}  // namespace

// ---------------------------------------------------------------------------

Cycle elementary_gamma(unsigned k, unsigned l)
{
    if (k < 2)
        throw RangeError("elementary_gamma needs k >= 2");
    const std::size_t rank = k - 1;
    Cycle out(rank);
    if (l > rank)
        return out;
    if (rank > 24)
        throw RangeError("elementary_gamma enumerates subsets; k is too large");
    for (std::uint32_t mask = 0; mask < (1u << rank); ++mask) {
        if (static_cast<unsigned>(__builtin_popcount(mask)) != l)
            continue;
        std::vector<Integer> c(rank, Integer(0));
        for (std::size_t i = 0; i < rank; ++i)
            if (mask & (1u << i))
                c[i] = 1;
        out.accumulate(GroupPoint(std::move(c)), 1);
    }
    return out;
}

bool check_recursion_identity(unsigned k, unsigned l, const RingContext& ctx)
{
    if (k < 2 || l < 1 || l > k - 1)
        throw RangeError("check_recursion_identity needs k >= 2 and 1 <= l <= k-1");
    if (ctx.rank() != k - 1)
        throw DimensionMismatch("recursion check runs over the k-1 generators x_2..x_k");
    const Cycle g1 = elementary_gamma(k, 1);
    const Cycle lhs = pontryagin(g1, elementary_gamma(k, l), ctx);
    Cycle rhs = elementary_gamma(k, l + 1) * Rational(l + 1);
    for (unsigned i = 1; i <= l; ++i) {
        Cycle term = pontryagin(pushforward(g1, i + 1), elementary_gamma(k, l - i), ctx);
        rhs = i % 2 == 1 ? rhs + term : rhs - term;
    }
    return lhs == rhs;
}

Cycle AlphaMatrix::row_cycle(unsigned l) const
{
    Cycle c(1);
    for (unsigned i = 0; i < alpha.at(l).size(); ++i)
        c.accumulate(GroupPoint{static_cast<long>(i)}, alpha[l][i]);
    return c;
}

AlphaMatrix alpha_coefficients(unsigned k)
{
    if (k < 2)
        throw RangeError("alpha_coefficients needs k >= 2");
    const RingContext ctx(1, 1, 2 * static_cast<std::uint64_t>(k));
    const Cycle unit = Cycle::unit(1);
    auto pushed = [&](unsigned i) {  // (m_i)_* gamma_1 = -{i x_1} + k{0}
        return unit * Rational(k) - Cycle::point(GroupPoint{static_cast<long>(i)});
    };

    std::vector<Cycle> gammas{unit, pushed(1)};
    for (unsigned l = 1; l < k; ++l) {
        Cycle sum(1);
        for (unsigned i = 0; i <= l; ++i) {
            Cycle term = pontryagin(pushed(i + 1), gammas[l - i], ctx);
            sum = i % 2 == 0 ? sum + term : sum - term;
        }
        gammas.push_back(sum / Rational(l + 1));
    }

    AlphaMatrix m;
    m.k = k;
    for (unsigned l = 0; l <= k; ++l) {
        std::vector<Rational> row(l + 1, Rational(0));
        for (const auto& [p, c] : gammas[l].terms()) {
            if (sgn(p[0]) < 0 || p[0] > l)
                throw std::logic_error("gamma_l left the span of {0},...,{l x_1}");
            row[p[0].get_ui()] = c;
        }
        for (unsigned i = 0; i <= l; ++i)
            if (l >= 1 && sgn(row[i]) == 0)
                m.zero_entries.emplace_back(l, i);
        m.alpha.push_back(std::move(row));
    }
    return m;
}

std::vector<Rational> power_basis_change(const std::vector<Rational>& point_coeffs)
{
    const std::size_t n = point_coeffs.size();
    std::vector<Rational> out(n, Rational(0));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i; j < n; ++j)
            out[i] += Rational(binomial(j, i)) * point_coeffs[j];
    return out;
}

std::vector<Rational> inverse_power_basis_change(const std::vector<Rational>& power_coeffs)
{
    // u^{*i} = Sum_j (-1)^{i-j} C(i,j) {j x_1}
    const std::size_t n = power_coeffs.size();
    std::vector<Rational> out(n, Rational(0));
    for (std::size_t j = 0; j < n; ++j)
        for (std::size_t i = j; i < n; ++i) {
            Rational t = Rational(binomial(i, j)) * power_coeffs[i];
            out[j] += (i - j) % 2 == 0 ? t : Rational(-t);
        }
    return out;
}

unsigned default_relation_cap(unsigned k, unsigned g)
{
    return k * (g + 1);
}

Cycle hypothesis_cycle(unsigned k, unsigned j)
{
    Cycle h = Cycle::unit(k) * Rational(-static_cast<long>(k));
    for (std::size_t i = 0; i < k; ++i)
        h.accumulate(GroupPoint::generator(k, i).scaled(Integer(j)), 1);
    return h;
}

Cycle relation_target(unsigned k)
{
    Cycle t(k);
    for (unsigned i = 0; i <= k; ++i) {
        Rational c(binomial(k, i));
        t.accumulate(GroupPoint::generator(k, 0).scaled(Integer(i)), (k - i) % 2 == 0 ? c : Rational(-c));
    }
    return t;
}

MembershipCertificate verify_relation(const RelationOptions& opts)
{
    const unsigned k = opts.k;
    const unsigned g = opts.g;
    if (k < 2)
        throw RangeError("verify_relation needs k >= 2");
    if (g < 1)
        throw RangeError("verify_relation needs g >= 1");
    const unsigned jmax = opts.jmax.value_or(k * (g + 1));
    const std::uint64_t cap = opts.cap.value_or(default_relation_cap(k, g));
    if (jmax < 1 || cap < 1)
        throw RangeError("verify_relation needs jmax >= 1 and cap >= 1");

    std::vector<std::uint64_t> tried;
    for (std::uint64_t c : {cap, 2 * cap}) {
        tried.push_back(c);
        if (auto cert = search_at_cap(k, g, jmax, c)) {
            if (!reverify_certificate(*cert))
                throw std::logic_error("solver produced a certificate that does not re-expand to the target");
            return std::move(*cert);
        }
    }
    std::ostringstream os;
    os << "no certificate for k=" << k << " g=" << g << " jmax=" << jmax << " within caps";
    for (auto c : tried)
        os << ' ' << c;
    throw NotFoundWithinCaps(os.str(), tried);
}

MembershipCertificate nilpotent_only_certificate(unsigned k, unsigned g)
{
    if (k < g + 1)
        throw PreconditionViolated("u^{*k} is a product of g+1 augmentation generators only when k >= g+1");
    MembershipCertificate cert;
    cert.k = k;
    cert.g = g;
    cert.jmax = 0;
    cert.cap = k;
    cert.target = relation_target(k);
    std::vector<std::size_t> factors(g + 1, 1);
    // u^{*k} = u^{*(g+1)} * u^{*(k-g-1)}
    YPoly rest;
    Exponent e(k, 0);
    e[0] = k - g - 1;
    rest[e] = 1;
    cert.nilpotent_part.push_back({product_description(factors), factors, ypoly_to_cycle(k, rest)});
    return cert;
}

Cycle expand_certificate(const MembershipCertificate& cert)
{
    const RingContext ctx = window_context(cert.k, std::max(cert.g, 1u), cert.cap);
    Cycle sum(cert.k);
    for (const auto& t : cert.generators)
        sum = sum + pontryagin(t.multiplier, t.generator, ctx);
    for (const auto& t : cert.nilpotent_part) {
        Cycle product = Cycle::unit(cert.k);
        for (std::size_t f : t.factors)
            product = pontryagin(product, augmentation_generator(cert.k, f - 1), ctx);
        sum = sum + pontryagin(t.multiplier, product, ctx);
    }
    return sum;
}

bool reverify_certificate(const MembershipCertificate& cert)
{
    if (cert.k < 2 || cert.g < 1)
        return false;
    const RingContext ctx = window_context(cert.k, cert.g, std::max<std::uint64_t>(cert.cap, cert.k));
    const Cycle u = augmentation_generator(cert.k, 0);
    if (cert.target != star_power(u, cert.k, ctx))
        return false;
    const Cycle h = hypothesis_cycle(cert.k, 1);
    for (const auto& t : cert.generators) {
        if (t.j < 1 || t.label != generator_label(t.j) || t.generator != pushforward(h, Integer(t.j)))
            return false;
        if (cert.jmax > 0 && t.j > cert.jmax)
            return false;
    }
    for (const auto& t : cert.nilpotent_part) {
        if (t.factors.size() != cert.g + 1)
            return false;
        for (std::size_t f : t.factors)
            if (f < 1 || f > cert.k)
                return false;
    }
    try {
        return expand_certificate(cert) == cert.target;
    } catch (const SupportCapExceeded&) {
        return false;
    }
}

nlohmann::json certificate_to_json(const MembershipCertificate& cert)
{
    nlohmann::json gens = nlohmann::json::array();
    for (const auto& t : cert.generators)
        gens.push_back({{"label", t.label},
                        {"j", t.j},
                        {"cycle", cycle_to_json(t.generator)},
                        {"multiplier", cycle_to_json(t.multiplier)}});
    nlohmann::json nil = nlohmann::json::array();
    for (const auto& t : cert.nilpotent_part)
        nil.push_back({{"product", t.description}, {"factors", t.factors}, {"multiplier", cycle_to_json(t.multiplier)}});
    return {{"certificate_version", 1},
            {"k", cert.k},
            {"g", cert.g},
            {"jmax", cert.jmax},
            {"cap", cert.cap},
            {"target", cycle_to_json(cert.target)},
            {"hypothesis", cycle_to_json(hypothesis_cycle(cert.k, 1))},
            {"generators", std::move(gens)},
            {"nilpotent_part", std::move(nil)}};
}

MembershipCertificate certificate_from_json(const nlohmann::json& j)
{
    MembershipCertificate cert;
    cert.k = j.at("k").get<unsigned>();
    cert.g = j.at("g").get<unsigned>();
    cert.jmax = j.at("jmax").get<unsigned>();
    cert.cap = j.at("cap").get<std::uint64_t>();
    cert.target = cycle_from_json(j.at("target"));
    for (const auto& t : j.at("generators"))
        cert.generators.push_back({t.at("label").get<std::string>(), t.at("j").get<unsigned>(),
                                   cycle_from_json(t.at("cycle")), cycle_from_json(t.at("multiplier"))});
    for (const auto& t : j.at("nilpotent_part"))
        cert.nilpotent_part.push_back({t.at("product").get<std::string>(),
                                       t.at("factors").get<std::vector<std::size_t>>(),
                                       cycle_from_json(t.at("multiplier"))});
    return cert;
}

}  // namespace zcycles
