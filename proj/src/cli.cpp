#include "zcycles/cli.hpp"

#include "zcycles/bounds.hpp"
#include "zcycles/cycle_json.hpp"
#include "zcycles/identities.hpp"
#include "zcycles/relation_engine.hpp"
#include "zcycles/tangent.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <random>
#include <sstream>

namespace zcycles::cli {

namespace {

using nlohmann::json;

struct Outcome {
    int code = kPass;
    json result = json::object();
    std::optional<std::string> witness;
};

std::string verdict_of(int code)
{
    switch (code) {
    case kPass:
        return "pass";
    case kInconclusive:
        return "inconclusive";
    default:
        return "fail";
    }
}

std::string str(const Integer& z)
{
    return z.get_str();
}

json vector_json(const Vector& v)
{
    json a = json::array();
    for (const auto& x : v)
        a.push_back(to_fraction_string(x));
    return a;
}

json subspace_json(const Subspace& s)
{
    json rows = json::array();
    for (const auto& v : s.basis())
        rows.push_back(vector_json(v));
    return {{"ambient_dim", s.ambient_dim()}, {"dim", s.dim()}, {"basis", rows}};
}

void write_json_file(const std::string& path, const json& j)
{
    std::ofstream f(path);
    if (!f)
        throw std::runtime_error("cannot write " + path);
    f << j.dump(2) << '\n';
}

std::optional<std::uint64_t> env_cap()
{
    const char* v = std::getenv("CYCLES_MAX_CAP");
    if (!v || !*v)
        return std::nullopt;
    try {
        return std::stoull(v);
    } catch (const std::exception&) {
        throw CLI::ValidationError("CYCLES_MAX_CAP", std::string("not a nonnegative integer: ") + v);
    }
}

SubspaceFile read_subspace_file(const std::string& path)
{
    if (path == "-")
        return parse_subspace_file(std::cin);
    std::ifstream f(path);
    if (!f)
        throw std::invalid_argument("cannot open " + path);
    return parse_subspace_file(f);
}

std::vector<Subspace> blocks_as_subspaces(const SubspaceFile& f, std::size_t ambient)
{
    std::vector<Subspace> out;
    for (const auto& b : f.blocks)
        out.push_back(Subspace::from_basis(ambient, b));
    return out;
}

// ---------------------------------------------------------------------------

Outcome run_identities(unsigned kmax, unsigned dmax, const std::string& format, std::ostream& out)
{
    Outcome o;
    json rows = json::array();
    bool ok = true;
    std::ostringstream tsv;
    tsv << "k\td\tkernel\tderivative_path\texpected\n";
    for (const auto& kv : kernel_table(kmax, dmax)) {
        std::string expected = "-";
        std::string derivative = "-";
        if (kv.d <= kv.k) {
            Rational want = kv.d == kv.k ? Rational(factorial(kv.k)) : Rational(0);
            expected = to_fraction_string(want);
            Rational via = kernel_from_derivatives(kv.k, kv.d);
            derivative = to_fraction_string(via);
            ok = ok && kv.value == want && via == kv.value;
        }
        tsv << kv.k << '\t' << kv.d << '\t' << to_fraction_string(kv.value) << '\t' << derivative << '\t'
            << expected << '\n';
        rows.push_back({{"k", kv.k}, {"d", kv.d}, {"kernel", to_fraction_string(kv.value)},
                        {"derivative_path", derivative}, {"expected", expected}});
    }
    if (format == "tsv")
        out << tsv.str();
    o.result = {{"table", rows}};
    o.code = ok ? kPass : kContradiction;
    return o;
}

Outcome run_verify_relation(const RelationOptions& opts, const std::string& cert_path)
{
    Outcome o;
    try {
        MembershipCertificate cert = verify_relation(opts);
        const bool ok = reverify_certificate(cert);
        write_json_file(cert_path, certificate_to_json(cert));
        o.witness = cert_path;
        json gens = json::array();
        for (const auto& t : cert.generators)
            gens.push_back(t.label);
        o.result = {{"cap_used", cert.cap},
                    {"generators", gens},
                    {"nilpotent_terms", cert.nilpotent_part.size()},
                    {"reverified", ok}};
        o.code = ok ? kPass : kInconclusive;
    } catch (const NotFoundWithinCaps& e) {
        o.result = {{"caps_tried", e.caps_tried}, {"message", e.what()}};
        o.code = kInconclusive;
    } catch (const SupportCapExceeded& e) {
        o.result = {{"message", e.what()}};
        o.code = kInconclusive;
    }
    return o;
}

Outcome run_alpha(unsigned k)
{
    Outcome o;
    AlphaMatrix a = alpha_coefficients(k);
    json rows = json::array();
    bool sums_ok = true;
    for (unsigned l = 0; l <= k; ++l) {
        json row = json::array();
        Rational sum = 0;
        for (const auto& x : a.alpha[l]) {
            row.push_back(to_fraction_string(x));
            sum += x;
        }
        rows.push_back(row);
        const Rational want = l < k ? Rational(binomial(k - 1, l)) : Rational(0);
        sums_ok = sums_ok && sum == want;
    }
    std::vector<Rational> last(a.alpha[k].begin(), a.alpha[k].end());
    auto beta = power_basis_change(last);
    const bool beta_ok = sgn(beta.front()) == 0 && sgn(beta.back()) != 0;
    json zeros = json::array();
    for (auto [l, i] : a.zero_entries)
        zeros.push_back({l, i});
    o.result = {{"alpha", rows},
                {"beta", vector_json(beta)},
                {"row_sums_ok", sums_ok},
                {"zero_entries", zeros}};
    o.code = a.zero_entries.empty() && sums_ok && beta_ok ? kPass : kContradiction;
    return o;
}

Outcome run_recursion_check(unsigned k, std::optional<unsigned> l)
{
    Outcome o;
    if (k < 2)
        throw CLI::ValidationError("--k", "must be at least 2");
    RingContext ctx(k - 1, 1, 4 * static_cast<std::uint64_t>(k) * k);
    json checks = json::array();
    bool ok = true;
    for (unsigned ll = 1; ll + 1 <= k; ++ll) {
        if (l && *l != ll)
            continue;
        const bool holds = check_recursion_identity(k, ll, ctx);
        ok = ok && holds;
        checks.push_back({{"l", ll}, {"holds", holds}});
    }
    if (checks.empty())
        throw CLI::ValidationError("--l", "must satisfy 1 <= l <= k-1");
    o.result = {{"checks", checks}};
    o.code = ok ? kPass : kContradiction;
    return o;
}

json star_violation_json(const StarViolation& v)
{
    return {{"degree", v.degree},
            {"basis_indices", v.basis_indices},
            {"multi_index", v.multi_index},
            {"value", to_fraction_string(v.value)}};
}

json doublestar_violation_json(const DoublestarViolation& v)
{
    return {{"components", v.components}, {"basis_choice", v.basis_choice}, {"value", to_fraction_string(v.value)}};
}

Outcome finish_check(bool holds, json violation, const std::optional<std::string>& witness_path)
{
    Outcome o;
    o.result = {{"holds", holds}, {"violation", violation}};
    if (!holds && witness_path) {
        write_json_file(*witness_path, violation);
        o.witness = witness_path;
    }
    o.code = holds ? kPass : kViolated;
    return o;
}

Outcome run_check_star(const std::string& file, const std::optional<std::string>& witness_path)
{
    SubspaceFile f = read_subspace_file(file);
    Subspace v;
    json input;
    if (f.blocks.size() == 1 && !f.blocks[0].empty() && f.blocks[0][0].size() == f.n * f.k) {
        v = Subspace::from_basis(f.n * f.k, f.blocks[0]);
        input = {{"form", "subspace"}};
    } else if (f.blocks.size() == f.n) {
        v = split_subspace(blocks_as_subspaces(f, f.k));
        input = {{"form", "split"}};
    } else if (f.blocks.size() == 1) {
        v = Subspace::from_basis(f.n * f.k, f.blocks[0]);
        input = {{"form", "subspace"}};
    } else {
        throw std::invalid_argument("check-star expects one block in (Q^n)^k or n blocks in Q^k");
    }
    auto viol = check_condition_star(v, f.n, f.k);
    if (viol && sgn(evaluate_star_form(v, f.n, f.k, viol->basis_indices, viol->multi_index)) == 0)
        throw std::logic_error("reported (*) violation does not re-evaluate to a nonzero value");
    Outcome o = finish_check(!viol, viol ? star_violation_json(*viol) : json(nullptr), witness_path);
    o.result["input"] = input;
    o.result["dim"] = v.dim();
    return o;
}

Outcome run_check_doublestar(const std::string& file, const std::optional<std::string>& witness_path)
{
    SubspaceFile f = read_subspace_file(file);
    if (f.blocks.size() != f.n)
        throw std::invalid_argument("check-doublestar expects n = " + std::to_string(f.n) + " blocks, got " +
                                    std::to_string(f.blocks.size()));
    auto comps = blocks_as_subspaces(f, f.k);
    auto viol = check_condition_doublestar(comps);
    std::size_t total = 0;
    for (const auto& c : comps)
        total += c.dim();
    Outcome o = finish_check(!viol, viol ? doublestar_violation_json(*viol) : json(nullptr), witness_path);
    o.result["total_dim"] = total;
    return o;
}

std::pair<Subspace, Subspace> pair_from_file(const std::string& file)
{
    SubspaceFile f = read_subspace_file(file);
    if (f.blocks.size() != 2)
        throw std::invalid_argument("expected exactly two blocks (A and B)");
    auto s = blocks_as_subspaces(f, f.k);
    return {s[0], s[1]};
}

Outcome run_pair_lemma(const std::optional<std::string>& file, unsigned k, unsigned samples, std::uint64_t seed,
                       const std::optional<std::string>& witness_path)
{
    Outcome o;
    if (file) {
        auto [a, b] = pair_from_file(*file);
        if (!pair_conditions_hold(a, b))
            throw std::invalid_argument("A and B must be orthogonal to e and to each other");
        auto r = pair_lemma_check(a, b);
        o.result = {{"lhs", r.lhs}, {"rhs", r.rhs}, {"ok", r.ok}};
        o.code = r.ok ? kPass : kContradiction;
        if (!r.ok && witness_path) {
            write_json_file(*witness_path, {{"a", subspace_json(a)}, {"b", subspace_json(b)}});
            o.witness = witness_path;
        }
        return o;
    }
    if (k < 1)
        throw CLI::ValidationError("--k", "must be at least 1");
    std::size_t failures = 0;
    json first_failure = nullptr;
    for (unsigned s = 0; s < samples; ++s) {
        auto pair = random_admissible_pair(k, seed + s);
        auto r = pair_lemma_check(pair.a, pair.b);
        if (!r.ok) {
            if (failures++ == 0)
                first_failure = {{"sample", s}, {"a", subspace_json(pair.a)}, {"b", subspace_json(pair.b)}};
        }
    }
    o.result = {{"samples", samples}, {"failures", failures}, {"first_failure", first_failure}};
    if (failures && witness_path) {
        write_json_file(*witness_path, first_failure);
        o.witness = witness_path;
    }
    o.code = failures ? kContradiction : kPass;
    return o;
}

Outcome run_search(unsigned k, unsigned n, std::uint64_t budget, std::uint64_t seed, unsigned workers,
                   const std::string& witness_path)
{
    Outcome o;
    SearchResult r = search_max_total_dimension(k, n, budget, seed, workers);
    json config = json::array();
    for (const auto& s : r.best_config)
        config.push_back(subspace_json(s));
    o.result = {{"best_sum", r.best_sum},
                {"bound", k - 1},
                {"best_candidate", r.best_candidate},
                {"best_strategy", r.best_strategy},
                {"evaluated", r.evaluated},
                {"passing", r.passing},
                {"best_config", config}};
    if (r.counterexample) {
        write_json_file(witness_path, {{"k", k}, {"n", n}, {"components", config}});
        o.witness = witness_path;
        o.code = kContradiction;
    }
    return o;
}

Outcome run_mu_rank(const std::optional<std::string>& file, unsigned k, std::uint64_t seed, unsigned samples)
{
    Outcome o;
    Subspace a, b;
    if (file) {
        std::tie(a, b) = pair_from_file(*file);
        if (!pair_conditions_hold(a, b))
            throw std::invalid_argument("A and B must be orthogonal to e and to each other");
    } else {
        if (k < 1)
            throw CLI::ValidationError("--k", "must be at least 1");
        auto p = random_admissible_pair(k, seed);
        a = p.a;
        b = p.b;
    }
    const std::size_t rank = mu_generic_rank(a, b, seed, samples);
    const std::size_t expected = a.dim() + b.dim();
    o.result = {{"rank", rank}, {"expected", expected}, {"a", subspace_json(a)}, {"b", subspace_json(b)}};
    o.code = rank == expected ? kPass : kInconclusive;
    return o;
}

json threshold_json(const ThresholdTable& t)
{
    json g = json::array();
    for (const auto& x : t.induction_G)
        g.push_back(str(x));
    auto d = descent_thresholds(Integer(t.k + 1), Integer(t.k));
    return {{"k", t.k},
            {"g_gonality", str(t.g_gonality)},
            {"g_orbit_all", str(t.g_orbit_all)},
            {"g_orbit_weierstrass", str(t.g_orbit_weierstrass)},
            {"g_orbit_countable", str(t.g_orbit_countable)},
            {"g_conjectural", str(t.g_conjectural)},
            {"induction_G", g},
            {"descent_g0", t.k + 1},
            {"descent_countable_at_i", str(d.countable_at_i)},
            {"descent_countable_at_iii", str(d.countable_at_iii)}};
}

void print_aligned(std::ostream& out, const std::vector<std::pair<std::string, std::string>>& rows)
{
    std::size_t w = 0;
    for (const auto& r : rows)
        w = std::max(w, r.first.size());
    for (const auto& [key, value] : rows)
        out << std::left << std::setw(static_cast<int>(w) + 2) << key << value << '\n';
}

Outcome run_thresholds(std::optional<unsigned> k, std::optional<std::string> g, const std::string& format,
                       std::ostream& out)
{
    Outcome o;
    if (k.has_value() == g.has_value())
        throw CLI::ValidationError("thresholds", "give exactly one of --k and --g");
    std::vector<std::pair<std::string, std::string>> rows;
    if (k) {
        ThresholdTable t = thresholds(*k);
        o.result = threshold_json(t);
        for (const auto& [key, value] : o.result.items())
            if (key != "induction_G")
                rows.emplace_back(key, value.is_string() ? value.get<std::string>() : value.dump());
        for (std::size_t l = 0; l < t.induction_G.size(); ++l)
            rows.emplace_back("G_" + std::to_string(l), str(t.induction_G[l]));
        rows.emplace_back("note", "g_conjectural is a conjectured bound, not a proven threshold");
    } else {
        Integer gg;
        if (gg.set_str(*g, 10) != 0 || gg < 1)
            throw CLI::ValidationError("--g", "must be a positive integer");
        const unsigned best = max_proven_gonality(gg);
        o.result = {{"g", *g}, {"max_proven_k", best}, {"gonality_at_least", best + 1}};
        if (best >= 2)
            o.result["threshold_used"] = str(thresholds(best).g_gonality);
        rows = {{"g", *g}, {"max_proven_k", std::to_string(best)}, {"gonality_at_least", std::to_string(best + 1)}};
    }
    if (format == "tsv")
        for (const auto& [key, value] : rows)
            out << key << '\t' << value << '\n';
    else if (format == "table")
        print_aligned(out, rows);
    return o;
}

Cycle random_cycle(std::size_t rank, unsigned terms, const Rational& total_degree, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> coord(0, 2);
    std::uniform_int_distribution<int> num(-4, 4);
    std::uniform_int_distribution<int> den(1, 3);
    Cycle c(rank);
    for (unsigned t = 0; t < terms; ++t) {
        std::vector<Integer> p;
        for (std::size_t i = 0; i < rank; ++i)
            p.emplace_back(coord(rng));
        Rational coeff(num(rng), den(rng));
        coeff.canonicalize();
        c.accumulate(GroupPoint(std::move(p)), coeff);
    }
    // Fix the degree on the origin.
    c.accumulate(GroupPoint::origin(rank), total_degree - degree(c));
    return c;
}

Outcome run_gamma_check(unsigned gmax, unsigned kmax, unsigned samples, std::uint64_t seed, std::uint64_t cap)
{
    Outcome o;
    json failures = json::array();
    std::uint64_t checks = 0;
    auto record = [&](bool ok, json what) {
        ++checks;
        if (!ok && failures.size() < 10)
            failures.push_back(std::move(what));
    };

    for (unsigned g = 1; g <= gmax; ++g) {
        RingContext ctx(2, g, cap);
        for (const GroupPoint& x : {GroupPoint{1, 0}, GroupPoint{2, 1}}) {
            const Cycle gm = gamma(x, ctx);
            record(gm + log_cycle(Cycle::point(x), ctx) == Cycle::zero(2), {{"check", "gamma=-log"}, {"g", g}});
            const Cycle u = Cycle::point(x) - Cycle::unit(2);
            const Cycle w = gamma_factorization(x, ctx);
            for (unsigned k = 1; k <= kmax; ++k) {
                const Cycle lhs = star_power(gm, k, ctx);
                Cycle rhs = pontryagin(star_power(u, k, ctx), star_power(w, k, ctx), ctx);
                if (k % 2 == 1)
                    rhs = -rhs;
                record(lhs == rhs, {{"check", "gamma^k factorization"}, {"g", g}, {"k", k}});
            }
        }
    }

    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<unsigned> rank_d(1, 2);
    std::uniform_int_distribution<unsigned> size_d(1, 3);
    std::uniform_int_distribution<unsigned> g_d(1, gmax);
    for (unsigned s = 0; s < samples; ++s) {
        const std::size_t rank = rank_d(rng);
        const unsigned g = g_d(rng);
        RingContext ctx(rank, g, cap);
        const Cycle c = random_cycle(rank, size_d(rng), 1, rng);
        const Cycle d = random_cycle(rank, size_d(rng), 0, rng);
        record(equal_modulo_augmentation_power(exp_cycle(log_cycle(c, ctx), ctx), c, g + 1),
               {{"check", "exp(log c)"}, {"sample", s}});
        record(equal_modulo_augmentation_power(log_cycle(exp_cycle(d, ctx), ctx), d, g + 1),
               {{"check", "log(exp d)"}, {"sample", s}});
    }
    o.result = {{"checks", checks}, {"failures", failures}};
    o.code = failures.empty() ? kPass : kContradiction;
    return o;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
    CLI::App app{"Exact zero-cycle calculus, certificates and tangent-condition checks"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "zcycles 1.0");

    std::optional<std::string> out_path;
    std::uint64_t seed = 0;
    json params = json::object();
    std::function<Outcome()> action;
    std::string name;

    auto common = [&](CLI::App* sub) {
        sub->add_option("--out", out_path, "Write the run report here instead of stdout");
        sub->add_option("--seed", seed, "Random seed")->capture_default_str();
    };

    // identities
    unsigned kmax = 12;
    std::optional<unsigned> dmax;
    std::string id_format = "tsv";
    auto* identities = app.add_subcommand("identities", "Alternating binomial kernel table");
    identities->add_option("--kmax", kmax)->capture_default_str()->check(CLI::Range(1u, 200u));
    identities->add_option("--dmax", dmax, "Largest d (default kmax)")->check(CLI::Range(0u, 200u));
    identities->add_option("--format", id_format)->capture_default_str()->check(CLI::IsMember({"tsv", "json"}));
    common(identities);
    identities->callback([&] {
        const unsigned dm = dmax.value_or(kmax);
        params = {{"kmax", kmax}, {"dmax", dm}};
        action = [&, dm] { return run_identities(kmax, dm, id_format, out); };
    });

    // verify-relation
    unsigned rk = 2, rg = 1;
    std::optional<unsigned> rjmax;
    std::optional<std::uint64_t> rcap;
    std::string cert_path = "certificate.json";
    std::optional<std::string> report_path;
    auto* vr = app.add_subcommand("verify-relation", "Certify ({x_1}-{0})^{*k} lies in the relation ideal");
    vr->add_option("--k", rk)->required()->check(CLI::Range(2u, 64u));
    vr->add_option("--g", rg)->required()->check(CLI::Range(1u, 64u));
    vr->add_option("--jmax", rjmax)->check(CLI::PositiveNumber);
    vr->add_option("--cap", rcap)->check(CLI::PositiveNumber);
    vr->add_option("--out", cert_path, "Certificate file")->capture_default_str();
    vr->add_option("--report", report_path, "Write the run report here instead of stdout");
    vr->add_option("--seed", seed, "Unused; accepted for uniformity")->capture_default_str();
    vr->callback([&] {
        RelationOptions opts;
        opts.k = rk;
        opts.g = rg;
        opts.jmax = rjmax;
        opts.cap = rcap;
        if (!opts.cap)
            opts.cap = env_cap();
        params = {{"k", rk},
                  {"g", rg},
                  {"jmax", opts.jmax.value_or(rk * (rg + 1))},
                  {"cap", opts.cap.value_or(default_relation_cap(rk, rg))}};
        out_path = report_path;
        action = [&, opts] { return run_verify_relation(opts, cert_path); };
    });

    // alpha
    unsigned ak = 2;
    auto* alpha = app.add_subcommand("alpha", "Coefficients of gamma_l after the hypothesis substitution");
    alpha->add_option("--k", ak)->required()->check(CLI::Range(2u, 200u));
    common(alpha);
    alpha->callback([&] {
        params = {{"k", ak}};
        action = [&] { return run_alpha(ak); };
    });

    // recursion-check
    unsigned ck = 2;
    std::optional<unsigned> cl;
    auto* rc = app.add_subcommand("recursion-check", "Newton-type identity for gamma_l in the free group ring");
    rc->add_option("--k", ck)->required()->check(CLI::Range(2u, 12u));
    rc->add_option("--l", cl, "Single l (default: all 1..k-1)");
    common(rc);
    rc->callback([&] {
        params = {{"k", ck}, {"l", cl ? json(*cl) : json("all")}};
        action = [&] { return run_recursion_check(ck, cl); };
    });

    // check-star / check-doublestar
    std::string file;
    std::optional<std::string> witness;
    auto* cs = app.add_subcommand("check-star", "Condition (*) on V in (Q^n)^k");
    cs->add_option("file", file, "Subspace file ('-' for stdin)")->required();
    cs->add_option("--witness", witness, "Write a violation here");
    common(cs);
    cs->callback([&] {
        params = {{"file", file}};
        action = [&] { return run_check_star(file, witness); };
    });
    auto* cd = app.add_subcommand("check-doublestar", "Condition (**) on (A_1, ..., A_n)");
    cd->add_option("file", file, "Subspace file ('-' for stdin)")->required();
    cd->add_option("--witness", witness, "Write a violation here");
    common(cd);
    cd->callback([&] {
        params = {{"file", file}};
        action = [&] { return run_check_doublestar(file, witness); };
    });

    // pair-lemma / mu-rank
    std::optional<std::string> pair_file;
    unsigned pk = 0, psamples = 1000;
    auto* pl = app.add_subcommand("pair-lemma", "dim(A.B + A + B) >= dim A + dim B");
    pl->add_option("--file", pair_file, "Two-block subspace file");
    pl->add_option("--k", pk, "Random admissible pairs in Q^k");
    pl->add_option("--samples", psamples)->capture_default_str();
    pl->add_option("--witness", witness, "Write a failing pair here");
    common(pl);
    pl->callback([&] {
        if (!pair_file && pk == 0)
            throw CLI::ValidationError("pair-lemma", "give --file or --k");
        params = pair_file ? json{{"file", *pair_file}} : json{{"k", pk}, {"samples", psamples}, {"seed", seed}};
        action = [&] { return run_pair_lemma(pair_file, pk, psamples, seed, witness); };
    });

    unsigned msamples = 8;
    auto* mu = app.add_subcommand("mu-rank", "Generic rank of (alpha, beta) -> alpha.b + a.beta");
    mu->add_option("--file", pair_file, "Two-block subspace file");
    mu->add_option("--k", pk, "Random admissible pair in Q^k");
    mu->add_option("--samples", msamples)->capture_default_str()->check(CLI::PositiveNumber);
    common(mu);
    mu->callback([&] {
        if (!pair_file && pk == 0)
            throw CLI::ValidationError("mu-rank", "give --file or --k");
        params = pair_file ? json{{"file", *pair_file}, {"samples", msamples}, {"seed", seed}}
                           : json{{"k", pk}, {"samples", msamples}, {"seed", seed}};
        action = [&] { return run_mu_rank(pair_file, pk, seed, msamples); };
    });

    // search
    unsigned sk = 2, sn = 1, sworkers = 1;
    std::uint64_t budget = 100000;
    std::string search_witness = "counterexample.json";
    auto* se = app.add_subcommand("search", "Maximise sum dim A_i subject to (**)");
    se->add_option("--k", sk)->required()->check(CLI::Range(2u, 16u));
    se->add_option("--n", sn)->required()->check(CLI::Range(1u, 8u));
    se->add_option("--budget", budget)->capture_default_str()->check(CLI::PositiveNumber);
    se->add_option("--workers", sworkers)->capture_default_str()->check(CLI::Range(1u, 1024u));
    se->add_option("--witness", search_witness, "Counterexample file")->capture_default_str();
    common(se);
    se->callback([&] {
        params = {{"k", sk}, {"n", sn}, {"budget", budget}, {"seed", seed}, {"workers", sworkers}};
        action = [&] { return run_search(sk, sn, budget, seed, sworkers, search_witness); };
    });

    // thresholds
    std::optional<unsigned> tk;
    std::optional<std::string> tg;
    std::string t_format = "table";
    auto* th = app.add_subcommand("thresholds", "Dimension thresholds of the gonality theorems");
    th->add_option("--k", tk)->check(CLI::Range(2u, 100000u));
    th->add_option("--g", tg, "Largest proven gonality bound for this dimension");
    th->add_option("--format", t_format)->capture_default_str()->check(CLI::IsMember({"table", "tsv", "json"}));
    common(th);
    th->callback([&] {
        params = tk ? json{{"k", *tk}} : json{{"g", tg.value_or("")}};
        action = [&] { return run_thresholds(tk, tg, t_format, out); };
    });

    // gamma-check
    unsigned gg = 6, gk = 5, gsamples = 100;
    auto* gc = app.add_subcommand("gamma-check", "gamma = -log, exp/log inversion, gamma power factorization");
    gc->add_option("--g", gg, "Largest g")->capture_default_str()->check(CLI::Range(1u, 12u));
    gc->add_option("--kmax", gk)->capture_default_str()->check(CLI::Range(1u, 12u));
    gc->add_option("--samples", gsamples)->capture_default_str();
    common(gc);
    gc->callback([&] {
        const std::uint64_t cap = env_cap().value_or(1000);
        params = {{"g", gg}, {"kmax", gk}, {"samples", gsamples}, {"seed", seed}, {"cap", cap}};
        action = [&, cap] { return run_gamma_check(gg, gk, gsamples, seed, cap); };
    });

    std::vector<const char*> argv;
    for (const auto& a : args)
        argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kPass : kUsage;
    }
    name = app.get_subcommands().front()->get_name();

    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
        outcome = action();
    } catch (const CLI::Error& e) {
        err << name << ": " << e.what() << '\n';
        return kUsage;
    } catch (const std::invalid_argument& e) {
        err << name << ": " << e.what() << '\n';
        return kUsage;
    } catch (const std::out_of_range& e) {
        err << name << ": " << e.what() << '\n';
        return kUsage;
    } catch (const std::domain_error& e) {
        err << name << ": " << e.what() << '\n';
        return kUsage;
    }
    const double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

    json report = {{"report_version", 1},
                   {"subcommand", name},
                   {"parameters", params},
                   {"verdict", verdict_of(outcome.code)},
                   {"exit_code", outcome.code},
                   {"witness", outcome.witness ? json(*outcome.witness) : json(nullptr)},
                   {"exact_arithmetic", true},
                   {"result", outcome.result},
                   {"wall_time", seconds}};

    const bool table_mode = (name == "identities" && id_format == "tsv") ||
                            (name == "thresholds" && t_format != "json");
    if (out_path)
        write_json_file(*out_path, report);
    else if (!table_mode)
        out << report.dump(2) << '\n';
    return outcome.code;
}

}  // namespace zcycles::cli
