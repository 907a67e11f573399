#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "zcycles/errors.hpp"
#include "zcycles/tangent.hpp"

#include <algorithm>
#include <numeric>
#include <set>
#include <random>
#include <sstream>

using namespace zcycles;

namespace {

Vector vec(std::initializer_list<long> xs)
{
    Vector v;
    for (long x : xs)
        v.emplace_back(x);
    return v;
}

// Leibniz expansion; only for tiny matrices.
Rational leibniz_det(const std::vector<std::vector<Rational>>& m)
{
    const std::size_t n = m.size();
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    Rational total = 0;
    do {
        int inversions = 0;
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                inversions += perm[i] > perm[j];
        Rational p = inversions % 2 ? -1 : 1;
        for (std::size_t i = 0; i < n; ++i)
            p *= m[i][perm[i]];
        total += p;
    } while (std::next_permutation(perm.begin(), perm.end()));
    return total;
}

Vector random_sum_zero(std::size_t k, std::mt19937_64& rng, int bound = 2)
{
    std::uniform_int_distribution<int> d(-bound, bound);
    Vector v(k, Rational(0));
    Rational s = 0;
    for (std::size_t i = 0; i + 1 < k; ++i) {
        v[i] = d(rng);
        s += v[i];
    }
    v[k - 1] = -s;
    return v;
}

Vector random_vector(std::size_t k, std::mt19937_64& rng, int bound = 2)
{
    std::uniform_int_distribution<int> d(-bound, bound);
    Vector v;
    for (std::size_t i = 0; i < k; ++i)
        v.emplace_back(d(rng));
    return v;
}

// Mix of configurations that satisfy (**) and ones that do not.
std::vector<Subspace> random_config(std::size_t k, std::size_t n, std::mt19937_64& rng, int kind)
{
    std::vector<Subspace> a(n, Subspace(k));
    std::uniform_int_distribution<std::size_t> dim(0, k - 1);
    switch (kind % 4) {
    case 0: {  // arbitrary vectors
        for (auto& s : a) {
            std::vector<Vector> rows;
            for (std::size_t r = dim(rng); r > 0; --r)
                rows.push_back(random_vector(k, rng));
            s = Subspace::span(k, rows);
        }
        break;
    }
    case 1: {  // vectors in e^perp, no cross conditions
        for (auto& s : a) {
            std::vector<Vector> rows;
            for (std::size_t r = dim(rng) % 2 + 1; r > 0; --r)
                rows.push_back(random_sum_zero(k, rng));
            s = Subspace::span(k, rows);
        }
        break;
    }
    case 2: {  // admissible pair in two components
        auto p = random_admissible_pair(k, rng());
        a[0] = p.a;
        if (n > 1)
            a[1] = p.b;
        break;
    }
    default: {  // best configuration of a short search
        auto r = search_max_total_dimension(k, n, 30, rng(), 1);
        a = r.best_config;
        break;
    }
    }
    return a;
}

}  // namespace

TEST_CASE("Subspace basics")
{
    const auto s = Subspace::span(3, {vec({1, 0, 0}), vec({2, 0, 0}), vec({0, 1, 0})});
    CHECK(s.dim() == 2);
    CHECK(s.contains(vec({3, -4, 0})));
    CHECK_FALSE(s.contains(vec({0, 0, 1})));
    CHECK(s.contains(vec({0, 0, 0})));
    CHECK_THROWS_AS(Subspace::from_basis(3, {vec({1, 1, 0}), vec({2, 2, 0})}), PreconditionViolated);
    CHECK_THROWS_AS(Subspace::from_basis(3, {vec({1, 1})}), DimensionMismatch);
    CHECK(Subspace::whole(4).dim() == 4);
    CHECK(Subspace::kernel_of_sum(4).dim() == 3);
    CHECK(Subspace::kernel_of_sum(4).orthogonal_complement() == Subspace::span(4, {vec({1, 1, 1, 1})}));
    CHECK(Subspace(3).orthogonal_complement() == Subspace::whole(3));

    const auto t = Subspace::span(3, {vec({0, 1, 0}), vec({0, 0, 1})});
    CHECK(s.intersect(t) == Subspace::span(3, {vec({0, 1, 0})}));
    CHECK((s + t) == Subspace::whole(3));
    CHECK(s.intersect(Subspace(3)).dim() == 0);
    CHECK(Subspace::span(3, {vec({1, 1, 0})}) == Subspace::span(3, {vec({-2, -2, 0})}));
    CHECK_FALSE(s == t);
    CHECK(Subspace::whole(3).contains(s));
    CHECK_FALSE(t.contains(s));
}

TEST_CASE("hadamard")
{
    CHECK(hadamard(vec({1, -1, 0}), vec({1, 1, -2})) == vec({1, -1, 0}));
    CHECK_THROWS_AS(hadamard(vec({1}), vec({1, 2})), DimensionMismatch);
}

TEST_CASE("condition (*) examples")
{
    for (std::size_t k = 2; k <= 10; ++k) {
        const auto v = Subspace::kernel_of_sum(k);
        CHECK(v.dim() == k - 1);
        CHECK_FALSE(check_condition_star(v, 1, k).has_value());
    }
    CHECK_FALSE(check_condition_star(Subspace(6), 2, 3).has_value());

    const auto v = Subspace::from_basis(4, {vec({1, 0, 0, 0})});
    const auto viol = check_condition_star(v, 2, 2);
    REQUIRE(viol.has_value());
    CHECK(viol->degree == 1);
    CHECK(viol->multi_index == std::vector<std::size_t>{0});
    CHECK(viol->value == 1);
    CHECK_THROWS_AS(check_condition_star(v, 3, 2), DimensionMismatch);
}

TEST_CASE("(*) violations re-evaluate by the Leibniz formula")
{
    std::mt19937_64 rng(41);
    int seen = 0;
    for (int t = 0; t < 60; ++t) {
        const std::size_t n = 1 + t % 3, k = 2 + t % 3;
        std::vector<Vector> rows;
        for (int r = 0; r < 3; ++r)
            rows.push_back(random_vector(n * k, rng, 1));
        const auto v = Subspace::span(n * k, rows);
        const auto viol = check_condition_star(v, n, k);
        if (!viol)
            continue;
        ++seen;
        const std::size_t i = viol->degree;
        Rational sum = 0;
        for (std::size_t j = 0; j < k; ++j) {
            std::vector<std::vector<Rational>> m(i, std::vector<Rational>(i));
            for (std::size_t a = 0; a < i; ++a)
                for (std::size_t b = 0; b < i; ++b)
                    m[a][b] = v.basis()[viol->basis_indices[a]][j * n + viol->multi_index[b]];
            sum += leibniz_det(m);
        }
        CHECK(sum == viol->value);
        CHECK(sgn(sum) != 0);
    }
    CHECK(seen > 10);
}

TEST_CASE("condition (**) examples")
{
    CHECK_FALSE(check_condition_doublestar({Subspace::span(3, {vec({1, -1, 0})})}).has_value());
    CHECK_FALSE(check_condition_doublestar({Subspace::span(3, {vec({1, -1, 0})}), Subspace::span(3, {vec({1, 1, -2})})})
                    .has_value());
    const auto viol = check_condition_doublestar({Subspace::span(3, {vec({1, 0, 0})})});
    REQUIRE(viol.has_value());
    CHECK(viol->components == std::vector<std::size_t>{0});
    CHECK(viol->value == 1);
    CHECK_THROWS_AS(check_condition_doublestar({Subspace(3), Subspace(4)}), DimensionMismatch);
    // A pair orthogonal to e but not to each other.
    const auto pair = check_condition_doublestar({Subspace::span(3, {vec({1, -1, 0})}), Subspace::span(3, {vec({1, -1, 0})})});
    REQUIRE(pair.has_value());
    CHECK(pair->components == std::vector<std::size_t>{0, 1});
    CHECK(pair->value == 2);
}

TEST_CASE("split_subspace")
{
    const auto v = split_subspace({Subspace::kernel_of_sum(4)});
    CHECK(v == Subspace::kernel_of_sum(4));
    const auto w = split_subspace({Subspace::span(3, {vec({1, -1, 0}), vec({0, 1, -1})}), Subspace::span(3, {vec({1, 1, -2})})});
    CHECK(w.dim() == 3);
    CHECK(w.ambient_dim() == 6);
    // lambda = (1,1,-2) in A_2: block j holds lambda_j e_2.
    CHECK(w.contains(vec({0, 1, 0, 1, 0, -2})));
}

TEST_CASE("(*) holds for split(A) exactly when (**) holds for A")
{
    std::mt19937_64 rng(2024);
    int holds = 0, fails = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t k = 2 + t % 4;
        const std::size_t n = 1 + (t / 4) % 3;
        const auto a = random_config(k, n, rng, t);
        const bool star = !check_condition_star(split_subspace(a), n, k);
        const bool dstar = !check_condition_doublestar(a);
        CHECK(star == dstar);
        (dstar ? holds : fails)++;
    }
    CHECK(holds > 20);
    CHECK(fails > 20);
}

TEST_CASE("(*) is inherited by subspaces")
{
    std::mt19937_64 rng(99);
    for (int t = 0; t < 20; ++t) {
        const std::size_t k = 3 + t % 3, n = 1 + t % 2;
        const auto r = search_max_total_dimension(k, n, 20, rng(), 1);
        const auto v = split_subspace(r.best_config);
        REQUIRE_FALSE(check_condition_star(v, n, k).has_value());
        std::uniform_int_distribution<int> c(-3, 3);
        std::vector<Vector> sub;
        for (std::size_t s = 0; s + 1 < std::max<std::size_t>(v.dim(), 2); ++s) {
            Vector x(n * k, Rational(0));
            for (const auto& b : v.basis()) {
                const Rational f = c(rng);
                for (std::size_t i = 0; i < x.size(); ++i)
                    x[i] += f * b[i];
            }
            sub.push_back(x);
        }
        const auto w = Subspace::span(n * k, sub);
        CHECK(v.contains(w));
        CHECK_FALSE(check_condition_star(w, n, k).has_value());
    }
}

TEST_CASE("product_span")
{
    const auto e = Subspace::span(3, {vec({1, 1, 1})});
    CHECK(product_span(e, e) == e);
    CHECK(product_span(Subspace::span(3, {vec({1, -1, 0})}), Subspace::span(3, {vec({1, 1, -2})})) ==
          Subspace::span(3, {vec({1, -1, 0})}));
    CHECK(product_span(Subspace::kernel_of_sum(3), Subspace(3)).dim() == 0);
    CHECK_THROWS_AS(product_span(Subspace(2), Subspace(3)), DimensionMismatch);
}

TEST_CASE("pair lemma")
{
    const auto zero = pair_lemma_check(Subspace(4), Subspace(4));
    CHECK(zero.lhs == 0);
    CHECK(zero.rhs == 0);
    CHECK(zero.ok);

    // A.B = A here, so the span is A + B of dimension 2.
    const auto r = pair_lemma_check(Subspace::span(3, {vec({1, -1, 0})}), Subspace::span(3, {vec({1, 1, -2})}));
    CHECK(r.lhs == 2);
    CHECK(r.rhs == 2);
    CHECK(r.ok);

    CHECK_THROWS_AS(pair_lemma_check(Subspace::span(3, {vec({1, 0, 0})}), Subspace(3)), PreconditionViolated);
    CHECK_THROWS_AS(pair_lemma_check(Subspace::span(3, {vec({1, -1, 0})}), Subspace::span(3, {vec({1, -1, 0})})),
                    PreconditionViolated);

    for (std::size_t k = 1; k <= 8; ++k)
        for (std::uint64_t s = 0; s < 100; ++s) {
            const auto p = random_admissible_pair(k, s);
            REQUIRE(pair_conditions_hold(p.a, p.b));
            const auto res = pair_lemma_check(p.a, p.b);
            CHECK(res.ok);
            CHECK(res.rhs == p.a.dim() + p.b.dim());
        }
}

TEST_CASE("random admissible pairs cover several shapes")
{
    std::set<std::pair<std::size_t, std::size_t>> shapes;
    for (std::uint64_t s = 0; s < 200; ++s) {
        const auto p = random_admissible_pair(5, s);
        shapes.insert({p.a.dim(), p.b.dim()});
        CHECK(p.a.dim() + p.b.dim() <= 4);
    }
    CHECK(shapes.size() >= 6);
    CHECK(random_admissible_pair(6, 17).a == random_admissible_pair(6, 17).a);
}

TEST_CASE("mu rank")
{
    const auto a = Subspace::span(3, {vec({1, -1, 0})});
    const auto b = Subspace::span(3, {vec({1, 1, -2})});
    CHECK(mu_rank_at(a, b, all_ones(3), all_ones(3)) == (a + b).dim());
    CHECK(mu_generic_rank(a, b, 0) == 2);
    CHECK(mu_generic_rank(Subspace(3), Subspace(3), 0) == 0);
    CHECK_THROWS_AS(mu_generic_rank(Subspace::span(3, {vec({1, 0, 0})}), Subspace(3), 0), PreconditionViolated);
    for (std::size_t k = 2; k <= 6; ++k)
        for (std::uint64_t s = 0; s < 10; ++s) {
            const auto p = random_admissible_pair(k, s);
            CHECK(mu_generic_rank(p.a, p.b, s) == p.a.dim() + p.b.dim());
            CHECK(mu_rank_at(p.a, p.b, all_ones(k), all_ones(k)) == (p.a + p.b).dim());
        }
}

TEST_CASE("search: kernel-of-sum and small cases")
{
    const auto r = search_max_total_dimension(3, 1, 50, 0);
    CHECK(r.best_sum == 2);
    CHECK(r.best_candidate == 0);
    CHECK(r.best_strategy == "kernel-of-sum");
    CHECK_FALSE(r.counterexample);
    CHECK(r.best_config.front() == Subspace::kernel_of_sum(3));

    for (std::size_t n = 1; n <= 4; ++n) {
        const auto s = search_max_total_dimension(2, n, 200, 5);
        CHECK(s.best_sum == 1);
    }
    for (std::size_t k = 2; k <= 6; ++k) {
        const auto s = search_max_total_dimension(k, 1, 50, 1);
        CHECK(s.best_sum == k - 1);
    }
    CHECK_THROWS_AS(search_max_total_dimension(1, 1, 10, 0), RangeError);
    CHECK_THROWS_AS(search_max_total_dimension(3, 0, 10, 0), RangeError);
}

TEST_CASE("k = 2 exhaustively: no configuration exceeds 1")
{
    // The only nonzero subspace of e^perp in Q^2 is span{(1,-1)}.
    const auto line = Subspace::span(2, {vec({1, -1})});
    for (std::size_t n = 1; n <= 4; ++n) {
        std::size_t best = 0;
        for (unsigned mask = 0; mask < (1u << n); ++mask) {
            std::vector<Subspace> a(n, Subspace(2));
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i))
                    a[i] = line;
            if (!check_condition_doublestar(a))
                best = std::max<std::size_t>(best, __builtin_popcount(mask));
        }
        CHECK(best == 1);
    }
}

TEST_CASE("search results are valid and deterministic")
{
    for (std::size_t k = 3; k <= 5; ++k)
        for (std::size_t n = 2; n <= 3; ++n) {
            const auto one = search_max_total_dimension(k, n, 600, 7, 1);
            const auto again = search_max_total_dimension(k, n, 600, 7, 1);
            const auto many = search_max_total_dimension(k, n, 600, 7, 3);
            CHECK(one.best_sum <= k - 1);
            CHECK(one.best_sum == again.best_sum);
            CHECK(one.best_candidate == again.best_candidate);
            CHECK(one.passing == again.passing);
            CHECK(one.best_sum == many.best_sum);
            CHECK(one.best_candidate == many.best_candidate);
            for (std::size_t i = 0; i < n; ++i)
                CHECK(one.best_config[i] == again.best_config[i]);
            CHECK_FALSE(check_condition_doublestar(one.best_config).has_value());
            CHECK_FALSE(check_condition_star(split_subspace(one.best_config), n, k).has_value());
            std::size_t total = 0;
            for (const auto& s : one.best_config)
                total += s.dim();
            CHECK(total == one.best_sum);
            CHECK(one.evaluated == 600);
        }
}

TEST_CASE("subspace file parsing")
{
    std::istringstream in(R"(# two components in Q^3
3 2
1
1 -1 0   # A_1
2
1 1 -2
1/2 1/2 -1
)");
    const auto f = parse_subspace_file(in);
    CHECK(f.k == 3);
    CHECK(f.n == 2);
    REQUIRE(f.blocks.size() == 2);
    CHECK(f.blocks[0].size() == 1);
    CHECK(f.blocks[1][1][0] == Rational(1, 2));

    std::istringstream bad_header("3\n");
    CHECK_THROWS(parse_subspace_file(bad_header));
    std::istringstream short_block("3 1\n2\n1 -1 0\n");
    CHECK_THROWS(parse_subspace_file(short_block));
    std::istringstream bad_number("3 1\n1\n1 x 0\n");
    CHECK_THROWS(parse_subspace_file(bad_number));
}
