#include "zcycles/tangent.hpp"

#include "zcycles/errors.hpp"

#include <omp.h>

#include <algorithm>
#include <numeric>
#include <random>
#include <sstream>

namespace zcycles {

namespace {

template <class F>
void for_each_combination(std::size_t n, std::size_t r, F&& f)
{
    if (r > n)
        return;
    std::vector<std::size_t> idx(r);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    while (true) {
        f(idx);
        std::size_t i = r;
        while (i > 0 && idx[i - 1] == n - r + i - 1)
            --i;
        if (i == 0)
            return;
        ++idx[i - 1];
        for (std::size_t j = i; j < r; ++j)
            idx[j] = idx[j - 1] + 1;
    }
}

void require_ambient(const Vector& v, std::size_t ambient, const char* what)
{
    if (v.size() != ambient)
        throw DimensionMismatch(std::string(what) + ": vector of length " + std::to_string(v.size()) +
                                ", ambient dimension " + std::to_string(ambient));
}

}  // namespace

Subspace Subspace::from_basis(std::size_t ambient_dim, std::vector<Vector> basis)
{
    for (const auto& v : basis)
        require_ambient(v, ambient_dim, "Subspace::from_basis");
    if (linalg::independent_rows(basis).size() != basis.size())
        throw PreconditionViolated("Subspace::from_basis: rows are linearly dependent");
    Subspace s(ambient_dim);
    s.basis_ = std::move(basis);
    return s;
}

Subspace Subspace::span(std::size_t ambient_dim, const std::vector<Vector>& vectors)
{
    for (const auto& v : vectors)
        require_ambient(v, ambient_dim, "Subspace::span");
    Subspace s(ambient_dim);
    for (std::size_t i : linalg::independent_rows(vectors))
        s.basis_.push_back(vectors[i]);
    return s;
}

Subspace Subspace::whole(std::size_t ambient_dim)
{
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < ambient_dim; ++i) {
        Vector v(ambient_dim, Rational(0));
        v[i] = 1;
        rows.push_back(std::move(v));
    }
    return from_basis(ambient_dim, std::move(rows));
}

Subspace Subspace::kernel_of_sum(std::size_t ambient_dim)
{
    std::vector<Vector> rows;
    for (std::size_t i = 0; i + 1 < ambient_dim; ++i) {
        Vector v(ambient_dim, Rational(0));
        v[i] = 1;
        v[i + 1] = -1;
        rows.push_back(std::move(v));
    }
    return from_basis(ambient_dim, std::move(rows));
}

bool Subspace::contains(const Vector& v) const
{
    require_ambient(v, ambient_, "Subspace::contains");
    if (linalg::is_zero(v))
        return true;
    std::vector<Vector> rows = basis_;
    rows.push_back(v);
    return linalg::independent_rows(rows).size() == basis_.size();
}

bool Subspace::contains(const Subspace& other) const
{
    return std::all_of(other.basis_.begin(), other.basis_.end(), [&](const Vector& v) { return contains(v); });
}

Subspace Subspace::operator+(const Subspace& other) const
{
    if (ambient_ != other.ambient_)
        throw DimensionMismatch("sum of subspaces with different ambient dimensions");
    std::vector<Vector> rows = basis_;
    rows.insert(rows.end(), other.basis_.begin(), other.basis_.end());
    return span(ambient_, rows);
}

Subspace Subspace::intersect(const Subspace& other) const
{
    if (ambient_ != other.ambient_)
        throw DimensionMismatch("intersection of subspaces with different ambient dimensions");
    if (dim() == 0 || other.dim() == 0)
        return Subspace(ambient_);
    // Sum x_i a_i = Sum y_j b_j: nullspace of [A^T | -B^T].
    linalg::Matrix m(ambient_, dim() + other.dim());
    for (std::size_t c = 0; c < dim(); ++c)
        for (std::size_t r = 0; r < ambient_; ++r)
            m(r, c) = basis_[c][r];
    for (std::size_t c = 0; c < other.dim(); ++c)
        for (std::size_t r = 0; r < ambient_; ++r)
            m(r, dim() + c) = -other.basis_[c][r];
    std::vector<Vector> vectors;
    for (const auto& x : linalg::nullspace(m)) {
        Vector v(ambient_, Rational(0));
        for (std::size_t c = 0; c < dim(); ++c)
            for (std::size_t r = 0; r < ambient_; ++r)
                v[r] += x[c] * basis_[c][r];
        vectors.push_back(std::move(v));
    }
    return span(ambient_, vectors);
}

Subspace Subspace::orthogonal_complement() const
{
    if (dim() == 0)
        return whole(ambient_);
    return from_basis(ambient_, linalg::nullspace(linalg::Matrix::from_rows(basis_, ambient_)));
}

bool operator==(const Subspace& a, const Subspace& b)
{
    return a.ambient_ == b.ambient_ && a.dim() == b.dim() && a.contains(b);
}

Vector hadamard(const Vector& a, const Vector& b)
{
    if (a.size() != b.size())
        throw DimensionMismatch("coordinatewise product of vectors of different length");
    Vector v(a.size());
    for (std::size_t i = 0; i < a.size(); ++i)
        v[i] = a[i] * b[i];
    return v;
}

Vector all_ones(std::size_t k)
{
    return Vector(k, Rational(1));
}

// ---------------------------------------------------------------------------

Rational evaluate_star_form(const Subspace& v, std::size_t n, std::size_t k,
                            const std::vector<std::size_t>& basis_indices,
                            const std::vector<std::size_t>& multi_index)
{
    const std::size_t i = basis_indices.size();
    if (multi_index.size() != i)
        throw DimensionMismatch("form degree differs from the number of vectors");
    Rational sum = 0;
    for (std::size_t j = 0; j < k; ++j) {
        linalg::Matrix m(i, i);
        for (std::size_t a = 0; a < i; ++a)
            for (std::size_t b = 0; b < i; ++b)
                m(a, b) = v.basis().at(basis_indices[a]).at(j * n + multi_index[b]);
        sum += linalg::determinant(m);
    }
    return sum;
}

std::optional<StarViolation> check_condition_star(const Subspace& v, std::size_t n, std::size_t k)
{
    if (n == 0 || k == 0 || v.ambient_dim() != n * k)
        throw DimensionMismatch("check_condition_star: ambient dimension " + std::to_string(v.ambient_dim()) +
                                " is not n*k = " + std::to_string(n * k));
    const std::size_t top = std::min(n, v.dim());
    std::optional<StarViolation> found;
    for (std::size_t i = 1; i <= top && !found; ++i) {
        for_each_combination(n, i, [&](const std::vector<std::size_t>& forms) {
            if (found)
                return;
            for_each_combination(v.dim(), i, [&](const std::vector<std::size_t>& vecs) {
                if (found)
                    return;
                Rational value = evaluate_star_form(v, n, k, vecs, forms);
                if (sgn(value) != 0)
                    found = StarViolation{static_cast<unsigned>(i), vecs, forms, value};
            });
        });
    }
    return found;
}

std::optional<DoublestarViolation> check_condition_doublestar(const std::vector<Subspace>& a)
{
    if (a.empty())
        return std::nullopt;
    const std::size_t k = a.front().ambient_dim();
    for (const auto& s : a)
        if (s.ambient_dim() != k)
            throw DimensionMismatch("check_condition_doublestar: components live in different ambient spaces");
    const std::size_t n = a.size();
    if (n > 30)
        throw RangeError("check_condition_doublestar enumerates subsets; too many components");
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::vector<std::size_t> comps;
        bool empty_component = false;
        for (std::size_t i = 0; i < n; ++i)
            if (mask & (1u << i)) {
                comps.push_back(i);
                empty_component = empty_component || a[i].dim() == 0;
            }
        if (empty_component)
            continue;
        std::vector<std::size_t> choice(comps.size(), 0);
        while (true) {
            Vector prod = all_ones(k);
            for (std::size_t l = 0; l < comps.size(); ++l)
                prod = hadamard(prod, a[comps[l]].basis()[choice[l]]);
            Rational value = std::accumulate(prod.begin(), prod.end(), Rational(0));
            if (sgn(value) != 0)
                return DoublestarViolation{comps, choice, value};
            std::size_t l = 0;
            while (l < comps.size() && ++choice[l] == a[comps[l]].dim())
                choice[l++] = 0;
            if (l == comps.size())
                break;
        }
    }
    return std::nullopt;
}

Subspace split_subspace(const std::vector<Subspace>& a)
{
    const std::size_t n = a.size();
    if (n == 0)
        throw DimensionMismatch("split_subspace needs at least one component");
    const std::size_t k = a.front().ambient_dim();
    std::vector<Vector> rows;
    for (std::size_t i = 0; i < n; ++i) {
        if (a[i].ambient_dim() != k)
            throw DimensionMismatch("split_subspace: components live in different ambient spaces");
        for (const auto& lambda : a[i].basis()) {
            Vector v(n * k, Rational(0));
            for (std::size_t j = 0; j < k; ++j)
                v[j * n + i] = lambda[j];
            rows.push_back(std::move(v));
        }
    }
    return Subspace::from_basis(n * k, std::move(rows));
}

Subspace product_span(const Subspace& a, const Subspace& b)
{
    if (a.ambient_dim() != b.ambient_dim())
        throw DimensionMismatch("product_span of subspaces with different ambient dimensions");
    std::vector<Vector> products;
    for (const auto& x : a.basis())
        for (const auto& y : b.basis())
            products.push_back(hadamard(x, y));
    return Subspace::span(a.ambient_dim(), products);
}

bool pair_conditions_hold(const Subspace& a, const Subspace& b)
{
    if (a.ambient_dim() != b.ambient_dim())
        throw DimensionMismatch("pair conditions on subspaces with different ambient dimensions");
    const Vector e = all_ones(a.ambient_dim());
    for (const auto& x : a.basis())
        if (sgn(linalg::dot(x, e)) != 0)
            return false;
    for (const auto& y : b.basis())
        if (sgn(linalg::dot(y, e)) != 0)
            return false;
    for (const auto& x : a.basis())
        for (const auto& y : b.basis())
            if (sgn(linalg::dot(x, y)) != 0)
                return false;
    return true;
}

PairLemmaResult pair_lemma_check(const Subspace& a, const Subspace& b)
{
    if (!pair_conditions_hold(a, b))
        throw PreconditionViolated("pair_lemma_check: A and B must be orthogonal to e and to each other");
    PairLemmaResult r;
    r.lhs = (product_span(a, b) + a + b).dim();
    r.rhs = a.dim() + b.dim();
    r.ok = r.lhs >= r.rhs;
    return r;
}

std::size_t mu_rank_at(const Subspace& a, const Subspace& b, const Vector& pa, const Vector& pb)
{
    const std::size_t k = a.ambient_dim();
    if (b.ambient_dim() != k || pa.size() != k || pb.size() != k)
        throw DimensionMismatch("mu_rank_at: inconsistent dimensions");
    std::vector<Vector> images;
    for (const auto& alpha : a.basis())
        images.push_back(hadamard(alpha, pb));
    for (const auto& beta : b.basis())
        images.push_back(hadamard(pa, beta));
    if (images.empty())
        return 0;
    return linalg::rank(linalg::Matrix::from_rows(images, k));
}

namespace {

Vector random_point_of_translate(const Subspace& s, std::mt19937_64& rng)
{
    std::uniform_int_distribution<int> coeff(-5, 5);
    Vector p = all_ones(s.ambient_dim());
    for (const auto& v : s.basis()) {
        Rational c(coeff(rng));
        for (std::size_t i = 0; i < p.size(); ++i)
            p[i] += c * v[i];
    }
    return p;
}

}  // namespace

std::size_t mu_generic_rank(const Subspace& a, const Subspace& b, std::uint64_t seed, unsigned samples)
{
    if (!pair_conditions_hold(a, b))
        throw PreconditionViolated("mu_generic_rank: A and B must be orthogonal to e and to each other");
    std::mt19937_64 rng(seed);
    std::size_t best = 0;
    for (unsigned s = 0; s < std::max(samples, 1u); ++s) {
        Vector pa = random_point_of_translate(a, rng);
        Vector pb = random_point_of_translate(b, rng);
        best = std::max(best, mu_rank_at(a, b, pa, pb));
    }
    return best;
}

namespace {

Vector random_sum_zero_vector(std::size_t k, std::mt19937_64& rng, int bound)
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

Vector scaled_to_integers(Vector v)
{
    Integer l = 1;
    for (const auto& x : v)
        l = lcm(l, x.get_den());
    Integer gcd_all = 0;
    for (auto& x : v) {
        x *= l;
        gcd_all = gcd(gcd_all, x.get_num());
    }
    if (gcd_all > 1)
        for (auto& x : v)
            x /= gcd_all;
    return v;
}

}  // namespace

AdmissiblePair random_admissible_pair(std::size_t k, std::uint64_t seed)
{
    if (k < 1)
        throw RangeError("random_admissible_pair needs k >= 1");
    std::mt19937_64 rng(seed);
    std::uniform_int_distribution<std::size_t> dim_a(0, k - 1);
    const std::size_t want_a = dim_a(rng);
    std::vector<Vector> va;
    for (std::size_t i = 0; i < want_a; ++i)
        va.push_back(random_sum_zero_vector(k, rng, 3));
    Subspace a = Subspace::span(k, va);

    std::vector<Vector> constraints = a.basis();
    constraints.push_back(all_ones(k));
    Subspace room = Subspace::span(k, constraints).orthogonal_complement();
    std::uniform_int_distribution<std::size_t> dim_b(0, room.dim());
    const std::size_t want_b = dim_b(rng);
    std::uniform_int_distribution<int> coeff(-3, 3);
    std::vector<Vector> vb;
    for (std::size_t i = 0; i < want_b; ++i) {
        Vector v(k, Rational(0));
        for (const auto& r : room.basis()) {
            Rational c(coeff(rng));
            for (std::size_t j = 0; j < k; ++j)
                v[j] += c * r[j];
        }
        vb.push_back(scaled_to_integers(std::move(v)));
    }
    return {std::move(a), Subspace::span(k, vb)};
}

// ---------------------------------------------------------------------------
// Configuration search.

namespace {

struct Overflow {};

// Exact integer linear algebra on small vectors; throws Overflow instead of
// wrapping. Vectors are kept primitive (content 1).
struct IntOps {
    using Vec = std::vector<std::int64_t>;

    static std::int64_t mul(std::int64_t a, std::int64_t b)
    {
        std::int64_t r;
        if (__builtin_mul_overflow(a, b, &r))
            throw Overflow{};
        return r;
    }
    static std::int64_t sub(std::int64_t a, std::int64_t b)
    {
        std::int64_t r;
        if (__builtin_sub_overflow(a, b, &r))
            throw Overflow{};
        return r;
    }
    static std::int64_t add(std::int64_t a, std::int64_t b)
    {
        std::int64_t r;
        if (__builtin_add_overflow(a, b, &r))
            throw Overflow{};
        return r;
    }

    static void make_primitive(Vec& v)
    {
        std::int64_t g = 0;
        for (auto x : v)
            g = std::gcd(g, x < 0 ? -x : x);
        if (g > 1)
            for (auto& x : v)
                x /= g;
    }
    static bool is_zero(const Vec& v)
    {
        return std::all_of(v.begin(), v.end(), [](std::int64_t x) { return x == 0; });
    }

    // Gauss-Jordan with integer row operations; returns pivot columns, rows
    // reduced in place (pivot rows first).
    static std::vector<std::size_t> reduce(std::vector<Vec>& rows, std::size_t cols)
    {
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t c = 0; c < cols && r < rows.size(); ++c) {
            std::size_t p = r;
            while (p < rows.size() && rows[p][c] == 0)
                ++p;
            if (p == rows.size())
                continue;
            std::swap(rows[p], rows[r]);
            for (std::size_t i = 0; i < rows.size(); ++i) {
                if (i == r || rows[i][c] == 0)
                    continue;
                const std::int64_t g = std::gcd(rows[r][c], rows[i][c]);
                const std::int64_t fr = rows[i][c] / g;
                const std::int64_t fi = rows[r][c] / g;
                for (std::size_t j = 0; j < cols; ++j)
                    rows[i][j] = sub(mul(rows[i][j], fi), mul(rows[r][j], fr));
                make_primitive(rows[i]);
            }
            pivots.push_back(c);
            ++r;
        }
        rows.resize(r);
        return pivots;
    }

    static std::size_t rank(std::vector<Vec> rows, std::size_t cols) { return reduce(rows, cols).size(); }

    static bool in_span(const std::vector<Vec>& basis, const Vec& v, std::size_t cols)
    {
        if (is_zero(v))
            return true;
        std::vector<Vec> rows = basis;
        rows.push_back(v);
        return rank(std::move(rows), cols) == basis.size();
    }

    static std::vector<Vec> complement(std::vector<Vec> rows, std::size_t cols)
    {
        auto pivots = reduce(rows, cols);
        std::vector<bool> is_pivot(cols, false);
        for (auto p : pivots)
            is_pivot[p] = true;
        std::int64_t l = 1;
        for (std::size_t i = 0; i < pivots.size(); ++i) {
            const std::int64_t p = rows[i][pivots[i]] < 0 ? -rows[i][pivots[i]] : rows[i][pivots[i]];
            l = mul(l / std::gcd(l, p), p);
        }
        std::vector<Vec> basis;
        for (std::size_t f = 0; f < cols; ++f) {
            if (is_pivot[f])
                continue;
            Vec v(cols, 0);
            v[f] = l;
            for (std::size_t i = 0; i < pivots.size(); ++i)
                v[pivots[i]] = -mul(rows[i][f], l / rows[i][pivots[i]]);
            make_primitive(v);
            basis.push_back(std::move(v));
        }
        return basis;
    }

    static Vec hadamard(const Vec& a, const Vec& b)
    {
        Vec v(a.size());
        for (std::size_t i = 0; i < a.size(); ++i)
            v[i] = mul(a[i], b[i]);
        return v;
    }

    static Vec combine(const std::vector<Vec>& basis, const std::vector<int>& coeffs, std::size_t cols)
    {
        Vec v(cols, 0);
        for (std::size_t b = 0; b < basis.size(); ++b)
            for (std::size_t j = 0; j < cols; ++j)
                v[j] = add(v[j], mul(coeffs[b], basis[b][j]));
        make_primitive(v);
        return v;
    }

    static Vec from_ints(const std::vector<std::int64_t>& v) { return v; }

    static bool sum_is_zero(const Vec& v)
    {
        std::int64_t s = 0;
        for (auto x : v)
            s = add(s, x);
        return s == 0;
    }

    static Vector to_rational(const Vec& v)
    {
        Vector out;
        for (auto x : v)
            out.emplace_back(Integer(static_cast<long>(x)));
        return out;
    }
};

// The same operations in GMP rationals, for candidates that overflow int64.
struct ExactOps {
    using Vec = Vector;

    static bool is_zero(const Vec& v) { return linalg::is_zero(v); }
    static std::size_t rank(const std::vector<Vec>& rows, std::size_t) { return linalg::independent_rows(rows).size(); }
    static bool in_span(const std::vector<Vec>& basis, const Vec& v, std::size_t cols)
    {
        if (is_zero(v))
            return true;
        std::vector<Vec> rows = basis;
        rows.push_back(v);
        return rank(rows, cols) == basis.size();
    }
    static std::vector<Vec> complement(const std::vector<Vec>& rows, std::size_t cols)
    {
        if (rows.empty())
            return Subspace::whole(cols).basis();
        std::vector<Vec> out;
        for (auto& v : linalg::nullspace(linalg::Matrix::from_rows(rows, cols)))
            out.push_back(scaled_to_integers(std::move(v)));
        return out;
    }
    static Vec hadamard(const Vec& a, const Vec& b) { return zcycles::hadamard(a, b); }
    static Vec combine(const std::vector<Vec>& basis, const std::vector<int>& coeffs, std::size_t cols)
    {
        Vec v(cols, Rational(0));
        for (std::size_t b = 0; b < basis.size(); ++b)
            for (std::size_t j = 0; j < cols; ++j)
                v[j] += coeffs[b] * basis[b][j];
        return is_zero(v) ? v : scaled_to_integers(std::move(v));
    }
    static Vec from_ints(const std::vector<std::int64_t>& v)
    {
        Vec out;
        for (auto x : v)
            out.emplace_back(Integer(static_cast<long>(x)));
        return out;
    }
    static bool sum_is_zero(const Vec& v) { return sgn(std::accumulate(v.begin(), v.end(), Rational(0))) == 0; }
    static Vector to_rational(const Vec& v) { return v; }
};

struct Outcome {
    std::vector<std::vector<Vector>> config;
    std::size_t sum = 0;
    std::string strategy;
};

std::mt19937_64 candidate_rng(std::uint64_t seed, std::uint64_t t)
{
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(t), static_cast<std::uint32_t>(t >> 32)};
    return std::mt19937_64(seq);
}

constexpr std::int64_t kSweepPrimes[] = {2, 3, 5, 7};

std::uint64_t saturating_pow(std::uint64_t base, std::uint64_t exp)
{
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < exp; ++i) {
        if (r > (std::uint64_t{1} << 40) / base)
            return std::uint64_t{1} << 40;
        r *= base;
    }
    return r;
}

// Tuple number s of the F_p sweep: one vector per component, each in e^perp
// over F_p, given by its first k-1 coordinates in base p.
std::optional<std::pair<std::int64_t, std::vector<std::vector<std::int64_t>>>>
sweep_tuple(std::size_t k, std::size_t n, std::uint64_t s)
{
    for (std::int64_t p : kSweepPrimes) {
        const std::uint64_t per = saturating_pow(static_cast<std::uint64_t>(p), k - 1);
        const std::uint64_t total = saturating_pow(per, n);
        if (s >= total) {
            s -= total;
            continue;
        }
        std::vector<std::vector<std::int64_t>> tuple(n, std::vector<std::int64_t>(k, 0));
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t code = s % per;
            s /= per;
            std::int64_t sum = 0;
            for (std::size_t j = 0; j + 1 < k; ++j) {
                std::int64_t digit = static_cast<std::int64_t>(code % static_cast<std::uint64_t>(p));
                code /= static_cast<std::uint64_t>(p);
                if (digit > p / 2)
                    digit -= p;  // symmetric representative
                tuple[i][j] = digit;
                sum += digit;
            }
            std::int64_t last = ((-sum) % p + p) % p;
            if (last > p / 2)
                last -= p;
            tuple[i][k - 1] = last;
        }
        return std::make_pair(p, std::move(tuple));
    }
    return std::nullopt;
}

// (**) for single vectors per component, modulo p.
bool sweep_passes_mod_p(const std::vector<std::vector<std::int64_t>>& tuple, std::int64_t p)
{
    const std::size_t n = tuple.size();
    const std::size_t k = tuple.front().size();
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        std::int64_t sum = 0;
        bool zero_component = false;
        for (std::size_t i = 0; i < n; ++i)
            if ((mask & (1u << i)) && std::all_of(tuple[i].begin(), tuple[i].end(), [](auto x) { return x == 0; }))
                zero_component = true;
        if (zero_component)
            continue;
        for (std::size_t j = 0; j < k; ++j) {
            std::int64_t prod = 1;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i))
                    prod = (prod * (((tuple[i][j] % p) + p) % p)) % p;
            sum = (sum + prod) % p;
        }
        if (sum != 0)
            return false;
    }
    return true;
}

template <class Ops>
class ConfigBuilder {
public:
    using Vec = typename Ops::Vec;

    ConfigBuilder(std::size_t k, std::size_t n) : k_(k), comps_(n) {}

    // P_i^perp: vectors orthogonal to e and to every coordinatewise product of
    // basis vectors taken from distinct other components.
    std::vector<Vec> allowed(std::size_t i) const
    {
        std::vector<Vec> products{Ops::from_ints(std::vector<std::int64_t>(k_, 1))};
        std::vector<std::size_t> others;
        for (std::size_t c = 0; c < comps_.size(); ++c)
            if (c != i && !comps_[c].empty())
                others.push_back(c);
        const std::size_t m = others.size();
        for (std::uint32_t mask = 1; mask < (1u << m); ++mask) {
            std::vector<std::size_t> sel;
            for (std::size_t l = 0; l < m; ++l)
                if (mask & (1u << l))
                    sel.push_back(others[l]);
            std::vector<std::size_t> choice(sel.size(), 0);
            while (true) {
                Vec prod = comps_[sel[0]][choice[0]];
                for (std::size_t l = 1; l < sel.size(); ++l)
                    prod = Ops::hadamard(prod, comps_[sel[l]][choice[l]]);
                products.push_back(std::move(prod));
                std::size_t l = 0;
                while (l < sel.size() && ++choice[l] == comps_[sel[l]].size())
                    choice[l++] = 0;
                if (l == sel.size())
                    break;
            }
        }
        return Ops::complement(std::move(products), k_);
    }

    bool try_add(std::size_t i, const Vec& v)
    {
        if (Ops::is_zero(v) || Ops::in_span(comps_[i], v, k_))
            return false;
        if (!Ops::in_span(allowed(i), v, k_))
            return false;
        comps_[i].push_back(v);
        return true;
    }

    // Extend until every component equals its allowed space.
    void saturate(std::mt19937_64& rng)
    {
        std::uniform_int_distribution<int> coeff(-2, 2);
        std::vector<std::size_t> order(comps_.size());
        std::iota(order.begin(), order.end(), std::size_t{0});
        bool changed = true;
        while (changed) {
            changed = false;
            std::shuffle(order.begin(), order.end(), rng);
            for (std::size_t i : order) {
                auto room = allowed(i);
                if (room.size() <= comps_[i].size())
                    continue;  // A_i is always inside room
                std::vector<int> c(room.size());
                for (auto& x : c)
                    x = coeff(rng);
                Vec v = Ops::combine(room, c, k_);
                if (Ops::is_zero(v) || Ops::in_span(comps_[i], v, k_)) {
                    auto it = std::find_if(room.begin(), room.end(),
                                           [&](const Vec& r) { return !Ops::in_span(comps_[i], r, k_); });
                    v = *it;
                }
                comps_[i].push_back(std::move(v));
                changed = true;
                break;
            }
        }
    }

    // (**) recomputed directly from the bases.
    bool valid() const
    {
        const std::size_t n = comps_.size();
        for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
            std::vector<std::size_t> sel;
            bool skip = false;
            for (std::size_t i = 0; i < n; ++i)
                if (mask & (1u << i)) {
                    sel.push_back(i);
                    skip = skip || comps_[i].empty();
                }
            if (skip)
                continue;
            std::vector<std::size_t> choice(sel.size(), 0);
            while (true) {
                Vec prod = comps_[sel[0]][choice[0]];
                for (std::size_t l = 1; l < sel.size(); ++l)
                    prod = Ops::hadamard(prod, comps_[sel[l]][choice[l]]);
                if (!Ops::sum_is_zero(prod))
                    return false;
                std::size_t l = 0;
                while (l < sel.size() && ++choice[l] == comps_[sel[l]].size())
                    choice[l++] = 0;
                if (l == sel.size())
                    break;
            }
        }
        return true;
    }

    std::size_t total_dim() const
    {
        std::size_t s = 0;
        for (const auto& c : comps_)
            s += c.size();
        return s;
    }

    std::vector<std::vector<Vector>> to_rational() const
    {
        std::vector<std::vector<Vector>> out;
        for (const auto& c : comps_) {
            std::vector<Vector> rows;
            for (const auto& v : c)
                rows.push_back(Ops::to_rational(v));
            out.push_back(std::move(rows));
        }
        return out;
    }

private:
    std::size_t k_;
    std::vector<std::vector<Vec>> comps_;
};

template <class Ops>
std::optional<Outcome> run_candidate(std::size_t k, std::size_t n, std::uint64_t seed, std::uint64_t t)
{
    auto rng = candidate_rng(seed, t);
    ConfigBuilder<Ops> b(k, n);
    std::string strategy;

    if (t == 0) {
        strategy = "kernel-of-sum";
        for (std::size_t j = 0; j + 1 < k; ++j) {
            std::vector<std::int64_t> v(k, 0);
            v[j] = 1;
            v[j + 1] = -1;
            b.try_add(0, Ops::from_ints(v));
        }
    } else if (t % 3 == 1) {
        auto sweep = sweep_tuple(k, n, t / 3);
        if (!sweep)
            return std::nullopt;
        auto& [p, tuple] = *sweep;
        if (!sweep_passes_mod_p(tuple, p))
            return std::nullopt;
        strategy = "sweep-F" + std::to_string(p);
        // Lift: keep the representatives that satisfy (**) over Q.
        for (std::size_t i = 0; i < n; ++i)
            b.try_add(i, Ops::from_ints(tuple[i]));
    } else {
        strategy = "random";
        std::uniform_int_distribution<std::size_t> dim(0, k - 1);
        std::uniform_int_distribution<int> entry(-2, 2);
        for (std::size_t i = 0; i < n; ++i) {
            const std::size_t d = dim(rng);
            for (std::size_t r = 0; r < d; ++r) {
                std::vector<std::int64_t> v(k, 0);
                std::int64_t s = 0;
                for (std::size_t j = 0; j + 1 < k; ++j) {
                    v[j] = entry(rng);
                    s += v[j];
                }
                v[k - 1] = -s;
                b.try_add(i, Ops::from_ints(v));
            }
        }
    }
    b.saturate(rng);
    if (!b.valid())
        throw std::logic_error("search produced a configuration violating (**)");
    return Outcome{b.to_rational(), b.total_dim(), strategy};
}

std::optional<Outcome> evaluate_candidate(std::size_t k, std::size_t n, std::uint64_t seed, std::uint64_t t)
{
    try {
        return run_candidate<IntOps>(k, n, seed, t);
    } catch (const Overflow&) {
        return run_candidate<ExactOps>(k, n, seed, t);
    }
}

}  // namespace

SearchResult search_max_total_dimension(std::size_t k, std::size_t n, std::uint64_t budget, std::uint64_t seed,
                                        unsigned workers)
{
    if (k < 2 || n < 1)
        throw RangeError("search_max_total_dimension needs k >= 2 and n >= 1");
    if (n > 16)
        throw RangeError("search_max_total_dimension enumerates subsets of components; n is too large");
    budget = std::max<std::uint64_t>(budget, 1);

    struct Best {
        std::optional<Outcome> outcome;
        std::uint64_t index = 0;
        std::uint64_t passing = 0;
    };
    std::vector<Best> partial(std::max(workers, 1u));

#pragma omp parallel for num_threads(std::max(workers, 1u)) schedule(dynamic, 64)
    for (std::int64_t t = 0; t < static_cast<std::int64_t>(budget); ++t) {
        Best& mine = partial[static_cast<std::size_t>(omp_get_thread_num())];
        auto out = evaluate_candidate(k, n, seed, static_cast<std::uint64_t>(t));
        if (!out)
            continue;
        ++mine.passing;
        const auto ut = static_cast<std::uint64_t>(t);
        if (!mine.outcome || out->sum > mine.outcome->sum || (out->sum == mine.outcome->sum && ut < mine.index)) {
            mine.outcome = std::move(out);
            mine.index = ut;
        }
    }

    SearchResult r;
    r.evaluated = budget;
    std::optional<Outcome> best;
    for (auto& p : partial) {
        r.passing += p.passing;
        if (!p.outcome)
            continue;
        if (!best || p.outcome->sum > best->sum || (p.outcome->sum == best->sum && p.index < r.best_candidate)) {
            best = std::move(p.outcome);
            r.best_candidate = p.index;
        }
    }
    // Candidate 0 always succeeds, so best is set.
    r.best_sum = best->sum;
    r.best_strategy = best->strategy;
    for (const auto& rows : best->config)
        r.best_config.push_back(Subspace::from_basis(k, rows));
    if (check_condition_doublestar(r.best_config))
        throw std::logic_error("best configuration fails (**) on re-verification over Q");
    r.counterexample = r.best_sum > k - 1;
    return r;
}

// ---------------------------------------------------------------------------

SubspaceFile parse_subspace_file(std::istream& in)
{
    std::vector<std::vector<std::string>> lines;
    std::string line;
    while (std::getline(in, line)) {
        if (auto hash = line.find('#'); hash != std::string::npos)
            line.erase(hash);
        std::istringstream ls(line);
        std::vector<std::string> tokens;
        for (std::string tok; ls >> tok;)
            tokens.push_back(tok);
        if (!tokens.empty())
            lines.push_back(std::move(tokens));
    }
    if (lines.empty() || lines[0].size() != 2)
        throw std::invalid_argument("subspace file must start with a line \"k n\"");
    SubspaceFile f;
    f.k = std::stoul(lines[0][0]);
    f.n = std::stoul(lines[0][1]);
    std::size_t pos = 1;
    while (pos < lines.size()) {
        if (lines[pos].size() != 1)
            throw std::invalid_argument("expected a block dimension at line " + std::to_string(pos + 1));
        const std::size_t dim = std::stoul(lines[pos][0]);
        ++pos;
        std::vector<Vector> rows;
        for (std::size_t r = 0; r < dim; ++r, ++pos) {
            if (pos >= lines.size())
                throw std::invalid_argument("block ends before its declared " + std::to_string(dim) + " rows");
            Vector v;
            for (const auto& tok : lines[pos])
                v.push_back(parse_rational(tok));
            rows.push_back(std::move(v));
        }
        f.blocks.push_back(std::move(rows));
    }
    return f;
}

}  // namespace zcycles
