#include "zcycles/cycle_json.hpp"

#include <stdexcept>

namespace zcycles {

namespace {

nlohmann::json integer_to_json(const Integer& z)
{
    if (z.fits_slong_p())
        return z.get_si();
    return z.get_str();
}

Integer integer_from_json(const nlohmann::json& j)
{
    if (j.is_number_integer())
        return Integer(static_cast<long>(j.get<std::int64_t>()));
    if (j.is_string()) {
        Rational q = parse_rational(j.get<std::string>());
        if (q.get_den() != 1)
            throw std::invalid_argument("point coordinate is not an integer: " + j.dump());
        return q.get_num();
    }
    throw std::invalid_argument("point coordinate must be an integer: " + j.dump());
}

}  // namespace

nlohmann::json cycle_to_json(const Cycle& c)
{
    nlohmann::json terms = nlohmann::json::array();
    for (const auto& [p, coeff] : c.terms()) {
        nlohmann::json point = nlohmann::json::array();
        for (const auto& x : p.coords())
            point.push_back(integer_to_json(x));
        terms.push_back({{"point", std::move(point)}, {"coeff", to_fraction_string(coeff)}});
    }
    return {{"rank", c.rank()}, {"terms", std::move(terms)}};
}

Cycle cycle_from_json(const nlohmann::json& j)
{
    const auto rank = j.at("rank").get<std::size_t>();
    Cycle c(rank);
    for (const auto& t : j.at("terms")) {
        std::vector<Integer> coords;
        for (const auto& x : t.at("point"))
            coords.push_back(integer_from_json(x));
        if (coords.size() != rank)
            throw DimensionMismatch("term point has " + std::to_string(coords.size()) + " coordinates, rank is " +
                                    std::to_string(rank));
        const auto& coeff = t.at("coeff");
        Rational q = coeff.is_string() ? parse_rational(coeff.get<std::string>())
                                       : Rational(Integer(static_cast<long>(coeff.get<std::int64_t>())));
        c.accumulate(GroupPoint(std::move(coords)), q);
    }
    return c;
}

}  // namespace zcycles
