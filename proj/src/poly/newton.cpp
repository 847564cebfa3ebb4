#include "pcfh/newton.hpp"

#include <stdexcept>

namespace pcfh {

std::optional<Rational> NewtonPolygon::max_slope() const {
    if (slopes.empty()) return std::nullopt;
    return slopes.back().slope;
}

long NewtonPolygon::degree() const {
    long n = zero_roots;
    for (const auto& s : slopes) n += s.multiplicity;
    return n;
}

NewtonPolygon newton_polygon(const std::vector<std::optional<Rational>>& valuations) {
    if (valuations.empty() || !valuations.back())
        throw std::invalid_argument("newton polygon needs a nonzero leading coefficient");
    NewtonPolygon np;
    std::vector<NewtonPolygon::Vertex> pts;
    for (std::size_t i = 0; i < valuations.size(); ++i)
        if (valuations[i]) pts.push_back({static_cast<long>(i), *valuations[i]});
    np.zero_roots = pts.front().index;

    // Monotone chain, lower hull; collinear points are dropped.
    auto& hull = np.vertices;
    for (const auto& p : pts) {
        while (hull.size() >= 2) {
            const auto& a = hull[hull.size() - 2];
            const auto& b = hull.back();
            // Keep b only if it lies strictly below segment a -> p.
            Rational cross = (b.valuation - a.valuation) * (p.index - a.index) -
                             (p.valuation - a.valuation) * (b.index - a.index);
            if (cross >= 0)
                hull.pop_back();
            else
                break;
        }
        hull.push_back(p);
    }
    for (std::size_t i = 1; i < hull.size(); ++i) {
        long len = hull[i].index - hull[i - 1].index;
        np.slopes.push_back({(hull[i].valuation - hull[i - 1].valuation) / len, len});
    }
    return np;
}

NewtonPolygon newton_polygon(const Poly& p, unsigned long prime) {
    if (p.is_zero()) throw std::invalid_argument("newton polygon of the zero polynomial");
    std::vector<std::optional<Rational>> v;
    for (const auto& c : p.coeffs()) {
        if (c == 0)
            v.emplace_back();
        else
            v.emplace_back(Rational(valuation(c, prime)));
    }
    return newton_polygon(v);
}

}  // namespace pcfh
