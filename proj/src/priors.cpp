#include "tocsim/priors.hpp"

#include <cmath>
#include <stdexcept>

#include "tocsim/control.hpp"

namespace tocsim {

const char* label_name(PriorLabel label) {
    switch (label) {
        case PriorLabel::green: return "green";
        case PriorLabel::red: return "red";
        case PriorLabel::blue: return "blue";
        case PriorLabel::yellow: return "yellow";
    }
    return "?";
}

std::vector<PlantState> sample_priors(const PlantState& center, double radius, int n,
                                      RngStream& rng) {
    if (!(radius > 0.0)) throw std::invalid_argument("sample_priors: radius must be > 0");
    if (n < 1) throw std::invalid_argument("sample_priors: n must be >= 1");

    std::vector<PlantState> points;
    points.reserve(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        const double r = radius * std::sqrt(rng.next_unit());
        const double a = 2.0 * 3.14159265358979323846 * rng.next_unit();
        points.push_back({center.temperature + r * std::cos(a),
                          center.pressure + r * std::sin(a)});
    }
    return points;
}

bool is_edge_state(const PlantState& state, const std::vector<LabeledPrior>& labeled,
                   double rho) {
    if (!(rho > 0.0)) throw std::invalid_argument("is_edge_state: rho must be > 0");

    bool any_in_disc = false;
    bool has_green = false;
    bool has_red = false;
    for (const auto& prior : labeled) {
        if (distance(state, prior.point) > rho) continue;
        any_in_disc = true;
        if (is_green(prior.label)) has_green = true;
        if (prior.label == PriorLabel::red) has_red = true;
        if (has_green && has_red) return true;
    }
    if (!any_in_disc) return true;  // no evidence of safety
    return has_green && has_red;
}

}  // namespace tocsim
