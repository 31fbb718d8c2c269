#pragma once

#include <string>
#include <vector>

#include "tocsim/plant.hpp"

namespace tocsim {

/// Classification of a sampled candidate start point.
///   green  - eligible start: the phase from here reaches the next level
///   blue   - a viable arrival from the previous phase landed on this point
///   yellow - green and blue: the point sustains perpetual cycling
///   red    - neither
enum class PriorLabel { green, red, blue, yellow };

const char* label_name(PriorLabel label);

struct LabeledPrior {
    PlantState point;
    PriorLabel label = PriorLabel::red;
};

/// True when the label carries green (eligible-start) evidence. Yellow points
/// satisfy the green predicate by construction.
inline bool is_green(PriorLabel label) {
    return label == PriorLabel::green || label == PriorLabel::yellow;
}

/// n points uniform over the closed disc of `radius` about `center`
/// (polar sampling with the area-correct sqrt radial density).
std::vector<PlantState> sample_priors(const PlantState& center, double radius, int n,
                                      RngStream& rng);

/// Edge test used by the adaptive update policy: the closed disc of radius
/// `rho` about `state` contains both green and red evidence. A disc with no
/// priors at all is treated as edge (no evidence of safety).
bool is_edge_state(const PlantState& state, const std::vector<LabeledPrior>& labeled,
                   double rho);

}  // namespace tocsim
