#include "tiltquad/presets.hpp"

#include <cmath>
#include <string>

#include "tiltquad/error.hpp"

namespace tiltquad {

ConfigPreset ConfigPreset::from_id(int id) {
    switch (id) {
        case 1: return {1, -1, +1};
        case 2: return {2, -1, 0};
        case 3: return {3, 0, +1};
        case 4: return {4, 0, 0};
        case 5: return {5, 0, -1};
        case 6: return {6, +1, -1};
        default: throw InvalidArgument("stability", "preset id must be in 1..6, got " + std::to_string(id));
    }
}

std::array<double, 4> ConfigPreset::alpha(double magnitude_alpha) const {
    const double a = twist_sign * std::abs(magnitude_alpha);
    return {a, -a, a, -a};
}

std::array<double, 4> ConfigPreset::beta(double magnitude_beta) const {
    const double b = beta_sign * std::abs(magnitude_beta);
    return {b, b, b, b};
}

QuadParams apply_preset(QuadParams params, const ConfigPreset& preset, double magnitude_alpha,
                        double magnitude_beta) {
    params.rotor.alpha = preset.alpha(magnitude_alpha);
    params.rotor.beta = preset.beta(magnitude_beta);
    return params;
}

}  // namespace tiltquad
