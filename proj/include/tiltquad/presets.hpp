#pragma once

// The six tilt configurations, ordered from the most to the least stable
// by the damping they are designed to produce:
//
//   1  beta < 0, alpha_{1,3} > 0, alpha_{2,4} < 0   roll, pitch and yaw dampers
//   2  beta < 0, alpha = 0                          roll and pitch dampers
//   3  beta = 0, alpha_{1,3} > 0, alpha_{2,4} < 0   yaw damper
//   4  beta = 0, alpha = 0                          flat reference
//   5  beta = 0, alpha_{1,3} < 0, alpha_{2,4} > 0   reversed twist
//   6  beta > 0, alpha_{1,3} < 0, alpha_{2,4} > 0   reversed twist and dihedral

#include <array>

#include "tiltquad/model.hpp"

namespace tiltquad {

struct ConfigPreset {
    int id = 4;
    int beta_sign = 0;   ///< sign applied to the dihedral magnitude on every motor
    int twist_sign = 0;  ///< sign of alpha_1 (and alpha_3); motors 2 and 4 get the opposite

    static constexpr int kFlat = 4;
    static constexpr int kCount = 6;

    /// Throws InvalidArgument for ids outside 1..6.
    static ConfigPreset from_id(int id);

    std::array<double, 4> alpha(double magnitude_alpha) const;
    std::array<double, 4> beta(double magnitude_beta) const;
};

/// Copy of params with the preset's mounting angles.
QuadParams apply_preset(QuadParams params, const ConfigPreset& preset, double magnitude_alpha,
                        double magnitude_beta);

}  // namespace tiltquad
