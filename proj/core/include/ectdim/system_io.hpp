#pragma once

#include <iosfwd>
#include <string>

#include "ectdim/dimensions.hpp"

namespace ectdim::dims {

/// Line-based system definition format:
///
///   # comment
///   basis A V T
///   quantity omega  0  0 -1
///   quantity E      0  1  0
///   quantity R     -1  1  0
///   quantity I      1  0  0  dependent
///   quantity L     -1  1  1
///   quantity C      1 -1  1
///   repeating R E omega
///   transform C reciprocal
///
/// Exponents are integers or num/den tokens, one per basis dimension.
/// The optional trailing token on a quantity line is a role
/// (independent | dependent | repeating-candidate); default independent.
/// "transform" lines attach a presentation transform
/// (identity | reciprocal | sqrt_half) to a non-repeating quantity.
DimensionalSystem parse_system(std::istream& in);
DimensionalSystem load_system(const std::string& path);

/// Derived groups in a stable one-group-per-line form ("pi_1 = R^1 E^-1 I^1").
std::string format_pi_groups(const DimensionalSystem& system);

}  // namespace ectdim::dims
