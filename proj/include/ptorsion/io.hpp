#pragma once

#include <stdexcept>
#include <string>

#include "json.hpp"
#include "ptorsion/geometry.hpp"
#include "ptorsion/solver.hpp"

namespace ptorsion {

/// Malformed or unreadable domain specification.
class InputError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Accepted kinds:
///   {"kind":"polygon","vertices":[[x,y],...]}
///   {"kind":"rectangle","L":..,"R":..}           (0,L) x (0,2R)
///   {"kind":"square","side":..}                   default side 1
///   {"kind":"regular_ngon","n":..,"circumradius":..}
///   {"kind":"ellipse","a":..,"b":..,"n":..}
///   {"kind":"triangle","vertices":[[x,y],[x,y],[x,y]]}
///   {"kind":"equilateral_triangle","inradius":..}
ShapeSpec parse_shape_spec(const nlohmann::json& j);

/// Inline JSON when the argument starts with '{', a file path otherwise.
ShapeSpec load_shape_spec(const std::string& path_or_inline);

nlohmann::json shape_spec_to_json(const ShapeSpec& spec);

/// Nodes, triangles, boundary flags and nodal values of a solution.
nlohmann::json solution_to_json(const TorsionSolution& sol);

}  // namespace ptorsion
