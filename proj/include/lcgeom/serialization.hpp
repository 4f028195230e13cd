#pragma once

#include <string>

#include <json.hpp>

#include "lcgeom/body_spec.hpp"
#include "lcgeom/convex.hpp"
#include "lcgeom/generators.hpp"
#include "lcgeom/quadrature.hpp"

// JSON wire formats. Matrices travel as flat row-major arrays.
//   function spec: {"family": "quadratic"|"powersum"|"gauge_square"|"tabulated",
//                   "dim": n, "params": {...}}
//   body spec:     {"family": "ellipsoid"|"pball"|"perturbed_sphere",
//                   "dim": n, "params": {...}}
//   quadrature:    {"method": "gauss"|"mc"|"adaptive", ...}
// AffineImage and PolarWrap are in-memory representations and are rejected
// on both directions with ConfigError.

namespace lcgeom {

using Json = nlohmann::ordered_json;

Json to_json(const ConvexFunctionSpec& spec);
ConvexFunctionSpec spec_from_json(const Json& j);

Json to_json(const BodySpec& body);
BodySpec body_from_json(const Json& j);

Json to_json(const QuadratureSpec& quad);
QuadratureSpec quad_from_json(const Json& j);

/// Named quadrature presets: "gauss", "gauss-fine", "mc", "adaptive".
/// Unknown names throw ConfigError.
QuadratureSpec quad_preset(const std::string& name);

Json to_json(const GridFunction& g);
GridFunction grid_from_json(const Json& j);

/// {"name": "neg_log"|"t_log_t"|"abs_dev"|"power", "lambda": x}.
Json to_json(const DivergenceGenerator& gen);
DivergenceGenerator generator_from_json(const Json& j);

/// Finite doubles pass through; infinities and NaN become the strings
/// "inf", "-inf", "nan" (plain JSON has no encoding for them).
Json json_number(double v);
double number_from_json(const Json& j);

} // namespace lcgeom
