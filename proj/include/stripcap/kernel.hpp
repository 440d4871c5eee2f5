#pragma once

#include "stripcap/geometry.hpp"

namespace stripcap {

// Closed forms for the two boundary-integral kernels, evaluated in
// segment-local coordinates (u along the tangent, h along the segment
// normal, both measured from the segment start).

/// I = integral over the segment of ln|obs - r'| dl'.
/// Antiderivative x/2 ln(x^2+h^2) - x + h atan(x/h); the log singularity at
/// obs on the segment is integrable and the endpoint limits are finite.
double log_potential_integral(const Point& obs, const Segment& seg);

/// J = integral over the segment of (obs - r') . n / |obs - r'|^2 dl',
/// with n the observation normal. Equals the subtended-angle term plus a
/// tangential log term; principal value 0 for obs on the segment itself.
double normal_field_integral(const Point& obs, const Vec2& n, const Segment& seg);

}  // namespace stripcap
