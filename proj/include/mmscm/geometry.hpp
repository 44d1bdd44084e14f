// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>

namespace mmscm {

// Local east/north/up frame, meters.
struct Position3D {
  double east = 0.0;
  double north = 0.0;
  double up = 0.0;
};

// Finite coordinates within the plausible site scale (|coord| <= 1e5 m).
bool position_is_valid(const Position3D& p);

// Infinite line in plan view through two distinct anchor points (building
// face). Heights are carried but all facade geometry is horizontal.
struct FacadeLine {
  Position3D a;
  Position3D b;
};

struct CornerPoint {
  Position3D position;
};

namespace geometry {

double link_distance_3d(const Position3D& a, const Position3D& b);
double horizontal_distance(const Position3D& a, const Position3D& b);

// Compass bearing from -> to, degrees clockwise from north, in [0, 360).
// Undefined (throws) when the points coincide in plan view.
double bearing_deg(const Position3D& from, const Position3D& to);

// Elevation mismatch: angle between the horizontal boresight plane and the
// ray between the points, degrees in [0, 90]. 0 when co-elevated; symmetric.
double zenith_angle_deg(const Position3D& a, const Position3D& b);

// Signed elevation of `to` as seen from `from`, degrees in [-90, 90].
double elevation_angle_deg(const Position3D& from, const Position3D& to);

double normalize_bearing_deg(double deg);

// Smallest circular separation between two compass angles, in [0, 180].
double angular_deviation_deg(double a_deg, double b_deg);

// Plan-view mirror image of p across the facade line; height is preserved.
Position3D mirror_across_facade(const Position3D& p, const FacadeLine& facade);

// Angle of incidence constructions: the compass bearing at the receiver of
// the candidate arrival direction for each mechanism.
double aoi_direct_deg(const Position3D& tx, const Position3D& rx);

// Specular construction: bearing from rx to the point on the facade where
// angle of incidence equals angle of reflection. Requires tx and rx strictly
// on the same side of the facade. Identical to the image-source bearing.
double aoi_reflection_deg(const Position3D& tx, const Position3D& rx,
                          const FacadeLine& facade);

// Image-source route (mirror tx, take the direct bearing). Kept separate so
// the two constructions can be checked against each other.
double aoi_reflection_image_deg(const Position3D& tx, const Position3D& rx,
                                const FacadeLine& facade);

// Midpoint-of-projections variant; coarser, not specular in general.
double aoi_reflection_midpoint_deg(const Position3D& tx, const Position3D& rx,
                                   const FacadeLine& facade);

double aoi_diffraction_deg(const Position3D& rx, const CornerPoint& corner);

}  // namespace geometry
}  // namespace mmscm
