// SPDX-License-Identifier: Apache-2.0
#include "mmscm/geometry.hpp"

#include <cmath>
#include <stdexcept>

#include "mmscm/units.hpp"

namespace mmscm {

bool position_is_valid(const Position3D& p) {
  return std::isfinite(p.east) && std::isfinite(p.north) &&
         std::isfinite(p.up) && std::fabs(p.east) <= 1e5 &&
         std::fabs(p.north) <= 1e5 && std::fabs(p.up) <= 1e5;
}

namespace geometry {
namespace {

constexpr double kDegenerateEps = 1e-9;  // meters

void require_valid(const Position3D& p, const char* what) {
  if (!position_is_valid(p)) {
    throw std::invalid_argument(std::string(what) +
                                ": position not finite or out of range");
  }
}

}  // namespace

double link_distance_3d(const Position3D& a, const Position3D& b) {
  require_valid(a, "link_distance_3d");
  require_valid(b, "link_distance_3d");
  double de = b.east - a.east;
  double dn = b.north - a.north;
  double du = b.up - a.up;
  return std::sqrt(de * de + dn * dn + du * du);
}

double horizontal_distance(const Position3D& a, const Position3D& b) {
  require_valid(a, "horizontal_distance");
  require_valid(b, "horizontal_distance");
  return std::hypot(b.east - a.east, b.north - a.north);
}

double normalize_bearing_deg(double deg) {
  if (!std::isfinite(deg)) {
    throw std::invalid_argument("normalize_bearing_deg: non-finite angle");
  }
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  if (r >= 360.0) r -= 360.0;  // fmod round-off can land exactly on 360
  return r == 0.0 ? 0.0 : r;   // canonical +0
}

double bearing_deg(const Position3D& from, const Position3D& to) {
  require_valid(from, "bearing_deg");
  require_valid(to, "bearing_deg");
  double de = to.east - from.east;
  double dn = to.north - from.north;
  if (std::hypot(de, dn) < kDegenerateEps) {
    throw std::invalid_argument(
        "bearing_deg: points coincide in plan view, bearing undefined");
  }
  return normalize_bearing_deg(rad_to_deg(std::atan2(de, dn)));
}

double elevation_angle_deg(const Position3D& from, const Position3D& to) {
  require_valid(from, "elevation_angle_deg");
  require_valid(to, "elevation_angle_deg");
  double dh = std::hypot(to.east - from.east, to.north - from.north);
  double du = to.up - from.up;
  if (dh < kDegenerateEps && std::fabs(du) < kDegenerateEps) {
    throw std::invalid_argument(
        "elevation_angle_deg: points coincide, direction undefined");
  }
  return rad_to_deg(std::atan2(du, dh));
}

double zenith_angle_deg(const Position3D& a, const Position3D& b) {
  return std::fabs(elevation_angle_deg(a, b));
}

double angular_deviation_deg(double a_deg, double b_deg) {
  double a = normalize_bearing_deg(a_deg);
  double b = normalize_bearing_deg(b_deg);
  double d = std::fabs(a - b);
  return d > 180.0 ? 360.0 - d : d;
}

namespace {

struct FacadeFrame {
  double ox, oy;  // anchor a (east, north)
  double ux, uy;  // unit direction a -> b
  double len;
};

FacadeFrame facade_frame(const FacadeLine& facade, const char* what) {
  require_valid(facade.a, what);
  require_valid(facade.b, what);
  double dx = facade.b.east - facade.a.east;
  double dy = facade.b.north - facade.a.north;
  double len = std::hypot(dx, dy);
  if (len < kDegenerateEps) {
    throw std::invalid_argument(std::string(what) +
                                ": facade anchors coincide in plan view");
  }
  return {facade.a.east, facade.a.north, dx / len, dy / len, len};
}

// Along-facade coordinate and signed perpendicular offset of p.
void facade_coords(const FacadeFrame& f, const Position3D& p, double* t,
                   double* h) {
  double px = p.east - f.ox;
  double py = p.north - f.oy;
  *t = px * f.ux + py * f.uy;
  *h = px * f.uy - py * f.ux;  // left of a->b is negative, right positive
}

Position3D facade_point(const FacadeFrame& f, double t, double up) {
  return {f.ox + t * f.ux, f.oy + t * f.uy, up};
}

}  // namespace

Position3D mirror_across_facade(const Position3D& p, const FacadeLine& facade) {
  FacadeFrame f = facade_frame(facade, "mirror_across_facade");
  require_valid(p, "mirror_across_facade");
  double t, h;
  facade_coords(f, p, &t, &h);
  Position3D foot = facade_point(f, t, p.up);
  // Step from the foot of the perpendicular by -h along the facade normal.
  double nx = f.uy, ny = -f.ux;  // unit normal on the positive-h side
  return {foot.east - h * nx, foot.north - h * ny, p.up};
}

double aoi_direct_deg(const Position3D& tx, const Position3D& rx) {
  return bearing_deg(rx, tx);
}

double aoi_reflection_deg(const Position3D& tx, const Position3D& rx,
                          const FacadeLine& facade) {
  FacadeFrame f = facade_frame(facade, "aoi_reflection_deg");
  require_valid(tx, "aoi_reflection_deg");
  require_valid(rx, "aoi_reflection_deg");
  double tt, ht, tr, hr;
  facade_coords(f, tx, &tt, &ht);
  facade_coords(f, rx, &tr, &hr);
  if (std::fabs(ht) < kDegenerateEps || std::fabs(hr) < kDegenerateEps) {
    throw std::invalid_argument(
        "aoi_reflection_deg: endpoint lies on the facade line");
  }
  if ((ht > 0.0) != (hr > 0.0)) {
    throw std::invalid_argument(
        "aoi_reflection_deg: endpoints on opposite sides of the facade");
  }
  double at = std::fabs(ht);
  double ar = std::fabs(hr);
  // Specular point: divides the projection interval so that incidence and
  // reflection angles match (similar triangles over the two offsets).
  double s = (ar * tt + at * tr) / (at + ar);
  return bearing_deg(rx, facade_point(f, s, rx.up));
}

double aoi_reflection_image_deg(const Position3D& tx, const Position3D& rx,
                                const FacadeLine& facade) {
  return bearing_deg(rx, mirror_across_facade(tx, facade));
}

double aoi_reflection_midpoint_deg(const Position3D& tx, const Position3D& rx,
                                   const FacadeLine& facade) {
  FacadeFrame f = facade_frame(facade, "aoi_reflection_midpoint_deg");
  require_valid(tx, "aoi_reflection_midpoint_deg");
  require_valid(rx, "aoi_reflection_midpoint_deg");
  double tt, ht, tr, hr;
  facade_coords(f, tx, &tt, &ht);
  facade_coords(f, rx, &tr, &hr);
  if (std::fabs(hr) < kDegenerateEps) {
    throw std::invalid_argument(
        "aoi_reflection_midpoint_deg: receiver lies on the facade line");
  }
  return bearing_deg(rx, facade_point(f, 0.5 * (tt + tr), rx.up));
}

double aoi_diffraction_deg(const Position3D& rx, const CornerPoint& corner) {
  return bearing_deg(rx, corner.position);
}

}  // namespace geometry
}  // namespace mmscm
