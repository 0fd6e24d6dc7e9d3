#include "gplan/worldsim/world.hpp"

#include <cmath>
#include <set>

namespace gplan {

namespace {

constexpr double kWall = 0.4;

// Reads typed parameters and rejects keys that no generator consumed.
class ParamReader {
 public:
  explicit ParamReader(const WorldParams& p) : params_(p) {}

  double get(const std::string& key, double fallback, double lo, double hi) {
    used_.insert(key);
    const auto it = params_.find(key);
    const double v = it == params_.end() ? fallback : it->second;
    if (!std::isfinite(v) || v < lo || v > hi)
      throw WorldError("world param '" + key + "' must lie in [" + std::to_string(lo) + ", " + std::to_string(hi) + "]");
    return v;
  }

  int get_int(const std::string& key, int fallback, int lo, int hi) {
    const double v = get(key, fallback, lo, hi);
    if (v != std::floor(v)) throw WorldError("world param '" + key + "' must be an integer");
    return static_cast<int>(v);
  }

  void finish() const {
    for (const auto& [k, v] : params_)
      if (!used_.count(k)) throw WorldError("unknown world param '" + k + "'");
  }

 private:
  const WorldParams& params_;
  std::set<std::string> used_;
};

Aabb box(double x0, double y0, double z0, double x1, double y1, double z1) {
  return {Vec3(x0, y0, z0), Vec3(x1, y1, z1)};
}

World from_free_space(std::string name, const Aabb& bounds, const std::vector<Aabb>& free_space) {
  World w;
  w.name = std::move(name);
  w.bounds = bounds;
  w.solids = carve(bounds, free_space);
  return w;
}

World t_corridor(ParamReader& p) {
  const double length = p.get("length", 16.0, 4.0, 40.0);
  const double stem = p.get("stem", 10.0, 2.0, 30.0);
  const double width = p.get("width", 2.0, 1.2, 6.0);
  const double height = p.get("height", 2.0, 1.2, 4.0);
  const double z0 = kWall, z1 = kWall + height;
  const double cx = kWall + 0.5 * length;
  const Aabb bar = box(kWall, kWall + stem, z0, kWall + length, kWall + stem + width, z1);
  const Aabb trunk = box(cx - 0.5 * width, kWall, z0, cx + 0.5 * width, kWall + stem, z1);
  World w = from_free_space("t_corridor", box(0, 0, 0, length + 2 * kWall, stem + width + 2 * kWall, height + 2 * kWall),
                            {bar, trunk});
  w.regions = {{"stem", trunk}, {"bar", bar}};
  w.start = Vec3(cx, kWall + 1.0, 0.5 * (z0 + z1));
  return w;
}

World six_rooms(ParamReader& p) {
  const double rw = p.get("room_width", 5.6, 2.0, 10.0);
  const double rd = p.get("room_depth", 4.8, 2.0, 10.0);
  const double cw = p.get("corridor_width", 2.0, 1.2, 4.0);
  const double height = p.get("height", 2.0, 1.2, 4.0);
  const double door = p.get("door_width", 1.2, 0.6, 2.0);
  if (door > rw) throw WorldError("door_width exceeds room_width");
  const double z0 = kWall, z1 = kWall + height;
  const double len = 3 * rw + 2 * kWall;
  const double ys0 = kWall, ys1 = ys0 + rd;       // south rooms
  const double yc0 = ys1 + kWall, yc1 = yc0 + cw;  // corridor
  const double yn0 = yc1 + kWall, yn1 = yn0 + rd;  // north rooms
  std::vector<Aabb> free{box(kWall, yc0, z0, kWall + len, yc1, z1)};
  std::vector<Region> regions{{"corridor", free.front()}};
  for (int side = 0; side < 2; ++side)
    for (int i = 0; i < 3; ++i) {
      const double x0 = kWall + i * (rw + kWall);
      const double xm = x0 + 0.5 * rw;
      const Aabb room = side == 0 ? box(x0, ys0, z0, x0 + rw, ys1, z1) : box(x0, yn0, z0, x0 + rw, yn1, z1);
      const Aabb doorway = side == 0 ? box(xm - 0.5 * door, ys1, z0, xm + 0.5 * door, yc0, z1)
                                     : box(xm - 0.5 * door, yc1, z0, xm + 0.5 * door, yn0, z1);
      free.push_back(room);
      free.push_back(doorway);
      regions.push_back({"room" + std::to_string(side * 3 + i), room});
    }
  World w = from_free_space("six_rooms", box(0, 0, 0, len + 2 * kWall, yn1 + kWall, height + 2 * kWall), free);
  w.regions = std::move(regions);
  w.start = Vec3(kWall + 1.0, 0.5 * (yc0 + yc1), 0.5 * (z0 + z1));
  return w;
}

World multi_branch_mine(ParamReader& p) {
  const int branches = p.get_int("branches", 6, 1, 6);
  const double blen = p.get("branch_length", 7.0, 2.0, 20.0);
  const double width = p.get("width", 2.0, 1.2, 3.0);
  const double height = p.get("height", 2.0, 1.2, 4.0);
  const double jx = 6.4, jy = 4.0;  // junction footprint
  const double z0 = kWall, z1 = kWall + height;
  const double x0 = kWall + blen, x1 = x0 + jx;  // junction extent
  const double y0 = kWall + blen, y1 = y0 + jy;
  const double xm = 0.5 * (x0 + x1), ym = 0.5 * (y0 + y1);
  const double pair = 1.6;  // offset of paired branches from the junction axis
  const Aabb junction = box(x0, y0, z0, x1, y1, z1);
  const std::vector<Aabb> slots{
      box(xm - pair - 0.5 * width, y1, z0, xm - pair + 0.5 * width, y1 + blen, z1),  // north west
      box(xm + pair - 0.5 * width, y1, z0, xm + pair + 0.5 * width, y1 + blen, z1),  // north east
      box(x1, ym - 0.5 * width, z0, x1 + blen, ym + 0.5 * width, z1),                // east
      box(xm + pair - 0.5 * width, y0 - blen, z0, xm + pair + 0.5 * width, y0, z1),  // south east
      box(xm - pair - 0.5 * width, y0 - blen, z0, xm - pair + 0.5 * width, y0, z1),  // south west
      box(x0 - blen, ym - 0.5 * width, z0, x0, ym + 0.5 * width, z1),                // west
  };
  std::vector<Aabb> free{junction};
  std::vector<Region> regions{{"junction", junction}};
  for (int b = 0; b < branches; ++b) {
    free.push_back(slots[b]);
    regions.push_back({"branch" + std::to_string(b), slots[b]});
  }
  World w = from_free_space("multi_branch_mine",
                            box(0, 0, 0, x1 + blen + kWall, y1 + blen + kWall, height + 2 * kWall), free);
  w.regions = std::move(regions);
  w.start = Vec3(xm, ym, 0.5 * (z0 + z1));
  return w;
}

World tank_compartments(ParamReader& p) {
  const int cols = p.get_int("cols", 4, 1, 8);
  const int rows = p.get_int("rows", 2, 1, 4);
  const double cx = p.get("comp_x", 4.0, 2.0, 8.0);
  const double cy = p.get("comp_y", 4.0, 2.0, 8.0);
  const double height = p.get("height", 3.2, 1.6, 6.0);
  const double hole = p.get("manhole", 1.2, 0.6, 2.0);
  const int ribs = p.get_int("ribs", 1, 0, 1);
  if (hole >= std::min({cx, cy, height})) throw WorldError("manhole larger than a compartment face");
  const double z0 = kWall, z1 = kWall + height;
  const double zm = 0.5 * (z0 + z1);
  auto comp = [&](int c, int r) {
    const double x = kWall + c * (cx + kWall), y = kWall + r * (cy + kWall);
    return box(x, y, z0, x + cx, y + cy, z1);
  };
  std::vector<Aabb> free;
  std::vector<Region> regions;
  for (int r = 0; r < rows; ++r)
    for (int c = 0; c < cols; ++c) {
      const Aabb b = comp(c, r);
      free.push_back(b);
      regions.push_back({"comp" + std::to_string(r * cols + c), b});
      const double ym = b.center().y(), xm = b.center().x();
      if (c + 1 < cols)
        free.push_back(box(b.max.x(), ym - 0.5 * hole, zm - 0.5 * hole, b.max.x() + kWall, ym + 0.5 * hole, zm + 0.5 * hole));
      // Rows connect through the first and last columns, forming a loop.
      if (r + 1 < rows && (c == 0 || c + 1 == cols))
        free.push_back(box(xm - 0.5 * hole, b.max.y(), zm - 0.5 * hole, xm + 0.5 * hole, b.max.y() + kWall, zm + 0.5 * hole));
    }
  World w = from_free_space("tank_compartments",
                            box(0, 0, 0, cols * (cx + kWall) + kWall, rows * (cy + kWall) + kWall, height + 2 * kWall), free);
  if (ribs) {
    // Floor stiffeners: a low girder across each compartment.
    for (const auto& r : regions) {
      const double xm = r.box.center().x();
      w.solids.push_back(box(xm - 0.2, r.box.min.y() + 0.8, z0, xm + 0.2, r.box.max.y() - 0.8, z0 + 0.4));
    }
  }
  w.regions = std::move(regions);
  const Aabb first = comp(0, 0);
  w.start = Vec3(first.min.x() + 1.0, first.center().y(), zm);
  return w;
}

World ramp_terrain(ParamReader& p) {
  const double length = p.get("length", 20.0, 8.0, 40.0);
  const double width = p.get("width", 10.0, 4.0, 20.0);
  const double slope = p.get("ramp_slope", 0.1, 0.0, 1.0);
  const double steep = p.get("steep_slope", 1.0, 0.0, 3.0);
  const double res = p.get("terrain_resolution", 0.2, 0.05, 1.0);
  const double ramp_start = 0.2 * length, ramp_end = 0.6 * length;
  const double ridge_y = 0.75 * width, ridge_x = 0.5 * length, ridge_half = 1.5;
  const int nx = static_cast<int>(std::lround(length / res)) + 1;
  const int ny = static_cast<int>(std::lround(width / res)) + 1;
  std::vector<double> z(static_cast<std::size_t>(nx) * ny);
  double zmax = 0.0;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double x = i * res, y = j * res;
      double h = slope * (std::clamp(x, ramp_start, ramp_end) - ramp_start);
      if (y >= ridge_y) h = std::max(h, steep * (ridge_half - std::abs(x - ridge_x)));
      z[static_cast<std::size_t>(j) * nx + i] = h;
      zmax = std::max(zmax, h);
    }
  World w;
  w.name = "ramp_terrain";
  const double top = std::ceil((zmax + 2.4) / kWall) * kWall;
  w.bounds = box(0, 0, -kWall, length, width, top);
  w.heightfield = Heightfield(Vec2::Zero(), nx, ny, res, std::move(z));
  w.solids = {box(0, 0, -kWall, length, kWall, top), box(0, width - kWall, -kWall, length, width, top),
              box(0, kWall, -kWall, kWall, width - kWall, top), box(length - kWall, kWall, -kWall, length, width - kWall, top)};
  w.start = Vec3(2.0, 0.35 * width, 0.0);
  return w;
}

// Target-reach scenarios share one corridor cross-section.
World tr_world(WorldKind kind, ParamReader& p) {
  const double width = p.get("width", 2.0, 1.2, 4.0);
  const double height = p.get("height", 2.0, 1.2, 4.0);
  const double z0 = kWall, z1 = kWall + height, zm = 0.5 * (z0 + z1);
  World w;
  if (kind == WorldKind::TrDirect) {
    const double len = p.get("length", 16.0, 4.0, 40.0);
    const Aabb hall = box(kWall, kWall, z0, kWall + len, kWall + width, z1);
    w = from_free_space("tr_direct", box(0, 0, 0, len + 2 * kWall, width + 2 * kWall, height + 2 * kWall), {hall});
    w.start = Vec3(kWall + 1.0, kWall + 0.5 * width, zm);
    w.target = Vec3(kWall + len - 1.0, kWall + 0.5 * width, zm);
  } else if (kind == WorldKind::TrDetour) {
    // A dead-end corridor points at the target; the only way in is a loop to the north.
    const double len = p.get("length", 12.0, 4.0, 30.0);
    const double gap = 2.4, room = 4.0, north = 6.0;
    const double xr0 = kWall + len + gap, xr1 = xr0 + room;
    const Aabb dead_end = box(kWall, kWall, z0, kWall + len, kWall + width, z1);
    const Aabb target_room = box(xr0, kWall, z0, xr1, kWall + room, z1);
    const Aabb up = box(kWall, kWall + width, z0, kWall + width, kWall + north + width, z1);
    const Aabb across = box(kWall, kWall + north, z0, xr1, kWall + north + width, z1);
    const Aabb down = box(xr1 - width, kWall + room, z0, xr1, kWall + north, z1);
    w = from_free_space("tr_detour", box(0, 0, 0, xr1 + kWall, kWall + north + width + kWall, height + 2 * kWall),
                        {dead_end, target_room, up, across, down});
    w.start = Vec3(kWall + 1.0, kWall + 0.5 * width, zm);
    w.target = Vec3(0.5 * (xr0 + xr1) - 0.4, kWall + 0.5 * width, zm);
  } else {
    const double len = p.get("length", 12.0, 4.0, 30.0);
    const double seal = 0.8, room = 4.0;
    const Aabb hall = box(kWall, kWall, z0, kWall + len, kWall + width, z1);
    const double xr0 = kWall + len + seal;
    const Aabb sealed = box(xr0, kWall, z0, xr0 + room, kWall + width, z1);
    w = from_free_space("tr_walled", box(0, 0, 0, xr0 + room + kWall, width + 2 * kWall, height + 2 * kWall),
                        {hall, sealed});
    w.start = Vec3(kWall + 1.0, kWall + 0.5 * width, zm);
    w.target = Vec3(xr0 + 0.5 * room, kWall + 0.5 * width, zm);
  }
  return w;
}

World open_box(ParamReader& p) {
  const double sx = p.get("size_x", 4.0, 0.4, 20.0);
  const double sy = p.get("size_y", 4.0, 0.4, 20.0);
  const double sz = p.get("size_z", 2.4, 0.4, 10.0);
  World w;
  w.name = "open_box";
  w.bounds = box(0, 0, 0, sx, sy, sz);
  w.start = w.bounds.center();
  return w;
}

}  // namespace

WorldKind parse_world_kind(const std::string& s) {
  static const std::pair<const char*, WorldKind> kinds[] = {
      {"t_corridor", WorldKind::TCorridor},
      {"six_rooms", WorldKind::SixRooms},
      {"multi_branch_mine", WorldKind::MultiBranchMine},
      {"tank_compartments", WorldKind::TankCompartments},
      {"ramp_terrain", WorldKind::RampTerrain},
      {"tr_direct", WorldKind::TrDirect},
      {"tr_detour", WorldKind::TrDetour},
      {"tr_walled", WorldKind::TrWalled},
      {"open_box", WorldKind::OpenBox},
  };
  for (const auto& [name, kind] : kinds)
    if (s == name) return kind;
  throw WorldError("unknown world kind '" + s + "'");
}

const char* to_string(WorldKind k) {
  switch (k) {
    case WorldKind::TCorridor:
      return "t_corridor";
    case WorldKind::SixRooms:
      return "six_rooms";
    case WorldKind::MultiBranchMine:
      return "multi_branch_mine";
    case WorldKind::TankCompartments:
      return "tank_compartments";
    case WorldKind::RampTerrain:
      return "ramp_terrain";
    case WorldKind::TrDirect:
      return "tr_direct";
    case WorldKind::TrDetour:
      return "tr_detour";
    case WorldKind::TrWalled:
      return "tr_walled";
    case WorldKind::OpenBox:
      return "open_box";
  }
  return "?";
}

World generate_world(WorldKind kind, const WorldParams& params, std::uint64_t /*seed*/) {
  ParamReader p(params);
  World w;
  switch (kind) {
    case WorldKind::TCorridor:
      w = t_corridor(p);
      break;
    case WorldKind::SixRooms:
      w = six_rooms(p);
      break;
    case WorldKind::MultiBranchMine:
      w = multi_branch_mine(p);
      break;
    case WorldKind::TankCompartments:
      w = tank_compartments(p);
      break;
    case WorldKind::RampTerrain:
      w = ramp_terrain(p);
      break;
    case WorldKind::TrDirect:
    case WorldKind::TrDetour:
    case WorldKind::TrWalled:
      w = tr_world(kind, p);
      break;
    case WorldKind::OpenBox:
      w = open_box(p);
      break;
  }
  p.finish();
  w.validate();
  return w;
}

}  // namespace gplan
