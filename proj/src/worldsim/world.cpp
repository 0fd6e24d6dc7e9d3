#include "gplan/worldsim/world.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <istream>
#include <ostream>
#include <set>
#include <sstream>

namespace gplan {

namespace {

constexpr double kGridTol = 1e-9;

int first_overlapping(double lo, double origin, double res) {
  return static_cast<int>(std::floor((lo - origin) / res + kGridTol));
}

int last_overlapping(double hi, double origin, double res) {
  return static_cast<int>(std::ceil((hi - origin) / res - kGridTol)) - 1;
}

Aabb read_box(std::istringstream& ls, int line) {
  Aabb b;
  if (!(ls >> b.min.x() >> b.min.y() >> b.min.z() >> b.max.x() >> b.max.y() >> b.max.z()))
    throw WorldError("line " + std::to_string(line) + ": expected six numbers");
  if (b.empty()) throw WorldError("line " + std::to_string(line) + ": box min exceeds max");
  return b;
}

Vec3 read_point(std::istringstream& ls, int line) {
  Vec3 p;
  if (!(ls >> p.x() >> p.y() >> p.z())) throw WorldError("line " + std::to_string(line) + ": expected three numbers");
  return p;
}

void write_box(std::ostream& os, const Aabb& b) {
  os << b.min.x() << ' ' << b.min.y() << ' ' << b.min.z() << ' ' << b.max.x() << ' ' << b.max.y() << ' '
     << b.max.z();
}

}  // namespace

void World::validate() const {
  if (bounds.empty() || (bounds.size().array() <= 0.0).any()) throw WorldError("world bounds are empty");
  for (const auto& s : solids) {
    if (s.empty()) throw WorldError("solid with min > max");
    if (!bounds.contains(s.min) || !bounds.contains(s.max)) throw WorldError("solid outside world bounds");
  }
  if (heightfield) {
    const Vec2 lo = heightfield->origin();
    const Vec2 hi = lo + Vec2(heightfield->nx() - 1, heightfield->ny() - 1) * heightfield->resolution();
    if (lo.x() > bounds.min.x() + kGridTol || lo.y() > bounds.min.y() + kGridTol ||
        hi.x() < bounds.max.x() - kGridTol || hi.y() < bounds.max.y() - kGridTol)
      throw WorldError("heightfield does not cover the world's xy-bounds");
  }
}

bool World::intersects_solid(const Aabb& box) const {
  for (const auto& s : solids)
    if (s.overlaps(box)) return true;
  if (heightfield) {
    const double top = heightfield->max_height(box.min.head<2>(), box.max.head<2>());
    if (box.min.z() < top - kGridTol) return true;
  }
  return false;
}

std::optional<std::size_t> World::region_of(const Vec3& p) const {
  for (std::size_t r = 0; r < regions.size(); ++r)
    if (regions[r].box.contains(p)) return r;
  return std::nullopt;
}

VoxelMap rasterize(const World& world, double resolution) {
  VoxelMap map = VoxelMap::covering(world.bounds, resolution);
  for (std::size_t idx = 0; idx < map.voxel_count(); ++idx) map.set_unchecked(idx, VoxelState::Free);
  const Vec3& o = map.origin();
  const Vec3i& dims = map.dims();
  for (const auto& s : world.solids) {
    Vec3i first, last;
    for (int a = 0; a < 3; ++a) {
      first[a] = std::max(0, first_overlapping(s.min[a], o[a], resolution));
      last[a] = std::min(dims[a] - 1, last_overlapping(s.max[a], o[a], resolution));
    }
    for (int k = first.z(); k <= last.z(); ++k)
      for (int j = first.y(); j <= last.y(); ++j)
        for (int i = first.x(); i <= last.x(); ++i) map.set_unchecked(map.index_of({i, j, k}), VoxelState::Occupied);
  }
  if (world.heightfield) {
    for (int j = 0; j < dims.y(); ++j)
      for (int i = 0; i < dims.x(); ++i) {
        const Vec2 lo = o.head<2>() + Vec2(i, j) * resolution;
        const double top = world.heightfield->max_height(lo, lo + Vec2::Constant(resolution));
        for (int k = 0; k < dims.z(); ++k) {
          if (o.z() + k * resolution >= top - kGridTol) break;
          map.set_unchecked(map.index_of({i, j, k}), VoxelState::Occupied);
        }
      }
  }
  map.recompute_sdf();
  return map;
}

std::vector<Aabb> carve(const Aabb& bounds, const std::vector<Aabb>& free_space) {
  std::array<std::vector<double>, 3> cuts;
  for (int a = 0; a < 3; ++a) {
    std::set<double> c{bounds.min[a], bounds.max[a]};
    for (const auto& f : free_space) {
      c.insert(std::clamp(f.min[a], bounds.min[a], bounds.max[a]));
      c.insert(std::clamp(f.max[a], bounds.min[a], bounds.max[a]));
    }
    cuts[a].assign(c.begin(), c.end());
  }
  const int nx = static_cast<int>(cuts[0].size()) - 1;
  const int ny = static_cast<int>(cuts[1].size()) - 1;
  const int nz = static_cast<int>(cuts[2].size()) - 1;
  auto at = [&](int i, int j, int k) { return (static_cast<std::size_t>(k) * ny + j) * nx + i; };
  // 1 = solid and not yet emitted.
  std::vector<std::uint8_t> solid(static_cast<std::size_t>(nx) * ny * nz, 1);
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        const Vec3 c(0.5 * (cuts[0][i] + cuts[0][i + 1]), 0.5 * (cuts[1][j] + cuts[1][j + 1]),
                     0.5 * (cuts[2][k] + cuts[2][k + 1]));
        for (const auto& f : free_space)
          if (f.contains(c)) solid[at(i, j, k)] = 0;
      }

  std::vector<Aabb> out;
  for (int k = 0; k < nz; ++k)
    for (int j = 0; j < ny; ++j)
      for (int i = 0; i < nx; ++i) {
        if (!solid[at(i, j, k)]) continue;
        int i1 = i;
        while (i1 + 1 < nx && solid[at(i1 + 1, j, k)]) ++i1;
        auto row_solid = [&](int jj, int kk) {
          for (int ii = i; ii <= i1; ++ii)
            if (!solid[at(ii, jj, kk)]) return false;
          return true;
        };
        int j1 = j;
        while (j1 + 1 < ny && row_solid(j1 + 1, k)) ++j1;
        int k1 = k;
        auto slab_solid = [&](int kk) {
          for (int jj = j; jj <= j1; ++jj)
            if (!row_solid(jj, kk)) return false;
          return true;
        };
        while (k1 + 1 < nz && slab_solid(k1 + 1)) ++k1;
        for (int kk = k; kk <= k1; ++kk)
          for (int jj = j; jj <= j1; ++jj)
            for (int ii = i; ii <= i1; ++ii) solid[at(ii, jj, kk)] = 0;
        out.push_back({Vec3(cuts[0][i], cuts[1][j], cuts[2][k]), Vec3(cuts[0][i1 + 1], cuts[1][j1 + 1], cuts[2][k1 + 1])});
      }
  return out;
}

World read_world(std::istream& is) {
  World w;
  bool have_bounds = false;
  std::string raw;
  int line = 0;
  while (std::getline(is, raw)) {
    ++line;
    std::istringstream ls(raw);
    std::string tag;
    if (!(ls >> tag) || tag[0] == '#') continue;
    if (tag == "name") {
      ls >> w.name;
    } else if (tag == "bounds") {
      w.bounds = read_box(ls, line);
      have_bounds = true;
    } else if (tag == "solid") {
      w.solids.push_back(read_box(ls, line));
    } else if (tag == "region") {
      Region r;
      if (!(ls >> r.label)) throw WorldError("line " + std::to_string(line) + ": region needs a label");
      r.box = read_box(ls, line);
      w.regions.push_back(std::move(r));
    } else if (tag == "start") {
      w.start = read_point(ls, line);
    } else if (tag == "target") {
      w.target = read_point(ls, line);
    } else if (tag == "heightfield") {
      std::string kind;
      int nx = 0, ny = 0;
      double res = 0.0;
      if (!(ls >> kind >> nx >> ny >> res) || kind != "grid")
        throw WorldError("line " + std::to_string(line) + ": expected 'heightfield grid <nx> <ny> <r_H>'");
      if (!have_bounds) throw WorldError("line " + std::to_string(line) + ": heightfield before bounds");
      if (nx < 1 || ny < 1 || !(res > 0.0))
        throw WorldError("line " + std::to_string(line) + ": invalid heightfield dimensions");
      std::vector<double> values;
      values.reserve(static_cast<std::size_t>(nx) * ny);
      double z = 0.0;
      while (values.size() < static_cast<std::size_t>(nx) * ny && is >> z) values.push_back(z);
      if (values.size() != static_cast<std::size_t>(nx) * ny)
        throw WorldError("line " + std::to_string(line) + ": heightfield has too few values");
      w.heightfield = Heightfield(w.bounds.min.head<2>(), nx, ny, res, std::move(values));
    } else {
      throw WorldError("line " + std::to_string(line) + ": unknown directive '" + tag + "'");
    }
  }
  if (!have_bounds) throw WorldError("world file has no bounds");
  w.validate();
  return w;
}

World read_world_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw WorldError("cannot open world file " + path);
  return read_world(in);
}

void write_world(std::ostream& os, const World& world) {
  const auto old_precision = os.precision(17);
  if (!world.name.empty()) os << "name " << world.name << '\n';
  os << "bounds ";
  write_box(os, world.bounds);
  os << '\n';
  for (const auto& s : world.solids) {
    os << "solid ";
    write_box(os, s);
    os << '\n';
  }
  for (const auto& r : world.regions) {
    os << "region " << r.label << ' ';
    write_box(os, r.box);
    os << '\n';
  }
  if (world.start) os << "start " << world.start->x() << ' ' << world.start->y() << ' ' << world.start->z() << '\n';
  if (world.target)
    os << "target " << world.target->x() << ' ' << world.target->y() << ' ' << world.target->z() << '\n';
  if (world.heightfield) {
    const auto& hf = *world.heightfield;
    os << "heightfield grid " << hf.nx() << ' ' << hf.ny() << ' ' << hf.resolution() << '\n';
    for (int j = 0; j < hf.ny(); ++j) {
      for (int i = 0; i < hf.nx(); ++i) os << (i ? " " : "") << hf.values()[static_cast<std::size_t>(j) * hf.nx() + i];
      os << '\n';
    }
  }
  os.precision(old_precision);
}

}  // namespace gplan
