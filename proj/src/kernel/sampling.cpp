#include "gplan/kernel/kernel.hpp"

#include <cmath>

namespace gplan {

namespace {

constexpr int kGaussianRetries = 100;

}  // namespace

const char* to_string(SamplingKind k) {
  switch (k) {
    case SamplingKind::Uniform:
      return "uniform";
    case SamplingKind::Gaussian:
      return "gaussian";
    case SamplingKind::Hybrid:
      return "hybrid";
  }
  return "?";
}

SamplingKind parse_sampling_kind(const std::string& s) {
  if (s == "uniform") return SamplingKind::Uniform;
  if (s == "gaussian") return SamplingKind::Gaussian;
  if (s == "hybrid") return SamplingKind::Hybrid;
  throw KernelError("unknown sampling strategy '" + s + "'");
}

const char* to_string(GraphBuilder b) { return b == GraphBuilder::Basic ? "basic" : "batch"; }

GraphBuilder parse_graph_builder(const std::string& s) {
  if (s == "basic") return GraphBuilder::Basic;
  if (s == "batch") return GraphBuilder::Batch;
  throw KernelError("unknown graph builder '" + s + "'");
}

void SamplingStrategy::validate() const {
  if (!(eta >= 0.0 && eta <= 100.0)) throw KernelError("hybrid eta must lie in [0, 100]");
  if ((sigma.array() < 0.0).any()) throw KernelError("gaussian sigma must be positive");
}

void KernelParams::validate() const {
  if ((local_box.array() <= 0.0).any()) throw KernelError("local box must be positive");
  if (!(e_max > 0.0)) throw KernelError("e_max must be positive");
  if (max_vertices < 1) throw KernelError("max_vertices must be at least 1");
  if (max_edges < 0) throw KernelError("max_edges must be non-negative");
  if (!(tracking_distance > 0.0)) throw KernelError("tracking distance must be positive");
  if (batch_size < 0 || max_attempts_per_vertex < 1 || max_batch_rounds < 1)
    throw KernelError("sampling budgets must be positive");
  if (cluster_radius < 0.0) throw KernelError("cluster radius must be non-negative");
}

PositionSampler::PositionSampler(const SamplingStrategy& strategy, const Aabb& box, const Vec3& center,
                                 std::uint64_t seed)
    : strategy_(strategy), box_(box), center_(center), rng_(seed) {
  strategy_.validate();
  if (box.empty()) throw KernelError("sampling box is empty");
  sigma_ = strategy_.sigma;
  for (int a = 0; a < 3; ++a)
    if (sigma_[a] <= 0.0) sigma_[a] = box_.size()[a] / 6.0;
}

Vec3 PositionSampler::uniform() {
  Vec3 p;
  for (int a = 0; a < 3; ++a) p[a] = std::uniform_real_distribution<double>(box_.min[a], box_.max[a])(rng_);
  return p;
}

Vec3 PositionSampler::gaussian() {
  for (int attempt = 0; attempt < kGaussianRetries; ++attempt) {
    Vec3 p;
    for (int a = 0; a < 3; ++a)
      p[a] = sigma_[a] > 0.0 ? std::normal_distribution<double>(center_[a], sigma_[a])(rng_) : center_[a];
    if (box_.contains(p)) return p;
  }
  return uniform();
}

Vec3 PositionSampler::next() {
  const std::uint64_t n = drawn_++;
  switch (strategy_.kind) {
    case SamplingKind::Uniform:
      return uniform();
    case SamplingKind::Gaussian:
      return gaussian();
    case SamplingKind::Hybrid: {
      // Deterministic interleave: draw n is Gaussian iff it crosses a multiple of 100/η.
      const auto quota = [&](std::uint64_t k) { return std::floor(static_cast<double>(k) * strategy_.eta / 100.0); };
      return quota(n + 1) > quota(n) ? gaussian() : uniform();
    }
  }
  return uniform();
}

std::vector<Configuration> sample_configurations(const SamplingStrategy& strategy, const Aabb& box,
                                                 const Configuration& xi0, int count, std::uint64_t seed) {
  PositionSampler sampler(strategy, box, xi0.p, seed);
  std::vector<Configuration> out;
  out.reserve(static_cast<std::size_t>(std::max(count, 0)));
  for (int i = 0; i < count; ++i) out.emplace_back(sampler.next(), xi0.yaw, xi0.pitch);
  return out;
}

Aabb local_box(const KernelParams& params, const VoxelMap& map, const Vec3& p) {
  if (params.region) return params.region->intersect(map.bounds());
  return Aabb::centered(p, params.local_box).intersect(map.bounds());
}

}  // namespace gplan
