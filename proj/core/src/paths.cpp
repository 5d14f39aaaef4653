#include "infothermo/paths.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "infothermo/error.hpp"
#include "infothermo/quadrature.hpp"

namespace infothermo {

namespace {

constexpr double kQuadTol = 1e-10;

PathNode lerp(const PathNode& a, const PathNode& b, double s) {
  return {a.m + s * (b.m - a.m), a.sigma2 + s * (b.sigma2 - a.sigma2)};
}

bool same_node(const PathNode& a, const PathNode& b, double rel) {
  auto close = [rel](double x, double y) {
    return std::abs(x - y) <= rel * std::max({1.0, std::abs(x), std::abs(y)});
  };
  return close(a.m, b.m) && close(a.sigma2, b.sigma2);
}

// Sum of f over every segment, where f receives the segment endpoints.
template <typename F>
double per_segment(const ProcessPath& path, F&& f) {
  double total = 0.0;
  const auto nodes = path.nodes();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) total += f(nodes[i], nodes[i + 1]);
  return total;
}

double info_density(const PathNode& p, const NoiseModel& noise) {
  if (p.sigma2 == 0.0) return 0.0;
  return p.sigma2 / (p.m * theta(p, noise));
}

}  // namespace

ProcessPath::ProcessPath(std::vector<PathNode> nodes) : nodes_(std::move(nodes)) {
  if (nodes_.size() < 2) {
    throw Error(ErrorCode::invalid_argument, "a process path needs at least two nodes");
  }
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    nodes_[i].validate();
    if (i > 0 && nodes_[i].m == nodes_[i - 1].m && nodes_[i].sigma2 == nodes_[i - 1].sigma2) {
      std::ostringstream os;
      os << "consecutive path nodes " << i - 1 << " and " << i << " coincide";
      throw Error(ErrorCode::invalid_argument, os.str());
    }
  }
}

ProcessPath ProcessPath::stationary(const PathNode& node) {
  node.validate();
  return ProcessPath({node, node}, Unchecked{});
}

ProcessPath ProcessPath::reversed() const {
  std::vector<PathNode> r(nodes_.rbegin(), nodes_.rend());
  return ProcessPath(std::move(r), Unchecked{});
}

CyclePath::CyclePath(ProcessPath path) : path_(std::move(path)) {
  if (!same_node(path_.front(), path_.back(), 1e-12)) {
    std::ostringstream os;
    os << "path is open: start (" << path_.front().m << ", " << path_.front().sigma2
       << ") vs end (" << path_.back().m << ", " << path_.back().sigma2 << ")";
    throw Error(ErrorCode::not_a_cycle, os.str());
  }
}

std::vector<geom::Point2> CyclePath::ring() const {
  std::vector<geom::Point2> r;
  r.reserve(path_.nodes().size());
  for (const auto& n : path_.nodes()) r.push_back({n.m, n.sigma2});
  return r;
}

double CyclePath::signed_area() const { return geom::signed_area(ring()); }

Orientation CyclePath::orientation() const {
  const double a = signed_area();
  if (a > 0.0) return Orientation::counterclockwise;
  if (a < 0.0) return Orientation::clockwise;
  return Orientation::degenerate;
}

bool CyclePath::is_simple() const { return geom::is_simple(ring()); }

double CyclePath::min_m() const {
  double m = path_.front().m;
  for (const auto& n : path_.nodes()) m = std::min(m, n.m);
  return m;
}

CyclePath cycle_from_ring(std::span<const geom::Point2> ring) {
  std::vector<PathNode> nodes;
  nodes.reserve(ring.size() + 1);
  for (const auto& p : ring) nodes.push_back({p.x, p.y});
  if (!nodes.empty() && !(nodes.front().m == nodes.back().m &&
                          nodes.front().sigma2 == nodes.back().sigma2)) {
    nodes.push_back(nodes.front());
  }
  return CyclePath(ProcessPath(std::move(nodes)));
}

double sampling_work(const ProcessPath& path) {
  return per_segment(path, [](const PathNode& a, const PathNode& b) {
    const double dm = b.m - a.m;
    if (dm == 0.0) return 0.0;
    auto f = [&](double s) {
      const PathNode p = lerp(a, b, s);
      return p.sigma2 / p.m * dm;
    };
    return quad::integrate(f, 0.0, 1.0, kQuadTol);
  });
}

double information_gain(const ProcessPath& path, const NoiseModel& noise) {
  return per_segment(path, [&](const PathNode& a, const PathNode& b) {
    const double dm = b.m - a.m;
    if (dm == 0.0 || (a.sigma2 == 0.0 && b.sigma2 == 0.0)) return 0.0;
    auto f = [&](double s) { return info_density(lerp(a, b, s), noise) * dm; };
    return quad::integrate(f, 0.0, 1.0, kQuadTol);
  });
}

double reversible_entropy_flux(const ProcessPath& path, const NoiseModel& noise) {
  return per_segment(path, [&](const PathNode& a, const PathNode& b) {
    const double ds = b.sigma2 - a.sigma2;
    if (ds == 0.0) return 0.0;
    auto f = [&](double s) { return ds / theta(lerp(a, b, s), noise); };
    return quad::integrate(f, 0.0, 1.0, kQuadTol);
  });
}

double entropy_differential_integral(const ProcessPath& path, const NoiseModel& noise) {
  return per_segment(path, [&](const PathNode& a, const PathNode& b) {
    const double dm = b.m - a.m;
    const double ds = b.sigma2 - a.sigma2;
    if (dm == 0.0 && ds == 0.0) return 0.0;
    auto f = [&](double s) {
      const Partials d = partials(lerp(a, b, s), noise);
      return d.dh_dsigma2_at_m * ds + d.dh_dm_at_sigma2 * dm;
    };
    return quad::integrate(f, 0.0, 1.0, kQuadTol);
  });
}

double theta_dh_integral(const ProcessPath& path, const NoiseModel& noise) {
  const PathNode& first = path.front();
  const PathNode& last = path.back();
  const double boundary =
      theta(last, noise) * entropy(last, noise) - theta(first, noise) * entropy(first, noise);
  const double by_parts = per_segment(path, [&](const PathNode& a, const PathNode& b) {
    const double dtheta = theta(b, noise) - theta(a, noise);
    if (dtheta == 0.0) return 0.0;
    auto h = [&](double s) { return entropy(lerp(a, b, s), noise); };
    return dtheta * quad::integrate(h, 0.0, 1.0, kQuadTol);
  });
  return boundary - by_parts;
}

double theta_differential_integral(const ProcessPath& path, const NoiseModel& noise) {
  return per_segment(path, [&](const PathNode& a, const PathNode& b) {
    const double rate = 2.0 * ((b.sigma2 - a.sigma2) + noise.sigma_r2 * (b.m - a.m));
    return quad::integrate([rate](double) { return rate; }, 0.0, 1.0, kQuadTol);
  });
}

double sigma2_differential_integral(const ProcessPath& path) {
  return per_segment(path, [](const PathNode& a, const PathNode& b) {
    const double rate = b.sigma2 - a.sigma2;
    return quad::integrate([rate](double) { return rate; }, 0.0, 1.0, kQuadTol);
  });
}

namespace {

template <typename Reduce>
double first_law_scan(const ProcessPath& path, const NoiseModel& noise, int n_steps,
                      Reduce&& reduce) {
  if (n_steps < 2) {
    throw Error(ErrorCode::invalid_argument, "first_law_residual needs n_steps >= 2");
  }
  double acc = 0.0;
  const auto nodes = path.nodes();
  for (std::size_t i = 0; i + 1 < nodes.size(); ++i) {
    const PathNode& a = nodes[i];
    const PathNode& b = nodes[i + 1];
    if (a.m == b.m && a.sigma2 == b.sigma2) continue;
    for (int k = 0; k < n_steps; ++k) {
      const PathNode p0 = lerp(a, b, static_cast<double>(k) / n_steps);
      const PathNode p1 = lerp(a, b, static_cast<double>(k + 1) / n_steps);
      const PathNode mid = lerp(a, b, (k + 0.5) / n_steps);
      const double dh = entropy(p1, noise) - entropy(p0, noise);
      const double rhs = theta(mid, noise) * dh + mid.sigma2 / mid.m * (p1.m - p0.m);
      acc = reduce(acc, std::abs((p1.sigma2 - p0.sigma2) - rhs));
    }
  }
  return acc;
}

}  // namespace

double first_law_residual(const ProcessPath& path, const NoiseModel& noise, int n_steps) {
  return first_law_scan(path, noise, n_steps, [](double acc, double r) { return acc + r; });
}

double first_law_max_step_residual(const ProcessPath& path, const NoiseModel& noise,
                                   int n_steps) {
  return first_law_scan(path, noise, n_steps,
                        [](double acc, double r) { return std::max(acc, r); });
}

ProcessPath make_process(ProcessKind kind, const PathNode& start, double end,
                         const NoiseModel& noise, int n_nodes) {
  start.validate();
  noise.validate();
  if (n_nodes < 2) throw Error(ErrorCode::invalid_argument, "a process needs n_nodes >= 2");
  if (!std::isfinite(end)) throw Error(ErrorCode::invalid_argument, "process end must be finite");

  std::vector<PathNode> nodes;
  nodes.reserve(static_cast<std::size_t>(n_nodes));
  auto fraction = [n_nodes](int k) { return static_cast<double>(k) / (n_nodes - 1); };

  switch (kind) {
    case ProcessKind::isochoric: {
      if (end < 0.0) throw Error(ErrorCode::invalid_argument, "isochoric end sigma2 must be >= 0");
      if (end == start.sigma2) {
        throw Error(ErrorCode::invalid_argument, "isochoric process needs a change in sigma2");
      }
      for (int k = 0; k < n_nodes; ++k) {
        nodes.push_back({start.m, start.sigma2 + fraction(k) * (end - start.sigma2)});
      }
      nodes.back().sigma2 = end;
      break;
    }
    case ProcessKind::adiabatic: {
      if (!(end > 0.0) || end == start.m) {
        throw Error(ErrorCode::invalid_argument, "adiabatic end m must be > 0 and differ from start");
      }
      const double ratio = start.sigma2 / start.m;
      for (int k = 0; k < n_nodes; ++k) {
        const double m = start.m + fraction(k) * (end - start.m);
        nodes.push_back({m, ratio * m});
      }
      nodes.back() = {end, ratio * end};
      break;
    }
    case ProcessKind::isothermal: {
      if (!(end > 0.0) || end == start.m) {
        throw Error(ErrorCode::invalid_argument, "isothermal end m must be > 0 and differ from start");
      }
      const double final_sigma2 = start.sigma2 - noise.sigma_r2 * (end - start.m);
      const double slack = 1e-12 * std::max(1.0, start.sigma2);
      if (final_sigma2 < -slack) {
        std::ostringstream os;
        os << "isothermal process drives sigma2 negative: sigma2(" << end << ") = " << final_sigma2
           << "; feasible only for m <= " << start.m + start.sigma2 / noise.sigma_r2;
        throw Error(ErrorCode::infeasible_process, os.str());
      }
      for (int k = 0; k < n_nodes; ++k) {
        const double m = start.m + fraction(k) * (end - start.m);
        nodes.push_back({m, std::max(0.0, start.sigma2 - noise.sigma_r2 * (m - start.m))});
      }
      nodes.back() = {end, std::max(0.0, final_sigma2)};
      break;
    }
  }
  nodes.front() = start;
  return ProcessPath(std::move(nodes));
}

ClosureReport cycle_closure_check(const CyclePath& cycle, const NoiseModel& noise) {
  const ProcessPath& p = cycle.path();
  ClosureReport r;
  r.dh_loop = entropy_differential_integral(p, noise);
  r.dsigma2_loop = sigma2_differential_integral(p);
  r.dtheta_loop = theta_differential_integral(p, noise);
  r.theta_dh_loop = theta_dh_integral(p, noise);
  r.sampling_work = sampling_work(p);
  r.information_gain = information_gain(p, noise);
  r.signed_area = cycle.signed_area();
  return r;
}

geom::Box default_cycle_box() { return {0.5, 1e3, 0.0, 100.0}; }

CyclePath random_cycle(std::mt19937_64& rng, const geom::Box& box) {
  std::bernoulli_distribution flip(0.5);
  for (;;) {
    std::vector<geom::Point2> ring = geom::random_convex_ring(rng, box);
    if (flip(rng)) std::reverse(ring.begin(), ring.end());
    const bool valid = std::all_of(ring.begin(), ring.end(), [](const geom::Point2& q) {
      return q.x > 0.0 && q.y >= 0.0 && std::isfinite(q.x) && std::isfinite(q.y);
    });
    if (valid) return cycle_from_ring(ring);
  }
}

std::vector<CyclePath> random_cycles(std::uint64_t seed, std::size_t count,
                                     const geom::Box& box) {
  std::mt19937_64 rng(seed);
  std::vector<CyclePath> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(random_cycle(rng, box));
  return out;
}

}  // namespace infothermo
