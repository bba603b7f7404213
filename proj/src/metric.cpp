#include "coarse/metric.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace coarse {

std::string format_number(double v) {
  if (std::isfinite(v) && v == std::floor(v) && std::fabs(v) < 1e15) {
    return std::to_string(static_cast<long long>(v));
  }
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

namespace {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (a < b) std::swap(a, b);
    parent_[a] = b;  // the smaller index stays root
  }

 private:
  std::vector<std::size_t> parent_;
};

template <typename Linked>
std::vector<PointSet> components(const PointSet& a, Linked linked) {
  DisjointSets ds(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (linked(a[i], a[j])) ds.unite(i, j);
    }
  }
  std::vector<PointSet> out;
  std::vector<std::size_t> slot(a.size(), a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::size_t root = ds.find(i);
    if (slot[root] == a.size()) {
      slot[root] = out.size();
      out.emplace_back();
    }
    out[slot[root]].push_back(a[i]);
  }
  return out;
}

}  // namespace

FiniteMetricSpace::FiniteMetricSpace(std::vector<std::string> labels, std::vector<double> d)
    : n_(labels.size()), labels_(std::move(labels)), d_(std::move(d)) {}

FiniteMetricSpace FiniteMetricSpace::from_matrix(std::vector<std::string> labels,
                                                 const std::vector<std::vector<double>>& matrix) {
  const std::size_t n = matrix.size();
  if (labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) throw MetricError("label count does not match matrix size");
  std::vector<double> d(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    if (matrix[i].size() != n) throw MetricError("matrix row " + std::to_string(i) + " has wrong length");
    for (std::size_t j = 0; j < n; ++j) d[i * n + j] = matrix[i][j];
  }
  FiniteMetricSpace s(std::move(labels), std::move(d));
  s.validate();
  return s;
}

FiniteMetricSpace FiniteMetricSpace::from_cloud(std::vector<std::string> labels,
                                                const std::vector<std::vector<double>>& coords,
                                                Norm norm) {
  const std::size_t n = coords.size();
  if (labels.empty()) {
    for (std::size_t i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  if (labels.size() != n) throw MetricError("label count does not match point count");
  std::vector<double> d(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (coords[i].size() != coords[0].size()) throw MetricError("inconsistent coordinate dimension");
    for (std::size_t j = i + 1; j < n; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < coords[i].size(); ++k) {
        const double diff = std::fabs(coords[i][k] - coords[j][k]);
        switch (norm) {
          case Norm::kL1: acc += diff; break;
          case Norm::kL2: acc += diff * diff; break;
          case Norm::kLinf: acc = std::max(acc, diff); break;
        }
      }
      if (norm == Norm::kL2) acc = std::sqrt(acc);
      d[i * n + j] = d[j * n + i] = acc;
    }
  }
  FiniteMetricSpace s(std::move(labels), std::move(d));
  s.validate();
  return s;
}

FiniteMetricSpace FiniteMetricSpace::from_graph(std::vector<std::string> labels,
                                                const std::vector<WeightedEdge>& edges) {
  const std::size_t n = labels.size();
  std::vector<double> d(n * n, kInfinity);
  for (std::size_t i = 0; i < n; ++i) d[i * n + i] = 0.0;
  for (const auto& e : edges) {
    if (e.u >= n || e.v >= n) throw MetricError("edge endpoint out of range");
    if (!(e.weight > 0.0) || !std::isfinite(e.weight)) throw MetricError("edge weights must be positive and finite");
    if (e.u == e.v) continue;
    d[e.u * n + e.v] = std::min(d[e.u * n + e.v], e.weight);
    d[e.v * n + e.u] = std::min(d[e.v * n + e.u], e.weight);
  }
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i < n; ++i) {
      const double dik = d[i * n + k];
      if (dik == kInfinity) continue;
      for (std::size_t j = 0; j < n; ++j) {
        const double cand = dik + d[k * n + j];
        if (cand < d[i * n + j]) d[i * n + j] = cand;
      }
    }
  }
  for (std::size_t j = 1; j < n; ++j) {
    if (d[j] == kInfinity) {
      throw MetricError("graph is disconnected: no path from " + labels[0] + " to " + labels[j]);
    }
  }
  FiniteMetricSpace s(std::move(labels), std::move(d));
  s.validate();
  return s;
}

FiniteMetricSpace FiniteMetricSpace::on_line(const std::vector<double>& coords) {
  std::vector<std::string> labels;
  std::vector<std::vector<double>> pts;
  for (double c : coords) {
    labels.push_back(format_number(c));
    pts.push_back({c});
  }
  return from_cloud(std::move(labels), pts, Norm::kL1);
}

FiniteMetricSpace FiniteMetricSpace::integer_interval(long lo, long hi) {
  std::vector<double> coords;
  for (long v = lo; v <= hi; ++v) coords.push_back(static_cast<double>(v));
  return on_line(coords);
}

FiniteMetricSpace FiniteMetricSpace::cycle(std::size_t n) {
  std::vector<std::string> labels;
  std::vector<WeightedEdge> edges;
  for (std::size_t i = 0; i < n; ++i) {
    labels.push_back(std::to_string(i));
    edges.push_back({i, (i + 1) % n, 1.0});
  }
  return from_graph(std::move(labels), edges);
}

void FiniteMetricSpace::validate() const {
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = i + 1; j < n_; ++j) {
      if (labels_[i] == labels_[j]) throw MetricError("duplicate label " + labels_[i]);
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    if (dist(i, i) != 0.0) throw MetricError("nonzero diagonal at " + labels_[i]);
    for (std::size_t j = 0; j < n_; ++j) {
      const double v = dist(i, j);
      if (!std::isfinite(v) || v < 0.0) {
        throw MetricError("distance (" + labels_[i] + "," + labels_[j] + ") is negative or not finite");
      }
      if (v != dist(j, i)) {
        throw MetricError("asymmetric matrix at (" + labels_[i] + "," + labels_[j] + ")");
      }
      if (i != j && v == 0.0) {
        throw MetricError("distinct points " + labels_[i] + " and " + labels_[j] + " at distance 0");
      }
    }
  }
  if (n_ > kTriangleCheckLimit) return;
  for (std::size_t x = 0; x < n_; ++x) {
    for (std::size_t z = 0; z < n_; ++z) {
      for (std::size_t y = x + 1; y < n_; ++y) {
        if (dist(x, y) > dist(x, z) + dist(z, y)) {
          throw MetricError("triangle inequality violated at (" + labels_[x] + "," + labels_[z] + "," +
                            labels_[y] + ")");
        }
      }
    }
  }
}

PointId FiniteMetricSpace::index_of(const std::string& label) const {
  const auto it = std::find(labels_.begin(), labels_.end(), label);
  return static_cast<PointId>(it - labels_.begin());
}

PointSet FiniteMetricSpace::all() const {
  PointSet s(n_);
  std::iota(s.begin(), s.end(), PointId{0});
  return s;
}

double FiniteMetricSpace::diameter() const {
  return d_.empty() ? 0.0 : *std::max_element(d_.begin(), d_.end());
}

std::vector<double> FiniteMetricSpace::distinct_distances() const {
  std::vector<double> v = d_;
  v.push_back(0.0);
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

PointSet make_set(std::vector<PointId> members) {
  std::sort(members.begin(), members.end());
  members.erase(std::unique(members.begin(), members.end()), members.end());
  return members;
}

PointSet set_union(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

PointSet set_intersection(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

PointSet set_difference(const PointSet& a, const PointSet& b) {
  PointSet out;
  std::set_difference(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool is_subset(const PointSet& a, const PointSet& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

bool contains(const PointSet& a, PointId x) { return std::binary_search(a.begin(), a.end(), x); }

void check_subset(const FiniteMetricSpace& space, const PointSet& a) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i] >= space.size()) throw PreconditionError("subset member out of range");
    if (i > 0 && a[i - 1] >= a[i]) throw PreconditionError("subset is not sorted and duplicate-free");
  }
}

PointSet neighborhood(const FiniteMetricSpace& space, const PointSet& a, double radius) {
  PointSet out;
  for (PointId x = 0; x < space.size(); ++x) {
    for (PointId u : a) {
      if (x == u || space.dist(x, u) < radius) {
        out.push_back(x);
        break;
      }
    }
  }
  return out;
}

PointSet inner_neighborhood(const FiniteMetricSpace& space, const PointSet& a, double radius) {
  PointSet out;
  for (PointId x : a) {
    bool inside = true;
    for (PointId y = 0; y < space.size() && inside; ++y) {
      if (space.dist(x, y) < radius && !contains(a, y)) inside = false;
    }
    if (inside) out.push_back(x);
  }
  return out;
}

double point_set_distance(const FiniteMetricSpace& space, PointId x, const PointSet& a) {
  double best = kInfinity;
  for (PointId u : a) best = std::min(best, space.dist(x, u));
  return best;
}

double set_distance(const FiniteMetricSpace& space, const PointSet& a, const PointSet& b) {
  double best = kInfinity;
  for (PointId x : a) best = std::min(best, point_set_distance(space, x, b));
  return best;
}

double hausdorff_distance(const FiniteMetricSpace& space, const PointSet& a, const PointSet& b) {
  if (a.empty() || b.empty()) throw PreconditionError("hausdorff_distance of an empty set");
  double h = 0.0;
  for (PointId x : a) h = std::max(h, point_set_distance(space, x, b));
  for (PointId y : b) h = std::max(h, point_set_distance(space, y, a));
  return h;
}

double diameter(const FiniteMetricSpace& space, const PointSet& a) {
  if (a.empty()) throw PreconditionError("diameter of an empty set");
  double d = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    for (std::size_t j = i + 1; j < a.size(); ++j) d = std::max(d, space.dist(a[i], a[j]));
  }
  return d;
}

std::vector<PointSet> r_components(const FiniteMetricSpace& space, const PointSet& a, double radius) {
  return components(a, [&](PointId x, PointId y) { return space.dist(x, y) <= radius; });
}

std::vector<PointSet> open_components(const FiniteMetricSpace& space, const PointSet& a,
                                      double radius) {
  return components(a, [&](PointId x, PointId y) { return space.dist(x, y) < radius; });
}

}  // namespace coarse
