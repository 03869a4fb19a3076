#include "treetrace/tree.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace treetrace {

void TreeParams::validate() const {
  if (p < 2) throw std::invalid_argument("TreeParams: p must be >= 2");
  if (!(ell > 0.0 && ell < 1.0))
    throw std::invalid_argument("TreeParams: ell must lie in (0,1), got " + std::to_string(ell));
  if (!(alpha > 0.0)) throw std::invalid_argument("TreeParams: alpha must be positive");
}

double TreeParams::sigma() const {
  return std::log(alpha * p / ell) / (2.0 * std::log(double(p)));
}

bool TreeParams::gate() const {
  const double ap = alpha * p;
  return ell < ap && ap < 1.0 / ell;
}

std::vector<EdgeId> children(EdgeId e, int p) {
  std::vector<EdgeId> out;
  out.reserve(std::size_t(p));
  for (int j = 0; j < p; ++j) out.push_back({e.n + 1, e.k * p + j});
  return out;
}

std::optional<EdgeId> parent(EdgeId e, int p) {
  if (e.n == 0) return std::nullopt;
  return EdgeId{e.n - 1, e.k / p};
}

bool subtree_contains(EdgeId ancestor, EdgeId x, int p) {
  if (x.n < ancestor.n) return false;
  std::int64_t k = x.k;
  for (int n = x.n; n > ancestor.n; --n) k /= p;
  return k == ancestor.k;
}

std::optional<int> subtree_branch(EdgeId ancestor, EdgeId x, int p) {
  if (x.n <= ancestor.n || !subtree_contains(ancestor, x, p)) return std::nullopt;
  // generation ancestor.n+1 ancestor of x is (ancestor.n+1, p*ancestor.k + j)
  std::int64_t k = x.k;
  for (int n = x.n; n > ancestor.n + 1; --n) k /= p;
  return int(k - ancestor.k * p);
}

namespace {

std::int64_t ipow(std::int64_t base, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) r *= base;
  return r;
}

}  // namespace

TreeTopology TreeTopology::geometric(TreeParams params, int depth) {
  params.validate();
  if (depth < 0) throw std::invalid_argument("TreeTopology: depth must be >= 0");

  TreeTopology tree;
  tree.params_ = params;
  tree.depth_ = depth;
  tree.kind_ = TreeKind::geometric;

  tree.t_.resize(std::size_t(depth) + 2);
  tree.pow_len_.resize(std::size_t(depth) + 1);
  tree.pow_w_.resize(std::size_t(depth) + 1);
  tree.gen_offset_.resize(std::size_t(depth) + 2);
  tree.t_[0] = 0.0;
  tree.gen_offset_[0] = 0;
  double len = 1.0, w = 1.0;
  for (int n = 0; n <= depth; ++n) {
    tree.pow_len_[std::size_t(n)] = len;
    tree.pow_w_[std::size_t(n)] = w;
    tree.t_[std::size_t(n) + 1] = tree.t_[std::size_t(n)] + len;
    tree.gen_offset_[std::size_t(n) + 1] =
        tree.gen_offset_[std::size_t(n)] + ipow(params.p, n);
    len *= params.ell;
    w *= params.alpha;
  }
  tree.edge_count_ = tree.gen_offset_[std::size_t(depth) + 1];
  if (tree.edge_count_ > (std::int64_t(1) << 40))
    throw std::invalid_argument("TreeTopology: truncation depth too large");
  return tree;
}

TreeTopology TreeTopology::perturbed(TreeParams params, int depth,
                                     const std::map<EdgeId, double>& lengths,
                                     const std::map<EdgeId, double>& weights) {
  TreeTopology tree = geometric(params, depth);
  tree.kind_ = TreeKind::perturbed;
  tree.in_lengths_ = lengths;
  tree.in_weights_ = weights;

  tree.lengths_.resize(std::size_t(tree.edge_count_));
  tree.weights_.resize(std::size_t(tree.edge_count_));
  tree.cum_.resize(std::size_t(tree.edge_count_));
  for (std::int64_t i = 0; i < tree.edge_count_; ++i) {
    const EdgeId e = tree.edge_at(i);
    tree.lengths_[std::size_t(i)] = tree.pow_len_[std::size_t(e.n)];
    tree.weights_[std::size_t(i)] = tree.pow_w_[std::size_t(e.n)];
  }
  auto prescribe = [&](const std::map<EdgeId, double>& in, std::vector<double>& out,
                       const char* what) {
    for (const auto& [e, v] : in) {
      if (e.n < 0 || e.n > depth || e.k < 0 || e.k >= tree.edges_at(e.n))
        throw std::invalid_argument(std::string("TreeTopology: prescribed ") + what +
                                    " for edge outside the truncated tree");
      if (!(v > 0.0))
        throw std::invalid_argument(std::string("TreeTopology: prescribed ") + what +
                                    " must be positive");
      out[std::size_t(tree.edge_index(e))] = v;
    }
  };
  prescribe(lengths, tree.lengths_, "length");
  prescribe(weights, tree.weights_, "weight");

  // minimal distortion over the sandwich bounds; 1 for geometric data
  double c = 1.0;
  for (const auto& [e, v] : lengths) {
    const double ratio = v / tree.pow_len_[std::size_t(e.n)];
    c = std::max({c, ratio, 1.0 / ratio});
  }
  for (const auto& [e, v] : weights) {
    const double ratio = v / tree.pow_w_[std::size_t(e.n)];
    c = std::max({c, ratio, 1.0 / ratio});
  }
  tree.distortion_ = c;

  // cumulative root distances L_{n,k}
  for (std::int64_t i = 0; i < tree.edge_count_; ++i) {
    const EdgeId e = tree.edge_at(i);
    const double above = e.n == 0 ? 0.0 : tree.cum_[std::size_t(tree.edge_index(*parent(e, params.p)))];
    tree.cum_[std::size_t(i)] = above + tree.lengths_[std::size_t(i)];
  }
  return tree;
}

double TreeTopology::t(int n) const {
  if (n < -1 || n > depth_) throw std::out_of_range("TreeTopology::t: generation out of range");
  return t_[std::size_t(n + 1)];
}

std::int64_t TreeTopology::edges_at(int n) const {
  if (n < 0 || n > depth_) throw std::out_of_range("TreeTopology::edges_at: generation out of range");
  return gen_offset_[std::size_t(n) + 1] - gen_offset_[std::size_t(n)];
}

std::int64_t TreeTopology::edge_index(EdgeId e) const {
  if (e.n < 0 || e.n > depth_ || e.k < 0 || e.k >= edges_at(e.n))
    throw std::out_of_range("TreeTopology::edge_index: invalid edge id");
  return gen_offset_[std::size_t(e.n)] + e.k;
}

EdgeId TreeTopology::edge_at(std::int64_t index) const {
  if (index < 0 || index >= edge_count_)
    throw std::out_of_range("TreeTopology::edge_at: index out of range");
  const auto it = std::upper_bound(gen_offset_.begin(), gen_offset_.end(), index);
  const int n = int(it - gen_offset_.begin()) - 1;
  return {n, index - gen_offset_[std::size_t(n)]};
}

double TreeTopology::edge_length(EdgeId e) const {
  const std::int64_t i = edge_index(e);
  return kind_ == TreeKind::geometric ? pow_len_[std::size_t(e.n)] : lengths_[std::size_t(i)];
}

double TreeTopology::edge_weight(EdgeId e) const {
  const std::int64_t i = edge_index(e);
  return kind_ == TreeKind::geometric ? pow_w_[std::size_t(e.n)] : weights_[std::size_t(i)];
}

std::pair<double, double> TreeTopology::edge_interval(EdgeId e) const {
  if (kind_ == TreeKind::geometric) {
    edge_index(e);  // bounds check
    return {t(e.n - 1), t(e.n)};
  }
  const double end = cum_[std::size_t(edge_index(e))];
  return {end - lengths_[std::size_t(edge_index(e))], end};
}

double TreeTopology::vertex_coordinate(EdgeId e) const { return edge_interval(e).second; }

double TreeTopology::total_measure() const {
  double total = 0.0;
  for (std::int64_t i = 0; i < edge_count_; ++i) {
    const EdgeId e = edge_at(i);
    total += edge_weight(e) * edge_length(e);
  }
  return total;
}

namespace {

void check_point(const TreeTopology& tree, TreePoint x) {
  const auto [a, b] = tree.edge_interval(x.edge);
  const double slack = 1e-12 * std::max(1.0, b);
  if (x.t < a - slack || x.t > b + slack)
    throw std::invalid_argument("coordinate outside the edge interval");
}

}  // namespace

TreePoint map_to_perturbed(const TreeTopology& perturbed, TreePoint x) {
  if (perturbed.kind() != TreeKind::perturbed)
    throw std::invalid_argument("map_to_perturbed: target tree is not perturbed");
  const TreeTopology geom = TreeTopology::geometric(perturbed.params(), perturbed.depth());
  check_point(geom, x);
  const auto [a, b] = geom.edge_interval(x.edge);
  const auto [pa, pb] = perturbed.edge_interval(x.edge);
  return {x.edge, pa + (x.t - a) / (b - a) * (pb - pa)};
}

TreePoint map_to_geometric(const TreeTopology& perturbed, TreePoint x) {
  if (perturbed.kind() != TreeKind::perturbed)
    throw std::invalid_argument("map_to_geometric: source tree is not perturbed");
  check_point(perturbed, x);
  const TreeTopology geom = TreeTopology::geometric(perturbed.params(), perturbed.depth());
  const auto [pa, pb] = perturbed.edge_interval(x.edge);
  const auto [a, b] = geom.edge_interval(x.edge);
  return {x.edge, a + (x.t - pa) / (pb - pa) * (b - a)};
}

}  // namespace treetrace
