#include "treetrace/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <stdexcept>

#include "treetrace/gagliardo.hpp"
#include "treetrace/rng.hpp"
#include "treetrace/version.hpp"

namespace treetrace {

std::string to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::trace_convergence: return "trace-convergence";
    case ExperimentKind::norm_equivalence: return "norm-equivalence";
    case ExperimentKind::gate_sweep: return "gate-sweep";
    case ExperimentKind::diagnostics: return "diagnostics";
    case ExperimentKind::kernel_check: return "kernel-check";
  }
  throw std::logic_error("unknown experiment kind");
}

std::vector<std::string> experiment_names() {
  return {"trace-convergence", "norm-equivalence", "gate-sweep", "diagnostics",
          "kernel-check"};
}

ExperimentKind experiment_kind_from_string(const std::string& name) {
  if (name == "trace-convergence") return ExperimentKind::trace_convergence;
  if (name == "norm-equivalence") return ExperimentKind::norm_equivalence;
  if (name == "gate-sweep") return ExperimentKind::gate_sweep;
  if (name == "diagnostics") return ExperimentKind::diagnostics;
  if (name == "kernel-check") return ExperimentKind::kernel_check;
  throw std::invalid_argument("config.experiment: unknown kind '" + name + "'");
}

namespace {

template <class T>
T field(const json& j, const std::string& path, const std::string& key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    throw std::invalid_argument("config." + (path.empty() ? key : path + "." + key) +
                                ": wrong type");
  }
}

template <class T>
T required(const json& j, const std::string& path, const std::string& key) {
  if (!j.contains(key))
    throw std::invalid_argument("config." + (path.empty() ? key : path + "." + key) +
                                ": missing");
  return field<T>(j, path, key, T{});
}

}  // namespace

ExperimentConfig ExperimentConfig::from_json(const json& j) {
  ExperimentConfig c;
  c.kind = experiment_kind_from_string(required<std::string>(j, "", "experiment"));
  c.output = field<std::string>(j, "", "output", to_string(c.kind));
  c.seed = field<std::uint64_t>(j, "", "seed", 1);
  if (j.contains("tree")) {
    const json& t = j.at("tree");
    c.tree.p = field<int>(t, "tree", "p", c.tree.p);
    c.tree.ell = field<double>(t, "tree", "ell", c.tree.ell);
    c.tree.alpha = field<double>(t, "tree", "alpha", c.tree.alpha);
    c.tree_depth = field<int>(t, "tree", "depth", c.tree_depth);
  }
  c.samples_per_edge = field<int>(j, "", "samples_per_edge", c.samples_per_edge);
  if (j.contains("decomposition")) {
    const json& d = j.at("decomposition");
    c.dec_dim = field<int>(d, "decomposition", "d", c.dec_dim);
    c.dec_depth = field<int>(d, "decomposition", "depth", c.dec_depth);
    const int dp = field<int>(d, "decomposition", "p", c.tree.p);
    if (dp != c.tree.p)
      throw std::invalid_argument("config.decomposition.p: must match config.tree.p");
  }
  if (j.contains("alpha_sweep")) {
    const json& a = j.at("alpha_sweep");
    c.alpha_min = required<double>(a, "alpha_sweep", "min");
    c.alpha_max = required<double>(a, "alpha_sweep", "max");
    c.alpha_steps = field<int>(a, "alpha_sweep", "steps", c.alpha_steps);
  }
  if (j.contains("levels")) {
    const json& l = j.at("levels");
    c.level_min = required<int>(l, "levels", "min");
    c.level_max = required<int>(l, "levels", "max");
  }
  if (j.contains("mix")) c.mix = Complex(required<double>(j, "", "mix"), 0.0);
  if (j.contains("haar_levels")) {
    const json& l = j.at("haar_levels");
    c.haar_min = required<int>(l, "haar_levels", "min");
    c.haar_max = required<int>(l, "haar_levels", "max");
  }
  c.r = field<double>(j, "", "r", c.r);
  if (j.contains("corpus")) {
    const json& k = j.at("corpus");
    c.corpus_count = field<int>(k, "corpus", "count", c.corpus_count);
    c.support_generation = field<int>(k, "corpus", "support_generation", c.support_generation);
  }
  c.validate();
  return c;
}

json ExperimentConfig::to_json() const {
  json j;
  j["experiment"] = to_string(kind);
  j["output"] = output;
  j["seed"] = seed;
  j["tree"] = {{"p", tree.p}, {"ell", tree.ell}, {"alpha", tree.alpha}, {"depth", tree_depth}};
  j["samples_per_edge"] = samples_per_edge;
  j["decomposition"] = {{"d", dec_dim}, {"p", tree.p}, {"depth", dec_depth}};
  j["alpha_sweep"] = {{"min", alpha_min}, {"max", alpha_max}, {"steps", alpha_steps}};
  j["levels"] = {{"min", level_min}, {"max", level_max}};
  j["mix"] = mix.real();
  j["haar_levels"] = {{"min", haar_min}, {"max", haar_max}};
  j["r"] = r;
  j["corpus"] = {{"count", corpus_count}, {"support_generation", support_generation}};
  return j;
}

void ExperimentConfig::validate() const {
  tree.validate();
  if (tree_depth < 0) throw std::invalid_argument("config.tree.depth: must be >= 0");
  if (samples_per_edge < 2)
    throw std::invalid_argument("config.samples_per_edge: must be >= 2");
  if (dec_dim < 1) throw std::invalid_argument("config.decomposition.d: must be >= 1");
  if (dec_depth < 0) throw std::invalid_argument("config.decomposition.depth: must be >= 0");
  switch (kind) {
    case ExperimentKind::gate_sweep:
      if (!(alpha_min > 0.0)) throw std::invalid_argument("config.alpha_sweep.min: must be positive");
      if (!(alpha_max > alpha_min))
        throw std::invalid_argument("config.alpha_sweep.max: must exceed min");
      if (alpha_steps < 2) throw std::invalid_argument("config.alpha_sweep.steps: must be >= 2");
      break;
    case ExperimentKind::trace_convergence:
      if (level_min < 1) throw std::invalid_argument("config.levels.min: must be >= 1");
      if (level_max < level_min)
        throw std::invalid_argument("config.levels.max: must be >= min");
      if (level_max > tree_depth)
        throw std::invalid_argument("config.levels.max: exceeds config.tree.depth");
      if (level_max > dec_depth || tree_depth > dec_depth)
        throw std::invalid_argument("config.decomposition.depth: too small for the tree depth");
      if (!tree.gate())
        throw std::invalid_argument("config.tree: gate ell < alpha p < 1/ell required");
      break;
    case ExperimentKind::norm_equivalence:
      if (haar_min < 1) throw std::invalid_argument("config.haar_levels.min: must be >= 1");
      if (haar_max < haar_min)
        throw std::invalid_argument("config.haar_levels.max: must be >= min");
      if (haar_max > dec_depth)
        throw std::invalid_argument("config.haar_levels.max: exceeds config.decomposition.depth");
      if (!(r > 0.0 && r < 0.5)) throw std::invalid_argument("config.r: must lie in (0, 1/2)");
      break;
    case ExperimentKind::diagnostics:
      break;
    case ExperimentKind::kernel_check:
      if (corpus_count < 1) throw std::invalid_argument("config.corpus.count: must be >= 1");
      if (support_generation < 1 || support_generation >= tree_depth)
        throw std::invalid_argument(
            "config.corpus.support_generation: must lie in [1, tree depth)");
      if (!tree.gate())
        throw std::invalid_argument("config.tree: gate ell < alpha p < 1/ell required");
      break;
  }
}

int ResultTable::column_index(const std::string& name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw std::invalid_argument("no such column: " + name);
  return int(it - columns.begin());
}

void ResultTable::write_csv(const std::string& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  for (std::size_t i = 0; i < columns.size(); ++i)
    out << (i ? "," : "") << columns[i];
  out << '\n';
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << csv_number(row[i]);
    out << '\n';
  }
}

void ResultTable::write_sidecar(const std::string& path) const {
  json j = metadata;
  j["code_version"] = TREETRACE_VERSION;
  j["timestamp"] = std::chrono::duration_cast<std::chrono::seconds>(
                       std::chrono::system_clock::now().time_since_epoch())
                       .count();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  out << j.dump(2) << '\n';
}

TreeFunction random_tree_function(TreeFunction::Tree tree, int samples_per_edge,
                                  std::uint64_t seed, double decay) {
  SplitMix64 rng = substream(seed, 0);
  const auto& topo = *tree;
  const int m = samples_per_edge;
  auto rnd = [&](double scale) {
    return Complex(rng.uniform(-scale, scale), rng.uniform(-scale, scale));
  };
  // vertex values first (root, then X_{n,k} by generation), then interiors
  std::vector<std::vector<Complex>> vertex(std::size_t(topo.depth()) + 1);
  const Complex root = rnd(1.0);
  double scale = 1.0;
  for (int n = 0; n <= topo.depth(); ++n) {
    scale *= decay;
    vertex[std::size_t(n)].resize(std::size_t(topo.edges_at(n)));
    for (auto& v : vertex[std::size_t(n)]) v = rnd(scale);
  }
  TreeFunction f(std::move(tree), m);
  auto& data = f.mutable_data();
  scale = 1.0;
  for (std::int64_t i = 0; i < topo.edge_count(); ++i) {
    const EdgeId e = topo.edge_at(i);
    const Complex start =
        e.n == 0 ? root : vertex[std::size_t(e.n - 1)][std::size_t(e.k / topo.p())];
    const Complex end = vertex[std::size_t(e.n)][std::size_t(e.k)];
    data[f.index(e, 0)] = start;
    data[f.index(e, m - 1)] = end;
    const double s = std::pow(decay, e.n + 1);
    for (int q = 1; q + 1 < m; ++q) data[f.index(e, q)] = rnd(s);
  }
  return f;
}

TreeFunction random_compactly_supported(TreeFunction::Tree tree, int samples_per_edge,
                                        int support_generation, std::uint64_t seed) {
  const auto& topo = *tree;
  if (support_generation < 1 || support_generation > topo.depth())
    throw std::invalid_argument("random_compactly_supported: bad support generation");
  SplitMix64 rng = substream(seed, 1);
  const int m = samples_per_edge;
  auto rnd = [&] { return Complex(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0)); };
  std::vector<std::vector<Complex>> vertex(std::size_t(support_generation) + 1);
  for (int n = 0; n <= support_generation; ++n) {
    vertex[std::size_t(n)].resize(std::size_t(topo.edges_at(n)));
    for (auto& v : vertex[std::size_t(n)])
      v = n == support_generation ? Complex(0.0, 0.0) : rnd();
  }
  TreeFunction f(std::move(tree), m);
  auto& data = f.mutable_data();
  for (std::int64_t i = 0; i < topo.edge_count(); ++i) {
    const EdgeId e = topo.edge_at(i);
    if (e.n > support_generation) break;
    const Complex start = e.n == 0 ? Complex(0.0, 0.0)
                                   : vertex[std::size_t(e.n - 1)][std::size_t(e.k / topo.p())];
    const Complex end = vertex[std::size_t(e.n)][std::size_t(e.k)];
    data[f.index(e, 0)] = start;
    data[f.index(e, m - 1)] = end;
    for (int q = 1; q + 1 < m; ++q) data[f.index(e, q)] = rnd();
  }
  return f;
}

namespace {

ResultTable run_gate_sweep(const ExperimentConfig& c) {
  ResultTable table;
  table.columns = {"alpha", "gate", "sigma"};
  for (int i = 0; i < c.alpha_steps; ++i) {
    TreeParams params = c.tree;
    params.alpha =
        c.alpha_min + (c.alpha_max - c.alpha_min) * double(i) / double(c.alpha_steps - 1);
    table.rows.push_back({params.alpha, params.gate() ? 1.0 : 0.0, params.sigma()});
  }
  return table;
}

ResultTable run_trace_convergence(const ExperimentConfig& c) {
  auto tree = std::make_shared<TreeTopology>(TreeTopology::geometric(c.tree, c.tree_depth));
  auto dec = std::make_shared<Decomposition>(Decomposition::interval(c.tree.p, c.dec_depth));
  TreeFunction f = harmonic_basis_function(SymmetryIndex::rad(), tree, c.samples_per_edge);
  if (std::abs(c.mix) > 0.0)
    f += c.mix *
         harmonic_basis_function(SymmetryIndex::triple(0, 0, 1), tree, c.samples_per_edge);

  const PiecewiseConstantFn a = identify(tau(f), dec, -1);
  ResultTable table;
  table.columns = {"N", "discrepancy", "log10_discrepancy", "ratio"};
  double prev = 0.0;
  for (int N = c.level_min; N <= c.level_max; ++N) {
    PiecewiseConstantFn b = PiecewiseConstantFn::zero(dec, N);
    b.values = vertex_values(f, N);
    const double err = pcf_distance(a, b);
    table.rows.push_back(
        {double(N), err, std::log10(err), prev > 0.0 ? err / prev : std::nan("")});
    prev = err;
  }
  return table;
}

ResultTable run_norm_equivalence(const ExperimentConfig& c) {
  auto dec = std::make_shared<Decomposition>(Decomposition::interval(c.tree.p, c.dec_depth));
  std::vector<PiecewiseConstantFn> family;
  std::vector<std::string> ids;
  for (int level = c.haar_min; level <= c.haar_max; ++level) {
    // unit-norm Haar-type detail at this level: alternating signs on cells
    PiecewiseConstantFn h = PiecewiseConstantFn::zero(dec, level);
    for (std::size_t k = 0; k < h.values.size(); ++k)
      h.values[k] = (k % std::size_t(c.tree.p)) == 0 ? 1.0 : -1.0 / double(c.tree.p - 1);
    const double norm = h.l2_norm();
    for (auto& v : h.values) v /= norm;
    family.push_back(std::move(h));
    ids.push_back("haar_" + std::to_string(level));
  }
  const EquivalenceReport rep = equivalence_report(family, ids, c.r, c.seed);
  ResultTable table;
  table.columns = {"level",           "a_r",          "besov",
                   "gagliardo",       "ratio_a_besov", "ratio_a_gagliardo",
                   "ratio_besov_gagliardo"};
  for (std::size_t i = 0; i < rep.rows.size(); ++i) {
    const auto& row = rep.rows[i];
    table.rows.push_back({double(c.haar_min + int(i)), row.a_r, row.besov, row.gagliardo,
                          row.ratio_a_besov, row.ratio_a_gagliardo,
                          row.ratio_besov_gagliardo});
  }
  table.metadata["bracket_a_besov"] = rep.bracket_a_besov;
  table.metadata["bracket_a_gagliardo"] = rep.bracket_a_gagliardo;
  table.metadata["bracket_besov_gagliardo"] = rep.bracket_besov_gagliardo;
  return table;
}

ResultTable run_diagnostics(const ExperimentConfig& c) {
  const Decomposition dec = c.dec_dim == 1
                                ? Decomposition::interval(c.tree.p, c.dec_depth)
                                : Decomposition::hypercube(c.dec_dim, c.tree.p, c.dec_depth);
  const DecompositionDiagnostics diag = diagnostics(dec);
  ResultTable table;
  table.columns = {"n", "c1", "c2", "neighbors"};
  for (std::size_t n = 0; n < diag.c1_by_generation.size(); ++n)
    table.rows.push_back({double(n), diag.c1_by_generation[n], diag.c2_by_generation[n],
                          double(diag.neighbors_by_generation[n])});
  table.metadata["c1_observed"] = diag.c1_observed;
  table.metadata["c2_observed"] = diag.c2_observed;
  table.metadata["K_observed"] = diag.K_observed;
  return table;
}

ResultTable run_kernel_check(const ExperimentConfig& c) {
  auto tree = std::make_shared<TreeTopology>(TreeTopology::geometric(c.tree, c.tree_depth));
  ResultTable table;
  table.columns = {"id", "max_abs_entry", "h1_norm"};
  for (int i = 0; i < c.corpus_count; ++i) {
    const TreeFunction f = random_compactly_supported(
        tree, c.samples_per_edge, c.support_generation, c.seed + std::uint64_t(i));
    const TraceCoefficients coeffs = tau(f);
    double worst = 0.0;
    for (const auto& [z, a] : coeffs.entries) worst = std::max(worst, std::abs(a));
    table.rows.push_back({double(i), worst, norms(f).h1});
  }
  return table;
}

}  // namespace

ResultTable run(const ExperimentConfig& config) {
  config.validate();
  ResultTable table;
  switch (config.kind) {
    case ExperimentKind::gate_sweep: table = run_gate_sweep(config); break;
    case ExperimentKind::trace_convergence: table = run_trace_convergence(config); break;
    case ExperimentKind::norm_equivalence: table = run_norm_equivalence(config); break;
    case ExperimentKind::diagnostics: table = run_diagnostics(config); break;
    case ExperimentKind::kernel_check: table = run_kernel_check(config); break;
  }
  table.metadata["config"] = config.to_json();
  table.metadata["seed"] = config.seed;
  return table;
}

ResultTable emit_plot_data(const ResultTable& table, const std::string& x_col,
                           const std::vector<std::string>& y_cols, bool log10_y) {
  ResultTable out;
  const int xi = table.column_index(x_col);
  std::vector<int> yis;
  out.columns.push_back(x_col);
  for (const auto& y : y_cols) {
    yis.push_back(table.column_index(y));
    out.columns.push_back(log10_y ? "log10_" + y : y);
  }
  for (const auto& row : table.rows) {
    std::vector<double> r{row[std::size_t(xi)]};
    for (const int yi : yis) {
      const double v = row[std::size_t(yi)];
      r.push_back(log10_y ? std::log10(v) : v);
    }
    out.rows.push_back(std::move(r));
  }
  out.metadata = table.metadata;
  return out;
}

}  // namespace treetrace
