#include "treetrace/io.hpp"

#include <cstdio>
#include <fstream>
#include <stdexcept>

namespace treetrace {

json tree_to_json(const TreeTopology& tree) {
  json j;
  j["p"] = tree.p();
  j["ell"] = tree.params().ell;
  j["alpha"] = tree.params().alpha;
  j["depth"] = tree.depth();
  if (tree.kind() == TreeKind::perturbed) {
    json perts = json::array();
    std::map<EdgeId, json> merged;
    for (const auto& [e, v] : tree.prescribed_lengths()) merged[e]["length"] = v;
    for (const auto& [e, v] : tree.prescribed_weights()) merged[e]["weight"] = v;
    for (const auto& [e, body] : merged) {
      json entry = body;
      entry["n"] = e.n;
      entry["k"] = e.k;
      perts.push_back(entry);
    }
    j["perturbations"] = perts;
  }
  return j;
}

TreeTopology tree_from_json(const json& j) {
  TreeParams params;
  params.p = j.at("p").get<int>();
  params.ell = j.at("ell").get<double>();
  params.alpha = j.at("alpha").get<double>();
  const int depth = j.at("depth").get<int>();
  if (!j.contains("perturbations")) return TreeTopology::geometric(params, depth);
  std::map<EdgeId, double> lengths, weights;
  for (const auto& entry : j.at("perturbations")) {
    const EdgeId e{entry.at("n").get<int>(), entry.at("k").get<std::int64_t>()};
    if (entry.contains("length")) lengths[e] = entry.at("length").get<double>();
    if (entry.contains("weight")) weights[e] = entry.at("weight").get<double>();
  }
  return TreeTopology::perturbed(params, depth, lengths, weights);
}

json tree_function_to_json(const TreeFunction& f) {
  json j;
  j["tree"] = tree_to_json(*f.tree());
  j["samples_per_edge"] = f.samples_per_edge();
  json edges = json::array();
  const auto& tree = *f.tree();
  for (std::int64_t i = 0; i < tree.edge_count(); ++i) {
    const EdgeId e = tree.edge_at(i);
    json entry;
    entry["n"] = e.n;
    entry["k"] = e.k;
    json re = json::array(), im = json::array();
    for (int q = 0; q < f.samples_per_edge(); ++q) {
      re.push_back(f.sample(e, q).real());
      im.push_back(f.sample(e, q).imag());
    }
    entry["re"] = re;
    entry["im"] = im;
    edges.push_back(entry);
  }
  j["edges"] = edges;
  return j;
}

TreeFunction tree_function_from_json(const json& j) {
  auto tree = std::make_shared<TreeTopology>(tree_from_json(j.at("tree")));
  const int m = j.at("samples_per_edge").get<int>();
  std::vector<std::vector<Complex>> values(std::size_t(tree->edge_count()));
  for (const auto& entry : j.at("edges")) {
    const EdgeId e{entry.at("n").get<int>(), entry.at("k").get<std::int64_t>()};
    const auto& re = entry.at("re");
    const auto& im = entry.at("im");
    if (int(re.size()) != m || int(im.size()) != m)
      throw std::invalid_argument("tree_function_from_json: wrong sample count");
    auto& row = values[std::size_t(tree->edge_index(e))];
    row.resize(std::size_t(m));
    for (int q = 0; q < m; ++q)
      row[std::size_t(q)] = Complex(re[std::size_t(q)].get<double>(),
                                    im[std::size_t(q)].get<double>());
  }
  return TreeFunction::from_samples(std::move(tree), m, std::move(values));
}

json trace_to_json(const TraceCoefficients& coeffs) {
  json j = json::array();
  for (const auto& [z, a] : coeffs.entries) {
    json entry;
    if (z.is_rad())
      entry["z"] = "rad";
    else
      entry["z"] = json::array({z.nu, z.k, z.s});
    entry["re"] = a.real();
    entry["im"] = a.imag();
    j.push_back(entry);
  }
  return j;
}

TraceCoefficients trace_from_json(const json& j) {
  TraceCoefficients out;
  for (const auto& entry : j) {
    SymmetryIndex z = SymmetryIndex::rad();
    if (!entry.at("z").is_string()) {
      const auto& t = entry.at("z");
      z = SymmetryIndex::triple(t.at(0).get<int>(), t.at(1).get<std::int64_t>(),
                                t.at(2).get<int>());
    }
    out.entries[z] = Complex(entry.at("re").get<double>(), entry.at("im").get<double>());
  }
  return out;
}

json decomposition_to_json(const Decomposition& dec) {
  json j;
  j["d"] = dec.dim();
  j["p"] = dec.p();
  j["depth"] = dec.depth();
  json cells = json::array();
  for (int n = 0; n <= dec.depth(); ++n)
    for (std::int64_t k = 0; k < dec.cells_at(n); ++k) {
      const Cell c = dec.cell(n, k);
      json entry;
      entry["n"] = n;
      entry["k"] = k;
      entry["lo"] = c.lo;
      entry["hi"] = c.hi;
      cells.push_back(entry);
    }
  j["cells"] = cells;
  return j;
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);  // LF endings everywhere
  if (!out) throw std::runtime_error("cannot open for writing: " + path);
  return out;
}

}  // namespace

void write_vertex_values_csv(const std::string& path, const TreeFunction& f, int N) {
  auto out = open_out(path);
  out << "N,K,re,im\n";
  const auto values = vertex_values(f, N);
  for (std::size_t k = 0; k < values.size(); ++k)
    out << N << ',' << k << ',' << csv_number(values[k].real()) << ','
        << csv_number(values[k].imag()) << '\n';
}

void write_pcf_csv(const std::string& path, const PiecewiseConstantFn& g) {
  auto out = open_out(path);
  out << "k,re,im\n";
  for (std::size_t k = 0; k < g.values.size(); ++k)
    out << k << ',' << csv_number(g.values[k].real()) << ','
        << csv_number(g.values[k].imag()) << '\n';
}

void write_gram_csv(const std::string& path, const Eigen::MatrixXcd& gram) {
  auto out = open_out(path);
  out << "row,col,re,im\n";
  for (Eigen::Index i = 0; i < gram.rows(); ++i)
    for (Eigen::Index j = 0; j < gram.cols(); ++j)
      out << i << ',' << j << ',' << csv_number(gram(i, j).real()) << ','
          << csv_number(gram(i, j).imag()) << '\n';
}

}  // namespace treetrace
