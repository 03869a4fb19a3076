#pragma once

#include <nlohmann/json.hpp>
#include <string>

#include "treetrace/decomposition.hpp"
#include "treetrace/trace.hpp"
#include "treetrace/tree_function.hpp"

namespace treetrace {

using nlohmann::json;

/// {"p":2,"ell":0.5,"alpha":0.5,"depth":8,
///  "perturbations":[{"n":1,"k":0,"length":0.6,"weight":0.55}]}
json tree_to_json(const TreeTopology& tree);
TreeTopology tree_from_json(const json& j);

/// Edge-indexed sample arrays.
json tree_function_to_json(const TreeFunction& f);
TreeFunction tree_function_from_json(const json& j);

/// [{"z":"rad","re":...,"im":...},{"z":[n,k,s],"re":...,"im":...}]
json trace_to_json(const TraceCoefficients& coeffs);
TraceCoefficients trace_from_json(const json& j);

/// Cells with lo/hi, enumerated to the stated depth.
json decomposition_to_json(const Decomposition& dec);

/// CSV with columns N,K,re,im.
void write_vertex_values_csv(const std::string& path, const TreeFunction& f, int N);

/// CSV with columns k,re,im for one level of a piecewise constant.
void write_pcf_csv(const std::string& path, const PiecewiseConstantFn& g);

/// CSV with columns row,col,re,im.
void write_gram_csv(const std::string& path, const Eigen::MatrixXcd& gram);

/// Number formatting shared by every CSV writer: '.' decimal separator,
/// shortest round-trip representation.
std::string csv_number(double v);

}  // namespace treetrace
