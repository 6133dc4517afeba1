#include "qbound/json_io.hpp"

#include <fstream>

namespace qbound {

using nlohmann::json;

namespace {

const json& field(const json& j, const char* key) {
  if (!j.is_object() || !j.contains(key))
    throw parse_error(std::string("missing field '") + key + "'");
  return j.at(key);
}

Eigen::Index index_field(const json& j, const char* key) {
  const json& v = field(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 1)
    throw parse_error(std::string("field '") + key +
                      "' must be a positive integer");
  return static_cast<Eigen::Index>(v.get<long long>());
}

void check_shape(const cmat& a, Eigen::Index rows, Eigen::Index cols,
                 const char* what) {
  if (a.rows() != rows || a.cols() != cols)
    throw parse_error(std::string(what) +
                      " does not match the declared dimensions");
}

}  // namespace

json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw parse_error("cannot open file: " + path);
  try {
    return json::parse(in);
  } catch (const json::exception& ex) {
    throw parse_error(path + ": " + ex.what());
  }
}

cmat matrix_from_json(const json& j) {
  const Eigen::Index rows = index_field(j, "rows");
  const Eigen::Index cols = index_field(j, "cols");
  const json& data = field(j, "data");
  if (!data.is_array() ||
      static_cast<Eigen::Index>(data.size()) != rows * cols)
    throw parse_error("matrix data length does not match rows * cols");
  cmat a(rows, cols);
  for (Eigen::Index i = 0; i < rows * cols; ++i) {
    const json& entry = data.at(static_cast<std::size_t>(i));
    if (!entry.is_array() || entry.size() != 2 || !entry.at(0).is_number() ||
        !entry.at(1).is_number())
      throw parse_error("matrix entries must be [re, im] pairs");
    a(i / cols, i % cols) = cx(entry.at(0).get<double>(),
                               entry.at(1).get<double>());
  }
  return a;
}

json matrix_to_json(const cmat& a) {
  json data = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j)
      data.push_back({a(i, j).real(), a(i, j).imag()});
  return json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", data}};
}

cvec vector_from_json(const json& j) {
  const cmat a = matrix_from_json(j);
  if (a.cols() != 1) throw parse_error("expected a single-column matrix");
  return a.col(0);
}

ensemble ensemble_from_json(const json& j) {
  ensemble e;
  e.dim = index_field(j, "dim");
  const json& states = field(j, "states");
  if (!states.is_array() || states.empty())
    throw parse_error("'states' must be a non-empty list");
  for (const json& s : states) {
    e.states.push_back(matrix_from_json(s));
    check_shape(e.states.back(), e.dim, e.dim, "ensemble state");
  }
  return e;
}

json ensemble_to_json(const ensemble& e) {
  json states = json::array();
  for (const cmat& s : e.states) states.push_back(matrix_to_json(s));
  return json{{"dim", e.dim}, {"states", states}};
}

povm povm_from_json(const json& j) {
  povm m;
  m.dim = index_field(j, "dim");
  const json& elements = field(j, "elements");
  if (!elements.is_array() || elements.empty())
    throw parse_error("'elements' must be a non-empty list");
  for (const json& el : elements) {
    m.elements.push_back(matrix_from_json(el));
    check_shape(m.elements.back(), m.dim, m.dim, "povm element");
  }
  return m;
}

json povm_to_json(const povm& m) {
  json elements = json::array();
  for (const cmat& el : m.elements) elements.push_back(matrix_to_json(el));
  return json{{"dim", m.dim}, {"elements", elements}};
}

cp_map cp_map_from_json(const json& j) {
  cp_map a;
  a.dim_in = index_field(j, "dim_in");
  a.dim_out = index_field(j, "dim_out");
  const json& kraus = field(j, "kraus");
  if (!kraus.is_array() || kraus.empty())
    throw parse_error("'kraus' must be a non-empty list");
  for (const json& f : kraus) {
    a.kraus.push_back(matrix_from_json(f));
    check_shape(a.kraus.back(), a.dim_out, a.dim_in, "kraus operator");
  }
  return a;
}

json cp_map_to_json(const cp_map& a) {
  json kraus = json::array();
  for (const cmat& f : a.kraus) kraus.push_back(matrix_to_json(f));
  return json{{"dim_in", a.dim_in}, {"dim_out", a.dim_out}, {"kraus", kraus}};
}

overlap_instance overlap_from_json(const json& j) {
  overlap_instance inst;
  inst.dim_k = index_field(j, "dim_k");
  inst.dim_h = index_field(j, "dim_h");
  inst.dim_l = index_field(j, "dim_l");
  inst.mu = matrix_from_json(field(j, "mu"));
  check_shape(inst.mu, inst.dim_k * inst.dim_h, inst.dim_k * inst.dim_h, "mu");
  inst.phi = vector_from_json(field(j, "phi"));
  if (inst.phi.size() != inst.dim_l * inst.dim_h)
    throw parse_error("phi does not match the declared dimensions");
  return inst;
}

json overlap_to_json(const overlap_instance& inst) {
  cmat phi_col(inst.phi.size(), 1);
  phi_col.col(0) = inst.phi;
  return json{{"dim_k", inst.dim_k}, {"dim_h", inst.dim_h},
              {"dim_l", inst.dim_l}, {"mu", matrix_to_json(inst.mu)},
              {"phi", matrix_to_json(phi_col)}};
}

bipartite_state bipartite_from_json(const json& j) {
  const json& dims = field(j, "dims");
  if (!dims.is_array() || dims.size() != 2)
    throw parse_error("'dims' must be a list of two factor dimensions");
  bipartite_state s;
  if (!dims.at(0).is_number_integer() || !dims.at(1).is_number_integer() ||
      dims.at(0).get<long long>() < 1 || dims.at(1).get<long long>() < 1)
    throw parse_error("'dims' entries must be positive integers");
  s.dim_a = static_cast<Eigen::Index>(dims.at(0).get<long long>());
  s.dim_b = static_cast<Eigen::Index>(dims.at(1).get<long long>());
  s.rho = matrix_from_json(field(j, "rho"));
  if (s.rho.rows() != s.dim_a * s.dim_b)
    throw parse_error("'rho' does not match the factor dimensions");
  return s;
}

json bound_report_to_json(const bound_report& r) {
  json out{{"lambda", r.lambda},
           {"lambda_sq", r.lambda_sq},
           {"achieved", r.achieved},
           {"upper", r.upper}};
  out["oracle_optimal"] = r.oracle_optimal ? json(*r.oracle_optimal)
                                           : json(nullptr);
  return out;
}

json trace_to_json(const iteration_trace& t) {
  return json{{"seminorms", t.seminorms},
              {"lambda_values", t.lambda_values},
              {"steps", t.steps},
              {"converged", t.converged},
              {"stop_reason", t.stop_reason}};
}

json min_entropy_to_json(const min_entropy_report& r) {
  return json{{"s", r.s}, {"lower", r.lower}, {"upper", r.upper}};
}

}  // namespace qbound
