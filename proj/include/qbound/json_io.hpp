// JSON serialization boundary. Structural problems (unreadable files, wrong
// types, inconsistent shapes) throw parse_error; semantic validation (PSD,
// normalization, sub-POVM sums) stays with the module validators so the CLI
// can distinguish unparseable input from invalid mathematics.
//
// Matrix format: {"rows": r, "cols": c, "data": [[re, im], ...]} row-major,
// with an optional "dims" list naming tensor factor dimensions.
#pragma once

#include <json.hpp>
#include <string>

#include "qbound/channel.hpp"
#include "qbound/iterate.hpp"
#include "qbound/measure.hpp"
#include "qbound/overlap.hpp"
#include "qbound/report.hpp"

namespace qbound {

struct bipartite_state {
  Eigen::Index dim_a = 0;
  Eigen::Index dim_b = 0;
  cmat rho;
};

nlohmann::json load_json_file(const std::string& path);

cmat matrix_from_json(const nlohmann::json& j);
nlohmann::json matrix_to_json(const cmat& a);
// Matrix object with a single column.
cvec vector_from_json(const nlohmann::json& j);

ensemble ensemble_from_json(const nlohmann::json& j);
nlohmann::json ensemble_to_json(const ensemble& e);

povm povm_from_json(const nlohmann::json& j);
nlohmann::json povm_to_json(const povm& m);

cp_map cp_map_from_json(const nlohmann::json& j);
nlohmann::json cp_map_to_json(const cp_map& a);

overlap_instance overlap_from_json(const nlohmann::json& j);
nlohmann::json overlap_to_json(const overlap_instance& inst);

bipartite_state bipartite_from_json(const nlohmann::json& j);

nlohmann::json bound_report_to_json(const bound_report& r);
nlohmann::json trace_to_json(const iteration_trace& t);
nlohmann::json min_entropy_to_json(const min_entropy_report& r);

}  // namespace qbound
