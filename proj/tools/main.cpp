// Command-line front door: discrimination bounds, monotone iterations,
// channel reversal, and conditional min-entropy bounds over JSON files.
// Exit codes: 0 success, 1 failed validation or violated invariant,
// 2 unparseable input or bad usage.
#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "qbound/channel.hpp"
#include "qbound/iterate.hpp"
#include "qbound/json_io.hpp"
#include "qbound/measure.hpp"
#include "qbound/overlap.hpp"
#include "qbound/random.hpp"

namespace {

using nlohmann::json;
using namespace qbound;

std::string fmt6(double x) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6g", x);
  return buf;
}

void write_output(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out_path);
  if (!f) throw error("cannot write output file: " + out_path);
  f << text;
}

// key,value rows in insertion order for scalar fields.
std::string csv_rows(const std::vector<std::pair<std::string, std::string>>& rows) {
  std::ostringstream out;
  out << "quantity,value\n";
  for (const auto& [k, v] : rows) out << k << ',' << v << '\n';
  return out.str();
}

std::string trace_csv(const iteration_trace& t,
                      const std::vector<std::pair<std::string, std::string>>& summary) {
  std::ostringstream out;
  out << csv_rows(summary) << "\nstep,seminorm,lambda\n";
  for (std::size_t i = 0; i < t.seminorms.size(); ++i)
    out << i << ',' << fmt6(t.seminorms[i]) << ',' << fmt6(t.lambda_values[i])
        << '\n';
  return out.str();
}

double parse_param(const std::string& params, const std::string& key,
                   const std::string& spec) {
  std::stringstream ss(params);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto eq = item.find('=');
    if (eq == std::string::npos)
      throw parse_error("bad parameter '" + item + "' in spec: " + spec);
    if (item.substr(0, eq) == key) {
      try {
        std::size_t used = 0;
        const double v = std::stod(item.substr(eq + 1), &used);
        if (used != item.size() - eq - 1) throw std::invalid_argument("trail");
        return v;
      } catch (const std::exception&) {
        throw parse_error("bad value for '" + key + "' in spec: " + spec);
      }
    }
  }
  throw parse_error("missing parameter '" + key + "' in spec: " + spec);
}

cmat named_qubit_unitary(const std::string& name) {
  cmat u(2, 2);
  const double r = 1.0 / std::sqrt(2.0);
  if (name == "H")
    u << r, r, r, -r;
  else if (name == "X")
    u << 0, 1, 1, 0;
  else if (name == "Y")
    u << 0, cx(0, -1), cx(0, 1), 0;
  else if (name == "Z")
    u << 1, 0, 0, -1;
  else if (name == "I")
    u << 1, 0, 0, 1;
  else
    throw parse_error("unknown unitary name: " + name +
                      " (expected H, X, Y, Z, or I)");
  return u;
}

cp_map parse_channel_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string kind = spec.substr(0, colon);
    const std::string params = spec.substr(colon + 1);
    if (kind == "depolarizing")
      return depolarizing(parse_param(params, "p", spec),
                          static_cast<Eigen::Index>(
                              parse_param(params, "d", spec)));
    if (kind == "amplitude-damping" || kind == "amplitude_damping")
      return amplitude_damping(parse_param(params, "gamma", spec));
    if (kind == "unitary") return unitary_channel(named_qubit_unitary(params));
    if (kind != "file") throw parse_error("unknown channel kind: " + kind);
    return cp_map_from_json(load_json_file(params));
  }
  return cp_map_from_json(load_json_file(spec));
}

cmat parse_rho_spec(const std::string& spec) {
  const auto colon = spec.find(':');
  if (colon != std::string::npos) {
    const std::string kind = spec.substr(0, colon);
    if (kind == "maximally-mixed" || kind == "maximally_mixed") {
      const auto d = static_cast<Eigen::Index>(
          parse_param(spec.substr(colon + 1), "d", spec));
      if (d < 1) throw parse_error("bad dimension in spec: " + spec);
      return cmat::Identity(d, d) / static_cast<double>(d);
    }
    if (kind != "file") throw parse_error("unknown state kind: " + kind);
    return matrix_from_json(load_json_file(spec.substr(colon + 1)));
  }
  return matrix_from_json(load_json_file(spec));
}

int cmd_discriminate(const std::string& path, const std::string& format,
                     const std::string& out_path) {
  const ensemble e = ensemble_from_json(load_json_file(path));
  validate_ensemble(e);
  const bound_report hc = holevo_curlander_bounds(e);
  const double p_pgm = p_succ(e, pretty_good_measurement(e).elements);

  if (format == "csv") {
    std::vector<std::pair<std::string, std::string>> rows = {
        {"lambda", fmt6(hc.lambda)},
        {"lambda_sq", fmt6(hc.lambda_sq)},
        {"p_qw", fmt6(hc.achieved)},
        {"p_pgm", fmt6(p_pgm)},
        {"upper", fmt6(hc.upper)}};
    if (hc.oracle_optimal)
      rows.emplace_back("helstrom", fmt6(*hc.oracle_optimal));
    write_output(csv_rows(rows), out_path);
  } else {
    json out = bound_report_to_json(hc);
    out["p_qw"] = hc.achieved;
    out["p_pgm"] = p_pgm;
    if (hc.oracle_optimal) out["helstrom"] = *hc.oracle_optimal;
    write_output(out.dump(2) + "\n", out_path);
  }
  return 0;
}

// The recorded seminorm trace must never decrease; a decrease beyond the
// tolerance means the computation violated its own guarantee.
void audit_trace(const iteration_trace& t) {
  for (std::size_t i = 1; i < t.seminorms.size(); ++i)
    if (t.seminorms[i] < t.seminorms[i - 1] - 1e-12)
      throw invariant_violation("iteration trace decreased at step " +
                                std::to_string(i));
}

int cmd_iterate(const std::string& path, const std::string& start_spec,
                const run_config& cfg, const std::string& format,
                const std::string& out_path) {
  const json input = load_json_file(path);

  if (input.contains("states")) {
    const ensemble e = ensemble_from_json(input);
    validate_ensemble(e);
    std::vector<cmat> start;
    if (start_spec.empty() || start_spec == "identity") {
      start.assign(e.states.size(), cmat::Identity(e.dim, e.dim));
    } else if (start_spec == "qw") {
      start = quadratic_measurement(e).elements;
    } else if (start_spec == "pgm") {
      start = pretty_good_measurement(e).elements;
    } else {
      start = povm_from_json(load_json_file(start_spec)).elements;
    }
    const povm_iteration_result res = iterate_povm_to_convergence(e, start, cfg);
    audit_trace(res.trace);
    const double final_p = p_succ(e, res.measurement.elements);
    if (format == "csv") {
      write_output(trace_csv(res.trace,
                             {{"steps", std::to_string(res.trace.steps)},
                              {"converged", res.trace.converged ? "1" : "0"},
                              {"stop_reason", res.trace.stop_reason},
                              {"final_p_succ", fmt6(final_p)}}),
                   out_path);
    } else {
      json out{{"trace", trace_to_json(res.trace)},
               {"final_p_succ", final_p},
               {"measurement", povm_to_json(res.measurement)}};
      write_output(out.dump(2) + "\n", out_path);
    }
    return 0;
  }

  if (input.contains("mu")) {
    const overlap_instance inst = overlap_from_json(input);
    validate_overlap_instance(inst);
    cmat start;
    if (start_spec.empty() || start_spec == "guess")
      start = guess_dilation(inst);
    else
      start = matrix_from_json(load_json_file(start_spec));
    const overlap_iteration_result res =
        overlap_iterate_to_convergence(inst, start, cfg);
    audit_trace(res.trace);
    const cp_map induced = contraction_to_map(res.u, inst.dim_k, inst.dim_l);
    const double final_overlap = overlap_value(inst, induced);
    if (format == "csv") {
      write_output(trace_csv(res.trace,
                             {{"steps", std::to_string(res.trace.steps)},
                              {"converged", res.trace.converged ? "1" : "0"},
                              {"stop_reason", res.trace.stop_reason},
                              {"final_overlap", fmt6(final_overlap)}}),
                   out_path);
    } else {
      json out{{"trace", trace_to_json(res.trace)},
               {"final_overlap", final_overlap},
               {"map", cp_map_to_json(induced)}};
      write_output(out.dump(2) + "\n", out_path);
    }
    return 0;
  }

  throw parse_error(path + ": expected an ensemble ('states') or an overlap "
                           "instance ('mu')");
}

int cmd_reverse(const std::string& channel_spec, const std::string& rho_spec,
                bool dump_choi, const std::string& format,
                const std::string& out_path) {
  const cp_map a = parse_channel_spec(channel_spec);
  validate_quantum_operation(a);
  const cmat rho = parse_rho_spec(rho_spec);

  const bound_report r = recovery_bounds(a, rho);
  const cp_map qr = quadratic_recovery(a, rho);
  const cp_map bk = barnum_knill_recovery(a, rho);
  const cp_map tc = transpose_channel(a);
  const double f_bk = entanglement_fidelity(rho, compose(bk, a));
  const double f_tc = entanglement_fidelity(rho, compose(tc, a));

  if (format == "csv") {
    write_output(csv_rows({{"lambda", fmt6(r.lambda)},
                           {"lambda_sq", fmt6(r.lambda_sq)},
                           {"achieved_qr", fmt6(r.achieved)},
                           {"upper", fmt6(r.upper)},
                           {"f_barnum_knill", fmt6(f_bk)},
                           {"f_transpose", fmt6(f_tc)}}),
                 out_path);
  } else {
    json out = bound_report_to_json(r);
    out["achieved_qr"] = r.achieved;
    out["f_barnum_knill"] = f_bk;
    out["f_transpose"] = f_tc;
    if (dump_choi) out["recovery_choi"] = matrix_to_json(choi(qr).m);
    write_output(out.dump(2) + "\n", out_path);
  }
  return 0;
}

int cmd_minentropy(const std::string& path, std::vector<double> s_values,
                   const std::string& format, const std::string& out_path) {
  const bipartite_state st = bipartite_from_json(load_json_file(path));
  if (s_values.empty()) s_values = {0.0, 0.25, 0.5, 0.75, 1.0};

  std::vector<min_entropy_report> reports;
  for (double s : s_values)
    reports.push_back(min_entropy_bounds(st.rho, st.dim_a, st.dim_b, s));

  double best_lower = reports.front().lower;
  double best_upper = reports.front().upper;
  for (const auto& r : reports) {
    best_lower = std::max(best_lower, r.lower);
    best_upper = std::min(best_upper, r.upper);
  }

  if (format == "csv") {
    std::ostringstream out;
    out << "s,lower,upper\n";
    for (const auto& r : reports)
      out << fmt6(r.s) << ',' << fmt6(r.lower) << ',' << fmt6(r.upper) << '\n';
    out << "\nquantity,value\nbest_lower," << fmt6(best_lower)
        << "\nbest_upper," << fmt6(best_upper) << '\n';
    write_output(out.str(), out_path);
  } else {
    json rows = json::array();
    for (const auto& r : reports) rows.push_back(min_entropy_to_json(r));
    json out{{"reports", rows},
             {"best_lower", best_lower},
             {"best_upper", best_upper}};
    write_output(out.dump(2) + "\n", out_path);
  }
  return 0;
}

void check(bool ok, const std::string& name) {
  if (!ok) throw invariant_violation("self-test failed: " + name);
  std::cout << "ok " << name << "\n";
}

int cmd_selftest(std::uint64_t seed) {
  rng gen(seed);

  {
    const cmat g = gen.ginibre(4, 4);
    const cmat a = g + g.adjoint();
    const spectral_decomposition ed = hermitian_eig(a);
    const cmat back = ed.eigenvectors *
                      ed.eigenvalues.cast<cx>().asDiagonal() *
                      ed.eigenvectors.adjoint();
    check(operator_norm(back - a) < 1e-10 * std::max(1.0, operator_norm(a)),
          "spectral reconstruction");
    const cmat root = sqrt_psd(a);
    check(operator_norm(root * root - pseudo_power(a, 1.0)) < 1e-10,
          "pseudo square root");
    const cmat b = gen.ginibre(3, 3);
    const cmat c = gen.ginibre(4, 3);
    const cvec lhs = kron(a, b.conjugate()) * double_ket(c);
    const cvec rhs = double_ket(a * c * b.adjoint());
    check((lhs - rhs).norm() < 1e-9 * std::max(1.0, rhs.norm()),
          "double ket product rule");
    const cmat y = gen.density(3);
    check(operator_norm(partial_trace(kron(a, y), {4, 3}, {0}) - a) < 1e-10,
          "partial trace of a product");
  }

  {
    ensemble e;
    e.dim = 3;
    const auto priors = gen.simplex(3);
    for (double p : priors) e.states.push_back(p * gen.density(3));
    const bound_report r = holevo_curlander_bounds(e);
    check(r.lambda_sq <= r.achieved + 1e-9 && r.achieved <= r.upper + 1e-9,
          "discrimination sandwich");
  }

  {
    rng local(seed + 1);
    cp_map a;
    a.dim_in = 3;
    a.dim_out = 2;
    const cmat iso = local.isometry(6, 3);
    for (Eigen::Index j = 0; j < 3; ++j) a.kraus.push_back(iso.middleRows(2 * j, 2));
    const cmat rho = local.density(3);
    const stinespring_dilation d = canonical_stinespring(a);
    const cmat big = d.u * rho * d.u.adjoint();
    const cmat back =
        partial_trace(big, {d.dim_out, d.dim_env}, {0});
    check(trace_norm(back - qbound::apply(a, rho)) < 1e-10, "dilation round trip");
    const cp_map again = map_from_choi(choi(a));
    check(trace_norm(choi(again).m - choi(a).m) < 1e-10, "choi round trip");
    const bound_report r = recovery_bounds(a, rho);
    check(r.lambda_sq <= r.achieved + 1e-9 && r.achieved <= r.upper + 1e-9,
          "recovery sandwich");
  }

  {
    rng local(seed + 2);
    overlap_instance inst;
    inst.dim_k = 2;
    inst.dim_h = 2;
    inst.dim_l = 2;
    const cmat g = local.ginibre(4, 4);
    inst.mu = g * g.adjoint();
    inst.phi = local.pure_state(4);
    const bound_report r = overlap_bounds(inst);
    check(r.lambda_sq <= r.achieved + 1e-9 && r.achieved <= r.upper + 1e-9,
          "overlap sandwich");

    ensemble e;
    e.dim = 2;
    const auto priors = local.simplex(2);
    for (double p : priors) e.states.push_back(p * local.density(2));
    const overlap_instance emb = ensemble_to_overlap(e);
    const povm m = pretty_good_measurement(e);
    const double lhs = 2.0 * overlap_value(emb, measurement_channel(m));
    check(std::abs(lhs - p_succ(e, m.elements)) < 1e-10,
          "overlap embeds discrimination");
  }

  {
    const cmat sigma = rng(seed + 3).density(3);
    const cmat rho = kron(cmat::Identity(2, 2) / 2.0, sigma);
    const min_entropy_report r = min_entropy_bounds(rho, 2, 3, 0.5);
    check(std::abs(r.upper - 1.0) < 1e-9 && r.lower <= 1e-9,
          "min-entropy of a product state");
  }

  {
    rng local(seed + 4);
    ensemble e;
    e.dim = 2;
    const auto priors = local.simplex(3);
    for (double p : priors) e.states.push_back(p * local.density(2));
    run_config cfg;
    cfg.max_iters = 25;
    const auto res = iterate_povm_to_convergence(
        e, std::vector<cmat>(3, cmat::Identity(2, 2)), cfg);
    bool monotone = true;
    for (std::size_t i = 1; i < res.trace.seminorms.size(); ++i)
      monotone &= res.trace.seminorms[i] >= res.trace.seminorms[i - 1] - 1e-12;
    check(monotone, "measurement iteration is monotone");

    rw_functional f;
    f.dim_in = 2;
    f.dim_out = 2;
    const cmat gf = local.ginibre(4, 4);
    f.f = gf * gf.adjoint();
    cp_map start;
    start.dim_in = 2;
    start.dim_out = 2;
    start.kraus = {local.unitary(2)};
    const auto rres = rw_iterate_to_convergence(f, start, cfg);
    monotone = true;
    for (std::size_t i = 1; i < rres.trace.seminorms.size(); ++i)
      monotone &= rres.trace.seminorms[i] >= rres.trace.seminorms[i - 1] - 1e-12;
    check(monotone, "weighted operation iteration is monotone");
  }

  std::cout << "all checks passed\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-sided bounds and monotone iterations for measurement, "
               "channel reversal, and overlap problems"};
  app.require_subcommand(1);

  std::string format = "json";
  std::string out_path;
  std::string input_path;
  std::string start_spec;
  std::string channel_spec;
  std::string rho_spec;
  std::vector<double> s_values;
  bool dump_choi = false;
  std::uint64_t seed = 0;
  run_config cfg;

  auto add_io = [&](CLI::App* sub) {
    sub->add_option("--format", format, "Output format: json or csv")
        ->check(CLI::IsMember({"json", "csv"}));
    sub->add_option("--out", out_path, "Write output to this file");
  };

  CLI::App* disc = app.add_subcommand(
      "discriminate", "Success-probability bounds for an ensemble");
  disc->add_option("ensemble", input_path, "Ensemble JSON file")->required();
  add_io(disc);

  CLI::App* iter = app.add_subcommand(
      "iterate", "Run the monotone iteration on an ensemble or overlap instance");
  iter->add_option("input", input_path, "Ensemble or overlap-instance JSON file")
      ->required();
  iter->add_option("--start", start_spec,
                   "identity | qw | pgm | guess | start file");
  iter->add_option("--tol", cfg.tol, "Stop when the seminorm gain drops below this");
  iter->add_option("--max-iters", cfg.max_iters, "Iteration budget");
  add_io(iter);

  CLI::App* rev = app.add_subcommand(
      "reverse", "Approximate reversal of a channel with fidelity bounds");
  rev->add_option("--channel", channel_spec,
                  "depolarizing:p=..,d=.. | amplitude-damping:gamma=.. | "
                  "unitary:H | file:path | path")
      ->required();
  rev->add_option("--rho", rho_spec, "maximally-mixed:d=.. | file:path | path")
      ->required();
  rev->add_flag("--dump-choi", dump_choi,
                "Include the recovery Choi matrix in JSON output");
  add_io(rev);

  CLI::App* mine = app.add_subcommand(
      "minentropy", "Conditional min-entropy bounds for a bipartite state");
  mine->add_option("state", input_path, "Bipartite state JSON file")->required();
  mine->add_option("--s", s_values,
                   "Exponent in [0, 1]; repeatable (default grid 0..1 in "
                   "quarter steps)");
  add_io(mine);

  CLI::App* self = app.add_subcommand("selftest", "Run seeded invariant checks");
  self->add_option("--seed", seed, "Seed for the generated instances");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (disc->parsed()) return cmd_discriminate(input_path, format, out_path);
    if (iter->parsed())
      return cmd_iterate(input_path, start_spec, cfg, format, out_path);
    if (rev->parsed())
      return cmd_reverse(channel_spec, rho_spec, dump_choi, format, out_path);
    if (mine->parsed())
      return cmd_minentropy(input_path, s_values, format, out_path);
    if (self->parsed()) return cmd_selftest(seed);
  } catch (const parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}
