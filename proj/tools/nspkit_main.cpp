// SPDX-License-Identifier: Apache-2.0
//
// nspkit command line: feasibility checks, witness construction, stability
// certificates, norm-preserving dilations, quadratic interpolation and
// multiplier searches, plus a deterministic instance generator and a
// re-verifier for everything the tool emits.
#include <cstdio>
#include <exception>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "nspkit/dilation.hpp"
#include "nspkit/errors.hpp"
#include "nspkit/generator.hpp"
#include "nspkit/io.hpp"
#include "nspkit/linalg.hpp"
#include "nspkit/projection.hpp"
#include "nspkit/quadratic.hpp"
#include "nspkit/rng.hpp"
#include "nspkit/stability.hpp"
#include "nspkit/types.hpp"

namespace {

using nlohmann::json;
using namespace nspkit;

constexpr int kExitFeasible = 0;
constexpr int kExitInfeasible = 1;
constexpr int kExitUsage = 2;
constexpr int kExitBreakdown = 3;

struct CommonOpts {
  std::optional<double> tol_rank;
  std::optional<double> tol_psd;
  std::optional<double> tol_residual;
  bool as_json = false;
  std::string out_path;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--tol-rank", opts.tol_rank, "rank decision tolerance");
  cmd->add_option("--tol-psd", opts.tol_psd, "definiteness slack");
  cmd->add_option("--tol-residual", opts.tol_residual,
                  "witness re-verification slack");
  cmd->add_flag("--json", opts.as_json, "print the JSON report to stdout");
  cmd->add_option("--out", opts.out_path, "write the JSON report to a file");
}

Tolerances resolve_tolerances(const CommonOpts& opts) {
  Tolerances tol = tolerances_from_env();
  if (opts.tol_rank) tol.rank = *opts.tol_rank;
  if (opts.tol_psd) tol.psd = *opts.tol_psd;
  if (opts.tol_residual) tol.residual = *opts.tol_residual;
  return tol;
}

void emit(const json& report, const CommonOpts& opts,
          const std::string& human) {
  if (!opts.out_path.empty()) {
    write_text_file(opts.out_path, report.dump(2) + "\n");
  }
  if (opts.as_json) {
    std::cout << report.dump(2) << "\n";
  } else {
    std::cout << human;
  }
}

Vector read_vector_file(const std::string& path) {
  Matrix m = read_matrix_file(path);
  if (m.cols() == 1) return m.col(0);
  if (m.rows() == 1) return m.row(0).transpose();
  if (m.size() == 0) return Vector(0);
  throw ParseError("expected a vector in " + path);
}

json certificate_shell(const std::string& kind, const Tolerances& tol) {
  json cert;
  cert["kind"] = kind;
  cert["tool_version"] = kToolVersion;
  cert["tolerances"] = tolerances_to_json(tol);
  cert["witness"] = nullptr;
  return cert;
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  std::string q_path, u_path, v_path;
  CommonOpts common;
};

json feasibility_to_json(const FeasibilityReport& rep) {
  json j;
  j["feasible"] = rep.feasible;
  j["kernel_condition_u"] = {{"holds", rep.kernel_cond_u.holds},
                             {"min_eig", rep.kernel_cond_u.min_eig}};
  j["kernel_condition_v"] = {{"holds", rep.kernel_cond_v.holds},
                             {"min_eig", rep.kernel_cond_v.min_eig}};
  j["coupling"] = {{"holds", rep.coupling_holds},
                   {"residual", rep.coupling_residual}};
  j["image_intersection_trivial"] = rep.helmersson_holds;
  return j;
}

int cmd_check(const CheckArgs& args) {
  const Tolerances tol = resolve_tolerances(args.common);
  const ProjectionProblem prob(
      SymMatrix(read_matrix_file(args.q_path), tol.sym),
      read_matrix_file(args.u_path), read_matrix_file(args.v_path), tol);
  const FeasibilityReport rep = check_conditions(prob);

  json report = feasibility_to_json(rep);
  report["tool_version"] = kToolVersion;
  report["tolerances"] = tolerances_to_json(tol);

  std::string human;
  human += std::string("feasible: ") + (rep.feasible ? "yes" : "no") + "\n";
  human += "  kernel condition (U): " +
           std::string(rep.kernel_cond_u.holds ? "holds" : "fails") +
           " (min eig " + format_double(rep.kernel_cond_u.min_eig) + ")\n";
  human += "  kernel condition (V): " +
           std::string(rep.kernel_cond_v.holds ? "holds" : "fails") +
           " (min eig " + format_double(rep.kernel_cond_v.min_eig) + ")\n";
  human += "  coupling condition: " +
           std::string(rep.coupling_holds ? "holds" : "fails") +
           " (residual " + format_double(rep.coupling_residual) + ")\n";
  human += "  image intersection trivial: " +
           std::string(rep.helmersson_holds ? "yes" : "no") + "\n";
  emit(report, args.common, human);
  return rep.feasible ? kExitFeasible : kExitInfeasible;
}

// ---------------------------------------------------------------- solve

int cmd_solve(const CheckArgs& args) {
  const Tolerances tol = resolve_tolerances(args.common);
  const Matrix q = read_matrix_file(args.q_path);
  const Matrix u = read_matrix_file(args.u_path);
  const Matrix v = read_matrix_file(args.v_path);
  const ProjectionProblem prob(SymMatrix(q, tol.sym), u, v, tol);

  json cert = certificate_shell("projection", tol);
  cert["problem"] = {{"q", matrix_to_json(prob.q.mat())},
                     {"u", matrix_to_json(u)},
                     {"v", matrix_to_json(v)}};

  const FeasibilityReport rep = check_conditions(prob);
  cert["diagnostics"] = feasibility_to_json(rep);
  if (!rep.feasible) {
    cert["verdict"] = "infeasible";
    emit(cert, args.common, "infeasible\n");
    return kExitInfeasible;
  }

  const EliminationWitness wit = construct_witness(prob);
  cert["verdict"] = "feasible";
  cert["witness"] = matrix_to_json(wit.x);
  cert["diagnostics"]["residual_min_eig"] = wit.residual_min_eig;
  cert["diagnostics"]["residual_scale"] = wit.residual_scale;
  cert["diagnostics"]["alpha"] = wit.blocks.alpha;
  {
    json widths = json::array();
    for (Index w : wit.basis.widths) widths.push_back(w);
    cert["diagnostics"]["partition_widths"] = widths;
  }

  std::string human = "feasible; witness X is " +
                      std::to_string(wit.x.rows()) + "x" +
                      std::to_string(wit.x.cols()) + ", residual min eig " +
                      format_double(wit.residual_min_eig) + "\n";
  emit(cert, args.common, human);
  return kExitFeasible;
}

// ------------------------------------------------------------- stability

struct StabilityArgs {
  std::string a_path;
  std::string form = "p";
  CommonOpts common;
};

int cmd_stability(const StabilityArgs& args) {
  const Tolerances tol = resolve_tolerances(args.common);
  const LtiSystem sys(read_matrix_file(args.a_path));

  json cert = certificate_shell("stability", tol);
  cert["problem"] = {{"a", matrix_to_json(sys.a)}, {"form", args.form}};

  const MarginalStabilityReport rep = is_marginally_stable(sys, tol);
  cert["diagnostics"] = {
      {"spectral_radius", rep.spectral_radius},
      {"unstable_count", rep.unstable.size()},
      {"defective_count", rep.defective.size()},
  };
  if (!rep.marginally_stable) {
    cert["verdict"] = "not-marginally-stable";
    emit(cert, args.common,
         "not marginally stable (radius " +
             format_double(rep.spectral_radius) + ", " +
             std::to_string(rep.defective.size()) +
             " defective unit eigenvalues)\n");
    return kExitInfeasible;
  }

  const StabilityCertificate sc = args.form == "s"
                                      ? certificate_S_form(sys, tol)
                                      : certificate_P_form(sys, tol);
  const CertificateCheck check = verify_certificate(sys, sc, tol);
  cert["verdict"] = "marginally-stable";
  cert["witness"] = {{"x", matrix_to_json(sc.x)},
                     {"gram", matrix_to_json(sc.gram.mat())},
                     {"form", args.form}};
  cert["diagnostics"]["lmi_min_eig"] = sc.lmi_min_eig;
  cert["diagnostics"]["lyapunov_min_eig"] = sc.lyap_min_eig;
  cert["diagnostics"]["x_sigma_ratio"] = check.x_sigma_ratio;

  emit(cert, args.common,
       "marginally stable; " + std::string(args.form == "s" ? "S" : "P") +
           "-form certificate with LMI min eig " +
           format_double(sc.lmi_min_eig) + "\n");
  return kExitFeasible;
}

// ---------------------------------------------------------------- dilate

struct DilateArgs {
  std::string a_path, b_path, c_path;
  CommonOpts common;
};

int cmd_dilate(const DilateArgs& args) {
  const Tolerances tol = resolve_tolerances(args.common);
  const DilationProblem prob(read_matrix_file(args.a_path),
                             read_matrix_file(args.b_path),
                             read_matrix_file(args.c_path), tol);

  json cert = certificate_shell("dilation", tol);
  cert["problem"] = {{"a", matrix_to_json(prob.a)},
                     {"b", matrix_to_json(prob.b)},
                     {"c", matrix_to_json(prob.c)}};

  const DilationConditions cond = check_dilation_conditions(prob);
  cert["diagnostics"] = {{"row_norm", cond.row_norm},
                         {"col_norm", cond.col_norm}};
  if (!cond.ok) {
    cert["verdict"] = "conditions-violated";
    emit(cert, args.common,
         "conditions violated (row norm " + format_double(cond.row_norm) +
             ", col norm " + format_double(cond.col_norm) + ")\n");
    return kExitInfeasible;
  }

  const Matrix d = complete(prob);
  cert["verdict"] = "completed";
  cert["witness"] = matrix_to_json(d);
  cert["diagnostics"]["dilated_norm"] = verify_dilation(prob, d);

  emit(cert, args.common,
       "completed; dilated norm " +
           format_double(cert["diagnostics"]["dilated_norm"].get<double>()) +
           "\n");
  return kExitFeasible;
}

// ----------------------------------------------------------- interpolate

struct InterpolateArgs {
  std::string p_path, z_path, w_path;
  Index n = -1;
  CommonOpts common;
};

int cmd_interpolate(const InterpolateArgs& args) {
  const Tolerances tol = resolve_tolerances(args.common);
  const Matrix p = read_matrix_file(args.p_path);
  const Vector z = read_vector_file(args.z_path);
  const Vector w = read_vector_file(args.w_path);
  const Index n = args.n >= 0 ? args.n : z.size();
  const Index m = p.rows() - n;
  const QuadraticForm form(SymMatrix(p, tol.sym), n, m, tol);

  json cert = certificate_shell("interpolation", tol);
  cert["problem"] = {{"p", matrix_to_json(form.p().mat())},
                     {"n", n},
                     {"m", m},
                     {"z", matrix_to_json(z)},
                     {"w", matrix_to_json(w)}};

  Matrix delta;
  try {
    delta = interpolate(form, z, w);
  } catch (const HypothesisViolated& e) {
    cert["verdict"] = "data-infeasible";
    cert["diagnostics"] = {{"reason", e.what()}};
    emit(cert, args.common, std::string("data infeasible: ") + e.what() + "\n");
    return kExitInfeasible;
  }

  const Matrix graph = vcat({Matrix::Identity(n, n), delta});
  const double lmi_min =
      min_eigenvalue(SymMatrix(graph.transpose() * form.p().mat() * graph));
  cert["verdict"] = "interpolated";
  cert["witness"] = matrix_to_json(delta);
  cert["diagnostics"] = {
      {"interp_residual", (w - delta * z).norm()},
      {"graph_form_min_eig", lmi_min},
  };
  emit(cert, args.common,
       "interpolated; ||w - Delta z|| = " +
           format_double((w - delta * z).norm()) + ", graph form min eig " +
           format_double(lmi_min) + "\n");
  return kExitFeasible;
}

// ---------------------------------------------------------------- slemma

struct SlemmaArgs {
  std::string m_path, n_path, xbar_path;
  std::string variant = "matrix";
  Index n = -1;
  CommonOpts common;
};

int cmd_slemma(const SlemmaArgs& args) {
  const Tolerances tol = resolve_tolerances(args.common);
  const Matrix m_in = read_matrix_file(args.m_path);
  const Matrix n_in = read_matrix_file(args.n_path);
  const SymMatrix m_mat(m_in, tol.sym);
  const SymMatrix n_mat(n_in, tol.sym);

  json cert = certificate_shell("slemma", tol);
  cert["problem"] = {{"m", matrix_to_json(m_mat.mat())},
                     {"n", matrix_to_json(n_mat.mat())},
                     {"variant", args.variant}};

  MultiplierResult res;
  if (args.variant == "matrix") {
    const Index n_dim = args.n >= 0 ? args.n : m_mat.dim() / 2;
    cert["problem"]["n_dim"] = n_dim;
    const SLemmaPair pair(m_mat, n_mat, n_dim, m_mat.dim() - n_dim, tol);
    res = matrix_s_lemma(pair);
  } else if (args.variant == "scalar") {
    const Vector xbar = read_vector_file(args.xbar_path);
    cert["problem"]["xbar"] = matrix_to_json(xbar);
    res = scalar_s_lemma(m_mat, n_mat, xbar, tol);
  } else if (args.variant == "finsler") {
    res = finsler(m_mat, n_mat, tol);
  } else {
    throw ParseError("slemma variant must be matrix, scalar or finsler");
  }

  const char* status = res.status == MultiplierStatus::Feasible
                           ? "feasible"
                           : res.status == MultiplierStatus::InfeasibleAtCap
                                 ? "infeasible-at-cap"
                                 : "infeasible";
  cert["verdict"] = status;
  cert["diagnostics"] = {
      {"alpha", res.alpha},
      {"min_eig", res.min_eig},
      {"scale", res.scale},
      {"bracket", {res.bracket_lo, res.bracket_hi}},
  };
  if (res.feasible) {
    Matrix alpha_mat(1, 1);
    alpha_mat(0, 0) = res.alpha;
    cert["witness"] = matrix_to_json(alpha_mat);
  }
  emit(cert, args.common,
       std::string(status) + "; alpha = " + format_double(res.alpha) +
           ", min eig " + format_double(res.min_eig) + "\n");
  return res.feasible ? kExitFeasible : kExitInfeasible;
}

// ------------------------------------------------------------------- gen

struct GenArgs {
  std::string kind;
  std::uint64_t seed = 0;
  std::string out_dir = ".";
  Index p = 6, m = 3, n = 3, q = 3;
  double row_target = 0.9, col_target = 0.9;
};

int cmd_gen(const GenArgs& args) {
  Rng rng(args.seed);
  json manifest;
  manifest["kind"] = args.kind;
  manifest["seed"] = args.seed;
  manifest["tool_version"] = kToolVersion;
  std::error_code ec;
  std::filesystem::create_directories(args.out_dir, ec);
  if (ec) {
    throw ParseError("cannot create output directory " + args.out_dir + ": " +
                     ec.message());
  }
  const std::string dir = args.out_dir + "/";
  json files;

  auto put = [&](const std::string& name, const Matrix& m_out) {
    write_matrix_file(dir + name, m_out);
    files[name.substr(0, name.find('.'))] = name;
  };

  if (args.kind == "projection-feasible" ||
      args.kind == "projection-infeasible" ||
      args.kind == "projection-random") {
    ProjectionInstance inst;
    if (args.kind == "projection-feasible") {
      inst = gen_projection_feasible(rng, args.p, args.m);
    } else if (args.kind == "projection-infeasible") {
      inst = gen_projection_infeasible(rng, args.p, args.m);
    } else {
      inst = gen_projection_random(rng, args.p, args.m);
    }
    put("q.json", inst.q);
    put("u.json", inst.u);
    put("v.json", inst.v);
    manifest["dims"] = {{"p", inst.q.rows()},
                        {"m", inst.u.rows()},
                        {"n", inst.v.rows()}};
  } else if (args.kind == "marginal" || args.kind == "reject") {
    const Matrix a = args.kind == "marginal"
                         ? gen_marginally_stable(rng, args.n)
                         : gen_defective_or_unstable(rng, args.n);
    put("a.json", a);
    manifest["dims"] = {{"n", a.rows()}};
  } else if (args.kind == "dilation" || args.kind == "dilation-boundary") {
    const DilationInstance inst =
        args.kind == "dilation"
            ? gen_dilation(rng, args.m, args.n, args.p, args.q,
                           args.row_target, args.col_target)
            : gen_dilation_boundary(rng, args.m, args.n, args.p, args.q);
    put("a.json", inst.a);
    put("b.json", inst.b);
    put("c.json", inst.c);
    manifest["dims"] = {{"m", inst.a.rows()},
                        {"n", inst.a.cols()},
                        {"p", inst.b.cols()},
                        {"q", inst.c.rows()}};
    manifest["norms"] = {{"row", inst.row_norm}, {"col", inst.col_norm}};
  } else if (args.kind == "quadratic") {
    const QuadraticInstance inst = gen_quadratic(rng, args.n, args.m);
    put("p.json", inst.p);
    put("z.json", Matrix(inst.z));
    put("w.json", Matrix(inst.w));
    manifest["dims"] = {{"n", inst.n}, {"m", inst.m}};
  } else if (args.kind == "slemma") {
    const SLemmaInstance inst = gen_slemma(rng, args.n, args.m, true);
    put("m.json", inst.m);
    put("n.json", inst.n_pencil);
    put("xbar.json", Matrix(inst.xbar));
    manifest["dims"] = {{"n", inst.n}, {"m", inst.m_dim}};
    manifest["slater_value"] = inst.slater_value;
  } else {
    throw ParseError("unknown generator kind '" + args.kind + "'");
  }

  manifest["files"] = files;
  write_text_file(dir + "manifest.json", manifest.dump(2) + "\n");
  std::cout << "wrote " << args.kind << " instance (seed " << args.seed
            << ") to " << args.out_dir << "\n";
  return kExitFeasible;
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  std::string cert_path;
  CommonOpts common;
};

int verify_projection_cert(const json& cert, const Tolerances& tol) {
  const ProjectionProblem prob(
      SymMatrix(matrix_from_json(cert.at("problem").at("q")), tol.sym),
      matrix_from_json(cert.at("problem").at("u")),
      matrix_from_json(cert.at("problem").at("v")), tol);
  const std::string verdict = cert.at("verdict").get<std::string>();
  if (verdict == "infeasible") {
    return check_conditions(prob).feasible ? kExitInfeasible : kExitFeasible;
  }
  const Matrix x = matrix_from_json(cert.at("witness"));
  const auto [min_eig, scale] = verify_witness_scaled(prob, x);
  return min_eig >= -tol.residual * scale ? kExitFeasible : kExitInfeasible;
}

int verify_stability_cert(const json& cert, const Tolerances& tol) {
  const LtiSystem sys(matrix_from_json(cert.at("problem").at("a")));
  const std::string verdict = cert.at("verdict").get<std::string>();
  if (verdict == "not-marginally-stable") {
    return is_marginally_stable(sys, tol).marginally_stable ? kExitInfeasible
                                                            : kExitFeasible;
  }
  StabilityCertificate sc;
  sc.form = cert.at("witness").at("form").get<std::string>() == "s"
                ? StabilityCertificate::Form::S
                : StabilityCertificate::Form::P;
  sc.gram = SymMatrix(matrix_from_json(cert.at("witness").at("gram")), tol.sym);
  sc.x = matrix_from_json(cert.at("witness").at("x"));
  return verify_certificate(sys, sc, tol).pass ? kExitFeasible
                                               : kExitInfeasible;
}

int verify_dilation_cert(const json& cert, const Tolerances& tol) {
  const DilationProblem prob(matrix_from_json(cert.at("problem").at("a")),
                             matrix_from_json(cert.at("problem").at("b")),
                             matrix_from_json(cert.at("problem").at("c")),
                             tol);
  const std::string verdict = cert.at("verdict").get<std::string>();
  if (verdict == "conditions-violated") {
    return check_dilation_conditions(prob).ok ? kExitInfeasible
                                              : kExitFeasible;
  }
  const Matrix d = matrix_from_json(cert.at("witness"));
  return verify_dilation(prob, d) <= 1.0 + tol.residual ? kExitFeasible
                                                        : kExitInfeasible;
}

int verify_interpolation_cert(const json& cert, const Tolerances& tol) {
  const Matrix p = matrix_from_json(cert.at("problem").at("p"));
  const Index n = cert.at("problem").at("n").get<Index>();
  const Vector z = Vector(matrix_from_json(cert.at("problem").at("z")));
  const Vector w = Vector(matrix_from_json(cert.at("problem").at("w")));
  const std::string verdict = cert.at("verdict").get<std::string>();
  if (verdict == "data-infeasible") {
    // The report is valid iff the data value is genuinely negative.
    const Matrix q = p.topLeftCorner(n, n), s = p.topRightCorner(n, p.cols() - n),
                 r = p.bottomRightCorner(p.rows() - n, p.cols() - n);
    const double value = z.dot(q * z) + 2.0 * z.dot(s * w) + w.dot(r * w);
    return value < 0.0 ? kExitFeasible : kExitInfeasible;
  }
  const Matrix delta = matrix_from_json(cert.at("witness"));
  const double resid = (w - delta * z).norm();
  const Matrix graph = vcat({Matrix::Identity(n, n), delta});
  const SymMatrix compressed(graph.transpose() * p * graph,
                             1e-9);  // product noise
  const Vector evals = sym_eigen(compressed).values;
  const double scale = std::max(
      1.0, std::max(std::abs(evals(0)), std::abs(evals(evals.size() - 1))));
  const bool ok = resid <= tol.residual * std::max(1.0, w.norm()) &&
                  evals(0) >= -tol.residual * scale;
  return ok ? kExitFeasible : kExitInfeasible;
}

int verify_slemma_cert(const json& cert, const Tolerances& tol) {
  const SymMatrix m(matrix_from_json(cert.at("problem").at("m")), tol.sym);
  const SymMatrix n(matrix_from_json(cert.at("problem").at("n")), tol.sym);
  const std::string verdict = cert.at("verdict").get<std::string>();
  if (verdict != "feasible") return kExitFeasible;  // nothing to re-check
  const double alpha = matrix_from_json(cert.at("witness"))(0, 0);
  const SymMatrix shifted(m.mat() - alpha * n.mat());
  const Vector evals = sym_eigen(shifted).values;
  const double scale = std::max(
      1.0, std::max(std::abs(evals(0)), std::abs(evals(evals.size() - 1))));
  return evals(0) > tol.psd * scale ? kExitFeasible : kExitInfeasible;
}

int cmd_verify(const VerifyArgs& args) {
  json cert;
  try {
    cert = json::parse(read_text_file(args.cert_path));
  } catch (const json::exception& e) {
    throw ParseError(std::string("certificate JSON: ") + e.what());
  }
  if (!cert.is_object() || !cert.contains("kind")) {
    throw ParseError("certificate must be an object with a kind field");
  }
  Tolerances tol = cert.contains("tolerances")
                       ? tolerances_from_json(cert["tolerances"])
                       : resolve_tolerances(args.common);
  if (args.common.tol_rank) tol.rank = *args.common.tol_rank;
  if (args.common.tol_psd) tol.psd = *args.common.tol_psd;
  if (args.common.tol_residual) tol.residual = *args.common.tol_residual;

  const std::string kind = cert["kind"].get<std::string>();
  int code = kExitUsage;
  try {
    if (kind == "projection") {
      code = verify_projection_cert(cert, tol);
    } else if (kind == "stability") {
      code = verify_stability_cert(cert, tol);
    } else if (kind == "dilation") {
      code = verify_dilation_cert(cert, tol);
    } else if (kind == "interpolation") {
      code = verify_interpolation_cert(cert, tol);
    } else if (kind == "slemma") {
      code = verify_slemma_cert(cert, tol);
    } else {
      throw ParseError("unknown certificate kind '" + kind + "'");
    }
  } catch (const json::exception& e) {
    throw ParseError(std::string("certificate structure: ") + e.what());
  }
  std::cout << (code == kExitFeasible ? "certificate verifies\n"
                                      : "certificate FAILS\n");
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"nspkit: non-strict elimination inequalities and friends"};
  app.require_subcommand(1);

  CheckArgs check_args;
  auto* check = app.add_subcommand("check", "decide feasibility");
  check->add_option("--q", check_args.q_path, "symmetric matrix Q")
      ->required();
  check->add_option("--u", check_args.u_path, "matrix U")->required();
  check->add_option("--v", check_args.v_path, "matrix V")->required();
  add_common(check, check_args.common);

  CheckArgs solve_args;
  auto* solve = app.add_subcommand("solve", "construct a witness X");
  solve->add_option("--q", solve_args.q_path, "symmetric matrix Q")
      ->required();
  solve->add_option("--u", solve_args.u_path, "matrix U")->required();
  solve->add_option("--v", solve_args.v_path, "matrix V")->required();
  add_common(solve, solve_args.common);

  StabilityArgs stab_args;
  auto* stab = app.add_subcommand("stability", "marginal stability certificate");
  stab->add_option("--a", stab_args.a_path, "state matrix A")->required();
  stab->add_option("--form", stab_args.form, "certificate form: p or s")
      ->check(CLI::IsMember({"p", "s"}));
  add_common(stab, stab_args.common);

  DilateArgs dil_args;
  auto* dil = app.add_subcommand("dilate", "norm-preserving completion");
  dil->add_option("--a", dil_args.a_path, "matrix A")->required();
  dil->add_option("--b", dil_args.b_path, "matrix B")->required();
  dil->add_option("--c", dil_args.c_path, "matrix C")->required();
  add_common(dil, dil_args.common);

  InterpolateArgs int_args;
  auto* interp = app.add_subcommand("interpolate", "one-point interpolation");
  interp->add_option("--p", int_args.p_path, "partitioned form P")->required();
  interp->add_option("--z", int_args.z_path, "input data z")->required();
  interp->add_option("--w", int_args.w_path, "output data w")->required();
  interp->add_option("--n", int_args.n, "size of the z partition");
  add_common(interp, int_args.common);

  SlemmaArgs sl_args;
  auto* sl = app.add_subcommand("slemma", "multiplier search");
  sl->add_option("--m", sl_args.m_path, "matrix M")->required();
  sl->add_option("--n", sl_args.n_path, "matrix N")->required();
  sl->add_option("--xbar", sl_args.xbar_path, "interior point (scalar variant)");
  sl->add_option("--variant", sl_args.variant, "matrix | scalar | finsler")
      ->check(CLI::IsMember({"matrix", "scalar", "finsler"}));
  sl->add_option("--n-dim", sl_args.n, "size of the leading partition");
  add_common(sl, sl_args.common);

  GenArgs gen_args;
  auto* gen = app.add_subcommand("gen", "deterministic instance generator");
  gen->add_option("--kind", gen_args.kind,
                  "projection-feasible | projection-infeasible | "
                  "projection-random | marginal | reject | dilation | "
                  "dilation-boundary | quadratic | slemma")
      ->required();
  gen->add_option("--seed", gen_args.seed, "RNG seed")->required();
  gen->add_option("--out-dir", gen_args.out_dir, "output directory");
  gen->add_option("--p", gen_args.p, "primary dimension bound");
  gen->add_option("--m", gen_args.m, "row dimension bound");
  gen->add_option("--n", gen_args.n, "generic dimension");
  gen->add_option("--q", gen_args.q, "fourth dimension (dilation)");
  gen->add_option("--row-target", gen_args.row_target, "target ||[A B]||");
  gen->add_option("--col-target", gen_args.col_target, "target ||[A; C]||");

  VerifyArgs ver_args;
  auto* ver = app.add_subcommand("verify", "re-verify an emitted certificate");
  ver->add_option("--cert", ver_args.cert_path, "certificate JSON file")
      ->required();
  add_common(ver, ver_args.common);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);  // prints help or the parse diagnostic
    return rc == 0 ? 0 : kExitUsage;
  }

  try {
    if (check->parsed()) return cmd_check(check_args);
    if (solve->parsed()) return cmd_solve(solve_args);
    if (stab->parsed()) return cmd_stability(stab_args);
    if (dil->parsed()) return cmd_dilate(dil_args);
    if (interp->parsed()) return cmd_interpolate(int_args);
    if (sl->parsed()) return cmd_slemma(sl_args);
    if (gen->parsed()) return cmd_gen(gen_args);
    if (ver->parsed()) return cmd_verify(ver_args);
  } catch (const InfeasibleProblem& e) {
    std::cerr << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NotMarginallyStable& e) {
    std::cerr << e.what() << "\n";
    return kExitInfeasible;
  } catch (const ConditionsViolated& e) {
    std::cerr << e.what() << "\n";
    return kExitInfeasible;
  } catch (const NumericalBreakdown& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const SingularMatrix& e) {
    std::cerr << "numerical breakdown: " << e.what() << "\n";
    return kExitBreakdown;
  } catch (const Error& e) {
    // Parse errors, dimension mismatches, violated hypotheses: bad input.
    std::cerr << "input error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitBreakdown;
  }
  return kExitUsage;
}
