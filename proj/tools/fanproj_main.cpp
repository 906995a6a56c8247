#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <variant>
#include <vector>

#include <CLI11.hpp>

#include "fanproj/fanproj.hpp"

namespace {

using namespace fanproj;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw ParseError("cannot write " + path);
  out << content;
  if (!out) throw ParseError("write failed for " + path);
}

Fan load_fan(const std::string& source) {
  if (source.rfind("builtin:", 0) == 0) return builtin(source.substr(8));
  return parse_fan(read_file(source));
}

// Change of lattice basis: the file's columns are the new ordered basis
// in standard coordinates. The pipeline runs in new coordinates; all
// emitted artifacts are re-expressed in standard coordinates.
struct Basis {
  std::vector<IntVec> cols;  // columns of B
  std::vector<IntVec> rows;  // rows of B = columns of B^T
};

Basis load_basis(const std::string& path, int dim) {
  const std::vector<IntVec> rows = parse_matrix(read_file(path));
  if (static_cast<int>(rows.size()) != dim)
    throw ParseError("basis matrix is " + std::to_string(rows.size()) + "x" +
                     std::to_string(rows.size()) + ", fan dimension is " + std::to_string(dim));
  Basis b;
  b.rows = rows;
  b.cols.assign(dim, IntVec(dim));
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) b.cols[j][i] = rows[i][j];
  const Int d = determinant(b.cols);
  if (d != 1 && d != -1)
    throw ParseError("basis matrix must be unimodular, determinant is " + d.str());
  return b;
}

IntVec integral_solution(const std::vector<IntVec>& cols, const IntVec& target) {
  const auto x = solve_exact(cols, target);
  if (!x) throw std::logic_error("unimodular solve failed");
  IntVec out;
  out.reserve(x->size());
  for (const Rat& c : *x) {
    if (boost::multiprecision::denominator(c) != 1)
      throw std::logic_error("unimodular solve produced a non-integer");
    out.push_back(Int(boost::multiprecision::numerator(c)));
  }
  return out;
}

IntVec to_new(const Basis& b, const IntVec& v) { return integral_solution(b.cols, v); }

IntVec to_std(const Basis& b, const IntVec& v) {
  IntVec out(b.cols.size(), Int(0));
  for (std::size_t j = 0; j < b.cols.size(); ++j)
    for (std::size_t i = 0; i < b.cols.size(); ++i) out[i] += v[j] * b.cols[j][i];
  return out;
}

IntVec covector_to_std(const Basis& b, const Covector& m) {
  return integral_solution(b.rows, m);
}

Fan transform_fan(const Fan& fan, const Basis& b) {
  std::vector<LatticeVector> rays;
  rays.reserve(fan.rays.size());
  for (const LatticeVector& r : fan.rays) rays.push_back(to_new(b, r));
  return make_fan(fan.dim, std::move(rays), fan.maxcones);
}

Fan untransform_fan(const Fan& fan, const Basis& b) {
  std::vector<LatticeVector> rays;
  rays.reserve(fan.rays.size());
  for (const LatticeVector& r : fan.rays) rays.push_back(to_std(b, r));
  return make_fan(fan.dim, std::move(rays), fan.maxcones);
}

std::string fvector_text(const FVector& f) {
  std::string out = "(";
  for (std::size_t i = 0; i < f.counts.size(); ++i) {
    if (i > 0) out += ", ";
    out += std::to_string(f.counts[i]);
  }
  return out + ")";
}

int check_valid(const Fan& fan) {
  const ValidationReport report = validate_fan(fan);
  if (!report.all_pass()) {
    for (const std::string& d : report.diagnostics) std::cerr << d << "\n";
    std::cerr << "input fan is not smooth, complete, and a fan\n";
    return 2;
  }
  return 0;
}

int run_validate(const std::string& fan_arg) {
  const Fan fan = load_fan(fan_arg);
  const ValidationReport report = validate_fan(fan);
  const auto verdict = [](bool b) { return b ? "yes" : "no"; };
  std::cout << "smooth: " << verdict(report.smooth) << "\n"
            << "complete: " << verdict(report.complete) << "\n"
            << "is_fan: " << verdict(report.is_fan) << "\n";
  for (const std::string& d : report.diagnostics) std::cerr << d << "\n";
  return report.all_pass() ? 0 : 1;
}

int run_normals(const std::string& fan_arg) {
  const Fan fan = load_fan(fan_arg);
  if (const int rc = check_valid(fan)) return rc;
  for (const Covector& m : ordered_normals(fan)) std::cout << to_string(m) << "\n";
  return 0;
}

int run_fvector(const std::string& fan_arg) {
  const Fan fan = load_fan(fan_arg);
  std::cout << "f-vector " << fvector_text(f_vector(fan)) << "\n";
  return 0;
}

int run_builtin(const std::string& name, const std::string& out_path) {
  const std::string text = serialize_fan(builtin(name));
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return 0;
}

int run_projectivize(const std::string& fan_arg, const std::string& out_dir,
                     const std::string& basis_path, bool early_stop) {
  const Fan input = load_fan(fan_arg);
  if (const int rc = check_valid(input)) return rc;

  std::optional<Basis> basis;
  if (!basis_path.empty()) basis = load_basis(basis_path, input.dim);
  const Fan working = basis ? transform_fan(input, *basis) : input;

  AdaptOptions opts;
  if (early_stop)
    opts.stop_after_normal = [](const Fan& f) {
      return std::holds_alternative<SupportFunction>(certify_lp(f));
    };
  const AdaptAllResult run = adapt_all(working, opts);
  if (!refines(run.fan, working)) throw std::logic_error("output does not refine the input");

  const Fan gamma = basis ? untransform_fan(run.fan, *basis) : run.fan;
  BlowupLog log = run.log;
  if (basis) {
    for (BlowupStep& st : log.steps) {
      st.normal = covector_to_std(*basis, st.normal);
      st.u = to_std(*basis, st.u);
      st.v = to_std(*basis, st.v);
      st.s = to_std(*basis, st.s);
    }
    for (PerNormalCount& pc : log.per_normal) pc.normal = covector_to_std(*basis, pc.normal);
  }

  std::ostringstream summary;
  const FVector f_in = f_vector(input);
  const FVector f_out = f_vector(gamma);
  summary << "input fan: " << input.rays.size() << " rays, " << input.maxcones.size()
          << " maximal cones, f-vector " << fvector_text(f_in) << "\n";
  summary << "normals (" << run.normals.size() << "):\n";
  for (const Covector& m : run.normals)
    summary << "  " << to_string(basis ? covector_to_std(*basis, m) : m) << "\n";
  summary << "per-normal subdivision counts:\n";
  long long total = 0;
  for (const PerNormalCount& pc : log.per_normal) {
    summary << "  " << to_string(pc.normal) << "  " << pc.count << "\n";
    total += pc.count;
  }
  summary << "  total " << total << "\n";
  summary << "final fan: " << gamma.rays.size() << " rays, " << gamma.maxcones.size()
          << " maximal cones, f-vector " << fvector_text(f_out) << "\n";
  summary << "L = " << (f_out.counts[0] - f_in.counts[0]) << "\n";
  if (run.stopped_early)
    summary << "early stop: after " << log.per_normal.size() << " of " << run.normals.size()
            << " normals\n";
  else
    summary << "early stop: no\n";

  std::filesystem::create_directories(out_dir);
  write_file(out_dir + "/gamma.json", serialize_fan(gamma));
  write_file(out_dir + "/log.json", serialize_log(log));
  write_file(out_dir + "/summary.txt", summary.str());
  std::cout << summary.str();
  return 0;
}

int run_bends(const std::string& fan_arg, const std::string& support_arg,
              const std::string& out_path) {
  const Fan fan = load_fan(fan_arg);
  const SupportFunction h = parse_support(read_file(support_arg));
  const auto [ok, report] = verify_ample(fan, h);

  std::ostringstream text;
  for (const auto& [wall, b] : report.bends) {
    text << "wall [";
    for (std::size_t i = 0; i < wall.ray_indices.size(); ++i)
      text << (i ? "," : "") << wall.ray_indices[i];
    text << "] sides (" << wall.side_a << "," << wall.side_b << "): bend " << rat_to_string(b)
         << "\n";
  }
  text << "walls: " << report.bends.size() << "\n";
  text << "min bend: " << rat_to_string(report.min_bend) << "\n";
  text << "distinct bends:";
  for (const Rat& v : report.distinct_values) text << " " << rat_to_string(v);
  text << "\n";
  text << "all positive: " << (ok ? "yes" : "no") << "\n";

  if (!out_path.empty()) write_file(out_path, text.str());
  std::cout << text.str();
  return ok ? 0 : 1;
}

int run_certify(const std::string& fan_arg, const std::string& method,
                const std::string& sigma_arg, const std::string& log_arg,
                const std::string& out_path) {
  const Fan fan = load_fan(fan_arg);
  if (const int rc = check_valid(fan)) return rc;

  Certificate cert;
  if (method == "lp") {
    cert = certify_lp(fan);
  } else if (method == "sandwich") {
    if (sigma_arg.empty() || log_arg.empty())
      throw ParseError("--method sandwich requires --sigma and --log");
    const Fan sigma = load_fan(sigma_arg);
    const BlowupLog log = parse_log(read_file(log_arg));
    cert = certify_sandwich(sigma, fan, log, ordered_normals(sigma));
  } else {
    throw ParseError("unknown certify method \"" + method + "\"");
  }

  const std::string text = serialize_certificate(cert);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  if (std::holds_alternative<FarkasCertificate>(cert)) {
    std::cerr << "fan is not projective: Farkas certificate emitted\n";
    return 3;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact projectivization of smooth complete rational fans"};
  app.require_subcommand(1);

  std::string fan_arg, support_arg, name_arg, out_arg, basis_arg, sigma_arg, log_arg;
  std::string proj_out = ".";
  std::string method = "lp";
  bool early_stop = false;
  const char* fan_help = "fan file or builtin:NAME";

  auto* validate = app.add_subcommand("validate", "check smoothness, completeness, fan axioms");
  validate->add_option("fan", fan_arg, fan_help)->required();

  auto* normals = app.add_subcommand("normals", "print the ordered wall-normal list");
  normals->add_option("fan", fan_arg, fan_help)->required();

  auto* projectivize =
      app.add_subcommand("projectivize", "run the full adaptation pipeline, emit fan + log");
  projectivize->add_option("fan", fan_arg, fan_help)->required();
  projectivize->add_option("--out", proj_out, "output directory")->capture_default_str();
  projectivize->add_option("--basis", basis_arg, "n x n unimodular matrix file (columns = basis)");
  projectivize->add_flag("--early-stop", early_stop,
                         "halt once the intermediate fan is projective");

  auto* bends = app.add_subcommand("bends", "evaluate all wall bends of a support function");
  bends->add_option("fan", fan_arg, fan_help)->required();
  bends->add_option("support", support_arg, "support function file")->required();
  bends->add_option("--out", out_arg, "also write the report to this file");

  auto* certify = app.add_subcommand("certify", "produce an ample or Farkas certificate");
  certify->add_option("fan", fan_arg, fan_help)->required();
  certify->add_option("--method", method, "lp or sandwich")->default_val("lp");
  certify->add_option("--sigma", sigma_arg, "original fan (sandwich method)");
  certify->add_option("--log", log_arg, "blow-up log file (sandwich method)");
  certify->add_option("--out", out_arg, "certificate output file");

  auto* fvector = app.add_subcommand("fvector", "print the f-vector");
  fvector->add_option("fan", fan_arg, fan_help)->required();

  auto* builtin_cmd = app.add_subcommand("builtin", "emit a builtin fan as JSON");
  builtin_cmd->add_option("name", name_arg, "one of: hexagon, oda75, p1p1, p1p1p1, p2, p3")
      ->required();
  builtin_cmd->add_option("--out", out_arg, "output file (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*validate) return run_validate(fan_arg);
    if (*normals) return run_normals(fan_arg);
    if (*projectivize) return run_projectivize(fan_arg, proj_out, basis_arg, early_stop);
    if (*bends) return run_bends(fan_arg, support_arg, out_arg);
    if (*certify) return run_certify(fan_arg, method, sigma_arg, log_arg, out_arg);
    if (*fvector) return run_fvector(fan_arg);
    if (*builtin_cmd) return run_builtin(name_arg, out_arg);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
