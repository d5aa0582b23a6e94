// Command-line driver: dimension tables, verification suites, single
// solves, and convergence studies with JSON reports and CSV tables.
//
// Exit codes: 0 all checks pass, 1 at least one falsified check, 2 bad
// configuration or usage.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "qtilde/solver.hpp"
#include "qtilde/verify.hpp"

using json = nlohmann::ordered_json;
using namespace qtilde;

namespace {

struct RunConfig {
  std::string command;
  int n = 2, k = 1, r = 1;
  int cells = 2;
  std::string cells_list;  // comma-separated sizes for convergence
  std::string mask_file;
  std::string mode = "standard";
  std::string coeff = "identity";
  std::string case_name;
  std::string out;
  unsigned seed = 2026;
};

// Config file overrides flags; unknown keys are a usage error.
void apply_config_file(RunConfig& cfg, const std::string& path) {
  std::ifstream in(path);
  if (!in) throw CLI::ValidationError("--config", "cannot open " + path);
  json doc;
  try {
    in >> doc;
  } catch (const json::exception& e) {
    throw CLI::ValidationError("--config", e.what());
  }
  for (const auto& [key, value] : doc.items()) {
    if (key == "n") cfg.n = value.get<int>();
    else if (key == "k") cfg.k = value.get<int>();
    else if (key == "r") cfg.r = value.get<int>();
    else if (key == "cells") {
      if (value.is_array()) {
        std::ostringstream os;
        for (std::size_t i = 0; i < value.size(); ++i)
          os << (i ? "," : "") << value[i].get<int>();
        cfg.cells_list = os.str();
        if (!value.empty()) cfg.cells = value[0].get<int>();
      } else {
        cfg.cells = value.get<int>();
      }
    } else if (key == "mask_file") cfg.mask_file = value.get<std::string>();
    else if (key == "mode") cfg.mode = value.get<std::string>();
    else if (key == "coeff") cfg.coeff = value.get<std::string>();
    else if (key == "case") cfg.case_name = value.get<std::string>();
    else if (key == "out") cfg.out = value.get<std::string>();
    else if (key == "seed") cfg.seed = value.get<unsigned>();
    else throw CLI::ValidationError("--config", "unknown key " + key);
  }
}

MassMode parse_mode(const std::string& mode) {
  if (mode == "standard") return MassMode::Exact;
  if (mode == "lumped") return MassMode::Lumped;
  throw CLI::ValidationError("--mode", "expected standard or lumped");
}

std::vector<int> parse_sizes(const std::string& list) {
  std::vector<int> sizes;
  std::stringstream ss(list);
  std::string item;
  while (std::getline(ss, item, ',')) {
    try {
      sizes.push_back(std::stoi(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError("--cells", "expected comma-separated integers");
    }
    if (sizes.back() < 1)
      throw CLI::ValidationError("--cells", "sizes must be positive");
  }
  if (sizes.empty()) throw CLI::ValidationError("--cells", "empty size list");
  return sizes;
}

StructuredCubicalMesh load_mesh(const RunConfig& cfg) {
  if (!cfg.mask_file.empty()) {
    std::ifstream in(cfg.mask_file);
    if (!in) throw CLI::ValidationError("--mask-file", "cannot open " + cfg.mask_file);
    std::stringstream buf;
    buf << in.rdbuf();
    return mesh_from_json(buf.str());
  }
  return unit_cube_mesh(cfg.n, cfg.cells);
}

json config_json(const RunConfig& cfg) {
  json j;
  j["command"] = cfg.command;
  j["n"] = cfg.n;
  j["k"] = cfg.k;
  j["r"] = cfg.r;
  if (!cfg.cells_list.empty()) j["cells"] = cfg.cells_list;
  else j["cells"] = cfg.cells;
  if (!cfg.mask_file.empty()) j["mask_file"] = cfg.mask_file;
  j["mode"] = cfg.mode;
  j["coeff"] = cfg.coeff;
  if (!cfg.case_name.empty()) j["case"] = cfg.case_name;
  j["seed"] = cfg.seed;
  return j;
}

json checks_json(const std::vector<CheckResult>& checks) {
  json arr = json::array();
  for (const auto& c : checks) {
    json item;
    item["name"] = c.name;
    item["pass"] = c.pass;
    item["value"] = c.value;
    item["bound"] = c.bound;
    item["detail"] = c.detail;
    arr.push_back(item);
  }
  return arr;
}

// Emits the report to stdout and (optionally) a file; returns the exit code.
int finish(const RunConfig& cfg, json report, bool pass) {
  report["pass"] = pass;
  std::cout << report.dump(2) << "\n";
  if (!cfg.out.empty()) {
    std::ofstream out(cfg.out);
    if (!out) {
      std::cerr << "cannot write " << cfg.out << "\n";
      return 2;
    }
    out << report.dump(2) << "\n";
  }
  return pass ? 0 : 1;
}

int run_tables_dim(const RunConfig& cfg) {
  json report;
  report["config"] = config_json(cfg);
  json rows = json::array();
  long total = 1;
  for (int i = 0; i < cfg.n; ++i) total *= cfg.r + 1;
  for (int k = 0; k <= cfg.n; ++k) {
    json row;
    row["k"] = k;
    row["dim"] = space_dimension(Family::Qtilde, cfg.n, k, cfg.r);
    row["expected"] = binomial(cfg.n, k) * total;
    rows.push_back(row);
    std::cout << "n=" << cfg.n << " r=" << cfg.r << " k=" << k
              << "  dim=" << row["dim"] << "\n";
  }
  report["rows"] = rows;
  bool pass = true;
  for (const auto& row : rows)
    if (row["dim"] != row["expected"]) pass = false;
  return finish(cfg, std::move(report), pass);
}

int run_verify(const RunConfig& cfg, const std::string& suite, bool n_given) {
  std::vector<SuiteReport> reports;
  if (suite == "algebra") {
    reports.push_back(verify_algebra(cfg.seed));
    reports.push_back(verify_legendre());
  } else if (suite == "unisolvency") {
    reports.push_back(n_given ? verify_unisolvency(cfg.n, cfg.k, cfg.r)
                              : verify_unisolvency_sweep());
  } else if (suite == "conditions") {
    reports.push_back(verify_conditions(cfg.n, cfg.k, cfg.r));
  } else {  // locality
    reports.push_back(verify_locality(cfg.r));
  }

  json report;
  report["config"] = config_json(cfg);
  json suites = json::array();
  bool pass = true;
  for (const auto& rep : reports) {
    json s;
    s["suite"] = rep.suite;
    s["checks"] = checks_json(rep.checks);
    s["failures"] = rep.failures();
    suites.push_back(s);
    pass = pass && rep.all_pass();
    for (const auto& c : rep.checks)
      std::cout << (c.pass ? "pass" : "FAIL") << "  " << rep.suite << "/" << c.name
                << "  value=" << c.value << "\n";
  }
  report["suites"] = suites;
  return finish(cfg, std::move(report), pass);
}

int run_solve(RunConfig cfg) {
  std::optional<ManufacturedCase> mc;
  if (!cfg.case_name.empty() && cfg.case_name != "zero") {
    mc = manufactured_case(cfg.case_name);
    cfg.n = mc->n;
    cfg.k = mc->k;
  }
  auto mesh = load_mesh(cfg);
  if (mesh.n != cfg.n) cfg.n = mesh.n;
  if (cfg.k < 1 || cfg.k > mesh.n)
    throw CLI::ValidationError("--k", "needs 1 <= k <= mesh dimension");
  MassMode mode = parse_mode(cfg.mode);

  CoefficientField K;
  if (cfg.coeff == "random")
    K = random_spd_coefficient(mesh, cfg.k - 1, cfg.seed);
  else if (cfg.coeff != "identity")
    throw CLI::ValidationError("--coeff", "expected identity or random");

  FormCallable f = mc ? mc->f : zero_field(mesh.n, cfg.k);
  auto sol = solve_hodge(mesh, cfg.k, cfg.r, f, mode, K);

  json report;
  report["config"] = config_json(cfg);
  json result;
  result["sigma_norm"] = sol.sigma.norm();
  result["u_norm"] = sol.u.norm();
  result["p_norm"] = sol.p.norm();
  result["residual"] = sol.residual;
  result["stabilization_dim"] = sol.stabilization_dim;
  std::vector<CheckResult> checks;
  checks.push_back({"linear-residual", sol.residual <= 1e-9, sol.residual, 1e-9,
                    "relative residual of the saddle-point system"});
  if (mc) {
    const int quad = cfg.r + 3;
    double es = l2_error(mesh, cfg.k - 1, cfg.r, sol.sigma, mc->sigma, quad);
    double eu = l2_error(mesh, cfg.k, cfg.r, sol.u, mc->u, quad);
    result["err_sigma"] = es;
    result["err_u"] = eu;
  } else {
    double zero_norm = sol.sigma.norm() + sol.u.norm() + sol.p.norm();
    checks.push_back({"zero-load-zero-solution", zero_norm <= 1e-12, zero_norm,
                      1e-12, "all solution components vanish"});
  }
  report["result"] = result;
  report["checks"] = checks_json(checks);
  bool pass = true;
  for (const auto& c : checks) pass = pass && c.pass;
  std::cout << "residual " << sol.residual << "\n";
  return finish(cfg, std::move(report), pass);
}

int run_convergence(const RunConfig& cfg) {
  if (cfg.case_name.empty())
    throw CLI::ValidationError("--case", "a manufactured case name is required");
  std::vector<int> sizes =
      parse_sizes(cfg.cells_list.empty() ? "2,4,8" : cfg.cells_list);
  MassMode mode = parse_mode(cfg.mode);
  auto table = run_convergence(cfg.case_name, cfg.r, mode, sizes);

  std::ostringstream csv;
  write_convergence_csv(table, csv);
  std::cout << csv.str();
  if (!cfg.out.empty()) {
    std::ofstream out(cfg.out);
    if (!out) {
      std::cerr << "cannot write " << cfg.out << "\n";
      return 2;
    }
    out << csv.str();
  }

  json report;
  report["config"] = config_json(cfg);
  json rates;
  rates["sigma"] = table.rate_sigma;
  rates["u"] = table.rate_u;
  rates["dsigma"] = table.rate_dsigma;
  rates["du"] = table.rate_du;
  rates["sigma_mode_diff"] = table.rate_sigma_diff;
  report["rates"] = rates;
  const double want = cfg.r - 0.15;
  std::vector<CheckResult> checks;
  checks.push_back({"rate-sigma", table.rate_sigma >= want, table.rate_sigma, want,
                    "observed L2 rate of sigma_h"});
  checks.push_back({"rate-u", table.rate_u >= want, table.rate_u, want,
                    "observed L2 rate of u_h"});
  report["checks"] = checks_json(checks);
  bool pass = checks[0].pass && checks[1].pass;

  RunConfig json_cfg = cfg;
  json_cfg.out = cfg.out.empty() ? "" : cfg.out + ".json";
  return finish(json_cfg, std::move(report), pass);
}

}  // namespace

int main(int argc, char** argv) {
  RunConfig cfg;
  std::string config_path;
  bool n_given = false;

  CLI::App app{"Qtilde cubical finite elements: verification and solves"};
  app.require_subcommand(1);
  app.failure_message(CLI::FailureMessage::help);

  auto add_common = [&](CLI::App* cmd) {
    cmd->add_option("--n", cfg.n, "space dimension")->check(CLI::Range(1, 4));
    cmd->add_option("--k", cfg.k, "form degree");
    cmd->add_option("--r", cfg.r, "polynomial order")->check(CLI::Range(1, 8));
    cmd->add_option("--cells", cfg.cells_list,
                    "cells per axis (single value, or comma list for convergence)");
    cmd->add_option("--mask-file", cfg.mask_file, "mesh JSON file");
    cmd->add_option("--mode", cfg.mode, "standard or lumped");
    cmd->add_option("--coeff", cfg.coeff, "identity or random");
    cmd->add_option("--case", cfg.case_name, "manufactured case name or zero");
    cmd->add_option("--out", cfg.out, "report / CSV output path");
    cmd->add_option("--seed", cfg.seed, "seed for randomized checks");
    cmd->add_option("--config", config_path, "JSON config file (overrides flags)");
  };

  auto* tables = app.add_subcommand("tables", "dimension tables");
  auto* dim = tables->add_subcommand("dim", "Qtilde dimensions per k");
  add_common(dim);

  auto* verify = app.add_subcommand("verify", "verification suites");
  verify->require_subcommand(1);
  std::vector<CLI::App*> suites;
  for (const char* name : {"algebra", "unisolvency", "conditions", "locality"}) {
    auto* s = verify->add_subcommand(name, std::string(name) + " suite");
    add_common(s);
    suites.push_back(s);
  }

  auto* solve = app.add_subcommand("solve", "single Hodge Laplace solve");
  add_common(solve);
  auto* conv = app.add_subcommand("convergence", "manufactured convergence study");
  add_common(conv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return e.get_exit_code() == 0 ? 0 : 2;
  }

  try {
    // flags that shape the run need defaults fixed before the config override
    if (!cfg.cells_list.empty() && cfg.cells_list.find(',') == std::string::npos)
      cfg.cells = std::stoi(cfg.cells_list);
    if (!config_path.empty()) apply_config_file(cfg, config_path);

    if (dim->parsed()) {
      cfg.command = "tables dim";
      return run_tables_dim(cfg);
    }
    for (std::size_t i = 0; i < suites.size(); ++i)
      if (suites[i]->parsed()) {
        n_given = suites[i]->count("--n") > 0 || config_path.size() > 0;
        cfg.command = "verify " + suites[i]->get_name();
        return run_verify(cfg, suites[i]->get_name(), n_given);
      }
    if (solve->parsed()) {
      cfg.command = "solve";
      return run_solve(cfg);
    }
    cfg.command = "convergence";
    return run_convergence(cfg);
  } catch (const CLI::ValidationError& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return 1;
  }
}
