#include "qtilde/solver.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

namespace qtilde {

namespace {

const double kPi = 3.14159265358979323846;

// per-component evaluation matrices of the dual basis at quadrature nodes:
// eval[s](m, j) = psi_j,(sigma_s)(x_m) on the reference box
std::vector<Eigen::MatrixXd> component_eval(const ElementDef& e,
                                            const TensorNodes& quad) {
  auto sigmas = enumerate_sigma(full_index_set(e.n), e.k);
  std::vector<Eigen::MatrixXd> eval;
  eval.reserve(sigmas.size());
  for (const auto& sm : sigmas) {
    Eigen::MatrixXd shape_vals(quad.count(), e.dim());
    for (std::size_t m = 0; m < quad.count(); ++m)
      for (std::size_t a = 0; a < e.dim(); ++a)
        shape_vals(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(a)) =
            eval_component(e.shape.basis[a], sm.sigma, quad.points[m]);
    eval.push_back(shape_vals * e.vandermonde_inv_d);
  }
  return eval;
}

std::vector<double> component_scales(int n, int k, const std::vector<Rational>& h) {
  std::vector<double> t;
  for (const auto& sm : enumerate_sigma(full_index_set(n), k)) {
    double s = 1;
    for (int l : sm.sigma) s *= 2.0 / to_double(h[l - 1]);
    t.push_back(s);
  }
  return t;
}

double half_volume(const std::vector<Rational>& h) {
  double v = 1;
  for (const auto& s : h) v *= to_double(s) / 2.0;
  return v;
}

// least-squares slope of log(err) against log(h)
double fit_rate(const std::vector<double>& h, const std::vector<double>& err) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const double m = static_cast<double>(h.size());
  for (std::size_t i = 0; i < h.size(); ++i) {
    double x = std::log(h[i]);
    double y = std::log(std::max(err[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

Eigen::VectorXd load_vector(const StructuredCubicalMesh& mesh, int k, int r,
                            const FormCallable& f, int quad_order) {
  const int n = mesh.n;
  const ElementDef& e = get_element(n, k, r, Family::Qtilde, DofKind::Nodal);
  auto quad = tensor_nodes(n, quad_order);
  auto eval = component_eval(e, quad);
  auto tscale = component_scales(n, k, mesh.spacing);
  const double vol2 = half_volume(mesh.spacing);
  auto map = global_dofs(mesh, k, r);
  auto cells = mesh.active_cells();

  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(map.count));
  std::vector<double> x(n);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto phi = mesh.cell_map(cells[c]);
    Eigen::VectorXd local = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(e.dim()));
    for (std::size_t m = 0; m < quad.count(); ++m) {
      for (int i = 0; i < n; ++i)
        x[i] = to_double(phi.shift[i]) + to_double(phi.scale[i]) * quad.points[m][i];
      auto fv = f(x);
      for (std::size_t s = 0; s < eval.size(); ++s) {
        const double w = vol2 * quad.weights[m] * tscale[s] * fv[s];
        if (w != 0.0) local += w * eval[s].row(static_cast<Eigen::Index>(m)).transpose();
      }
    }
    for (std::size_t i = 0; i < e.dim(); ++i)
      out(static_cast<Eigen::Index>(map.local_to_global[c][i])) +=
          local(static_cast<Eigen::Index>(i));
  }
  return out;
}

}  // namespace

FormCallable zero_field(int n, int k) {
  const std::size_t comps = static_cast<std::size_t>(binomial(n, k));
  return [comps](const std::vector<double>&) { return std::vector<double>(comps, 0.0); };
}

HodgeSolution solve_hodge(const StructuredCubicalMesh& mesh, int k, int r,
                          const FormCallable& f, MassMode mode,
                          const CoefficientField& K) {
  if (k < 1 || k > mesh.n) throw std::domain_error("solve_hodge: needs 1 <= k <= n");
  return solve_hodge_load(mesh, k, r, load_vector(mesh, k, r, f, r + 3), mode, K);
}

HodgeSolution solve_hodge_load(const StructuredCubicalMesh& mesh, int k, int r,
                               const Eigen::VectorXd& load, MassMode mode,
                               const CoefficientField& K) {
  const int n = mesh.n;
  if (k < 1 || k > n) throw std::domain_error("solve_hodge: needs 1 <= k <= n");

  Eigen::MatrixXd msig = Eigen::MatrixXd(assemble_mass(mesh, k - 1, r, mode, K));
  Eigen::MatrixXd b = Eigen::MatrixXd(assemble_mixed(mesh, k, r));
  Eigen::MatrixXd mhi = Eigen::MatrixXd(assemble_mass(mesh, k, r, MassMode::Exact));
  const Eigen::Index nl = msig.rows(), nh = mhi.rows();
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(nh, nh);
  if (k < n) s = Eigen::MatrixXd(assemble_stiffness(mesh, k, r));
  Eigen::MatrixXd q = closed_coclosed_basis(mesh, k, r);

  // the harmonic block absorbs the part of the load the complex cannot see:
  // p = Q^T F, and u is constrained M-orthogonal to span Q
  Eigen::MatrixXd mq = mhi * q;
  Eigen::VectorXd phat = q.transpose() * load;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(nl + nh, nl + nh);
  a.topLeftCorner(nl, nl) = msig;
  a.topRightCorner(nl, nh) = -b;
  a.bottomLeftCorner(nh, nl) = b.transpose();
  a.bottomRightCorner(nh, nh) = s + mq * mq.transpose();
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(nl + nh);
  rhs.tail(nh) = load - mq * phat;

  Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
  Eigen::VectorXd x = lu.solve(rhs);

  HodgeSolution sol;
  sol.k = k;
  sol.r = r;
  sol.mode = mode;
  sol.sigma = x.head(nl);
  sol.u = x.tail(nh);
  sol.p = q * phat;
  sol.stabilization_dim = static_cast<std::size_t>(q.cols());

  // residuals of the original three-block system
  Eigen::VectorXd r1 = msig * sol.sigma - b * sol.u;
  Eigen::VectorXd r2 = b.transpose() * sol.sigma + s * sol.u + mhi * sol.p - load;
  Eigen::VectorXd r3 = q.transpose() * (mhi * sol.u);
  double scale = std::max(1e-300, load.norm());
  sol.residual =
      std::sqrt(r1.squaredNorm() + r2.squaredNorm() + r3.squaredNorm()) / scale;
  if (!std::isfinite(sol.residual))
    throw std::runtime_error("solve_hodge: singular system");
  return sol;
}

Eigen::VectorXd interpolate_form(const StructuredCubicalMesh& mesh, int k, int r,
                                 const FormCallable& field) {
  const int n = mesh.n;
  const ElementDef& e = get_element(n, k, r, Family::Qtilde, DofKind::Nodal);
  auto tscale = component_scales(n, k, mesh.spacing);
  auto map = global_dofs(mesh, k, r);
  auto cells = mesh.active_cells();
  const std::size_t pts = e.nodes.count();

  Eigen::VectorXd out(static_cast<Eigen::Index>(map.count));
  std::vector<double> x(n);
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto phi = mesh.cell_map(cells[c]);
    for (std::size_t m = 0; m < pts; ++m) {
      for (int i = 0; i < n; ++i)
        x[i] = to_double(phi.shift[i]) + to_double(phi.scale[i]) * e.nodes.points[m][i];
      auto fv = field(x);
      for (std::size_t s = 0; s < tscale.size(); ++s)
        out(static_cast<Eigen::Index>(map.local_to_global[c][s * pts + m])) =
            fv[s] / tscale[s];
    }
  }
  return out;
}

double l2_error(const StructuredCubicalMesh& mesh, int k, int r,
                const Eigen::VectorXd& coeffs, const FormCallable& exact,
                int quad_order) {
  const int n = mesh.n;
  const ElementDef& e = get_element(n, k, r, Family::Qtilde, DofKind::Nodal);
  auto quad = tensor_nodes(n, quad_order);
  auto eval = component_eval(e, quad);
  auto tscale = component_scales(n, k, mesh.spacing);
  const double vol2 = half_volume(mesh.spacing);
  auto map = global_dofs(mesh, k, r);
  auto cells = mesh.active_cells();

  double total = 0;
  std::vector<double> x(n);
  Eigen::VectorXd uloc(static_cast<Eigen::Index>(e.dim()));
  for (std::size_t c = 0; c < cells.size(); ++c) {
    auto phi = mesh.cell_map(cells[c]);
    for (std::size_t i = 0; i < e.dim(); ++i)
      uloc(static_cast<Eigen::Index>(i)) =
          coeffs(static_cast<Eigen::Index>(map.local_to_global[c][i]));
    for (std::size_t m = 0; m < quad.count(); ++m) {
      for (int i = 0; i < n; ++i)
        x[i] = to_double(phi.shift[i]) + to_double(phi.scale[i]) * quad.points[m][i];
      auto fv = exact(x);
      for (std::size_t s = 0; s < eval.size(); ++s) {
        double vh = eval[s].row(static_cast<Eigen::Index>(m)).dot(uloc) * tscale[s];
        double diff = vh - fv[s];
        total += vol2 * quad.weights[m] * diff * diff;
      }
    }
  }
  return std::sqrt(total);
}

ManufacturedCase manufactured_case(const std::string& name) {
  ManufacturedCase mc;
  if (name == "sinsin") {
    // n = 2, k = 2: u = sin(pi x) sin(pi y) dx^dy on the unit square
    mc.name = name;
    mc.n = 2;
    mc.k = 2;
    mc.u = [](const std::vector<double>& x) {
      return std::vector<double>{std::sin(kPi * x[0]) * std::sin(kPi * x[1])};
    };
    mc.sigma = [](const std::vector<double>& x) {
      // sigma = w_y dx - w_x dy for w = sin sin
      return std::vector<double>{
          kPi * std::sin(kPi * x[0]) * std::cos(kPi * x[1]),
          -kPi * std::cos(kPi * x[0]) * std::sin(kPi * x[1])};
    };
    mc.dsigma = [](const std::vector<double>& x) {
      return std::vector<double>{2 * kPi * kPi * std::sin(kPi * x[0]) *
                                 std::sin(kPi * x[1])};
    };
    mc.du = FormCallable{};  // top degree: du = 0 identically
    mc.f = mc.dsigma;
    mc.boundary_residual = [u = mc.u](const std::vector<double>& x) {
      return std::abs(u(x)[0]);  // tr(*u) = w on the boundary; du = 0
    };
    return mc;
  }
  if (name == "gradcos") {
    // n = 2, k = 1: u = dg, g = cos(pi x) cos(pi y); du = 0, sigma = 2 pi^2 g
    mc.name = name;
    mc.n = 2;
    mc.k = 1;
    mc.u = [](const std::vector<double>& x) {
      return std::vector<double>{-kPi * std::sin(kPi * x[0]) * std::cos(kPi * x[1]),
                                 -kPi * std::cos(kPi * x[0]) * std::sin(kPi * x[1])};
    };
    mc.sigma = [](const std::vector<double>& x) {
      return std::vector<double>{2 * kPi * kPi * std::cos(kPi * x[0]) *
                                 std::cos(kPi * x[1])};
    };
    mc.dsigma = [u = mc.u](const std::vector<double>& x) {
      auto v = u(x);
      return std::vector<double>{2 * kPi * kPi * v[0], 2 * kPi * kPi * v[1]};
    };
    mc.du = zero_field(2, 2);
    mc.f = mc.dsigma;
    mc.boundary_residual = [u = mc.u](const std::vector<double>& x) {
      // tr(*u) on the boundary is the normal component of u; du = 0
      double res = 0;
      const double tol = 1e-14;
      if (std::abs(x[0]) < tol || std::abs(x[0] - 1) < tol)
        res = std::max(res, std::abs(u(x)[0]));
      if (std::abs(x[1]) < tol || std::abs(x[1] - 1) < tol)
        res = std::max(res, std::abs(u(x)[1]));
      return res;
    };
    return mc;
  }
  throw std::domain_error("manufactured_case: unknown case " + name);
}

double boundary_gate(const ManufacturedCase& mc, int samples_per_side) {
  double worst = 0;
  for (int side = 0; side < 4; ++side)
    for (int i = 0; i <= samples_per_side; ++i) {
      double t = static_cast<double>(i) / samples_per_side;
      std::vector<double> x(2);
      switch (side) {
        case 0: x = {0.0, t}; break;
        case 1: x = {1.0, t}; break;
        case 2: x = {t, 0.0}; break;
        default: x = {t, 1.0}; break;
      }
      worst = std::max(worst, mc.boundary_residual(x));
    }
  return worst;
}

ConvergenceTable run_convergence(const std::string& case_name, int r, MassMode mode,
                                 const std::vector<int>& sizes) {
  ManufacturedCase mc = manufactured_case(case_name);
  if (boundary_gate(mc) > 1e-10)
    throw std::domain_error("run_convergence: boundary compatibility gate failed for " +
                            case_name);

  ConvergenceTable table;
  table.case_name = case_name;
  table.r = r;
  table.mode = mode;
  const int quad = r + 3;
  for (int cells : sizes) {
    auto mesh = unit_cube_mesh(mc.n, cells);
    auto exact_sol = solve_hodge(mesh, mc.k, r, mc.f, MassMode::Exact);
    auto lumped_sol = solve_hodge(mesh, mc.k, r, mc.f, MassMode::Lumped);
    const auto& sol = (mode == MassMode::Exact) ? exact_sol : lumped_sol;

    ConvergenceRow row;
    row.h = 1.0 / cells;
    row.dofs = static_cast<std::size_t>(sol.sigma.size() + sol.u.size());
    row.err_sigma = l2_error(mesh, mc.k - 1, r, sol.sigma, mc.sigma, quad);
    row.err_u = l2_error(mesh, mc.k, r, sol.u, mc.u, quad);
    Eigen::VectorXd dsig =
        Eigen::MatrixXd(derivative_matrix(mesh, mc.k - 1, r)) * sol.sigma;
    row.err_dsigma = l2_error(mesh, mc.k, r, dsig, mc.dsigma, quad);
    if (mc.k < mc.n) {
      Eigen::VectorXd du = Eigen::MatrixXd(derivative_matrix(mesh, mc.k, r)) * sol.u;
      row.err_du = l2_error(mesh, mc.k + 1, r, du, mc.du, quad);
    }
    Eigen::VectorXd diff = lumped_sol.sigma - exact_sol.sigma;
    Eigen::MatrixXd msig =
        Eigen::MatrixXd(assemble_mass(mesh, mc.k - 1, r, MassMode::Exact));
    row.sigma_mode_diff = std::sqrt(diff.dot(msig * diff));
    table.rows.push_back(row);
  }

  std::vector<double> hs, e1, e2, e3, e4, e5;
  for (const auto& row : table.rows) {
    hs.push_back(row.h);
    e1.push_back(row.err_sigma);
    e2.push_back(row.err_u);
    e3.push_back(row.err_dsigma);
    e4.push_back(row.err_du);
    e5.push_back(row.sigma_mode_diff);
  }
  table.rate_sigma = fit_rate(hs, e1);
  table.rate_u = fit_rate(hs, e2);
  table.rate_dsigma = fit_rate(hs, e3);
  table.rate_du = fit_rate(hs, e4);
  table.rate_sigma_diff = fit_rate(hs, e5);
  return table;
}

void write_convergence_csv(const ConvergenceTable& table, std::ostream& out) {
  out << "h,dofs,err_sigma,err_u,err_dsigma,err_du,rate_sigma,rate_u,rate_dsigma,"
         "rate_du,rate_sigma_diff\n";
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& row = table.rows[i];
    out << row.h << "," << row.dofs << "," << row.err_sigma << "," << row.err_u << ","
        << row.err_dsigma << "," << row.err_du;
    if (i + 1 == table.rows.size())
      out << "," << table.rate_sigma << "," << table.rate_u << ","
          << table.rate_dsigma << "," << table.rate_du << "," << table.rate_sigma_diff;
    else
      out << ",,,,,";
    out << "\n";
  }
}

}  // namespace qtilde
