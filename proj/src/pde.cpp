#include "proxgrad/pde.hpp"

#include <Eigen/Dense>
#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "proxgrad/errors.hpp"

namespace proxgrad {

namespace {

using Triplets = std::vector<Eigen::Triplet<double>>;
using ColMajorMatrix = Eigen::SparseMatrix<double>;
// Incomplete Cholesky halves the iteration count here but its triangular
// solves cost more than the saved iterations, so Jacobi stays.
using Pcg = Eigen::ConjugateGradient<ColMajorMatrix, Eigen::Lower | Eigen::Upper,
                                     Eigen::DiagonalPreconditioner<double>>;

// Degree-4 symmetric rule on the reference triangle (weights sum to 1).
struct QuadPoint {
  std::array<double, 3> bary;
  double weight;
};
constexpr double kA1 = 0.108103018168070, kB1 = 0.445948490915965, kW1 = 0.223381589678011;
constexpr double kA2 = 0.816847572980459, kB2 = 0.091576213509771, kW2 = 0.109951743655322;
constexpr std::array<QuadPoint, 6> kQuad{{
    {{kA1, kB1, kB1}, kW1},
    {{kB1, kA1, kB1}, kW1},
    {{kB1, kB1, kA1}, kW1},
    {{kA2, kB2, kB2}, kW2},
    {{kB2, kA2, kB2}, kW2},
    {{kB2, kB2, kA2}, kW2},
}};

}  // namespace

struct ReducedProblem::Factorization {
  Eigen::SimplicialLDLT<ColMajorMatrix> ldlt;
};

namespace {

Eigen::VectorXd pcg_solve(const Pcg& pcg, const Eigen::VectorXd& rhs, int max_iter) {
  Eigen::VectorXd x = pcg.solve(rhs);
  if (pcg.info() != Eigen::Success)
    throw NumericError("conjugate gradient did not converge in " + std::to_string(max_iter) +
                       " iterations (residual " + std::to_string(pcg.error()) + ")");
  return x;
}

void setup_pcg(Pcg& pcg, const ColMajorMatrix& A, const PdeOptions& options) {
  pcg.setTolerance(options.cg_tol);
  pcg.setMaxIterations(options.cg_max_iter);
  pcg.compute(A);
}

}  // namespace

ReducedProblem::ReducedProblem(Mesh mesh, StateEquation equation, StateField target,
                               PdeOptions options)
    : mesh_(std::move(mesh)),
      equation_(equation),
      target_(std::move(target)),
      options_(options) {
  if (target_.values.size() != mesh_.num_nodes())
    throw ParameterError("target field does not match the mesh");
  if (!(options_.cg_tol > 0.0) || options_.cg_max_iter < 1)
    throw ParameterError("invalid linear solver options");

  const double area = mesh_.triangle_area();
  Triplets k_trip, m_trip;
  k_trip.reserve(9 * mesh_.num_triangles());
  m_trip.reserve(9 * mesh_.num_triangles());
  const auto& nodes = mesh_.nodes();
  for (const auto& tri : mesh_.triangles()) {
    Eigen::Matrix2d edges;
    edges.col(0) = nodes[tri[1]] - nodes[tri[0]];
    edges.col(1) = nodes[tri[2]] - nodes[tri[0]];
    const Eigen::Matrix2d inv = edges.inverse();
    std::array<Eigen::Vector2d, 3> grads;
    grads[1] = inv.row(0).transpose();
    grads[2] = inv.row(1).transpose();
    grads[0] = -grads[1] - grads[2];
    for (int a = 0; a < 3; ++a) {
      for (int b = 0; b < 3; ++b) {
        m_trip.emplace_back(tri[a], tri[b], area / 12.0 * (a == b ? 2.0 : 1.0));
        const int ia = mesh_.interior_index(tri[a]), ib = mesh_.interior_index(tri[b]);
        if (ia >= 0 && ib >= 0) k_trip.emplace_back(ia, ib, area * grads[a].dot(grads[b]));
      }
    }
  }
  stiffness_.resize(mesh_.num_interior(), mesh_.num_interior());
  stiffness_.setFromTriplets(k_trip.begin(), k_trip.end());
  mass_.resize(mesh_.num_nodes(), mesh_.num_nodes());
  mass_.setFromTriplets(m_trip.begin(), m_trip.end());

  if (options_.backend == LinearBackend::Cholesky && equation_ == StateEquation::Linear) {
    auto f = std::make_shared<Factorization>();
    f->ldlt.compute(ColMajorMatrix(stiffness_));
    if (f->ldlt.info() != Eigen::Success) throw NumericError("stiffness factorization failed");
    factorization_ = std::move(f);
  }
}

Eigen::VectorXd ReducedProblem::expand(const Eigen::VectorXd& interior) const {
  Eigen::VectorXd full = Eigen::VectorXd::Zero(mesh_.num_nodes());
  const auto& idx = mesh_.interior_nodes();
  for (int i = 0; i < static_cast<int>(idx.size()); ++i) full[idx[i]] = interior[i];
  return full;
}

Eigen::VectorXd ReducedProblem::restrict_interior(const Eigen::VectorXd& full) const {
  const auto& idx = mesh_.interior_nodes();
  Eigen::VectorXd out(static_cast<Eigen::Index>(idx.size()));
  for (int i = 0; i < static_cast<int>(idx.size()); ++i) out[i] = full[idx[i]];
  return out;
}

Eigen::VectorXd ReducedProblem::load(const ControlField& u) const {
  if (u.values.size() != mesh_.num_triangles())
    throw ParameterError("control field does not match the mesh");
  if (!u.values.allFinite()) throw ParameterError("control field has non-finite entries");
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(mesh_.num_interior());
  const double w = mesh_.triangle_area() / 3.0;
  const auto& tris = mesh_.triangles();
  for (int t = 0; t < mesh_.num_triangles(); ++t) {
    for (int node : tris[t]) {
      const int i = mesh_.interior_index(node);
      if (i >= 0) rhs[i] += w * u.values[t];
    }
  }
  return rhs;
}

Eigen::VectorXd ReducedProblem::solve_linear(const SparseMatrix& A, const Eigen::VectorXd& rhs,
                                             bool use_factorization) const {
  if (use_factorization && factorization_) {
    return factorization_->ldlt.solve(rhs);
  }
  const ColMajorMatrix Ac(A);
  if (options_.backend == LinearBackend::Cholesky) {
    Eigen::SimplicialLDLT<ColMajorMatrix> ldlt(Ac);
    if (ldlt.info() != Eigen::Success) throw NumericError("sparse factorization failed");
    return ldlt.solve(rhs);
  }
  Pcg pcg;
  setup_pcg(pcg, Ac, options_);
  return pcg_solve(pcg, rhs, options_.cg_max_iter);
}

Eigen::VectorXd ReducedProblem::nonlinear_term(const Eigen::VectorXd& y_full) const {
  Eigen::VectorXd out = Eigen::VectorXd::Zero(mesh_.num_interior());
  const double area = mesh_.triangle_area();
  for (const auto& tri : mesh_.triangles()) {
    const double y0 = y_full[tri[0]], y1 = y_full[tri[1]], y2 = y_full[tri[2]];
    for (const auto& q : kQuad) {
      const double yq = q.bary[0] * y0 + q.bary[1] * y1 + q.bary[2] * y2;
      const double c = q.weight * area * yq * yq * yq;
      for (int a = 0; a < 3; ++a) {
        const int i = mesh_.interior_index(tri[a]);
        if (i >= 0) out[i] += c * q.bary[a];
      }
    }
  }
  return out;
}

SparseMatrix ReducedProblem::nonlinear_jacobian(const Eigen::VectorXd& y_full) const {
  Triplets trip;
  trip.reserve(9 * mesh_.num_triangles());
  const double area = mesh_.triangle_area();
  for (const auto& tri : mesh_.triangles()) {
    const double y0 = y_full[tri[0]], y1 = y_full[tri[1]], y2 = y_full[tri[2]];
    Eigen::Matrix3d local = Eigen::Matrix3d::Zero();
    for (const auto& q : kQuad) {
      const double yq = q.bary[0] * y0 + q.bary[1] * y1 + q.bary[2] * y2;
      const double c = 3.0 * q.weight * area * yq * yq;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) local(a, b) += c * q.bary[a] * q.bary[b];
    }
    for (int a = 0; a < 3; ++a) {
      const int ia = mesh_.interior_index(tri[a]);
      if (ia < 0) continue;
      for (int b = 0; b < 3; ++b) {
        const int ib = mesh_.interior_index(tri[b]);
        if (ib >= 0) trip.emplace_back(ia, ib, local(a, b));
      }
    }
  }
  SparseMatrix jac(mesh_.num_interior(), mesh_.num_interior());
  jac.setFromTriplets(trip.begin(), trip.end());
  return jac;
}

StateField ReducedProblem::solve_state(const ControlField& u) const {
  const Eigen::VectorXd rhs = load(u);
  if (equation_ == StateEquation::Linear) return {expand(solve_linear(stiffness_, rhs, true))};

  // Damped Newton on K y + N(y) - B u = 0.
  const double rhs_norm = rhs.norm();
  Eigen::VectorXd y = Eigen::VectorXd::Zero(mesh_.num_interior());
  Eigen::VectorXd residual = -rhs;
  double res_norm = residual.norm();
  for (int it = 0; it <= options_.newton_max_iter; ++it) {
    if (res_norm <= options_.newton_tol * rhs_norm) return {expand(y)};
    if (it == options_.newton_max_iter) break;
    const Eigen::VectorXd y_full = expand(y);
    const SparseMatrix jac = SparseMatrix(stiffness_ + nonlinear_jacobian(y_full));
    const Eigen::VectorXd step = solve_linear(jac, -residual, false);
    double t = 1.0;
    bool decreased = false;
    for (int halving = 0; halving <= options_.max_halvings; ++halving, t *= 0.5) {
      const Eigen::VectorXd trial = y + t * step;
      Eigen::VectorXd trial_res = stiffness_ * trial + nonlinear_term(expand(trial)) - rhs;
      const double trial_norm = trial_res.norm();
      if (trial_norm < res_norm) {
        y = trial;
        residual = std::move(trial_res);
        res_norm = trial_norm;
        decreased = true;
        break;
      }
    }
    if (!decreased)
      throw NumericError("Newton: no residual decrease after " +
                         std::to_string(options_.max_halvings) + " step halvings (residual " +
                         std::to_string(res_norm) + ")");
  }
  throw NumericError("Newton did not converge in " + std::to_string(options_.newton_max_iter) +
                     " iterations (residual " + std::to_string(res_norm) + ")");
}

StateField ReducedProblem::solve_adjoint(const StateField& y) const { return solve_adjoint(y, target_); }

StateField ReducedProblem::solve_adjoint(const StateField& y, const StateField& target) const {
  if (y.values.size() != mesh_.num_nodes() || target.values.size() != mesh_.num_nodes())
    throw ParameterError("state field does not match the mesh");
  const Eigen::VectorXd rhs = restrict_interior(mass_ * (y.values - target.values));
  if (equation_ == StateEquation::Linear) return {expand(solve_linear(stiffness_, rhs, true))};
  const SparseMatrix op = SparseMatrix(stiffness_ + nonlinear_jacobian(y.values));
  return {expand(solve_linear(op, rhs, false))};
}

double ReducedProblem::tracking_value(const StateField& y) const {
  const Eigen::VectorXd e = y.values - target_.values;
  return 0.5 * e.dot(mass_ * e);
}

double ReducedProblem::reduced_value(const ControlField& u) const {
  return tracking_value(solve_state(u));
}

ControlField ReducedProblem::gradient_from_adjoint(const StateField& p) const {
  if (p.values.size() != mesh_.num_nodes()) throw ParameterError("adjoint field does not match the mesh");
  ControlField g{Eigen::VectorXd(mesh_.num_triangles())};
  const auto& tris = mesh_.triangles();
  for (int t = 0; t < mesh_.num_triangles(); ++t) {
    g.values[t] = (p.values[tris[t][0]] + p.values[tris[t][1]] + p.values[tris[t][2]]) / 3.0;
  }
  return g;
}

ControlField ReducedProblem::reduced_gradient(const ControlField& u) const {
  return gradient_from_adjoint(solve_adjoint(solve_state(u)));
}

double ReducedProblem::lipschitz_estimate(double tol, int max_iter) const {
  if (equation_ != StateEquation::Linear)
    throw UnsupportedError("lipschitz_estimate is only available for the linear state equation");
  const double area = mesh_.triangle_area();
  const StateField zero = mesh_.zero_state();
  // Deterministic positive start vector.
  ControlField v{Eigen::VectorXd::Ones(mesh_.num_triangles())};
  v.values /= std::sqrt(area * v.values.squaredNorm());
  double lambda = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const StateField y = solve_state(v);
    const ControlField w = gradient_from_adjoint(solve_adjoint(y, zero));
    const double next = area * v.values.dot(w.values);
    const double norm = std::sqrt(area * w.values.squaredNorm());
    if (!(norm > 0.0)) return 0.0;
    v.values = w.values / norm;
    if (it > 0 && std::abs(next - lambda) <= tol * std::abs(next)) return next;
    lambda = next;
  }
  throw NumericError("lipschitz_estimate: power iteration did not converge");
}

double ReducedProblem::state_inner(const StateField& a, const StateField& b) const {
  return a.values.dot(mass_ * b.values);
}

}  // namespace proxgrad

namespace proxgrad {

double l2_error(const Mesh& mesh, const StateField& y,
                const std::function<double(double, double)>& exact) {
  if (y.values.size() != mesh.num_nodes()) throw ParameterError("l2_error: field does not match mesh");
  const auto& nodes = mesh.nodes();
  double sum = 0.0;
  for (const auto& tri : mesh.triangles()) {
    for (const auto& q : kQuad) {
      Eigen::Vector2d x = Eigen::Vector2d::Zero();
      double yh = 0.0;
      for (int a = 0; a < 3; ++a) {
        x += q.bary[a] * nodes[tri[a]];
        yh += q.bary[a] * y.values[tri[a]];
      }
      const double e = yh - exact(x.x(), x.y());
      sum += q.weight * e * e;
    }
  }
  return std::sqrt(mesh.triangle_area() * sum);
}

}  // namespace proxgrad
