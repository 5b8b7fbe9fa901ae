#pragma once

#include <Eigen/SparseCore>
#include <functional>
#include <memory>

#include "proxgrad/mesh.hpp"

namespace proxgrad {

enum class StateEquation {
  Linear,      // -Δy = u
  Semilinear,  // -Δy + y^3 = u
};

enum class LinearBackend { ConjugateGradient, Cholesky };

struct PdeOptions {
  double cg_tol = 1e-12;  // relative residual
  int cg_max_iter = 50000;
  double newton_tol = 1e-10;  // residual relative to the load vector
  int newton_max_iter = 50;
  int max_halvings = 30;
  LinearBackend backend = LinearBackend::ConjugateGradient;
};

using SparseMatrix = Eigen::SparseMatrix<double, Eigen::RowMajor>;

/// P1 finite-element discretization of the state equation on a Mesh with
/// homogeneous Dirichlet data, together with the reduced tracking functional
///
///   f(u) = 1/2 ||y_u - y_d||^2_{L^2}
///
/// and its L^2 gradient as a piecewise-constant field. Immutable after
/// construction; every solve works on private storage.
class ReducedProblem {
 public:
  ReducedProblem(Mesh mesh, StateEquation equation, StateField target, PdeOptions options = {});

  [[nodiscard]] const Mesh& mesh() const { return mesh_; }
  [[nodiscard]] StateEquation equation() const { return equation_; }
  [[nodiscard]] const StateField& target() const { return target_; }
  [[nodiscard]] const PdeOptions& options() const { return options_; }
  /// Stiffness restricted to interior nodes.
  [[nodiscard]] const SparseMatrix& stiffness() const { return stiffness_; }
  /// Consistent mass matrix on all nodes.
  [[nodiscard]] const SparseMatrix& mass() const { return mass_; }

  /// Throws NumericError if CG or Newton fails to converge.
  [[nodiscard]] StateField solve_state(const ControlField& u) const;
  /// Solves (A'(y))^T p = M (y - y_d) with zero Dirichlet data.
  [[nodiscard]] StateField solve_adjoint(const StateField& y) const;
  [[nodiscard]] StateField solve_adjoint(const StateField& y, const StateField& target) const;

  /// 1/2 ||y - y_d||^2 with the mass matrix.
  [[nodiscard]] double tracking_value(const StateField& y) const;
  [[nodiscard]] double reduced_value(const ControlField& u) const;
  /// Cellwise mean of the adjoint state.
  [[nodiscard]] ControlField gradient_from_adjoint(const StateField& p) const;
  [[nodiscard]] ControlField reduced_gradient(const ControlField& u) const;

  /// Power iteration for the largest eigenvalue of the reduced Hessian
  /// P S^* M S, an estimate of the Lipschitz constant of the gradient.
  /// Linear problems only.
  [[nodiscard]] double lipschitz_estimate(double tol = 1e-6, int max_iter = 1000) const;

  /// L^2 inner product of two nodal fields.
  [[nodiscard]] double state_inner(const StateField& a, const StateField& b) const;

 private:
  [[nodiscard]] Eigen::VectorXd load(const ControlField& u) const;
  [[nodiscard]] Eigen::VectorXd solve_linear(const SparseMatrix& A, const Eigen::VectorXd& rhs,
                                             bool use_factorization) const;
  [[nodiscard]] Eigen::VectorXd nonlinear_term(const Eigen::VectorXd& y_full) const;
  [[nodiscard]] SparseMatrix nonlinear_jacobian(const Eigen::VectorXd& y_full) const;
  [[nodiscard]] Eigen::VectorXd expand(const Eigen::VectorXd& interior) const;
  [[nodiscard]] Eigen::VectorXd restrict_interior(const Eigen::VectorXd& full) const;

  struct Factorization;

  Mesh mesh_;
  StateEquation equation_;
  StateField target_;
  PdeOptions options_;
  SparseMatrix stiffness_;
  SparseMatrix mass_;
  std::shared_ptr<const Factorization> factorization_;
};

}  // namespace proxgrad

namespace proxgrad {

/// ||y_h - y_exact||_{L^2} with a degree-4 rule on every triangle.
[[nodiscard]] double l2_error(const Mesh& mesh, const StateField& y,
                              const std::function<double(double, double)>& exact);

}  // namespace proxgrad
