/*
 * Copyright 2026 The lossfair Authors.
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "lossfair/solver.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "lossfair/error.hpp"

namespace lossfair {
namespace {

// log(1 + exp(t)) without overflow.
double Softplus(double t) {
  return t > 0.0 ? t + std::log1p(std::exp(-t)) : std::log1p(std::exp(t));
}

double InfNorm(const Eigen::VectorXd& v) {
  return v.size() == 0 ? 0.0 : v.cwiseAbs().maxCoeff();
}

void CheckDims(const Dataset& ds, const Eigen::VectorXd& theta) {
  if (theta.size() != ds.width()) {
    Fail(ErrorCode::kInvalidArgument,
         "theta has dimension " + std::to_string(theta.size()) +
             ", dataset width is " + std::to_string(ds.width()));
  }
}

// Smooth loss plus the affine rows, viewed through the augmented Lagrangian
//   L(theta) = f(theta) + 1/(2 rho) sum_i [max(0, mu_i + rho g_i)^2 - mu_i^2]
// with g_i = a_i . theta - b_i.
class Problem {
 public:
  Problem(const Dataset& ds, double lambda, const ConstraintSet& constraints,
          bool regularize_bias = true)
      : x_(ds.features()),
        y_(ds.labels()),
        lambda_(lambda),
        penalized_(regularize_bias ? x_.cols() : x_.cols() - 1),
        a_(constraints.Matrix()),
        b_(constraints.Bounds()) {}

  Index dim() const { return x_.cols(); }
  Index rows() const { return a_.rows(); }
  const Eigen::MatrixXd& a() const { return a_; }
  const Eigen::VectorXd& b() const { return b_; }

  double Loss(const Eigen::VectorXd& theta) const {
    const Eigen::VectorXd margins = y_.cwiseProduct(x_ * theta);
    double sum = 0.0;
    for (Index i = 0; i < margins.size(); ++i) sum += Softplus(-margins[i]);
    return sum / static_cast<double>(x_.rows()) +
           lambda_ * theta.head(penalized_).squaredNorm();
  }

  Eigen::VectorXd LossGradient(const Eigen::VectorXd& theta) const {
    const Eigen::VectorXd margins = y_.cwiseProduct(x_ * theta);
    Eigen::VectorXd coef(margins.size());
    for (Index i = 0; i < margins.size(); ++i) {
      // -y_i * sigma(-m_i)
      coef[i] = -y_[i] / (1.0 + std::exp(margins[i]));
    }
    Eigen::VectorXd g = x_.transpose() * coef / static_cast<double>(x_.rows());
    g.head(penalized_) += 2.0 * lambda_ * theta.head(penalized_);
    return g;
  }

  Eigen::MatrixXd LossHessian(const Eigen::VectorXd& theta) const {
    const Eigen::VectorXd margins = y_.cwiseProduct(x_ * theta);
    Eigen::VectorXd root_w(margins.size());
    for (Index i = 0; i < margins.size(); ++i) {
      const double s = 1.0 / (1.0 + std::exp(margins[i]));
      root_w[i] = std::sqrt(s * (1.0 - s));
    }
    const Eigen::MatrixXd weighted = root_w.asDiagonal() * x_;
    Eigen::MatrixXd h = weighted.transpose() * weighted / static_cast<double>(x_.rows());
    h.diagonal().head(penalized_).array() += 2.0 * lambda_;
    return h;
  }

  Eigen::VectorXd Residual(const Eigen::VectorXd& theta) const {
    if (a_.rows() == 0) return Eigen::VectorXd();
    return a_ * theta - b_;
  }

  double Lagrangian(const Eigen::VectorXd& theta, const Eigen::VectorXd& mu,
                    double rho) const {
    double value = Loss(theta);
    if (rows() > 0) {
      const Eigen::VectorXd shifted = mu + rho * Residual(theta);
      value += (shifted.cwiseMax(0.0).squaredNorm() - mu.squaredNorm()) / (2.0 * rho);
    }
    return value;
  }

  Eigen::VectorXd LagrangianGradient(const Eigen::VectorXd& theta,
                                     const Eigen::VectorXd& mu, double rho) const {
    Eigen::VectorXd g = LossGradient(theta);
    if (rows() > 0) {
      g += a_.transpose() * (mu + rho * Residual(theta)).cwiseMax(0.0);
    }
    return g;
  }

  Eigen::MatrixXd LagrangianHessian(const Eigen::VectorXd& theta,
                                    const Eigen::VectorXd& mu, double rho) const {
    Eigen::MatrixXd h = LossHessian(theta);
    if (rows() > 0) {
      const Eigen::VectorXd shifted = mu + rho * Residual(theta);
      for (Index i = 0; i < rows(); ++i) {
        if (shifted[i] > 0.0) {
          h.noalias() += rho * a_.row(i).transpose() * a_.row(i);
        }
      }
    }
    return h;
  }

 private:
  const Eigen::MatrixXd& x_;
  const Eigen::VectorXd& y_;
  double lambda_;
  Index penalized_;  // leading coordinates covered by the L2 penalty
  Eigen::MatrixXd a_;
  Eigen::VectorXd b_;
};

// Newton direction for H p = -g. Falls back to a shifted system when H is not
// numerically positive definite.
Eigen::VectorXd NewtonDirection(Eigen::MatrixXd h, const Eigen::VectorXd& g) {
  double shift = 0.0;
  const double scale = std::max(1.0, h.diagonal().cwiseAbs().maxCoeff());
  for (int attempt = 0; attempt < 12; ++attempt) {
    if (shift > 0.0) h.diagonal().array() += shift;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
    if (ldlt.info() == Eigen::Success && ldlt.isPositive()) {
      Eigen::VectorXd p = ldlt.solve(-g);
      if (p.allFinite() && p.dot(g) < 0.0) return p;
    }
    shift = shift == 0.0 ? 1e-10 * scale : shift * 10.0;
  }
  return -g;
}

struct InnerResult {
  int iterations = 0;
  double gradient_norm = 0.0;
  bool converged = false;
};

// Damped Newton on the augmented Lagrangian in theta.
InnerResult MinimizeInner(const Problem& problem, Eigen::VectorXd& theta,
                          const Eigen::VectorXd& mu, double rho, double tolerance,
                          int max_iterations) {
  InnerResult result;
  Eigen::VectorXd g = problem.LagrangianGradient(theta, mu, rho);
  double value = problem.Lagrangian(theta, mu, rho);
  for (int it = 0; it < max_iterations; ++it) {
    result.gradient_norm = InfNorm(g);
    if (result.gradient_norm <= tolerance) {
      result.converged = true;
      return result;
    }
    ++result.iterations;
    const Eigen::VectorXd p =
        NewtonDirection(problem.LagrangianHessian(theta, mu, rho), g);
    const double slope = g.dot(p);

    double step = 1.0;
    bool accepted = false;
    Eigen::VectorXd candidate;
    Eigen::VectorXd candidate_g;
    double candidate_value = 0.0;
    for (int ls = 0; ls < 60; ++ls) {
      candidate = theta + step * p;
      candidate_value = problem.Lagrangian(candidate, mu, rho);
      if (candidate_value <= value + 1e-4 * step * slope) {
        candidate_g = problem.LagrangianGradient(candidate, mu, rho);
        accepted = true;
        break;
      }
      // Near the optimum the decrease drowns in rounding; a full step that
      // halves the gradient is taken instead.
      if (ls == 0 && result.gradient_norm < 1e-4) {
        candidate_g = problem.LagrangianGradient(candidate, mu, rho);
        if (InfNorm(candidate_g) <= 0.5 * result.gradient_norm) {
          accepted = true;
          break;
        }
      }
      step *= 0.5;
    }
    if (!accepted) return result;  // stalled; the outer loop decides
    theta = std::move(candidate);
    value = candidate_value;
    g = std::move(candidate_g);
  }
  result.gradient_norm = InfNorm(g);
  result.converged = result.gradient_norm <= tolerance;
  return result;
}

}  // namespace

std::string TraceRecordToJsonLine(const TraceRecord& r) {
  char buf[320];
  std::snprintf(buf, sizeof(buf),
                "{\"outer\":%d,\"inner_total\":%d,\"objective\":%.17g,"
                "\"max_violation\":%.17g,\"stationarity\":%.17g,"
                "\"complementarity\":%.17g,\"penalty\":%.17g}",
                r.outer_iteration, r.inner_iterations, r.objective,
                r.max_violation, r.stationarity, r.complementarity, r.penalty);
  return buf;
}

void SolveOptions::Validate() const {
  if (!(kkt_tolerance > 0.0) || !(feasibility_tolerance > 0.0) ||
      max_outer_iterations <= 0 || max_inner_iterations <= 0 ||
      !(penalty_growth > 1.0) || !(initial_penalty > 0.0)) {
    Fail(ErrorCode::kInvalidArgument,
         "solve options: tolerances, iteration limits and penalty parameters "
         "must be positive (penalty growth > 1)");
  }
}

const char* SolveStatusName(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal:
      return "Optimal";
    case SolveStatus::kInfeasible:
      return "Infeasible";
    case SolveStatus::kIterationLimit:
      return "IterationLimit";
  }
  return "Unknown";
}

double Objective(const Dataset& ds, const Eigen::VectorXd& theta, double lambda,
                 bool regularize_bias) {
  CheckDims(ds, theta);
  return Problem(ds, lambda, {}, regularize_bias).Loss(theta);
}

Eigen::VectorXd Gradient(const Dataset& ds, const Eigen::VectorXd& theta,
                         double lambda, bool regularize_bias) {
  CheckDims(ds, theta);
  return Problem(ds, lambda, {}, regularize_bias).LossGradient(theta);
}

Eigen::MatrixXd Hessian(const Dataset& ds, const Eigen::VectorXd& theta,
                        double lambda, bool regularize_bias) {
  CheckDims(ds, theta);
  return Problem(ds, lambda, {}, regularize_bias).LossHessian(theta);
}

double Stationarity(const Dataset& ds, const Eigen::VectorXd& theta, double lambda,
                    const ConstraintSet& constraints,
                    const Eigen::VectorXd& multipliers, bool regularize_bias) {
  Eigen::VectorXd g = Gradient(ds, theta, lambda, regularize_bias);
  if (!constraints.empty()) g += constraints.Matrix().transpose() * multipliers;
  return InfNorm(g);
}

double Complementarity(const Eigen::VectorXd& theta,
                       const ConstraintSet& constraints,
                       const Eigen::VectorXd& multipliers) {
  double worst = 0.0;
  for (std::size_t i = 0; i < constraints.size(); ++i) {
    worst = std::max(worst, std::abs(multipliers[static_cast<Index>(i)] *
                                     constraints[i].Slack(theta)));
  }
  return worst;
}

FeasibilityResult FindFeasiblePoint(const ConstraintSet& constraints,
                                    const Eigen::VectorXd& start,
                                    double tolerance) {
  FeasibilityResult out;
  out.point = start;
  if (constraints.empty()) {
    out.feasible = true;
    return out;
  }
  if (start.size() != constraints.dim()) {
    Fail(ErrorCode::kInvalidArgument, "phase one: start point dimension mismatch");
  }
  const Eigen::MatrixXd a = constraints.Matrix();
  const Eigen::VectorXd b = constraints.Bounds();
  auto half_sq_violation = [&](const Eigen::VectorXd& t) {
    return 0.5 * (a * t - b).cwiseMax(0.0).squaredNorm();
  };

  Eigen::VectorXd theta = start;
  double phi = half_sq_violation(theta);
  // Levenberg-Marquardt on the violated rows. Plain Gauss-Newton steps explode
  // when violated rows are nearly parallel.
  double damping = 1e-6;
  for (int it = 0; it < 5000 && constraints.MaxViolation(theta) > 0.1 * tolerance;
       ++it) {
    const Eigen::VectorXd r = a * theta - b;
    std::vector<Index> active;
    for (Index i = 0; i < r.size(); ++i) {
      if (r[i] > 0.0) active.push_back(i);
    }
    Eigen::MatrixXd a_s(static_cast<Index>(active.size()), a.cols());
    Eigen::VectorXd r_s(static_cast<Index>(active.size()));
    for (std::size_t k = 0; k < active.size(); ++k) {
      a_s.row(static_cast<Index>(k)) = a.row(active[k]);
      r_s[static_cast<Index>(k)] = r[active[k]];
    }
    const Eigen::VectorXd g = a_s.transpose() * r_s;
    const Eigen::MatrixXd jtj = a_s.transpose() * a_s;
    const double scale = std::max(jtj.diagonal().maxCoeff(), 1e-300);
    bool accepted = false;
    while (damping < 1e12) {
      Eigen::MatrixXd h = jtj;
      h.diagonal().array() += damping * scale;
      const Eigen::VectorXd delta = -h.ldlt().solve(g);
      const double candidate_phi = half_sq_violation(theta + delta);
      if (delta.allFinite() && candidate_phi < phi) {
        theta += delta;
        phi = candidate_phi;
        damping = std::max(damping / 10.0, 1e-12);
        accepted = true;
        break;
      }
      damping *= 10.0;
    }
    if (!accepted) break;  // stationary: the violation cannot be reduced further
  }
  out.point = theta;
  out.max_violation = constraints.MaxViolation(theta);
  out.feasible = out.max_violation <= tolerance;
  return out;
}

SolveReport Minimize(const Dataset& ds, double lambda,
                     const ConstraintSet& constraints, const SolveOptions& opts,
                     const Eigen::VectorXd* warm_start) {
  opts.Validate();
  if (!std::isfinite(lambda) || lambda < 0.0) {
    Fail(ErrorCode::kInvalidArgument, "minimize: lambda must be finite and >= 0");
  }
  if (ds.rows() == 0) Fail(ErrorCode::kData, "minimize: empty dataset");
  if (!constraints.empty() && constraints.dim() != ds.width()) {
    Fail(ErrorCode::kInvalidArgument,
         "minimize: constraint dimension " + std::to_string(constraints.dim()) +
             " does not match dataset width " + std::to_string(ds.width()));
  }
  Eigen::VectorXd theta = Eigen::VectorXd::Zero(ds.width());
  if (warm_start != nullptr) {
    CheckDims(ds, *warm_start);
    theta = *warm_start;
  }

  const Problem problem(ds, lambda, constraints, opts.regularize_bias);
  const Index m = problem.rows();
  SolveReport report;
  report.multipliers = Eigen::VectorXd::Zero(m);

  const FeasibilityResult phase_one =
      FindFeasiblePoint(constraints, theta, opts.feasibility_tolerance);
  if (!phase_one.feasible) {
    report.theta = LinearModel(phase_one.point);
    report.objective = problem.Loss(phase_one.point);
    report.status = SolveStatus::kInfeasible;
    report.max_constraint_violation = phase_one.max_violation;
    report.stationarity = Stationarity(ds, phase_one.point, lambda, constraints,
                                       report.multipliers, opts.regularize_bias);
    report.kkt_residual = report.stationarity;
    return report;
  }

  const double inner_tolerance = 0.1 * opts.kkt_tolerance;
  Eigen::VectorXd mu = Eigen::VectorXd::Zero(m);
  double rho = opts.initial_penalty;
  double previous_violation = std::numeric_limits<double>::infinity();
  report.status = SolveStatus::kIterationLimit;

  for (int outer = 1; outer <= opts.max_outer_iterations; ++outer) {
    const InnerResult inner = MinimizeInner(problem, theta, mu, rho, inner_tolerance,
                                            opts.max_inner_iterations);
    report.inner_iterations += inner.iterations;
    report.outer_iterations = outer;

    const Eigen::VectorXd residual = problem.Residual(theta);
    if (m > 0) mu = (mu + rho * residual).cwiseMax(0.0);
    const double violation = m > 0 ? std::max(0.0, residual.maxCoeff()) : 0.0;
    Eigen::VectorXd kkt_gradient = problem.LossGradient(theta);
    if (m > 0) kkt_gradient += problem.a().transpose() * mu;
    const double stationarity = InfNorm(kkt_gradient);
    const double complementarity =
        m > 0 ? mu.cwiseProduct(residual).cwiseAbs().maxCoeff() : 0.0;

    if (opts.trace) {
      TraceRecord rec;
      rec.outer_iteration = outer;
      rec.inner_iterations = report.inner_iterations;
      rec.objective = problem.Loss(theta);
      rec.max_violation = violation;
      rec.stationarity = stationarity;
      rec.complementarity = complementarity;
      rec.penalty = rho;
      opts.trace(rec);
    }

    report.max_constraint_violation = violation;
    report.stationarity = stationarity;
    report.complementarity = complementarity;
    if (violation <= opts.feasibility_tolerance &&
        stationarity <= opts.kkt_tolerance &&
        complementarity <= opts.kkt_tolerance) {
      report.status = SolveStatus::kOptimal;
      break;
    }
    if (violation > 0.25 * previous_violation) {
      rho = std::min(rho * opts.penalty_growth, 1e12);
    }
    previous_violation = violation;
  }

  report.theta = LinearModel(theta);
  report.objective = problem.Loss(theta);
  report.multipliers = mu;
  report.kkt_residual = std::max(report.stationarity, report.complementarity);
  return report;
}

}  // namespace lossfair
