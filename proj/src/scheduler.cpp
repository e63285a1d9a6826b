#include "ttosc/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace ttosc {

Vector project_to_simplex(const Vector& v) {
  const int n = static_cast<int>(v.size());
  if (n == 0) throw std::invalid_argument("project_to_simplex: empty vector");
  if (!v.allFinite()) throw std::invalid_argument("project_to_simplex: non-finite input");
  if (n == 1) return Vector::Ones(1);

  // Sort-based projection: find the threshold theta with sum(max(v-theta,0))=1.
  std::vector<double> u(v.data(), v.data() + n);
  std::sort(u.begin(), u.end(), std::greater<>());
  double cumulative = 0, theta = 0;
  for (int i = 0; i < n; ++i) {
    cumulative += u[i];
    const double candidate = (cumulative - 1.0) / (i + 1);
    if (u[i] - candidate > 0) theta = candidate;
  }
  return (v.array() - theta).max(0.0);
}

namespace {

// One service's scheduling problem restricted to its free variables:
// source rows with arrivals, destination columns with the service deployed,
// plus the cloud column (always last).
struct ReducedProblem {
  std::vector<int> rows;  // active sources
  std::vector<int> cols;  // deployed destinations
  Vector counts;          // arrivals per active source
  double total = 0;       // total arrivals N (all sources)
  Matrix transmit;        // rows x cols, S/R per task; 0 on self links
  Vector quad;            // per col, lambda / f_dst
  Vector cloud;           // per row, full cloud delay
};

ReducedProblem build_reduced(int service, const ResourceAllocation& alloc,
                             const ArrivalMatrix& arrivals, const SystemConfig& cfg) {
  const int m_count = cfg.cell_count();
  ReducedProblem rp;
  for (int m = 0; m < m_count; ++m)
    if (arrivals.counts(m, service) > 0) rp.rows.push_back(m);
  for (int m = 0; m < m_count; ++m)
    if (alloc.compute(m, service) > 0) rp.cols.push_back(m);

  const int n_rows = static_cast<int>(rp.rows.size());
  const int n_cols = static_cast<int>(rp.cols.size());
  rp.counts = Vector(n_rows);
  rp.cloud = Vector(n_rows);
  rp.transmit = Matrix::Zero(n_rows, n_cols);
  rp.quad = Vector(n_cols);
  const auto& spec = cfg.services[service];

  for (int i = 0; i < n_rows; ++i) {
    const int src = rp.rows[i];
    rp.counts(i) = arrivals.counts(src, service);
    rp.cloud(i) = cloud_delay(src, service, cfg);
    for (int c = 0; c < n_cols; ++c) {
      const int dst = rp.cols[c];
      if (src != dst) rp.transmit(i, c) = spec.task_mbits / alloc.link_rate(src, dst);
    }
  }
  for (int c = 0; c < n_cols; ++c)
    rp.quad(c) = spec.task_gcycles / alloc.compute(rp.cols[c], service);
  rp.total = arrivals.counts.col(service).sum();
  return rp;
}

// x is rows x (cols+1); the last column routes to the cloud.
double reduced_objective(const ReducedProblem& rp, const Matrix& x) {
  const int n_rows = static_cast<int>(rp.rows.size());
  const int n_cols = static_cast<int>(rp.cols.size());
  double total = 0;
  for (int c = 0; c < n_cols; ++c) {
    double load = 0, transmit = 0;
    for (int i = 0; i < n_rows; ++i) {
      const double weighted = rp.counts(i) * x(i, c);
      load += weighted;
      transmit += weighted * rp.transmit(i, c);
    }
    total += transmit + rp.quad(c) * load * load;
  }
  for (int i = 0; i < n_rows; ++i) total += rp.counts(i) * x(i, n_cols) * rp.cloud(i);
  return total / rp.total;
}

Matrix reduced_gradient(const ReducedProblem& rp, const Matrix& x) {
  const int n_rows = static_cast<int>(rp.rows.size());
  const int n_cols = static_cast<int>(rp.cols.size());
  Matrix g(n_rows, n_cols + 1);
  Vector loads = Vector::Zero(n_cols);
  for (int c = 0; c < n_cols; ++c)
    for (int i = 0; i < n_rows; ++i) loads(c) += rp.counts(i) * x(i, c);
  for (int i = 0; i < n_rows; ++i) {
    const double scale = rp.counts(i) / rp.total;
    for (int c = 0; c < n_cols; ++c)
      g(i, c) = scale * (rp.transmit(i, c) + 2.0 * rp.quad(c) * loads(c));
    g(i, n_cols) = scale * rp.cloud(i);
  }
  return g;
}

Matrix all_cloud_point(int n_rows, int n_cols) {
  Matrix x = Matrix::Zero(n_rows, n_cols + 1);
  x.col(n_cols).setOnes();
  return x;
}

Matrix project_rows(const Matrix& x) {
  Matrix out(x.rows(), x.cols());
  for (int i = 0; i < x.rows(); ++i)
    out.row(i) = project_to_simplex(x.row(i).transpose()).transpose();
  return out;
}

PolicyMatrix expand_policy(const ReducedProblem& rp, const Matrix& x, const SystemConfig& cfg) {
  PolicyMatrix policy = all_cloud_policy(cfg);
  const int n_cols = static_cast<int>(rp.cols.size());
  for (size_t i = 0; i < rp.rows.size(); ++i) {
    const int src = rp.rows[i];
    policy.row(src).setZero();
    for (int c = 0; c < n_cols; ++c) policy(src, rp.cols[c]) = x(i, c);
    policy(src, cfg.cell_count()) = x(i, n_cols);
  }
  return policy;
}

}  // namespace

ServiceSolve solve_service_scheduling(int service, const DeploymentPlan& plan,
                                      const ResourceAllocation& alloc,
                                      const ArrivalMatrix& arrivals, const SystemConfig& cfg,
                                      const SolverSettings& settings) {
  if (!validate_deployment(plan, cfg).empty())
    throw std::invalid_argument("solve_service_scheduling: invalid deployment plan");

  const ReducedProblem rp = build_reduced(service, alloc, arrivals, cfg);
  const int n_rows = static_cast<int>(rp.rows.size());
  const int n_cols = static_cast<int>(rp.cols.size());

  ServiceSolve result;
  if (n_rows == 0) {  // no arrivals for this service; nothing to schedule
    result.policy = all_cloud_policy(cfg);
    return result;
  }

  Matrix x = all_cloud_point(n_rows, n_cols);
  double value = reduced_objective(rp, x);
  if (!std::isfinite(value))
    throw NumericError("solve_service_scheduling: non-finite objective at the all-cloud point");
  result.allcloud_objective = value;

  double step = settings.initial_step;
  int iterations = 0;
  for (; iterations < settings.max_iterations; ++iterations) {
    const Matrix grad = reduced_gradient(rp, x);
    // Backtracking line search with the Armijo sufficient-decrease rule.
    bool accepted = false;
    Matrix candidate;
    double candidate_value = value;
    double eta = std::max(step * 2.0, settings.initial_step * 1e-12);
    for (; eta > 1e-16 * settings.initial_step; eta *= settings.shrink) {
      candidate = project_rows(x - eta * grad);
      const double direction = (grad.array() * (candidate - x).array()).sum();
      candidate_value = reduced_objective(rp, candidate);
      if (!std::isfinite(candidate_value))
        throw NumericError("solve_service_scheduling: non-finite objective during line search");
      // The non-increase check keeps the descent monotone even when rounding
      // makes the inner product marginally positive for a vanishing step.
      if (candidate_value <= value &&
          candidate_value <= value + settings.sufficient_decrease * direction) {
        accepted = true;
        break;
      }
    }
    if (!accepted) break;  // no improving step exists; stationary
    step = eta;
    const double decrease = value - candidate_value;
    x = std::move(candidate);
    value = candidate_value;
    if (decrease <= settings.tolerance * (1.0 + std::abs(value))) {
      ++iterations;
      break;
    }
  }

  result.policy = expand_policy(rp, x, cfg);
  result.objective = value;
  result.iterations = iterations;
  return result;
}

namespace {

// All points of the simplex grid {k/steps} with the given number of parts.
void enumerate_simplex_grid(int parts, int steps, std::vector<int>& prefix,
                            std::vector<Vector>& out) {
  if (parts == 1) {
    Vector point(prefix.size() + 1);
    int used = 0;
    for (size_t i = 0; i < prefix.size(); ++i) {
      point(i) = static_cast<double>(prefix[i]) / steps;
      used += prefix[i];
    }
    point(prefix.size()) = static_cast<double>(steps - used) / steps;
    out.push_back(point);
    return;
  }
  int used = 0;
  for (int p : prefix) used += p;
  for (int k = 0; k <= steps - used; ++k) {
    prefix.push_back(k);
    enumerate_simplex_grid(parts - 1, steps, prefix, out);
    prefix.pop_back();
  }
}

}  // namespace

double brute_force_oracle(int service, const DeploymentPlan& plan,
                          const ResourceAllocation& alloc, const ArrivalMatrix& arrivals,
                          const SystemConfig& cfg, double grid_step) {
  if (!validate_deployment(plan, cfg).empty())
    throw std::invalid_argument("brute_force_oracle: invalid deployment plan");
  if (grid_step <= 0 || grid_step > 1)
    throw std::invalid_argument("brute_force_oracle: grid_step must be in (0, 1]");

  const ReducedProblem rp = build_reduced(service, alloc, arrivals, cfg);
  const int n_rows = static_cast<int>(rp.rows.size());
  const int n_cols = static_cast<int>(rp.cols.size());
  if (n_rows == 0) return 0.0;
  if (n_rows * (n_cols + 1) > 6)
    throw std::invalid_argument("brute_force_oracle: more than 6 free variables");

  const int steps = std::max(1, static_cast<int>(std::lround(1.0 / grid_step)));
  std::vector<Vector> row_points;
  std::vector<int> prefix;
  enumerate_simplex_grid(n_cols + 1, steps, prefix, row_points);

  Matrix x(n_rows, n_cols + 1);
  double best = std::numeric_limits<double>::infinity();
  std::vector<size_t> choice(n_rows, 0);
  while (true) {
    for (int i = 0; i < n_rows; ++i) x.row(i) = row_points[choice[i]].transpose();
    best = std::min(best, reduced_objective(rp, x));
    int level = n_rows - 1;
    while (level >= 0 && ++choice[level] == row_points.size()) choice[level--] = 0;
    if (level < 0) break;
  }
  return best;
}

SlotSolution solve_slot(const DeploymentPlan& plan, const ResourceAllocation& alloc,
                        const ArrivalMatrix& arrivals, const SystemConfig& cfg,
                        const SolverSettings& settings) {
  if (!validate_deployment(plan, cfg).empty())
    throw std::invalid_argument("solve_slot: invalid deployment plan");

  const int j_count = cfg.service_count();
  SlotSolution sol;
  sol.policies.per_service.resize(j_count);
  sol.iterations = IntVector::Zero(j_count);

  double grand_total = 0;
  for (int j = 0; j < j_count; ++j) grand_total += arrivals.counts.col(j).sum();
  if (grand_total <= 0) {  // empty slot: skipped by convention
    for (int j = 0; j < j_count; ++j) sol.policies.per_service[j] = all_cloud_policy(cfg);
    return sol;
  }

  // The per-service subproblems share no variables; order is irrelevant.
  for (int j = 0; j < j_count; ++j) {
    const double service_total = arrivals.counts.col(j).sum();
    if (service_total == 0) {
      sol.policies.per_service[j] = all_cloud_policy(cfg);
      continue;
    }
    ServiceSolve solve = solve_service_scheduling(j, plan, alloc, arrivals, cfg, settings);
    const double weight = service_total / grand_total;
    sol.objective += weight * solve.objective;
    sol.allcloud_objective += weight * solve.allcloud_objective;
    sol.iterations(j) = solve.iterations;
    sol.policies.per_service[j] = std::move(solve.policy);
  }
  sol.gain = sol.allcloud_objective - sol.objective;
  sol.counted = true;
  return sol;
}

}  // namespace ttosc
