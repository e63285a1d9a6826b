#pragma once

#include "ttosc/delay.hpp"
#include "ttosc/system.hpp"
#include "ttosc/workload.hpp"

// Per-slot task scheduling. Each service's routing problem is a convex
// quadratic over one probability simplex per source cell with arrivals;
// it is solved by projected gradient descent with backtracking line search,
// started from the all-cloud point so the returned objective never exceeds
// the all-cloud objective. A grid-search oracle covers small instances.

namespace ttosc {

// Euclidean projection onto {x >= 0, sum x = 1}.
Vector project_to_simplex(const Vector& v);

struct ServiceSolve {
  PolicyMatrix policy;
  double objective = 0.0;          // value at the returned policy
  double allcloud_objective = 0.0; // value at the all-cloud starting point
  int iterations = 0;
};

ServiceSolve solve_service_scheduling(int service, const DeploymentPlan& plan,
                                      const ResourceAllocation& alloc,
                                      const ArrivalMatrix& arrivals, const SystemConfig& cfg,
                                      const SolverSettings& settings);

// Exhaustive search over the discretized product of simplices. Enforces at
// most 6 free variables.
double brute_force_oracle(int service, const DeploymentPlan& plan,
                          const ResourceAllocation& alloc, const ArrivalMatrix& arrivals,
                          const SystemConfig& cfg, double grid_step = 0.02);

struct SlotSolution {
  SlotPolicies policies;
  double objective = 0.0;           // T^tau
  double allcloud_objective = 0.0;  // all-cloud T^tau
  double gain = 0.0;                // G^tau = allcloud - objective
  IntVector iterations;             // per service; 0 where skipped
  bool counted = false;             // false when the slot had no arrivals
};

// Solves every service with arrivals independently and aggregates the
// arrival-weighted slot objective and gain.
SlotSolution solve_slot(const DeploymentPlan& plan, const ResourceAllocation& alloc,
                        const ArrivalMatrix& arrivals, const SystemConfig& cfg,
                        const SolverSettings& settings);

}  // namespace ttosc
