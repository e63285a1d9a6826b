#pragma once

#include <iosfwd>
#include <vector>

#include "ttosc/system.hpp"
#include "ttosc/workload.hpp"

// Expected-processing-delay model. A scheduling policy for one service is an
// M x (M+1) row-stochastic matrix; column M is the cloud. Tasks routed to a
// deployed ES share that service's compute slice with every task scheduled
// there in the same slot, so the per-task compute term scales with the
// expected load L_dst = sum_src p(src,dst) * N_src.

namespace ttosc {

using PolicyMatrix = Matrix;  // M x (M+1); last column = cloud

inline int cloud_column(const SystemConfig& cfg) { return cfg.cell_count(); }

PolicyMatrix all_cloud_policy(const SystemConfig& cfg);

struct SlotPolicies {
  std::vector<PolicyMatrix> per_service;  // length J
};

// Checks row sums (within 1e-9), entry bounds and the deployment support
// constraint. Returns a human-readable description of the first violation,
// or an empty string if the policy is feasible.
std::string describe_policy_violation(const PolicyMatrix& policy, const DeploymentPlan& plan,
                                      int service, const SystemConfig& cfg);

// Expected per-destination loads L_dst for one service: policy^T * counts.
Vector expected_loads(const PolicyMatrix& policy, const IntVector& counts);

// Delay of a task of `service` sent from src to dst carrying expected load
// `load` at dst. dst must host the service.
double pair_delay(int src, int dst, int service, double load, const ResourceAllocation& alloc,
                  const SystemConfig& cfg);

// Delay of a task of `service` sent from src to the cloud.
double cloud_delay(int src, int service, const SystemConfig& cfg);

// Expected delay for a task of `service` arriving at `src`, given the full
// policy (loads are induced by all rows).
double source_delay(int src, int service, const PolicyMatrix& policy, const IntVector& counts,
                    const ResourceAllocation& alloc, const SystemConfig& cfg);

// Arrival-weighted mean of source delays; 0 when the service has no arrivals.
double service_delay(int service, const PolicyMatrix& policy, const IntVector& counts,
                     const ResourceAllocation& alloc, const SystemConfig& cfg);

// Arrival-weighted mean over services with arrivals; 0 for an empty slot.
double slot_delay(const SlotPolicies& policies, const ArrivalMatrix& arrivals,
                  const ResourceAllocation& alloc, const SystemConfig& cfg);

// Mean of the counted slot delays. Throws NumericError on an empty horizon.
double time_average(const std::vector<double>& slot_delays);

// service_delay rearranged into the quadratic-in-policy solver form; agrees
// with the direct evaluation to floating-point error.
double quadratic_objective(int service, const PolicyMatrix& policy, const IntVector& counts,
                           const ResourceAllocation& alloc, const SystemConfig& cfg);

// Gradient of quadratic_objective in the full M x (M+1) layout. Entries for
// undeployed destinations are set to zero.
PolicyMatrix objective_gradient(int service, const PolicyMatrix& policy, const IntVector& counts,
                                const ResourceAllocation& alloc, const SystemConfig& cfg);

struct DelayReport {
  long slot = 0;
  Vector per_service;  // T^{j}; 0 where the service had no arrivals
  double slot_mean = 0.0;
};

DelayReport build_delay_report(const SlotPolicies& policies, const ArrivalMatrix& arrivals,
                               const ResourceAllocation& alloc, const SystemConfig& cfg);
void write_delay_report_csv(std::ostream& out, const std::vector<DelayReport>& reports,
                            bool header);

}  // namespace ttosc
