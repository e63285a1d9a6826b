#include "ttosc/delay.hpp"

#include <cmath>
#include <ostream>

namespace ttosc {

PolicyMatrix all_cloud_policy(const SystemConfig& cfg) {
  PolicyMatrix p = PolicyMatrix::Zero(cfg.cell_count(), cfg.cell_count() + 1);
  p.col(cfg.cell_count()).setOnes();
  return p;
}

std::string describe_policy_violation(const PolicyMatrix& policy, const DeploymentPlan& plan,
                                      int service, const SystemConfig& cfg) {
  const int m_count = cfg.cell_count();
  if (policy.rows() != m_count || policy.cols() != m_count + 1)
    return "policy has wrong dimensions";
  for (int m = 0; m < m_count; ++m) {
    double row_sum = 0;
    for (int n = 0; n <= m_count; ++n) {
      const double p = policy(m, n);
      if (p < 0 || p > 1)
        return "entry (" + std::to_string(m) + "," + std::to_string(n) + ") outside [0,1]";
      if (n < m_count && p != 0 && !plan.is_deployed(n, service))
        return "positive probability to undeployed ES " + std::to_string(n) + " from " +
               std::to_string(m);
      row_sum += p;
    }
    if (std::abs(row_sum - 1.0) > 1e-9)
      return "row " + std::to_string(m) + " sums to " + std::to_string(row_sum);
  }
  return {};
}

Vector expected_loads(const PolicyMatrix& policy, const IntVector& counts) {
  return policy.leftCols(policy.rows()).transpose() * counts.cast<double>();
}

double pair_delay(int src, int dst, int service, double load, const ResourceAllocation& alloc,
                  const SystemConfig& cfg) {
  const double f = alloc.compute(dst, service);
  if (f <= 0)
    throw std::invalid_argument("pair_delay: destination does not host the service");
  if (load < 0) throw std::invalid_argument("pair_delay: negative load");
  const auto& spec = cfg.services[service];
  const double transmission = src == dst ? 0.0 : spec.task_mbits / alloc.link_rate(src, dst);
  return transmission + spec.task_gcycles * load / f;
}

double cloud_delay(int src, int service, const SystemConfig& cfg) {
  const auto& spec = cfg.services[service];
  return spec.task_mbits / cfg.servers[src].cloud_mbps +
         spec.task_gcycles / cfg.network.cloud_task_gcps;
}

double source_delay(int src, int service, const PolicyMatrix& policy, const IntVector& counts,
                    const ResourceAllocation& alloc, const SystemConfig& cfg) {
  const int m_count = cfg.cell_count();
  const Vector loads = expected_loads(policy, counts);
  double total = 0;
  for (int dst = 0; dst < m_count; ++dst) {
    const double p = policy(src, dst);
    if (p == 0) continue;
    total += p * pair_delay(src, dst, service, loads(dst), alloc, cfg);
  }
  total += policy(src, m_count) * cloud_delay(src, service, cfg);
  return total;
}

double service_delay(int service, const PolicyMatrix& policy, const IntVector& counts,
                     const ResourceAllocation& alloc, const SystemConfig& cfg) {
  const double total_count = counts.sum();
  if (total_count <= 0) return 0.0;
  double total = 0;
  for (int src = 0; src < cfg.cell_count(); ++src) {
    if (counts(src) == 0) continue;
    total += counts(src) / total_count * source_delay(src, service, policy, counts, alloc, cfg);
  }
  return total;
}

double slot_delay(const SlotPolicies& policies, const ArrivalMatrix& arrivals,
                  const ResourceAllocation& alloc, const SystemConfig& cfg) {
  const int j_count = cfg.service_count();
  if (static_cast<int>(policies.per_service.size()) != j_count)
    throw std::invalid_argument("slot_delay: one policy per service required");
  double grand_total = 0;
  for (int j = 0; j < j_count; ++j) grand_total += arrivals.counts.col(j).sum();
  if (grand_total <= 0) return 0.0;

  double total = 0;
  for (int j = 0; j < j_count; ++j) {
    const IntVector counts = arrivals.counts.col(j);
    const double service_count = counts.sum();
    if (service_count == 0) continue;
    total += service_count / grand_total *
             service_delay(j, policies.per_service[j], counts, alloc, cfg);
  }
  return total;
}

double time_average(const std::vector<double>& slot_delays) {
  if (slot_delays.empty()) throw NumericError("time_average: empty horizon");
  double total = 0;
  for (double d : slot_delays) total += d;
  return total / static_cast<double>(slot_delays.size());
}

double quadratic_objective(int service, const PolicyMatrix& policy, const IntVector& counts,
                           const ResourceAllocation& alloc, const SystemConfig& cfg) {
  const int m_count = cfg.cell_count();
  const double total_count = counts.sum();
  if (total_count <= 0) return 0.0;
  const auto& spec = cfg.services[service];

  double total = 0;
  for (int dst = 0; dst < m_count; ++dst) {
    if (alloc.compute(dst, service) <= 0) continue;
    double load = 0;       // L_dst
    double transmit = 0;   // sum_src N_src p(src,dst) S / R(src,dst)
    for (int src = 0; src < m_count; ++src) {
      const double weighted = counts(src) * policy(src, dst);
      load += weighted;
      if (src != dst) transmit += weighted * spec.task_mbits / alloc.link_rate(src, dst);
    }
    total += transmit + spec.task_gcycles / alloc.compute(dst, service) * load * load;
  }
  for (int src = 0; src < m_count; ++src)
    total += counts(src) * policy(src, m_count) * cloud_delay(src, service, cfg);
  return total / total_count;
}

PolicyMatrix objective_gradient(int service, const PolicyMatrix& policy, const IntVector& counts,
                                const ResourceAllocation& alloc, const SystemConfig& cfg) {
  const int m_count = cfg.cell_count();
  PolicyMatrix grad = PolicyMatrix::Zero(m_count, m_count + 1);
  const double total_count = counts.sum();
  if (total_count <= 0) return grad;
  const auto& spec = cfg.services[service];
  const Vector loads = expected_loads(policy, counts);

  for (int src = 0; src < m_count; ++src) {
    const double n_src = counts(src);
    if (n_src == 0) continue;
    for (int dst = 0; dst < m_count; ++dst) {
      const double f = alloc.compute(dst, service);
      if (f <= 0) continue;
      const double transmit = src == dst ? 0.0 : spec.task_mbits / alloc.link_rate(src, dst);
      grad(src, dst) =
          n_src / total_count * transmit + 2.0 * spec.task_gcycles * n_src * loads(dst) / (total_count * f);
    }
    grad(src, m_count) = n_src / total_count * cloud_delay(src, service, cfg);
  }
  return grad;
}

DelayReport build_delay_report(const SlotPolicies& policies, const ArrivalMatrix& arrivals,
                               const ResourceAllocation& alloc, const SystemConfig& cfg) {
  DelayReport report;
  report.slot = arrivals.slot;
  report.per_service = Vector::Zero(cfg.service_count());
  for (int j = 0; j < cfg.service_count(); ++j) {
    const IntVector counts = arrivals.counts.col(j);
    if (counts.sum() == 0) continue;
    report.per_service(j) = service_delay(j, policies.per_service[j], counts, alloc, cfg);
  }
  report.slot_mean = slot_delay(policies, arrivals, alloc, cfg);
  return report;
}

void write_delay_report_csv(std::ostream& out, const std::vector<DelayReport>& reports,
                            bool header) {
  if (header) out << "slot,service,service_delay,slot_delay\n";
  char buf[64];
  for (const auto& r : reports)
    for (int j = 0; j < r.per_service.size(); ++j) {
      out << r.slot << ',' << j << ',';
      std::snprintf(buf, sizeof buf, "%.17g,%.17g\n", r.per_service(j), r.slot_mean);
      out << buf;
    }
}

}  // namespace ttosc
