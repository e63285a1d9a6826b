#include "ttosc/system.hpp"

#include <limits>

namespace ttosc {

IntVector SystemConfig::service_sizes() const {
  IntVector v(service_count());
  for (int j = 0; j < service_count(); ++j) v(j) = services[j].data_size;
  return v;
}

int SystemConfig::total_service_size() const { return service_sizes().sum(); }

void validate_config(const SystemConfig& cfg) {
  const int m_count = cfg.cell_count();
  const int j_count = cfg.service_count();
  if (m_count < 1) throw ConfigError("config: at least one cell required");
  if (j_count < 1) throw ConfigError("config: at least one service required");
  if (cfg.slots_per_frame < 1) throw ConfigError("config: slots_per_frame must be >= 1");
  if (cfg.frames_per_episode < 1) throw ConfigError("config: frames_per_episode must be >= 1");

  for (const auto& s : cfg.services) {
    if (s.data_size < 1) throw ConfigError("config: service data_size must be a positive integer");
    if (s.task_mbits <= 0) throw ConfigError("config: service task_mbits must be > 0");
    if (s.task_gcycles <= 0) throw ConfigError("config: service task_gcycles must be > 0");
  }

  if (cfg.network.inter_es_mbps.rows() != m_count || cfg.network.inter_es_mbps.cols() != m_count)
    throw ConfigError("config: inter_es_mbps must be M x M");
  if (cfg.network.cloud_task_gcps <= 0) throw ConfigError("config: cloud_task_gcps must be > 0");

  double min_link = std::numeric_limits<double>::infinity();
  for (int m = 0; m < m_count; ++m)
    for (int n = 0; n < m_count; ++n) {
      if (m == n) continue;
      const double b = cfg.network.inter_es_mbps(m, n);
      if (b <= 0) throw ConfigError("config: inter-ES link rates must be > 0");
      min_link = std::min(min_link, b);
    }

  for (const auto& es : cfg.servers) {
    if (es.storage < 0) throw ConfigError("config: server storage must be >= 0");
    if (es.compute_gcps <= 0) throw ConfigError("config: server compute must be > 0");
    if (es.cloud_mbps <= 0) throw ConfigError("config: cloud link rate must be > 0");
    // The cloud sits behind a longer backhaul than any ES-to-ES hop.
    if (m_count > 1 && es.cloud_mbps >= min_link)
      throw ConfigError("config: cloud link rate must be below every inter-ES link rate");
  }

  if (cfg.workload.users_min > cfg.workload.users_max)
    throw ConfigError("config: users_min must be <= users_max");
  if (cfg.workload.users_min < 0) throw ConfigError("config: users_min must be >= 0");
  if (cfg.workload.zipf_exponent < 0) throw ConfigError("config: zipf_exponent must be >= 0");
  if (cfg.workload.activity < 0 || cfg.workload.activity > 1)
    throw ConfigError("config: activity must be in [0, 1]");
  if (cfg.workload.rotation_frames < 0)
    throw ConfigError("config: rotation_frames must be >= 0");

  if (cfg.solver.tolerance <= 0) throw ConfigError("config: solver tolerance must be > 0");
  if (cfg.solver.max_iterations < 1) throw ConfigError("config: solver max_iterations must be >= 1");

  const auto& tr = cfg.training;
  if (tr.discount < 0 || tr.discount >= 1) throw ConfigError("config: discount must be in [0, 1)");
  if (tr.epsilon_initial <= 0 || tr.epsilon_initial > 1)
    throw ConfigError("config: epsilon_initial must be in (0, 1]");
  if (tr.hidden_width < 1 || tr.gru_layers < 1)
    throw ConfigError("config: network dims must be >= 1");
  if (tr.batch_size < 1 || tr.buffer_capacity < tr.batch_size)
    throw ConfigError("config: buffer_capacity must be >= batch_size >= 1");
  if (tr.target_sync_period < 1) throw ConfigError("config: target_sync_period must be >= 1");
  if (tr.tls_activation != "identity" && tr.tls_activation != "tanh")
    throw ConfigError("config: tls_activation must be 'identity' or 'tanh'");
}

std::vector<DeploymentViolation> validate_deployment(const DeploymentPlan& plan,
                                                     const SystemConfig& cfg) {
  if (plan.deployed.rows() != cfg.cell_count() || plan.deployed.cols() != cfg.service_count())
    throw std::invalid_argument("deployment plan dimensions do not match the config");

  std::vector<DeploymentViolation> violations;
  for (int m = 0; m < cfg.cell_count(); ++m) {
    int load = 0;
    for (int j = 0; j < cfg.service_count(); ++j)
      if (plan.deployed(m, j) != 0) load += cfg.services[j].data_size;
    if (load > cfg.servers[m].storage)
      violations.push_back({m, load, cfg.servers[m].storage});
  }
  return violations;
}

ResourceAllocation derive_allocation(const DeploymentPlan& plan, const SystemConfig& cfg) {
  if (!validate_deployment(plan, cfg).empty())
    throw std::invalid_argument("derive_allocation: deployment plan violates storage capacity");

  const int m_count = cfg.cell_count();
  const int j_count = cfg.service_count();
  ResourceAllocation alloc;
  alloc.compute = Matrix::Zero(m_count, j_count);
  alloc.services_on = IntVector::Zero(m_count);

  for (int m = 0; m < m_count; ++m) {
    int n = 0;
    for (int j = 0; j < j_count; ++j) n += plan.deployed(m, j) != 0 ? 1 : 0;
    alloc.services_on(m) = n;
    if (n == 0) continue;
    const double share = cfg.servers[m].compute_gcps / n;
    for (int j = 0; j < j_count; ++j)
      if (plan.deployed(m, j) != 0) alloc.compute(m, j) = share;
  }

  const double inf = std::numeric_limits<double>::infinity();
  alloc.link_share = Matrix::Constant(m_count, m_count, inf);
  for (int dst = 0; dst < m_count; ++dst) {
    if (alloc.services_on(dst) == 0) continue;
    for (int src = 0; src < m_count; ++src) {
      if (src == dst) continue;  // self link carries no transmission cost
      alloc.link_share(src, dst) = cfg.network.inter_es_mbps(src, dst) / alloc.services_on(dst);
    }
  }
  return alloc;
}

long time_index(int frame, int slot_in_frame, const SystemConfig& cfg) {
  if (slot_in_frame < 0 || slot_in_frame >= cfg.slots_per_frame)
    throw std::out_of_range("time_index: slot_in_frame outside [0, K)");
  if (frame < 0) throw std::out_of_range("time_index: frame must be >= 0");
  return static_cast<long>(frame) * cfg.slots_per_frame + slot_in_frame;
}

}  // namespace ttosc
