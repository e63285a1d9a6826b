#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

// Static system description: cells with one edge server (ES) each, a service
// catalog, the inter-node network, and the two-level time grid (frames split
// into slots). Deployment feasibility and the equal-split resource allocation
// derived from a deployment live here too.

namespace ttosc {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using IntMatrix = Eigen::MatrixXi;
using IntVector = Eigen::VectorXi;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct NumericError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct ServiceSpec {
  int id = 0;           // index j
  int data_size = 1;    // storage units occupied when deployed (integer)
  double task_mbits = 8.0;   // megabits per task
  double task_gcycles = 0.5; // gigacycles per task
};

struct EdgeServerSpec {
  int id = 0;              // index m
  int storage = 8;         // storage units
  double compute_gcps = 20.0;  // total CPU capacity, gigacycles/s
  double cloud_mbps = 100.0;   // link rate to the cloud
};

struct NetworkSpec {
  Matrix inter_es_mbps;        // M x M, entry (m, m') = link rate m -> m'; diagonal unused
  double cloud_task_gcps = 10.0;  // cloud compute share per task (constant)
};

struct WorkloadParams {
  double zipf_exponent = 1.2;
  int users_min = 10;
  int users_max = 50;
  double activity = 0.3;      // per-user probability of issuing a task in a slot
  int rotation_frames = 5;    // rotate each cell's popularity ranking every this many frames; 0 disables
};

struct SolverSettings {
  int max_iterations = 500;
  double tolerance = 1e-7;           // relative objective change
  double initial_step = 1.0;         // line search start
  double shrink = 0.5;               // backtracking factor
  double sufficient_decrease = 1e-4; // Armijo constant
};

struct TrainingConfig {
  int hidden_width = 128;
  int gru_layers = 1;
  double learning_rate = 0.01;
  int batch_size = 64;
  double discount = 0.9;          // gamma
  int buffer_capacity = 2000;
  int target_sync_period = 20;    // frames between hard target copies
  double epsilon_initial = 0.5;
  double epsilon_final = 0.01;
  int epsilon_decay_episodes = 500;
  bool normalize_observations = true;  // divide counts by the max cell population
  bool normalize_reward = false;       // divide R^t by K
  std::string tls_activation = "identity";  // or "tanh"
};

struct SystemConfig {
  std::vector<ServiceSpec> services;
  std::vector<EdgeServerSpec> servers;
  NetworkSpec network;
  WorkloadParams workload;
  SolverSettings solver;
  TrainingConfig training;
  int slots_per_frame = 10;   // K
  int frames_per_episode = 20; // T
  std::uint64_t seed = 1;

  int cell_count() const { return static_cast<int>(servers.size()); }
  int service_count() const { return static_cast<int>(services.size()); }
  long slots_per_episode() const {
    return static_cast<long>(slots_per_frame) * frames_per_episode;
  }
  IntVector service_sizes() const;   // V_j
  int total_service_size() const;    // sum of V_j
};

// Checks structural consistency (list lengths, positivity, the cloud link
// being slower than every inter-ES link). Throws ConfigError.
void validate_config(const SystemConfig& cfg);

// One frame's deployment bits, M x J.
struct DeploymentPlan {
  int frame = 0;
  IntMatrix deployed;  // entries in {0, 1}

  bool is_deployed(int server, int service) const {
    return deployed(server, service) != 0;
  }
};

struct DeploymentViolation {
  int server = 0;
  int load = 0;      // occupied storage units
  int capacity = 0;
};

// Empty result means the plan is feasible. Dimension mismatches are
// structural errors and throw std::invalid_argument.
std::vector<DeploymentViolation> validate_deployment(const DeploymentPlan& plan,
                                                     const SystemConfig& cfg);

// Equal-split allocation derived from a valid plan: each ES divides its CPU
// over its deployed services, and each destination ES divides its ingress
// bandwidth over its deployed services. Self links carry no transmission cost.
struct ResourceAllocation {
  Matrix compute;        // M x J, f_m^j; zero where not deployed
  IntVector services_on; // per-ES deployed service count n_m
  Matrix link_share;     // M x M, inter-ES rate divided by the destination's n; +inf on the diagonal

  double compute_share(int server, int service) const { return compute(server, service); }
  double link_rate(int src, int dst) const { return link_share(src, dst); }
};

ResourceAllocation derive_allocation(const DeploymentPlan& plan, const SystemConfig& cfg);

// Global slot index for slot k of frame t.
long time_index(int frame, int slot_in_frame, const SystemConfig& cfg);

}  // namespace ttosc
