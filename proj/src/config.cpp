#include "ttosc/config.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "ttosc/rng.hpp"

namespace ttosc {

using nlohmann::json;

ConfigDoc default_config() { return ConfigDoc{}; }

namespace {

json workload_to_json(const WorkloadParams& w) {
  return json{{"zipf_exponent", w.zipf_exponent},
              {"users_min", w.users_min},
              {"users_max", w.users_max},
              {"activity", w.activity},
              {"rotation_frames", w.rotation_frames}};
}

json solver_to_json(const SolverSettings& s) {
  return json{{"max_iterations", s.max_iterations},
              {"tolerance", s.tolerance},
              {"initial_step", s.initial_step},
              {"shrink", s.shrink},
              {"sufficient_decrease", s.sufficient_decrease}};
}

json training_to_json(const TrainingConfig& t) {
  return json{{"hidden_width", t.hidden_width},
              {"gru_layers", t.gru_layers},
              {"learning_rate", t.learning_rate},
              {"batch_size", t.batch_size},
              {"discount", t.discount},
              {"buffer_capacity", t.buffer_capacity},
              {"target_sync_period", t.target_sync_period},
              {"epsilon_initial", t.epsilon_initial},
              {"epsilon_final", t.epsilon_final},
              {"epsilon_decay_episodes", t.epsilon_decay_episodes},
              {"normalize_observations", t.normalize_observations},
              {"normalize_reward", t.normalize_reward},
              {"tls_activation", t.tls_activation}};
}

template <class T>
void get_if_present(const json& j, const char* key, T& out) {
  if (auto it = j.find(key); it != j.end()) out = it->get<T>();
}

}  // namespace

std::string config_to_json(const ConfigDoc& doc) {
  json j;
  j["cells"] = doc.cells;
  j["services"] = doc.services;
  j["slots_per_frame"] = doc.slots_per_frame;
  j["frames_per_episode"] = doc.frames_per_episode;
  j["seed"] = doc.seed;
  j["service_draw"] = json{{"task_mbits_min", doc.task_mbits_min},
                           {"task_mbits_max", doc.task_mbits_max},
                           {"task_gcycles_min", doc.task_gcycles_min},
                           {"task_gcycles_max", doc.task_gcycles_max},
                           {"data_size_min", doc.data_size_min},
                           {"data_size_max", doc.data_size_max}};
  if (!doc.explicit_services.empty()) {
    json arr = json::array();
    for (const auto& s : doc.explicit_services)
      arr.push_back(json{{"data_size", s.data_size},
                         {"task_mbits", s.task_mbits},
                         {"task_gcycles", s.task_gcycles}});
    j["explicit_services"] = arr;
  }
  j["servers"] = json{{"storage_units", doc.storage_units}, {"compute_gcps", doc.compute_gcps}};
  j["network"] = json{{"inter_es_mbps", doc.inter_es_mbps},
                      {"cloud_mbps", doc.cloud_mbps},
                      {"cloud_task_gcps", doc.cloud_task_gcps}};
  j["workload"] = workload_to_json(doc.workload);
  j["solver"] = solver_to_json(doc.solver);
  j["training"] = training_to_json(doc.training);
  return j.dump(2) + "\n";
}

ConfigDoc config_from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError(std::string("config: invalid JSON: ") + e.what());
  }

  ConfigDoc doc;
  try {
    get_if_present(j, "cells", doc.cells);
    get_if_present(j, "services", doc.services);
    get_if_present(j, "slots_per_frame", doc.slots_per_frame);
    get_if_present(j, "frames_per_episode", doc.frames_per_episode);
    get_if_present(j, "seed", doc.seed);
    if (j.contains("service_draw")) {
      const json& d = j["service_draw"];
      get_if_present(d, "task_mbits_min", doc.task_mbits_min);
      get_if_present(d, "task_mbits_max", doc.task_mbits_max);
      get_if_present(d, "task_gcycles_min", doc.task_gcycles_min);
      get_if_present(d, "task_gcycles_max", doc.task_gcycles_max);
      get_if_present(d, "data_size_min", doc.data_size_min);
      get_if_present(d, "data_size_max", doc.data_size_max);
    }
    if (j.contains("explicit_services")) {
      for (const json& s : j["explicit_services"]) {
        ServiceOverride o;
        get_if_present(s, "data_size", o.data_size);
        get_if_present(s, "task_mbits", o.task_mbits);
        get_if_present(s, "task_gcycles", o.task_gcycles);
        doc.explicit_services.push_back(o);
      }
    }
    if (j.contains("servers")) {
      const json& s = j["servers"];
      get_if_present(s, "storage_units", doc.storage_units);
      get_if_present(s, "compute_gcps", doc.compute_gcps);
    }
    if (j.contains("network")) {
      const json& n = j["network"];
      get_if_present(n, "inter_es_mbps", doc.inter_es_mbps);
      get_if_present(n, "cloud_mbps", doc.cloud_mbps);
      get_if_present(n, "cloud_task_gcps", doc.cloud_task_gcps);
    }
    if (j.contains("workload")) {
      const json& w = j["workload"];
      get_if_present(w, "zipf_exponent", doc.workload.zipf_exponent);
      get_if_present(w, "users_min", doc.workload.users_min);
      get_if_present(w, "users_max", doc.workload.users_max);
      get_if_present(w, "activity", doc.workload.activity);
      get_if_present(w, "rotation_frames", doc.workload.rotation_frames);
    }
    if (j.contains("solver")) {
      const json& s = j["solver"];
      get_if_present(s, "max_iterations", doc.solver.max_iterations);
      get_if_present(s, "tolerance", doc.solver.tolerance);
      get_if_present(s, "initial_step", doc.solver.initial_step);
      get_if_present(s, "shrink", doc.solver.shrink);
      get_if_present(s, "sufficient_decrease", doc.solver.sufficient_decrease);
    }
    if (j.contains("training")) {
      const json& t = j["training"];
      get_if_present(t, "hidden_width", doc.training.hidden_width);
      get_if_present(t, "gru_layers", doc.training.gru_layers);
      get_if_present(t, "learning_rate", doc.training.learning_rate);
      get_if_present(t, "batch_size", doc.training.batch_size);
      get_if_present(t, "discount", doc.training.discount);
      get_if_present(t, "buffer_capacity", doc.training.buffer_capacity);
      get_if_present(t, "target_sync_period", doc.training.target_sync_period);
      get_if_present(t, "epsilon_initial", doc.training.epsilon_initial);
      get_if_present(t, "epsilon_final", doc.training.epsilon_final);
      get_if_present(t, "epsilon_decay_episodes", doc.training.epsilon_decay_episodes);
      get_if_present(t, "normalize_observations", doc.training.normalize_observations);
      get_if_present(t, "normalize_reward", doc.training.normalize_reward);
      get_if_present(t, "tls_activation", doc.training.tls_activation);
    }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("config: bad field type: ") + e.what());
  }
  return doc;
}

ConfigDoc load_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open config file: " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return config_from_json(buf.str());
}

void save_config_file(const ConfigDoc& doc, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write config file: " + path);
  out << config_to_json(doc);
}

SystemConfig resolve_config(const ConfigDoc& doc) {
  if (doc.cells < 1) throw ConfigError("config: cells must be >= 1");
  if (doc.services < 1) throw ConfigError("config: services must be >= 1");
  if (!doc.explicit_services.empty() &&
      static_cast<int>(doc.explicit_services.size()) != doc.services)
    throw ConfigError("config: explicit_services length must equal 'services'");
  if (doc.task_mbits_min > doc.task_mbits_max || doc.task_gcycles_min > doc.task_gcycles_max ||
      doc.data_size_min > doc.data_size_max)
    throw ConfigError("config: service draw bounds must satisfy min <= max");

  SystemConfig cfg;
  cfg.slots_per_frame = doc.slots_per_frame;
  cfg.frames_per_episode = doc.frames_per_episode;
  cfg.seed = doc.seed;
  cfg.workload = doc.workload;
  cfg.solver = doc.solver;
  cfg.training = doc.training;

  cfg.services.resize(doc.services);
  if (!doc.explicit_services.empty()) {
    for (int j = 0; j < doc.services; ++j) {
      const auto& o = doc.explicit_services[j];
      cfg.services[j] = {j, o.data_size, o.task_mbits, o.task_gcycles};
    }
  } else {
    auto g = rng::stream(doc.seed, rng::kServiceDraw);
    for (int j = 0; j < doc.services; ++j) {
      ServiceSpec s;
      s.id = j;
      s.task_mbits = rng::uniform_real(g, doc.task_mbits_min, doc.task_mbits_max);
      s.task_gcycles = rng::uniform_real(g, doc.task_gcycles_min, doc.task_gcycles_max);
      s.data_size = static_cast<int>(rng::uniform_int(g, doc.data_size_min, doc.data_size_max));
      cfg.services[j] = s;
    }
  }

  cfg.servers.resize(doc.cells);
  for (int m = 0; m < doc.cells; ++m)
    cfg.servers[m] = {m, doc.storage_units, doc.compute_gcps, doc.cloud_mbps};

  cfg.network.inter_es_mbps = Matrix::Constant(doc.cells, doc.cells, doc.inter_es_mbps);
  cfg.network.cloud_task_gcps = doc.cloud_task_gcps;

  validate_config(cfg);
  return cfg;
}

}  // namespace ttosc
