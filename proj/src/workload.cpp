#include "ttosc/workload.hpp"

#include <cmath>
#include <map>
#include <ostream>
#include <sstream>

#include "ttosc/rng.hpp"

namespace ttosc {

ZipfPopularity zipf_pmf(int count, double exponent) {
  if (count < 1) throw std::invalid_argument("zipf_pmf: count must be >= 1");
  if (exponent < 0) throw std::invalid_argument("zipf_pmf: exponent must be >= 0");
  ZipfPopularity z;
  z.exponent = exponent;
  z.pmf = Vector(count);
  for (int r = 0; r < count; ++r) z.pmf(r) = std::pow(static_cast<double>(r + 1), -exponent);
  z.pmf /= z.pmf.sum();
  return z;
}

CellPopulation sample_populations(const SystemConfig& cfg, std::uint64_t seed) {
  const auto& w = cfg.workload;
  if (w.users_min > w.users_max)
    throw std::invalid_argument("sample_populations: users_min > users_max");
  CellPopulation pop;
  pop.users = IntVector(cfg.cell_count());
  auto g = rng::stream(seed, rng::kPopulations);
  for (int m = 0; m < cfg.cell_count(); ++m)
    pop.users(m) = static_cast<int>(rng::uniform_int(g, w.users_min, w.users_max));
  return pop;
}

WorkloadModel make_workload(const SystemConfig& cfg, std::uint64_t seed) {
  WorkloadModel model;
  model.population = sample_populations(cfg, seed);
  model.zipf = zipf_pmf(cfg.service_count(), cfg.workload.zipf_exponent);
  model.activity = cfg.workload.activity;
  model.rotation_frames = cfg.workload.rotation_frames;
  model.ranking.resize(cfg.cell_count());
  for (int m = 0; m < cfg.cell_count(); ++m) {
    auto g = rng::stream(seed, rng::kCellRanking, static_cast<std::uint64_t>(m));
    model.ranking[m] = rng::permutation(g, cfg.service_count());
  }
  return model;
}

int ranked_service(const WorkloadModel& model, int cell, int frame, int rank) {
  const auto& order = model.ranking.at(cell);
  const int j_count = static_cast<int>(order.size());
  int shift = 0;
  if (model.rotation_frames > 0) shift = (frame / model.rotation_frames) % j_count;
  return order[(rank + shift) % j_count];
}

ArrivalMatrix generate_arrivals(const WorkloadModel& model, const SystemConfig& cfg, long slot,
                                std::uint64_t seed) {
  if (model.activity < 0 || model.activity > 1)
    throw std::invalid_argument("generate_arrivals: activity must be in [0, 1]");
  const int m_count = cfg.cell_count();
  const int j_count = cfg.service_count();
  const int frame = static_cast<int>(slot / cfg.slots_per_frame);

  ArrivalMatrix arrivals;
  arrivals.slot = slot;
  arrivals.counts = IntMatrix::Zero(m_count, j_count);

  // CDF over ranks; inverted per issued task.
  Vector cdf(j_count);
  double acc = 0;
  for (int r = 0; r < j_count; ++r) {
    acc += model.zipf.pmf(r);
    cdf(r) = acc;
  }

  for (int m = 0; m < m_count; ++m) {
    auto g = rng::stream(seed, rng::kArrivals, static_cast<std::uint64_t>(slot),
                         static_cast<std::uint64_t>(m));
    const int users = model.population.users(m);
    for (int u = 0; u < users; ++u) {
      if (!rng::bernoulli(g, model.activity)) continue;
      const double x = rng::u01(g);
      int rank = 0;
      while (rank < j_count - 1 && x >= cdf(rank)) ++rank;
      arrivals.counts(m, ranked_service(model, m, frame, rank)) += 1;
    }
  }
  return arrivals;
}

void write_trace_csv(std::ostream& out, const std::vector<ArrivalMatrix>& trace) {
  out << "slot,cell,service,count\n";
  for (const auto& a : trace)
    for (int m = 0; m < a.counts.rows(); ++m)
      for (int j = 0; j < a.counts.cols(); ++j)
        if (a.counts(m, j) != 0)
          out << a.slot << ',' << m << ',' << j << ',' << a.counts(m, j) << '\n';
}

std::vector<ArrivalMatrix> read_trace_csv(std::istream& in, int cells, int services) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("slot,cell,service,count", 0) != 0)
    throw IoError("trace: missing header 'slot,cell,service,count'");

  std::map<long, ArrivalMatrix> by_slot;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream row(line);
    long slot;
    int m, j, count;
    char c1, c2, c3;
    if (!(row >> slot >> c1 >> m >> c2 >> j >> c3 >> count) || c1 != ',' || c2 != ',' || c3 != ',')
      throw IoError("trace: malformed row at line " + std::to_string(lineno));
    if (m < 0 || m >= cells || j < 0 || j >= services || count < 0 || slot < 0)
      throw IoError("trace: out-of-range value at line " + std::to_string(lineno));
    auto [it, inserted] = by_slot.try_emplace(slot);
    if (inserted) {
      it->second.slot = slot;
      it->second.counts = IntMatrix::Zero(cells, services);
    }
    it->second.counts(m, j) += count;
  }

  std::vector<ArrivalMatrix> trace;
  trace.reserve(by_slot.size());
  for (auto& [slot, a] : by_slot) trace.push_back(std::move(a));
  return trace;
}

}  // namespace ttosc
