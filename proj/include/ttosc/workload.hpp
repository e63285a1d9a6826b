#pragma once

#include <iosfwd>
#include <vector>

#include "ttosc/system.hpp"

// Task arrival generation: per-cell user populations and Zipf service
// popularity. Cells are made spatially distinct by giving each one a seeded
// permutation of the popularity ranking, and temporally non-stationary by
// rotating that ranking every few frames.

namespace ttosc {

struct ZipfPopularity {
  double exponent = 0.0;
  Vector pmf;  // probability of rank r (0-based), descending
};

// pmf over ranks 1..count with p_r proportional to r^(-exponent).
ZipfPopularity zipf_pmf(int count, double exponent);

struct CellPopulation {
  IntVector users;  // u_m per cell
};

CellPopulation sample_populations(const SystemConfig& cfg, std::uint64_t seed);

// Frozen per-episode demand model. ranking[m][r] is the service holding rank
// r in cell m before rotation is applied.
struct WorkloadModel {
  CellPopulation population;
  ZipfPopularity zipf;
  std::vector<std::vector<int>> ranking;
  double activity = 0.3;
  int rotation_frames = 5;
};

WorkloadModel make_workload(const SystemConfig& cfg, std::uint64_t seed);

// Service at rank r in cell m during frame t (rotation applied).
int ranked_service(const WorkloadModel& model, int cell, int frame, int rank);

struct ArrivalMatrix {
  long slot = 0;
  IntMatrix counts;  // M x J task counts N_m^{j}
};

// Each of the u_m users in cell m issues a task with probability `activity`;
// issued tasks pick a service from the cell-local (rotated) popularity.
// Deterministic given (seed, slot, cell).
ArrivalMatrix generate_arrivals(const WorkloadModel& model, const SystemConfig& cfg, long slot,
                                std::uint64_t seed);

// Trace rows are (slot, cell, service, count), zero counts omitted.
void write_trace_csv(std::ostream& out, const std::vector<ArrivalMatrix>& trace);
std::vector<ArrivalMatrix> read_trace_csv(std::istream& in, int cells, int services);

}  // namespace ttosc
