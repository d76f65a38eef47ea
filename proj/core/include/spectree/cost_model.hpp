#pragma once

#include <span>
#include <string>
#include <vector>

namespace spectree {

/// Closed-form execution time model. One node visit costs t_eval (predicate)
/// plus t_link (successor lookup); kernels pay a fixed invocation overhead
/// t_invoke and staging t_stage(M) = sigma * M + gamma for moving M records.
/// All quantities are dimensionless doubles; pick any consistent time unit.
struct CostParams {
  double records = 1;      // M
  double processors = 1;   // P
  double group_lanes = 1;  // p, lanes per record group
  double groups = 1;       // G, carried for reporting; the closed forms
                           // depend on it only through P
  double mean_depth = 1;   // d_mu, average root-to-leaf edges
  double t_eval = 1;
  double t_link = 1;
  double t_invoke = 0;
  double sigma = 0;
  double gamma = 0;
};

/// exact keeps every term; asymptotic drops the constant overheads (gamma
/// and t_invoke) to expose scaling behaviour.
enum class CostMode { exact, asymptotic };

/// Serial walk: records * mean_depth * (t_eval + t_link). No staging, no
/// invocation overhead.
double t_serial(const CostParams& params, CostMode mode = CostMode::exact);

/// Static record split over P workers:
/// (M / P) * d_mu * (t_eval + t_link) + t_invoke + t_stage(M).
double t_data(const CostParams& params, CostMode mode = CostMode::exact);

/// Speculative kernel, p lanes per record:
/// (M * p / P) * (t_eval + log2(d_mu) * t_link) + t_invoke + t_stage(M).
double t_spec(const CostParams& params, CostMode mode = CostMode::exact);

double speedup_data(const CostParams& params, CostMode mode = CostMode::exact);
double speedup_spec(const CostParams& params, CostMode mode = CostMode::exact);
double efficiency_data(const CostParams& params,
                       CostMode mode = CostMode::exact);
double efficiency_spec(const CostParams& params,
                       CostMode mode = CostMode::exact);

/// Lane budget below which the speculative walk beats the serial walk per
/// record: p < 2 * d_mu / (1 + log2(d_mu)). Requires mean_depth >= 1.
double crossover_p_bound(double mean_depth);

enum class CostParam {
  records,
  processors,
  group_lanes,
  groups,
  mean_depth,
  t_eval,
  t_link,
  t_invoke,
  sigma,
  gamma,
};

const char* cost_param_name(CostParam param);

/// One swept parameter with its value list. Sweeps combine as a Cartesian
/// product in axis order (the last axis varies fastest).
struct SweepAxis {
  CostParam param;
  std::vector<double> values;
};

/// CSV with one column per parameter and one per model output
/// (t_serial, t_data, t_spec, the speedups, the efficiencies and the
/// crossover bound), one row per grid point, full-precision doubles.
/// No axes means a single row at the base point; an axis with an empty value
/// list throws ArgumentError.
std::string sweep_csv(const CostParams& base, std::span<const SweepAxis> axes,
                      CostMode mode = CostMode::exact);

}  // namespace spectree
