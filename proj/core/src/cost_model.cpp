#include "spectree/cost_model.hpp"

#include <charconv>
#include <cmath>
#include <string>

#include "spectree/errors.hpp"

namespace spectree {

namespace {

void require_processors(const CostParams& params) {
  if (params.processors <= 0) {
    throw ArgumentError("cost model requires processors >= 1");
  }
}

double t_stage(const CostParams& params, CostMode mode) {
  const double variable = params.sigma * params.records;
  return mode == CostMode::exact ? variable + params.gamma : variable;
}

double overhead(const CostParams& params, CostMode mode) {
  return mode == CostMode::exact ? params.t_invoke : 0.0;
}

std::string shortest(double value) {
  char buf[64];
  const auto result = std::to_chars(buf, buf + sizeof buf, value);
  return std::string(buf, result.ptr);
}

}  // namespace

double t_serial(const CostParams& params, CostMode) {
  return params.records * params.mean_depth * (params.t_eval + params.t_link);
}

double t_data(const CostParams& params, CostMode mode) {
  require_processors(params);
  return (params.records / params.processors) * params.mean_depth *
             (params.t_eval + params.t_link) +
         overhead(params, mode) + t_stage(params, mode);
}

double t_spec(const CostParams& params, CostMode mode) {
  require_processors(params);
  if (params.mean_depth <= 0) {
    throw ArgumentError("speculative cost requires mean_depth > 0");
  }
  return (params.records * params.group_lanes / params.processors) *
             (params.t_eval + std::log2(params.mean_depth) * params.t_link) +
         overhead(params, mode) + t_stage(params, mode);
}

namespace {

double ratio(double numerator, double denominator, const char* what) {
  if (denominator == 0) {
    throw ArgumentError(std::string("zero denominator in ") + what);
  }
  return numerator / denominator;
}

}  // namespace

double speedup_data(const CostParams& params, CostMode mode) {
  return ratio(t_serial(params, mode), t_data(params, mode), "speedup_data");
}

double speedup_spec(const CostParams& params, CostMode mode) {
  return ratio(t_serial(params, mode), t_spec(params, mode), "speedup_spec");
}

double efficiency_data(const CostParams& params, CostMode mode) {
  require_processors(params);
  return speedup_data(params, mode) / params.processors;
}

double efficiency_spec(const CostParams& params, CostMode mode) {
  require_processors(params);
  return speedup_spec(params, mode) / params.processors;
}

double crossover_p_bound(double mean_depth) {
  if (mean_depth < 1) {
    throw ArgumentError("crossover bound requires mean_depth >= 1");
  }
  return 2.0 * mean_depth / (1.0 + std::log2(mean_depth));
}

const char* cost_param_name(CostParam param) {
  switch (param) {
    case CostParam::records:
      return "records";
    case CostParam::processors:
      return "processors";
    case CostParam::group_lanes:
      return "group_lanes";
    case CostParam::groups:
      return "groups";
    case CostParam::mean_depth:
      return "mean_depth";
    case CostParam::t_eval:
      return "t_eval";
    case CostParam::t_link:
      return "t_link";
    case CostParam::t_invoke:
      return "t_invoke";
    case CostParam::sigma:
      return "sigma";
    case CostParam::gamma:
      return "gamma";
  }
  return "unknown";
}

namespace {

void apply(CostParams& params, CostParam param, double value) {
  switch (param) {
    case CostParam::records:
      params.records = value;
      return;
    case CostParam::processors:
      params.processors = value;
      return;
    case CostParam::group_lanes:
      params.group_lanes = value;
      return;
    case CostParam::groups:
      params.groups = value;
      return;
    case CostParam::mean_depth:
      params.mean_depth = value;
      return;
    case CostParam::t_eval:
      params.t_eval = value;
      return;
    case CostParam::t_link:
      params.t_link = value;
      return;
    case CostParam::t_invoke:
      params.t_invoke = value;
      return;
    case CostParam::sigma:
      params.sigma = value;
      return;
    case CostParam::gamma:
      params.gamma = value;
      return;
  }
}

}  // namespace

std::string sweep_csv(const CostParams& base, std::span<const SweepAxis> axes,
                      CostMode mode) {
  for (const SweepAxis& axis : axes) {
    if (axis.values.empty()) {
      throw ArgumentError(std::string("empty sweep range for ") +
                          cost_param_name(axis.param));
    }
  }

  std::string csv =
      "records,processors,group_lanes,groups,mean_depth,t_eval,t_link,"
      "t_invoke,sigma,gamma,t_serial,t_data,t_spec,speedup_data,speedup_spec,"
      "efficiency_data,efficiency_spec,crossover_p_bound\n";

  std::vector<std::size_t> odometer(axes.size(), 0);
  while (true) {
    CostParams point = base;
    for (std::size_t a = 0; a < axes.size(); ++a) {
      apply(point, axes[a].param, axes[a].values[odometer[a]]);
    }
    const double columns[] = {point.records,
                              point.processors,
                              point.group_lanes,
                              point.groups,
                              point.mean_depth,
                              point.t_eval,
                              point.t_link,
                              point.t_invoke,
                              point.sigma,
                              point.gamma,
                              t_serial(point, mode),
                              t_data(point, mode),
                              t_spec(point, mode),
                              speedup_data(point, mode),
                              speedup_spec(point, mode),
                              efficiency_data(point, mode),
                              efficiency_spec(point, mode),
                              crossover_p_bound(point.mean_depth)};
    for (std::size_t c = 0; c < std::size(columns); ++c) {
      if (c != 0) {
        csv += ',';
      }
      csv += shortest(columns[c]);
    }
    csv += '\n';

    // Advance the odometer, last axis fastest.
    std::size_t a = axes.size();
    while (a > 0) {
      --a;
      if (++odometer[a] < axes[a].values.size()) {
        break;
      }
      odometer[a] = 0;
      if (a == 0) {
        return csv;
      }
    }
    if (axes.empty()) {
      return csv;
    }
  }
}

}  // namespace spectree
