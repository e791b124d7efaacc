#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "app/config.hpp"
#include "app/tables.hpp"

namespace bettitest::app {

Sampler sampler_for(const DistributionSpec& spec);

/// One power row per (method, n). Betti rows use config.r replications;
/// baseline rows use config.baseline.r.
std::vector<PowerRow> run_power(const ExperimentConfig& config, std::span<const Method> methods,
                                std::size_t threads);

std::vector<DisconnectionRow> run_check_a2(const ExperimentConfig& config, std::size_t threads);

}  // namespace bettitest::app
