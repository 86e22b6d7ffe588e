#pragma once

#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "flexacc/arch.hpp"
#include "flexacc/config.hpp"
#include "flexacc/fsm.hpp"
#include "flexacc/layer.hpp"
#include "flexacc/traffic.hpp"

namespace flexacc {

/// Random nested tile chain (ragged edges allowed), random orders and a random
/// parallelism, shrunk until the tiles fit `arch`. Throws CapacityError if even
/// unit tiles do not fit.
Config random_config(const LayerShape& layer, const ArchSpec& arch, std::mt19937_64& rng);

/// Random address-generator program with depth <= max_depth and bounds <= max_bound.
FsmProgram random_fsm_program(std::mt19937_64& rng, int max_depth = 4, std::int64_t max_bound = 6);

/// Plain nested-loop enumeration of an address-generator program.
std::vector<FsmOutput> fsm_reference(const FsmProgram& program);

struct ValidationCheck {
  std::string name;
  std::int64_t passed = 0;
  std::int64_t failed = 0;
  std::string first_failure;
};

struct ValidationOptions {
  std::uint64_t seed = 1;
  std::int64_t trials = 200;
  std::int64_t max_maccs = 10'000'000;
  TrafficOptions traffic;  ///< perturbations applied to the analytical side only
};

/// Cross-checks simulator output against the reference convolution, simulator
/// counts against the analytical traffic model, and the address generator
/// against plain loops. Trials cycle through the network's layers. Throws
/// ValidationError when a layer exceeds `max_maccs`.
std::vector<ValidationCheck> run_validation(const Network& network, const ArchSpec& arch,
                                            const ValidationOptions& options);

}  // namespace flexacc
