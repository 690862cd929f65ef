#pragma once

#include "qfluct/config.hpp"
#include "qfluct/lindblad.hpp"
#include "qfluct/models.hpp"
#include "qfluct/petz.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qfluct::cli {

// Channel, reference and initial state described by a config file.
//
//   model     jc | identity | depolarizing       (default jc)
//   state     half_mixed_plus | plus | maximally_mixed | gibbs | ground | excited
//   dim, p    size and depolarizing probability for the qudit models
//   beta, omega0  reference Gibbs state of the qudit models (levels k * omega0)
//   tau_refine    true: replace tau by the nearest return time of the coherent bath
struct Setup {
  std::string model;
  std::optional<JcConfig> jc;
  KrausChannel channel;
  DensityOperator reference;
  DensityOperator rho;
  CMatrix h_system;
  double beta = 1.0;
  double omega0 = 1.0;

  RecoveryFamily family() const { return RecoveryFamily(channel, reference); }
};

Setup load_setup(const KeyValueConfig& cfg);

// Named vector of the system: plus, minus, ground, excited.
CVector named_vector(const std::string& name, Index dim);

// generator = driven_qubit | jc_noise, with its reference trajectory start.
struct GeneratorSetup {
  LindbladGenerator generator;
  DensityOperator gamma0;
  double tau;
  double dt;
};

GeneratorSetup load_generator(const KeyValueConfig& cfg);

// --theta values when given, otherwise the config's `thetas`, otherwise the fallback.
std::vector<double> pick_thetas(const std::vector<double>& flags, const KeyValueConfig& cfg,
                                const std::vector<double>& fallback);

}  // namespace qfluct::cli
