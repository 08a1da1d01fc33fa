#pragma once

#include <string>

#include <json.hpp>

#include "tepai/pai.hpp"
#include "tepai/simulator.hpp"

namespace tepai {

/// One JSON-lines record of a sampled circuit: the kept gates with their
/// discrete angles; Delta itself and the overhead prefactor live in the run
/// header, once per run.
inline nlohmann::json circuit_to_json(const SampledCircuit& circuit) {
  nlohmann::json gates = nlohmann::json::array();
  for (const auto& gate : circuit.gates) {
    const char* angle = gate.variant == GateVariant::kPi ? "pi"
                        : gate.angle_sign < 0            ? "-delta"
                                                         : "+delta";
    gates.push_back({{"pauli", circuit.hamiltonian->terms()[gate.term].op.str()},
                     {"angle", angle}});
  }
  return {{"draw_seed", circuit.draw_seed},
          {"sign", circuit.sign},
          {"nu", circuit.nu()},
          {"gates", std::move(gates)}};
}

inline nlohmann::json shot_to_json(const ShotRecord& record) {
  return {{"shot", record.shot},     {"draw_seed", record.draw_seed},
          {"sign", record.sign},     {"nu", record.nu},
          {"outcome", record.outcome}, {"weighted", record.weighted}};
}

inline nlohmann::json result_to_json(const EstimatorResult& result) {
  return {{"mean", result.mean},
          {"std_error", result.std_error},
          {"shots", result.shots},
          {"mode", mode_name(result.mode)},
          {"overhead", result.overhead},
          {"nu_mean", result.nu_mean},
          {"nu_variance", result.nu_variance}};
}

}  // namespace tepai
