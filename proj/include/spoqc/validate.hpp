#pragma once

#include <set>
#include <string>
#include <vector>

#include "spoqc/circuit.hpp"
#include "spoqc/stabilizer_flow.hpp"

namespace spoqc {

struct CircuitReport {
  bool records_monotone = true;
  bool detectors_reference_past_records = true;
  bool herald_ids_unique = true;
  bool layers_vertex_disjoint = true;
  std::vector<int> nondeterministic_detectors;
  std::vector<int> nonzero_detectors;
  bool observable_deterministic = true;
  bool observable_zero = true;

  bool passed() const {
    return records_monotone && detectors_reference_past_records &&
           herald_ids_unique && layers_vertex_disjoint &&
           nondeterministic_detectors.empty() && nonzero_detectors.empty() &&
           observable_deterministic && observable_zero;
  }
};

// Structural checks plus a symbolic stabilizer pass proving that every
// detector (and the observable) is deterministic and zero in the noiseless
// circuit.
inline CircuitReport validate_circuit(const SyndromeCircuit& c) {
  CircuitReport report;

  int last_record = -1;
  std::set<int> heralds;
  std::set<int> layer_qubits;
  std::int8_t current_layer = -1;
  int measure_or_reset_count = 0;

  for (const auto& op : c.ops) {
    if (op.kind == OpKind::MeasureZ) {
      ++measure_or_reset_count;
      if (op.record <= last_record) report.records_monotone = false;
      last_record = op.record;
    }
    if (op.kind == OpKind::ResetZ) ++measure_or_reset_count;
    if (op.kind == OpKind::RusCZ) {
      if (op.herald >= 0 && !heralds.insert(op.herald).second)
        report.herald_ids_unique = false;
      if (op.layer != current_layer) {
        layer_qubits.clear();
        current_layer = op.layer;
      }
      if (!layer_qubits.insert(op.a).second || !layer_qubits.insert(op.b).second)
        report.layers_vertex_disjoint = false;
    } else if (op.kind == OpKind::MeasureZ || op.kind == OpKind::ResetZ) {
      layer_qubits.clear();
      current_layer = -1;
    }
    if (op.kind == OpKind::Detector || op.kind == OpKind::ObservableInclude) {
      for (int i = op.rec_begin; i < op.rec_end; ++i) {
        const int rec = c.record_pool[static_cast<std::size_t>(i)];
        if (rec < 0 || rec > last_record)
          report.detectors_reference_past_records = false;
      }
    }
  }

  // Noiseless symbolic pass.
  StabilizerFlow flow(c.qubit_count, measure_or_reset_count + 1);
  std::vector<SymbolicBits> outcomes(static_cast<std::size_t>(c.record_count),
                                     SymbolicBits(measure_or_reset_count + 1));
  int detector = 0;
  for (const auto& op : c.ops) {
    switch (op.kind) {
      case OpKind::ResetZ: flow.reset_z(op.a); break;
      case OpKind::Hadamard: flow.h(op.a); break;
      case OpKind::HadamardYZ: flow.hyz(op.a); break;
      case OpKind::RusCZ: flow.cz(op.a, op.b); break;
      case OpKind::MeasureZ:
        outcomes[static_cast<std::size_t>(op.record)] = flow.measure_z(op.a);
        break;
      case OpKind::Detector: {
        SymbolicBits parity(measure_or_reset_count + 1);
        for (int i = op.rec_begin; i < op.rec_end; ++i) {
          const int rec = c.record_pool[static_cast<std::size_t>(i)];
          if (rec < 0 || rec >= c.record_count) continue;  // flagged above
          parity ^= outcomes[static_cast<std::size_t>(rec)];
        }
        if (parity.has_symbols())
          report.nondeterministic_detectors.push_back(detector);
        else if (parity.constant())
          report.nonzero_detectors.push_back(detector);
        ++detector;
        break;
      }
      case OpKind::ObservableInclude: {
        SymbolicBits parity(measure_or_reset_count + 1);
        for (int i = op.rec_begin; i < op.rec_end; ++i) {
          const int rec = c.record_pool[static_cast<std::size_t>(i)];
          if (rec < 0 || rec >= c.record_count) continue;
          parity ^= outcomes[static_cast<std::size_t>(rec)];
        }
        if (parity.has_symbols()) report.observable_deterministic = false;
        else if (parity.constant()) report.observable_zero = false;
        break;
      }
      default:
        break;  // noise ops are skipped in the noiseless pass
    }
  }
  return report;
}

}  // namespace spoqc
