#pragma once

#include <cstdint>
#include <span>
#include <stdexcept>
#include <vector>

#include "spoqc/circuit.hpp"
#include "spoqc/frame.hpp"

namespace spoqc {

// One elementary error mechanism: a single-qubit Pauli constituent at a
// noise site, with its marginal probability and its deterministic effect
// on detectors and the observable. Heralded mechanisms carry the herald
// site that gates them.
struct ErrorMechanism {
  std::int64_t site_op_index;
  int qubit;
  Pauli pauli;
  double probability;
  std::vector<int> detectors;  // flipped detectors, ascending
  bool flips_observable;
  int herald = -1;

  bool heralded() const { return herald >= 0; }
};

namespace detail {

// Signature of one injected Pauli: which detectors and whether the
// observable flips.
inline std::pair<std::vector<int>, bool> injection_signature(
    const SyndromeCircuit& c, std::int64_t op_index, int qubit, Pauli pauli) {
  const InjectedPauli inj{op_index, qubit, pauli};
  const ShotRecord record = propagate_injections(c, std::span(&inj, 1));
  std::vector<int> flipped;
  for (int d = 0; d < c.detector_count; ++d)
    if (record.detectors[static_cast<std::size_t>(d)]) flipped.push_back(d);
  return {std::move(flipped), record.observable != 0};
}

}  // namespace detail

// Derives the detector error model: every noise site's nontrivial Pauli
// outcomes are decomposed into per-qubit X/Z constituents (Y contributes to
// both), each propagated through the remaining ideal circuit. Heralded
// channels contribute their conditional p = 1/2 dephasing constituents
// tagged with the herald site; the success-case channel contributes at its
// unconditional (1 - p_F)-weighted marginal.
inline std::vector<ErrorMechanism> derive_error_model(const SyndromeCircuit& c) {
  std::vector<ErrorMechanism> mechanisms;

  auto add = [&](std::int64_t op_index, int qubit, Pauli pauli, double prob,
                 int herald) {
    if (prob <= 0.0) return;
    auto [detectors, flips] = detail::injection_signature(c, op_index, qubit, pauli);
    if (detectors.empty() && !flips) return;
    if (detectors.empty() && flips)
      throw std::logic_error("derive_error_model: undetectable logical mechanism");
    mechanisms.push_back({op_index, qubit, pauli, prob, std::move(detectors),
                          flips, herald});
  };

  for (std::int64_t index = 0; index < static_cast<std::int64_t>(c.ops.size());
       ++index) {
    const CircuitOp& op = c.ops[static_cast<std::size_t>(index)];
    if (op.kind == OpKind::PauliNoise1) {
      const PauliChannel1& chan = c.channels1[static_cast<std::size_t>(op.channel)];
      add(index, op.a, Pauli::X, chan.p_x + chan.p_y, -1);
      add(index, op.a, Pauli::Z, chan.p_z + chan.p_y, -1);
    } else if (op.kind == OpKind::PauliNoise2) {
      // Success-case channel: {II, Za, Zb, ZaZb} marginals per qubit.
      const PauliChannel2& chan = c.channels2[static_cast<std::size_t>(op.channel)];
      double marginal_a = 0.0, marginal_b = 0.0;
      for (int i = 0; i < 16; ++i) {
        const Pauli pa = static_cast<Pauli>(i / 4);
        const Pauli pb = static_cast<Pauli>(i % 4);
        if (pa == Pauli::X || pa == Pauli::Y || pb == Pauli::X || pb == Pauli::Y)
          if (chan.probs[static_cast<std::size_t>(i)] > 0.0)
            throw std::logic_error(
                "derive_error_model: gate channels must be Z-diagonal");
        if (pa == Pauli::Z) marginal_a += chan.probs[static_cast<std::size_t>(i)];
        if (pb == Pauli::Z) marginal_b += chan.probs[static_cast<std::size_t>(i)];
      }
      double p_f = 0.0;
      if (op.herald >= 0)
        p_f = c.herald_sites[static_cast<std::size_t>(op.herald)].failure_prob;
      add(index, op.a, Pauli::Z, (1.0 - p_f) * marginal_a, -1);
      add(index, op.b, Pauli::Z, (1.0 - p_f) * marginal_b, -1);
      if (op.herald >= 0 && p_f > 0.0) {
        add(index, op.a, Pauli::Z, 0.5, op.herald);
        add(index, op.b, Pauli::Z, 0.5, op.herald);
      }
    }
  }
  return mechanisms;
}

}  // namespace spoqc
