#pragma once

#include <algorithm>
#include <atomic>
#include <cstdint>
#include <cstring>
#include <istream>
#include <ostream>
#include <span>
#include <stdexcept>
#include <thread>
#include <vector>

#include "spoqc/circuit.hpp"
#include "spoqc/pauli.hpp"
#include "spoqc/rng.hpp"

namespace spoqc {

// Per-shot accumulated Pauli error, one X and one Z bit per qubit.
struct PauliFrame {
  std::vector<std::uint8_t> x_mask;
  std::vector<std::uint8_t> z_mask;

  explicit PauliFrame(int qubits = 0)
      : x_mask(static_cast<std::size_t>(qubits), 0),
        z_mask(static_cast<std::size_t>(qubits), 0) {}

  void clear() {
    std::fill(x_mask.begin(), x_mask.end(), 0);
    std::fill(z_mask.begin(), z_mask.end(), 0);
  }

  void apply(int qubit, Pauli p) {
    const auto q = static_cast<std::size_t>(qubit);
    switch (p) {
      case Pauli::I: break;
      case Pauli::X: x_mask[q] ^= 1; break;
      case Pauli::Y: x_mask[q] ^= 1; z_mask[q] ^= 1; break;
      case Pauli::Z: z_mask[q] ^= 1; break;
    }
  }
};

// Clifford/reset/measure action on the frame. Measurement outcomes flip
// with the X component of the frame; signs are irrelevant.
inline void propagate(PauliFrame& frame, const CircuitOp& op,
                      std::vector<std::uint8_t>* record_flips = nullptr) {
  switch (op.kind) {
    case OpKind::ResetZ: {
      const auto q = static_cast<std::size_t>(op.a);
      frame.x_mask[q] = 0;
      frame.z_mask[q] = 0;
      break;
    }
    case OpKind::Hadamard: {
      const auto q = static_cast<std::size_t>(op.a);
      std::swap(frame.x_mask[q], frame.z_mask[q]);
      break;
    }
    case OpKind::HadamardYZ: {
      const auto q = static_cast<std::size_t>(op.a);
      frame.x_mask[q] ^= frame.z_mask[q];
      break;
    }
    case OpKind::RusCZ: {
      const auto a = static_cast<std::size_t>(op.a);
      const auto b = static_cast<std::size_t>(op.b);
      frame.z_mask[a] ^= frame.x_mask[b];
      frame.z_mask[b] ^= frame.x_mask[a];
      break;
    }
    case OpKind::MeasureZ:
      if (record_flips)
        (*record_flips)[static_cast<std::size_t>(op.record)] =
            frame.x_mask[static_cast<std::size_t>(op.a)];
      break;
    default:
      break;  // noise, detectors and observables are handled by callers
  }
}

struct ShotRecord {
  std::vector<std::uint8_t> detectors;
  std::vector<std::uint8_t> heralds;  // 1 = gate failed or aborted
  std::uint8_t observable = 0;
};

// Reusable sampling workspace bound to one circuit.
class FrameSampler {
 public:
  explicit FrameSampler(const SyndromeCircuit& circuit)
      : circuit_(&circuit),
        frame_(circuit.qubit_count),
        record_flips_(static_cast<std::size_t>(circuit.record_count), 0),
        failure_(failure_channel()) {
    record_.detectors.resize(static_cast<std::size_t>(circuit.detector_count));
    record_.heralds.resize(static_cast<std::size_t>(circuit.herald_count()));
  }

  // Samples one shot; the returned reference stays valid until the next call.
  const ShotRecord& sample(Rng& rng) {
    const SyndromeCircuit& c = *circuit_;
    frame_.clear();
    std::fill(record_flips_.begin(), record_flips_.end(), 0);

    // Heralds are drawn up front in site order; the herald record is kept
    // even when the subsequent Pauli draw is the identity.
    for (const auto& site : c.herald_sites)
      record_.heralds[static_cast<std::size_t>(site.id)] =
          rng.bernoulli(site.failure_prob) ? 1 : 0;

    int detector = 0;
    for (const auto& op : c.ops) {
      switch (op.kind) {
        case OpKind::PauliNoise1:
          frame_.apply(op.a,
                       c.channels1[static_cast<std::size_t>(op.channel)].sample(rng));
          break;
        case OpKind::PauliNoise2: {
          const bool failed =
              op.herald >= 0 && record_.heralds[static_cast<std::size_t>(op.herald)];
          const PauliChannel2& chan =
              failed ? failure_ : c.channels2[static_cast<std::size_t>(op.channel)];
          const auto [pa, pb] = chan.sample(rng);
          frame_.apply(op.a, pa);
          frame_.apply(op.b, pb);
          break;
        }
        case OpKind::Detector: {
          std::uint8_t bit = 0;
          for (int i = op.rec_begin; i < op.rec_end; ++i)
            bit ^= record_flips_[static_cast<std::size_t>(
                c.record_pool[static_cast<std::size_t>(i)])];
          record_.detectors[static_cast<std::size_t>(detector++)] = bit;
          break;
        }
        case OpKind::ObservableInclude: {
          std::uint8_t bit = 0;
          for (int i = op.rec_begin; i < op.rec_end; ++i)
            bit ^= record_flips_[static_cast<std::size_t>(
                c.record_pool[static_cast<std::size_t>(i)])];
          record_.observable = bit;
          break;
        }
        default:
          propagate(frame_, op, &record_flips_);
          break;
      }
    }
    return record_;
  }

 private:
  const SyndromeCircuit* circuit_;
  PauliFrame frame_;
  std::vector<std::uint8_t> record_flips_;
  ShotRecord record_;
  PauliChannel2 failure_;
};

inline ShotRecord sample_shot(const SyndromeCircuit& circuit, Rng& rng) {
  FrameSampler sampler(circuit);
  return sampler.sample(rng);
}

inline int resolve_workers(int workers) {
  if (workers > 0) return workers;
  const unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// Deterministic batch: record i depends only on (master_seed, i), so the
// result is byte-identical for any worker count.
inline std::vector<ShotRecord> sample_batch(const SyndromeCircuit& circuit,
                                            std::int64_t shots,
                                            std::uint64_t master_seed,
                                            int workers = 0) {
  if (shots < 1) throw std::invalid_argument("sample_batch: shots must be >= 1");
  std::vector<ShotRecord> records(static_cast<std::size_t>(shots));
  const int worker_count = resolve_workers(workers);
  std::vector<std::thread> pool;
  std::atomic<std::int64_t> next{0};
  constexpr std::int64_t kChunk = 256;
  for (int w = 0; w < worker_count; ++w) {
    pool.emplace_back([&]() {
      FrameSampler sampler(circuit);
      while (true) {
        const std::int64_t begin = next.fetch_add(kChunk);
        if (begin >= shots) return;
        const std::int64_t end = std::min(shots, begin + kChunk);
        for (std::int64_t i = begin; i < end; ++i) {
          Rng rng = shot_rng(master_seed, static_cast<std::uint64_t>(i));
          records[static_cast<std::size_t>(i)] = sampler.sample(rng);
        }
      }
    });
  }
  for (auto& t : pool) t.join();
  return records;
}

// Deterministic single-Pauli injections: `op_index` is the position in the
// op stream after which the Pauli is applied. Used to derive the detector
// error model and for locality/linearity checks.
struct InjectedPauli {
  std::int64_t op_index;
  int qubit;
  Pauli pauli;
};

inline ShotRecord propagate_injections(const SyndromeCircuit& circuit,
                                       std::span<const InjectedPauli> injections) {
  PauliFrame frame(circuit.qubit_count);
  std::vector<std::uint8_t> record_flips(
      static_cast<std::size_t>(circuit.record_count), 0);
  ShotRecord record;
  record.detectors.resize(static_cast<std::size_t>(circuit.detector_count));
  record.heralds.resize(static_cast<std::size_t>(circuit.herald_count()));

  int detector = 0;
  for (std::int64_t index = 0; index < static_cast<std::int64_t>(circuit.ops.size());
       ++index) {
    const auto& op = circuit.ops[static_cast<std::size_t>(index)];
    switch (op.kind) {
      case OpKind::Detector: {
        std::uint8_t bit = 0;
        for (int i = op.rec_begin; i < op.rec_end; ++i)
          bit ^= record_flips[static_cast<std::size_t>(
              circuit.record_pool[static_cast<std::size_t>(i)])];
        record.detectors[static_cast<std::size_t>(detector++)] = bit;
        break;
      }
      case OpKind::ObservableInclude: {
        std::uint8_t bit = 0;
        for (int i = op.rec_begin; i < op.rec_end; ++i)
          bit ^= record_flips[static_cast<std::size_t>(
              circuit.record_pool[static_cast<std::size_t>(i)])];
        record.observable = bit;
        break;
      }
      default:
        propagate(frame, op, &record_flips);
        break;
    }
    for (const auto& inj : injections)
      if (inj.op_index == index) frame.apply(inj.qubit, inj.pauli);
  }
  return record;
}

// --- Binary shot dump -----------------------------------------------------
//
// Little-endian layout:
//   magic "SPQCSHOT", u32 version = 1,
//   u64 detector_count, u64 herald_count, u64 shots,
//   then per shot: ceil(D/8) detector bytes, 1 observable byte,
//   ceil(H/8) herald bytes. Bit i of byte k is detector/herald 8k+i.

namespace detail {

inline void put_u64(std::ostream& out, std::uint64_t v) {
  char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<char>((v >> (8 * i)) & 0xff);
  out.write(b, 8);
}

inline std::uint64_t get_u64(std::istream& in) {
  unsigned char b[8];
  in.read(reinterpret_cast<char*>(b), 8);
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

inline void pack_bits(std::ostream& out, const std::vector<std::uint8_t>& bits) {
  const std::size_t bytes = (bits.size() + 7) / 8;
  for (std::size_t k = 0; k < bytes; ++k) {
    std::uint8_t byte = 0;
    for (std::size_t i = 0; i < 8 && 8 * k + i < bits.size(); ++i)
      byte |= static_cast<std::uint8_t>((bits[8 * k + i] & 1) << i);
    out.put(static_cast<char>(byte));
  }
}

inline void unpack_bits(std::istream& in, std::vector<std::uint8_t>& bits) {
  const std::size_t bytes = (bits.size() + 7) / 8;
  for (std::size_t k = 0; k < bytes; ++k) {
    const int byte = in.get();
    for (std::size_t i = 0; i < 8 && 8 * k + i < bits.size(); ++i)
      bits[8 * k + i] = static_cast<std::uint8_t>((byte >> i) & 1);
  }
}

}  // namespace detail

inline void write_shot_dump(std::ostream& out,
                            const std::vector<ShotRecord>& records,
                            std::uint64_t detector_count,
                            std::uint64_t herald_count) {
  out.write("SPQCSHOT", 8);
  const std::uint32_t version = 1;
  out.write(reinterpret_cast<const char*>(&version), 4);
  detail::put_u64(out, detector_count);
  detail::put_u64(out, herald_count);
  detail::put_u64(out, records.size());
  for (const auto& r : records) {
    detail::pack_bits(out, r.detectors);
    out.put(static_cast<char>(r.observable & 1));
    detail::pack_bits(out, r.heralds);
  }
}

inline std::vector<ShotRecord> read_shot_dump(std::istream& in) {
  char magic[8];
  in.read(magic, 8);
  if (std::memcmp(magic, "SPQCSHOT", 8) != 0)
    throw std::runtime_error("read_shot_dump: bad magic");
  std::uint32_t version = 0;
  in.read(reinterpret_cast<char*>(&version), 4);
  if (version != 1) throw std::runtime_error("read_shot_dump: unknown version");
  const std::uint64_t detector_count = detail::get_u64(in);
  const std::uint64_t herald_count = detail::get_u64(in);
  const std::uint64_t shots = detail::get_u64(in);
  std::vector<ShotRecord> records(shots);
  for (auto& r : records) {
    r.detectors.resize(detector_count);
    detail::unpack_bits(in, r.detectors);
    r.observable = static_cast<std::uint8_t>(in.get() & 1);
    r.heralds.resize(herald_count);
    detail::unpack_bits(in, r.heralds);
  }
  return records;
}

}  // namespace spoqc
