// Binary restart dump: little-endian, versioned header followed by the raw
// AWF arrays and any series recorded so far.  Resuming reproduces the
// uninterrupted run bit for bit (the integrator is deterministic).
//
// Layout (all integers little-endian):
//   magic   8 bytes  "HSEOMCKP"
//   u32     format version (1)
//   u64     config hash (FNV-1a of the canonical config JSON)
//   u32     component index   u32 total components
//   u64     step index        f64 time
//   u64     n_elems           u64 dim
//   2 * n_elems * dim * 16 bytes of complex amplitudes (phi then psi)
//   u32     number of recorded series blocks, each:
//     u32 kind, u32 name length, name bytes, u64 points,
//     points * (f64 grid, f64 re, f64 im),
//     u32 meta entries, each (u32 len, bytes, u32 len, bytes)
#pragma once

#include "hseom/observables.hpp"
#include "hseom/propagator.hpp"

#include <cstdint>
#include <filesystem>
#include <vector>

namespace hseom {

struct Checkpoint {
    uint64_t config_hash = 0;
    uint32_t component_index = 0;
    uint32_t component_total = 0;
    uint64_t step = 0;
    AWFSet state;
    std::vector<ObservableSeries> recorded;
};

void write_checkpoint(const Checkpoint& ckp, const std::filesystem::path& path);

// Throws std::runtime_error on bad magic, version, or truncation.
Checkpoint read_checkpoint(const std::filesystem::path& path);

} // namespace hseom
