#ifndef CSMAHS_CORE_PARAMS_HPP
#define CSMAHS_CORE_PARAMS_HPP

#include <cstdint>

namespace csmahs {

// Physical inputs: slot and frame durations in seconds, sensing range in
// meters, station density in stations per meter.  Only used to derive the
// topological parameters; the model itself runs on (p_tx, L, R).
struct PhysicalConfig {
    double slot_seconds = 0.0;
    double frame_seconds = 0.0;
    double sensing_range_m = 0.0;
    double stations_per_m = 0.0;
};

// Model parameters.  p_tx is the conditional channel access probability,
// frame_slots (L) the frame duration in slots, neighbors (R) the number of
// stations in the one-side sensing range.
struct ModelParams {
    double p_tx = 0.0;
    int frame_slots = 0; // L
    int neighbors = 0;   // R
};

// Frame duration in whole slots, L = ceil(l / sigma).
int derive_frame_slots(const PhysicalConfig& cfg);

// One-side neighbor count, R = floor(r * beta).  Errors when the floor is
// zero: a station without neighbors has no hidden-station problem to model.
int derive_neighbor_count(const PhysicalConfig& cfg);

// Returns params unchanged; throws Error(validation) naming each violated
// invariant.  p_tx endpoints are rejected: several closed forms divide by
// p_tx or by (1 - a), and the limits are handled analytically in tests only.
ModelParams validate(const ModelParams& params);

} // namespace csmahs

#endif
