#include "params.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "error.hpp"

namespace csmahs {

namespace {

void require_positive(double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v)) {
        fail(ErrorKind::validation,
             std::string(name) + " must be strictly positive");
    }
}

} // namespace

int derive_frame_slots(const PhysicalConfig& cfg) {
    require_positive(cfg.frame_seconds, "frame_seconds");
    require_positive(cfg.slot_seconds, "slot_seconds");
    double slots = std::ceil(cfg.frame_seconds / cfg.slot_seconds);
    if (slots > static_cast<double>(std::numeric_limits<int>::max())) {
        fail(ErrorKind::validation, "frame duration exceeds representable slot count");
    }
    return static_cast<int>(slots);
}

int derive_neighbor_count(const PhysicalConfig& cfg) {
    require_positive(cfg.sensing_range_m, "sensing_range_m");
    require_positive(cfg.stations_per_m, "stations_per_m");
    double count = std::floor(cfg.sensing_range_m * cfg.stations_per_m);
    if (count < 1.0) {
        fail(ErrorKind::validation,
             "degenerate topology: sensing range covers no neighbor "
             "(r * beta < 1)");
    }
    if (count > static_cast<double>(std::numeric_limits<int>::max())) {
        fail(ErrorKind::validation, "neighbor count exceeds representable range");
    }
    return static_cast<int>(count);
}

ModelParams validate(const ModelParams& params) {
    std::ostringstream bad;
    if (!(params.p_tx > 0.0 && params.p_tx < 1.0) || !std::isfinite(params.p_tx)) {
        bad << "p_tx out of open interval (0, 1); ";
    }
    if (params.frame_slots < 1) bad << "L must be >= 1; ";
    if (params.neighbors < 1) bad << "R must be >= 1; ";
    if (params.frame_slots > 4096) bad << "L above supported maximum 4096; ";
    if (params.neighbors > 4096) bad << "R above supported maximum 4096; ";
    std::string msg = bad.str();
    if (!msg.empty()) {
        msg.resize(msg.size() - 2);
        fail(ErrorKind::validation, msg);
    }
    return params;
}

} // namespace csmahs
