#ifndef LOGNEWTON_IO_HPP
#define LOGNEWTON_IO_HPP

#include <string>

#include "lognewton/diagnostics.hpp"

namespace lognewton {

/// JSON text (ordered keys, stable formatting) for the flat report object.
std::string report_json(const EnergyReport& report);

/// Writes field.bin and result.json into dir (created if missing).
/// Only constant coefficients are representable in the sidecar.
void save_result(const GroundStateResult& result, const std::string& dir);

/// Reloads a saved result.  Throws CorruptField / ConfigError on damage.
GroundStateResult load_result(const std::string& dir);

/// Writes diagnostics.json and radial_profile.csv for a result.
void save_diagnostics(const GroundStateResult& result, const LogKernel& kernel,
                      const std::string& dir);

}  // namespace lognewton

#endif
