#pragma once

#include <iosfwd>
#include <string>

#include "pulsepair/params.hpp"

namespace pulsepair {

// Flat key/value configuration text.  One `key = value` pair per line, '#'
// starts a comment, keys are the PhysicalParams field names, frequencies in
// Hz, angles in radians.  Complex values are written "re" or "re,im".
// Unknown keys are errors.
PhysicalParams parse_config(std::istream& is);
PhysicalParams load_config(const std::string& path);

std::string config_schema_help();

}  // namespace pulsepair
