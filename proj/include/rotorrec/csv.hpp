#ifndef ROTORREC_CSV_HPP
#define ROTORREC_CSV_HPP

#include <string>

namespace rotorrec::csv {

/// Round-trip-exact decimal rendering of a double (17 significant digits,
/// trailing zeros trimmed). Keeps emitted CSV byte-stable across runs.
std::string fmt(double value);

}  // namespace rotorrec::csv

#endif
