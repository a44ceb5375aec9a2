#include "rotorrec/csv.hpp"

#include <cstdio>

namespace rotorrec::csv {

std::string fmt(double value) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

}  // namespace rotorrec::csv
