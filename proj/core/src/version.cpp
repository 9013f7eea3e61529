#include "ifem/version.hpp"

namespace ifem {

const char* version() { return IFEM_VERSION; }

}  // namespace ifem
