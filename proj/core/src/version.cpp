#include "levythin/version.hpp"

namespace levythin {

const char* version() noexcept { return LEVYTHIN_VERSION; }

}  // namespace levythin
