#pragma once

namespace levythin {

const char* version() noexcept;

}  // namespace levythin
