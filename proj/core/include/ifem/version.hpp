#pragma once

namespace ifem {

const char* version();

}  // namespace ifem
